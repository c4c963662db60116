#pragma once

#include "pprefix/approximants.hpp"
#include "pprefix/bracket.hpp"
#include "pprefix/chain.hpp"
#include "pprefix/constants.hpp"
#include "pprefix/error.hpp"
#include "pprefix/exact.hpp"
#include "pprefix/exponents.hpp"
#include "pprefix/membership.hpp"
#include "pprefix/minimal_points.hpp"
#include "pprefix/psi.hpp"
#include "pprefix/triple.hpp"
#include "pprefix/word.hpp"
