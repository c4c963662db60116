#pragma once

// Chains n_0 = d_{k+1}, n_{s+1} = primitive multiple of [n_s, d_k, e_k],
// continued while the norm of n_s is at least E_k.

#include <string>
#include <vector>

#include "pprefix/bracket.hpp"
#include "pprefix/error.hpp"

namespace pprefix {

struct ChainRecord {
  std::size_t k = 0;
  std::vector<Triple> links;    // n_0 = d_{k+1}, ..., n_s
  std::size_t length = 0;       // s_k
  bool ends_at_d = false;       // n_s = d_k
  bool e_second_to_last = false;  // n_{s-1} = e_k
  bool decreasing = true;       // N_s < N_{s-1} all along
  double length_bound = 0;      // (1 + slack) / (2 - beta1), a soft diagnostic
  bool within_length_bound = true;
};

inline ChainRecord reconstruct_chain(std::size_t k, const Triple& d, const Triple& e, const Triple& d_next,
                                     double beta1 = 0, double slack = 0.5, std::size_t max_links = 256) {
  for (const Triple* t : {&d, &e, &d_next}) {
    if (det2(*t) == 0) fail(ErrorKind::kPrecondition, "reconstruct_chain: input with det = 0");
  }
  if (is_collinear(d, e)) fail(ErrorKind::kPrecondition, "reconstruct_chain: d_k and e_k collinear");
  ChainRecord c;
  c.k = k;
  const Integer E = e.norm();
  Triple n = primitive_normalize(d_next);
  c.links.push_back(n);
  while (n.norm() >= E) {
    if (c.links.size() > max_links) fail(ErrorKind::kAssertion, "reconstruct_chain: no termination");
    if (det3(n, d, e) != 0) {
      fail(ErrorKind::kAssertion, "reconstruct_chain: dependence-violation at link " +
                                      std::to_string(c.links.size() - 1));
    }
    Triple next = primitive_normalize(bracket(n, d, e));
    if (next.norm() >= n.norm()) c.decreasing = false;
    n = next;
    c.links.push_back(n);
    if (!c.decreasing) break;
  }
  c.length = c.links.size() - 1;
  const Triple pd = primitive_normalize(d), pe = primitive_normalize(e);
  c.ends_at_d = c.links.back() == pd;
  c.e_second_to_last = c.links.size() >= 2 && c.links[c.links.size() - 2] == pe;
  if (beta1 > 1 && beta1 < 2) {
    c.length_bound = (1 + slack) / (2 - beta1);
    c.within_length_bound = static_cast<double>(c.length) <= c.length_bound;
  }
  return c;
}

}  // namespace pprefix
