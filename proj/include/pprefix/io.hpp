#pragma once

// Spec strings for words, continued fractions and phi, plus JSON helpers.
//
//   word:  fibonacci | sturmian:3,3,3 | sturmian:1,(2) | psi:<file> | literal:abaaba
//   cf:    cf:0;1,1,1 | cf:0;1,(2)
//   phi:   a=1,b=2

#include <cctype>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pprefix/approximants.hpp"
#include "pprefix/error.hpp"
#include "pprefix/exact.hpp"
#include "pprefix/psi.hpp"
#include "pprefix/word.hpp"

namespace pprefix {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "pprefix/1";

namespace detail {

[[noreturn]] inline void parse_error(const std::string& what, const std::string& text, std::size_t pos) {
  fail(ErrorKind::kConfig, what + " at position " + std::to_string(pos + 1) + " in '" + text + "'");
}

/// "3,3,(1,2)" -> pre = {3,3}, period = {1,2}. `offset` is where `body`
/// starts inside `text`, for error positions.
inline void parse_quotients(const std::string& body, const std::string& text, std::size_t offset,
                            std::vector<std::uint64_t>& pre, std::vector<std::uint64_t>& period) {
  std::size_t i = 0;
  bool in_period = false, closed = false;
  while (i < body.size()) {
    char ch = body[i];
    if (ch == ',' || ch == ' ') {
      ++i;
      continue;
    }
    if (closed) parse_error("unexpected text after period", text, offset + i);
    if (ch == '(') {
      if (in_period) parse_error("nested '('", text, offset + i);
      in_period = true;
      ++i;
      continue;
    }
    if (ch == ')') {
      if (!in_period) parse_error("unmatched ')'", text, offset + i);
      in_period = false;
      closed = true;
      ++i;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(ch))) parse_error("expected a positive integer", text, offset + i);
    std::size_t j = i;
    std::uint64_t v = 0;
    while (j < body.size() && std::isdigit(static_cast<unsigned char>(body[j]))) {
      v = v * 10 + static_cast<std::uint64_t>(body[j] - '0');
      if (v > (std::uint64_t{1} << 40)) parse_error("partial quotient too large", text, offset + i);
      ++j;
    }
    if (v == 0) parse_error("partial quotients must be positive", text, offset + i);
    (in_period ? period : pre).push_back(v);
    i = j;
  }
  if (in_period) parse_error("missing ')'", text, offset + body.size());
  if (closed && period.empty()) parse_error("empty period", text, offset);
}

}  // namespace detail

inline PsiFunction psi_from_json(const json& j) {
  PsiFunction p;
  try {
    if (j.contains("exceptions")) {
      for (const auto& [k, v] : j.at("exceptions").items()) p.exceptions[std::stoul(k)] = v.get<std::size_t>();
    }
    if (j.contains("offsets_period")) p.offsets_period = j.at("offsets_period").get<std::vector<std::size_t>>();
    p.start = j.value("start", std::size_t{1});
    p.c = j.value("c", std::size_t{1});
  } catch (const std::exception& e) {
    fail(ErrorKind::kConfig, std::string("invalid psi JSON: ") + e.what());
  }
  for (auto o : p.offsets_period) p.c = std::max(p.c, o);
  p.validate(p.start + 64);
  return p;
}

inline json psi_to_json(const PsiFunction& p) {
  json ex = json::object();
  for (const auto& [k, v] : p.exceptions) ex[std::to_string(k)] = v;
  json j{{"exceptions", ex}, {"offsets_period", p.offsets_period}, {"start", p.start}, {"c", p.c}};
  if (p.defined_up_to) j["defined_up_to"] = *p.defined_up_to;
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kConfig, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorKind::kConfig, "invalid JSON in '" + path + "': " + e.what());
  }
}

/// Word from a psi: regenerated on demand with the requested length. The
/// seed uses one letter per level, so phi must cover max(2, c, start) letters.
inline Word word_from_psi_spec(const PsiFunction& psi, std::string name) {
  const std::size_t r = std::max({std::size_t{2}, psi.c, psi.start});
  return Word(r, [psi](Symbols& buf, std::size_t target) {
    buf = word_from_psi(psi, std::max<std::size_t>(target, 2 * buf.size())).word;
  }, std::move(name));
}

inline std::shared_ptr<Word> parse_word_spec(const std::string& spec) {
  if (spec == "fibonacci") return std::make_shared<Word>(fibonacci_word());
  auto colon = spec.find(':');
  if (colon == std::string::npos) detail::parse_error("unknown word spec", spec, 0);
  const std::string kind = spec.substr(0, colon), body = spec.substr(colon + 1);
  if (kind == "literal") {
    if (body.empty()) detail::parse_error("empty literal", spec, colon + 1);
    Symbols w;
    for (std::size_t i = 0; i < body.size(); ++i) {
      char ch = body[i];
      if (ch < 'a' || ch > 'z') detail::parse_error("letters must be a-z", spec, colon + 1 + i);
      w.push_back(static_cast<Symbol>(ch - 'a'));
    }
    return std::make_shared<Word>(Word::literal(std::move(w), spec));
  }
  if (kind == "sturmian") {
    std::vector<std::uint64_t> pre, period;
    detail::parse_quotients(body, spec, colon + 1, pre, period);
    if (!period.empty()) return std::make_shared<Word>(sturmian_word_periodic(pre, period));
    if (pre.empty()) detail::parse_error("no partial quotients", spec, colon + 1);
    return std::make_shared<Word>(Word(2, [pre](Symbols& buf, std::size_t target) {
      buf = generate_sturmian(pre, target);
    }, spec));
  }
  if (kind == "psi") return std::make_shared<Word>(word_from_psi_spec(psi_from_json(read_json_file(body)), spec));
  detail::parse_error("unknown word kind '" + kind + "'", spec, 0);
}

/// "cf:a0;a1,a2,(period)".
inline ContinuedFraction parse_cf_spec(const std::string& spec) {
  if (spec.rfind("cf:", 0) != 0) detail::parse_error("expected 'cf:'", spec, 0);
  const std::size_t semi = spec.find(';');
  if (semi == std::string::npos) detail::parse_error("expected ';' after a0", spec, 3);
  Integer a0;
  const std::string head = spec.substr(3, semi - 3);
  if (head.empty() || a0.set_str(head, 10) != 0) detail::parse_error("invalid a0", spec, 3);
  std::vector<std::uint64_t> pre, period;
  detail::parse_quotients(spec.substr(semi + 1), spec, semi + 1, pre, period);
  if (period.empty()) return ContinuedFraction::finite(a0, pre);
  return ContinuedFraction::periodic(a0, pre, period);
}

/// "a=1,b=2" -> phi[0] = 1, phi[1] = 2.
inline Phi parse_phi(const std::string& text) {
  Phi phi;
  std::vector<bool> set;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ',' || text[i] == ' ') {
      ++i;
      continue;
    }
    char ch = text[i];
    if (ch < 'a' || ch > 'z') detail::parse_error("expected a letter", text, i);
    if (i + 1 >= text.size() || text[i + 1] != '=') detail::parse_error("expected '='", text, i + 1);
    std::size_t j = i + 2;
    std::uint64_t v = 0;
    if (j >= text.size() || !std::isdigit(static_cast<unsigned char>(text[j]))) detail::parse_error("expected a value", text, j);
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) v = v * 10 + static_cast<std::uint64_t>(text[j++] - '0');
    const std::size_t s = static_cast<std::size_t>(ch - 'a');
    if (phi.size() <= s) {
      phi.resize(s + 1, 0);
      set.resize(s + 1, false);
    }
    if (set[s]) detail::parse_error("letter assigned twice", text, i);
    set[s] = true;
    phi[s] = v;
    i = j;
  }
  if (phi.empty()) fail(ErrorKind::kConfig, "empty phi");
  return phi;
}

inline json to_json(const Integer& v) { return v.get_str(); }
inline json to_json(Rational v) {
  v.canonicalize();
  return v.get_str();
}
inline json to_json(const Triple& t) { return json::array({t.x0.get_str(), t.x1.get_str(), t.x2.get_str()}); }

/// Midpoint as a short decimal plus the width, for reading by eye.
inline json interval_json(const RationalInterval& r) {
  std::ostringstream mid, width;
  mid.precision(17);
  width.precision(3);
  mid << Rational(r.midpoint()).get_d();
  width << r.width().get_d();
  return json{{"mid", mid.str()}, {"width", width.str()}};
}

inline std::string fixed(double v, int digits = 10) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace pprefix
