// pprefix: words, xi, approximants, minimal points and the checks that tie
// them together. Output is JSON (default) or CSV; no timings or worker
// counts are written, so equal inputs give byte-identical output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "pprefix/io.hpp"
#include "pprefix/pprefix.hpp"

using namespace pprefix;

namespace {

struct RunConfig {
  std::string word = "fibonacci";
  std::string phi = "a=1,b=2";
  std::optional<std::string> cf;       // minpoints/chains: xi given directly
  std::size_t length = 1000;
  std::size_t count = 25;
  std::uint64_t bmax = 100000;
  std::vector<double> eps{0.05, 0.1, 0.2};
  double eps2 = 0.15;
  std::size_t grace = 5;
  std::size_t triples = 200;
  std::size_t period = 4;
  std::size_t max_c = 4;
  std::optional<double> beta;
  std::optional<std::string> trace;
  std::optional<std::string> out;
  std::string format = "json";
  unsigned workers = 0;

  void validate() const {
    if (length == 0 || count == 0 || bmax == 0) fail(ErrorKind::kConfig, "horizons must be positive");
    if (!(eps2 > 0 && eps2 < 1)) fail(ErrorKind::kConfig, "eps2 must lie in (0, 1)");
    for (double e : eps) {
      if (!(e > 0 && e < 1)) fail(ErrorKind::kConfig, "eps values must lie in (0, 1)");
    }
    if (format != "json" && format != "csv") fail(ErrorKind::kConfig, "format must be json or csv");
    if (period == 0 || max_c < 2) fail(ErrorKind::kConfig, "spectrum needs period >= 1 and c >= 2");
  }

  unsigned worker_count() const { return workers ? workers : std::max(1u, std::thread::hardware_concurrency()); }
};

// Flags left unset on the command line keep the config file's value.
struct Flags {
  std::optional<std::string> config, word, phi, cf, trace, out, format;
  std::optional<std::size_t> length, count, grace, triples, period, max_c;
  std::optional<std::uint64_t> bmax;
  std::optional<double> eps2, beta;
  std::vector<double> eps;
  std::optional<unsigned> workers;
};

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const std::exception& e) {
    fail(ErrorKind::kConfig, std::string("config field '") + key + "': " + e.what());
  }
}

template <class T>
void take(const json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key)) return;
  T v;
  take(j, key, v);
  dst = v;
}

// "phi" may be "a=1,b=2" or {"a": 1, "b": 2}.
std::string phi_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (!j.is_object()) fail(ErrorKind::kConfig, "config field 'phi' must be a string or an object");
  std::string s;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_unsigned()) fail(ErrorKind::kConfig, "phi values must be positive integers");
    s += (s.empty() ? "" : ",") + k + "=" + std::to_string(v.get<std::uint64_t>());
  }
  return s;
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (f.config) {
    json j = read_json_file(*f.config);
    if (!j.is_object()) fail(ErrorKind::kConfig, "config must be a JSON object");
    static const std::set<std::string> known{"word", "phi", "cf", "length", "count", "bmax", "eps", "eps2",
                                             "grace", "triples", "period", "c", "beta", "trace", "out",
                                             "format", "workers"};
    for (const auto& [k, v] : j.items()) {
      if (!known.count(k)) fail(ErrorKind::kConfig, "unknown config field '" + k + "'");
    }
    take(j, "word", c.word);
    if (j.contains("phi")) c.phi = phi_text(j["phi"]);
    take(j, "cf", c.cf);
    take(j, "length", c.length);
    take(j, "count", c.count);
    take(j, "bmax", c.bmax);
    take(j, "eps", c.eps);
    take(j, "eps2", c.eps2);
    take(j, "grace", c.grace);
    take(j, "triples", c.triples);
    take(j, "period", c.period);
    take(j, "c", c.max_c);
    take(j, "beta", c.beta);
    take(j, "trace", c.trace);
    take(j, "out", c.out);
    take(j, "format", c.format);
    take(j, "workers", c.workers);
  }
  if (f.word) c.word = *f.word;
  if (f.phi) c.phi = *f.phi;
  if (f.cf) c.cf = f.cf;
  if (f.length) c.length = *f.length;
  if (f.count) c.count = *f.count;
  if (f.bmax) c.bmax = *f.bmax;
  if (!f.eps.empty()) c.eps = f.eps;
  if (f.eps2) c.eps2 = *f.eps2;
  if (f.grace) c.grace = *f.grace;
  if (f.triples) c.triples = *f.triples;
  if (f.period) c.period = *f.period;
  if (f.max_c) c.max_c = *f.max_c;
  if (f.beta) c.beta = f.beta;
  if (f.trace) c.trace = f.trace;
  if (f.out) c.out = f.out;
  if (f.format) c.format = *f.format;
  if (f.workers) c.workers = *f.workers;
  c.validate();
  return c;
}

// ---- output ----

// A report is a JSON document whose "rows" array is also the CSV table.
struct Report {
  json doc;
  std::vector<std::string> columns;

  Report(const std::string& command, std::vector<std::string> cols) : columns(std::move(cols)) {
    doc["schema"] = kSchema;
    doc["command"] = command;
  }
  void row(json r) { doc["rows"].push_back(std::move(r)); }
};

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void emit(const Report& r, const RunConfig& c) {
  std::ostringstream os;
  if (c.format == "csv") {
    for (std::size_t k = 0; k < r.columns.size(); ++k) os << (k ? "," : "") << r.columns[k];
    os << '\n';
    if (r.doc.contains("rows")) {
      for (const auto& row : r.doc["rows"]) {
        for (std::size_t k = 0; k < r.columns.size(); ++k) {
          os << (k ? "," : "") << (row.contains(r.columns[k]) ? csv_cell(row[r.columns[k]]) : "");
        }
        os << '\n';
      }
    }
  } else {
    os << r.doc.dump(2) << '\n';
  }
  if (!c.out) {
    std::cout << os.str();
    return;
  }
  std::ofstream f(*c.out);
  if (!f) fail(ErrorKind::kConfig, "cannot write '" + *c.out + "'");
  f << os.str();
}

json delta_json(const DeltaEstimate& d) {
  return json{{"value", d.value}, {"liminf", d.liminf}, {"window", {d.window_begin, d.window_end}}};
}

std::shared_ptr<Word> word_of(const RunConfig& c) { return parse_word_spec(c.word); }

ApproximantSequence approximants_of(const RunConfig& c) {
  return palindromic_approximants(word_of(c), parse_phi(c.phi), c.count);
}

ContinuedFraction xi_of(const RunConfig& c) {
  if (c.cf) return parse_cf_spec(*c.cf);
  return build_xi_from_word(word_of(c), parse_phi(c.phi));
}

std::string xi_name(const RunConfig& c) { return c.cf ? *c.cf : c.word + " / " + c.phi; }

// psi read off the word itself, on a prefix twice as long as the approximants need.
PsiExtraction word_psi(const RunConfig& c, const ApproximantSequence& seq) {
  return psi_from_word(word_of(c)->prefix(2 * seq.lengths.back()));
}

// ---- subcommands ----

int cmd_word(const RunConfig& c) {
  Symbols w = word_of(c)->prefix(c.length);
  auto t = palindromic_prefix_lengths(w);
  Report r("word", {"i", "length", "ratio"});
  r.doc["word"] = c.word;
  r.doc["length"] = c.length;
  const std::size_t shown = std::min<std::size_t>(w.size(), 200);
  r.doc["prefix"] = to_letters(Symbols(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(shown)));
  r.doc["prefix_truncated"] = shown < w.size();
  r.doc["palindromic_lengths"] = t.lengths;
  try {
    r.doc["delta"] = delta_json(delta_of_word(t));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kInsufficientData) throw;
    r.doc["delta"] = nullptr;
    r.doc["delta_note"] = e.what();
  }
  for (std::size_t i = 0; i < t.lengths.size(); ++i) {
    json row{{"i", i + 1}, {"length", t.lengths[i]}, {"ratio", nullptr}};
    if (i + 1 < t.lengths.size()) row["ratio"] = double(t.lengths[i + 1]) / double(t.lengths[i]);
    r.row(row);
  }
  emit(r, c);
  return 0;
}

int cmd_xi(const RunConfig& c) {
  ContinuedFraction cf = xi_of(c);
  std::size_t n = c.count;
  if (cf.length()) n = std::min(n, *cf.length());
  Report r("xi", {"n", "a_n", "p_n", "q_n"});
  r.doc["xi"] = xi_name(c);
  r.doc["a0"] = to_json(cf.a0());
  for (const auto& cv : convergents(cf, n + 1)) {
    r.row({{"n", cv.index},
           {"a_n", cv.index ? json(cf.term(cv.index)) : to_json(cf.a0())},
           {"p_n", to_json(cv.p)},
           {"q_n", to_json(cv.q)}});
  }
  RealEnclosure e(std::make_shared<ConvergentStream>(cf), n);
  r.doc["enclosure"] = interval_json(e.interval());
  emit(r, c);
  return 0;
}

int cmd_approximants(const RunConfig& c) {
  auto seq = approximants_of(c);
  Report r("approximants", {"i", "n_i", "v0", "v1", "v2", "det", "norm_log", "L"});
  r.doc["word"] = c.word;
  r.doc["phi"] = c.phi;
  r.doc["xi"] = interval_json(seq.xi.interval());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const Triple& v = seq.v[i];
    r.row({{"i", i},
           {"n_i", seq.lengths[i]},
           {"v0", to_json(v.x0)},
           {"v1", to_json(v.x1)},
           {"v2", to_json(v.x2)},
           {"det", to_json(seq.det[i])},
           {"norm_log", log_abs(v.norm())},
           {"L", interval_json(seq.L[i])["mid"]}});
  }
  emit(r, c);
  return 0;
}

MinimalPointSequence scan_of(const RunConfig& c) { return minimal_points(xi_of(c), c.bmax, c.worker_count()); }

void add_scan_rows(Report& r, const MinimalPointSequence& s) {
  std::set<std::size_t> corner(s.independent.begin(), s.independent.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Triple& a = s.points[i];
    r.row({{"i", i},
           {"a0", to_json(a.x0)},
           {"a1", to_json(a.x1)},
           {"a2", to_json(a.x2)},
           {"det", to_json(s.det[i])},
           {"L", interval_json(s.L[i])["mid"]},
           {"corner", corner.count(i) > 0}});
  }
}

int cmd_minpoints(const RunConfig& c) {
  auto s = scan_of(c);
  Report r("minpoints", {"i", "a0", "a1", "a2", "det", "L", "corner"});
  r.doc["xi"] = xi_name(c);
  r.doc["bmax"] = c.bmax;
  r.doc["corners"] = s.independent;
  auto bad = check_minimal_invariants(s);
  r.doc["invariant_violations"] = bad;
  add_scan_rows(r, s);
  emit(r, c);
  return bad.empty() ? 0 : 1;
}

json chain_json(const ChainRecord& ch) {
  json links = json::array();
  for (const auto& t : ch.links) links.push_back(to_json(t));
  return json{{"k", ch.k},          {"length", ch.length},       {"ends_at_d", ch.ends_at_d},
              {"e_second_to_last", ch.e_second_to_last}, {"decreasing", ch.decreasing}, {"links", links}};
}

int cmd_chains(const RunConfig& c) {
  auto s = scan_of(c);
  auto sel = select_e_points(s, c.eps2, c.grace);
  Report r("chains", {"k", "d_index", "e_index", "next_d_index", "ordered", "chain_length", "ends_at_d",
                      "e_second_to_last", "decreasing"});
  r.doc["xi"] = xi_name(c);
  r.doc["bmax"] = c.bmax;
  r.doc["eps2"] = c.eps2;
  r.doc["in_A"] = sel.in_A;
  r.doc["warnings"] = sel.warnings;
  bool ok = true;
  for (const auto& p : sel.pairs) {
    json row{{"k", p.k}, {"d_index", p.d_index}, {"e_index", p.e_index}, {"ordered", p.ordered}};
    ok = ok && p.ordered;
    if (p.next_d_index) {
      row["next_d_index"] = *p.next_d_index;
      auto ch = reconstruct_chain(p.k, s.points[p.d_index], s.points[p.e_index], s.points[*p.next_d_index]);
      row["chain_length"] = ch.length;
      row["ends_at_d"] = ch.ends_at_d;
      row["e_second_to_last"] = ch.e_second_to_last;
      row["decreasing"] = ch.decreasing;
      row["links"] = chain_json(ch)["links"];
      ok = ok && ch.ends_at_d && ch.e_second_to_last && ch.decreasing;
    }
    r.row(row);
  }
  emit(r, c);
  return ok ? 0 : 1;
}

int cmd_psi(const RunConfig& c) {
  auto ex = psi_from_word(word_of(c)->prefix(c.length));
  Report r("psi", {"i", "n_i", "psi", "offset"});
  r.doc["word"] = c.word;
  r.doc["psi"] = psi_to_json(ex.psi);
  r.doc["failures"] = ex.failures;
  const std::size_t known = ex.psi.usable(ex.lengths.size());
  try {
    r.doc["delta_of_psi"] = delta_json(delta_of_psi(ex.psi, known).estimate);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kInsufficientData) throw;
    r.doc["delta_of_psi"] = nullptr;
  }
  auto red = is_asymptotically_reduced(ex.psi, known, 1);
  r.doc["reduced"] = red.reduced;
  if (!red.reduced) r.doc["reduced_note"] = red.reason;
  for (std::size_t i = 1; i <= known && i < ex.lengths.size(); ++i) {
    r.row({{"i", i}, {"n_i", ex.lengths[i]}, {"psi", ex.psi(i)}, {"offset", ex.psi.offset(i)}});
  }
  emit(r, c);
  return 0;
}

int cmd_verify(const RunConfig& c) {
  Report r("verify", {"check", "index", "below_grace", "reason"});
  r.doc["word"] = c.word;
  r.doc["phi"] = c.phi;
  r.doc["grace"] = c.grace;
  r.doc["rows"] = json::array();
  std::size_t above = 0;
  auto failure = [&](const std::string& check, std::size_t index, bool below, const std::string& reason) {
    above += below ? 0 : 1;
    r.row({{"check", check}, {"index", index}, {"below_grace", below}, {"reason", reason}});
  };

  auto seq = approximants_of(c);
  auto wpsi = word_psi(c, seq);
  // below psi.start the word's own recurrence fails, so no bracket identity is expected there
  const std::size_t rec_grace = std::max(c.grace, wpsi.psi.start);
  auto rec = verify_bracket_recurrence(seq, wpsi.psi, rec_grace);
  for (const auto& f : rec.failures) failure("bracket_recurrence", f.i, f.below_grace, f.reason);
  json summary;
  summary["bracket_recurrence"] = {
      {"checked", rec.checked}, {"failures", rec.failures.size()}, {"grace", rec_grace}};

  std::mt19937_64 rng(55);
  const auto& n = seq.lengths;
  const std::size_t top = seq.size() - 1;
  std::size_t done = 0, palindromic = 0, tries = 0;
  while (done < c.triples && tries < 100 * c.triples) {
    ++tries;
    std::size_t i0 = 1 + rng() % top, i1 = 1 + rng() % top, i2 = 1 + rng() % top;
    if (n[i2] < std::min(n[i0], n[i1]) || n[i2] > n[i0] + n[i1]) continue;
    auto l = palindrome_dependence_check(seq, i0, i1, i2);
    ++done;
    if (!l.agree()) failure("palindrome_dependence", done - 1, false, "palindrome and det3 = 0 disagree");
    if (l.palindrome && l.dependent) {
      ++palindromic;
      if (!l.matrix_identity || !l.bracket_identity) {
        failure("palindrome_dependence", done - 1, false, "matrix or bracket identity fails");
      }
    }
  }
  summary["palindrome_dependence"] = {{"triples", done}, {"palindromic", palindromic}};

  auto from_points = extract_psi_from_points(seq.v);
  auto eq = psi_equivalent(wpsi.psi, from_points.psi, 200);
  if (!eq.equivalent) failure("psi_cross_extraction", 0, false, "psi from word and from points differ");
  summary["psi_cross_extraction"] = {{"equivalent", eq.equivalent}, {"shift", eq.shift}, {"from", eq.i1}};

  auto s = minimal_points(build_xi_from_word(word_of(c), parse_phi(c.phi)), c.bmax, c.worker_count());
  for (const auto& msg : check_minimal_invariants(s)) failure("minimal_points", 0, false, msg);
  std::size_t chains = 0;
  try {
    auto sel = select_e_points(s, c.eps2, c.grace);
    for (const auto& p : sel.pairs) {
      if (!p.ordered) failure("de_order", p.k, p.k < c.grace, "D_k < E_k <= D_k+1 fails");
      if (!p.next_d_index) continue;
      auto ch = reconstruct_chain(p.k, s.points[p.d_index], s.points[p.e_index], s.points[*p.next_d_index]);
      ++chains;
      if (!(ch.ends_at_d && ch.e_second_to_last && ch.decreasing)) {
        failure("chain", p.k, p.k < c.grace, "chain does not end at d_k after e_k with decreasing norms");
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kAssertion) throw;
    failure("de_selection", 0, false, e.what());
  }
  summary["minimal_points"] = {{"bmax", c.bmax}, {"points", s.size()}, {"chains", chains}};
  for (const auto& ck : constant_checks(s)) {
    if (!ck.det_bound || !ck.det_floor) failure("constants", ck.i, false, "explicit-constant bound fails");
  }

  r.doc["summary"] = summary;
  r.doc["failures_above_grace"] = above;
  emit(r, c);
  return above == 0 ? 0 : 1;
}

int cmd_exponents(const RunConfig& c) {
  auto seq = approximants_of(c);
  Report r("exponents", {"quantity", "epsilon", "value", "liminf", "window_begin", "window_end", "trace"});
  r.doc["word"] = c.word;
  r.doc["phi"] = c.phi;
  r.doc["count"] = c.count;
  auto write_trace = [&](const std::string& tag, const ExponentEstimate& e) -> json {
    if (!c.trace) return nullptr;
    const std::string path = *c.trace + "_" + tag + ".csv";
    std::ofstream f(path);
    if (!f) fail(ErrorKind::kConfig, "cannot write '" + path + "'");
    f << "index,norm_log,L_log,ratio\n";
    f.precision(17);
    for (const auto& t : e.trace) f << t.index << ',' << t.norm_log << ',' << t.L_log << ',' << t.ratio << '\n';
    return path;
  };
  auto add = [&](const std::string& q, json eps, const ExponentEstimate& e, const std::string& tag) {
    r.row({{"quantity", q},
           {"epsilon", eps},
           {"value", e.value},
           {"liminf", e.liminf},
           {"window_begin", e.window_begin},
           {"window_end", e.window_end},
           {"trace", write_trace(tag, e)}});
  };
  RealEnclosure xi = seq.xi;
  for (double e : c.eps) add("beta_eps", e, estimate_beta_eps(seq.v, xi, e), "beta_" + fixed(e, 4));
  auto g = growth_exponent(seq.norms());
  add("growth", nullptr, g, "growth");
  const double beta = c.beta.value_or(g.value);
  json row{{"quantity", "epsilon_1"}, {"epsilon", nullptr}, {"beta", beta}};
  try {
    row["value"] = epsilon_one(beta, beta);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kConfig) throw;
    row["value"] = nullptr;
    row["note"] = e.what();
  }
  r.row(row);
  emit(r, c);
  return 0;
}

int cmd_spectrum(const RunConfig& c) {
  auto pts = spectrum_sample(c.period, c.max_c);
  Report r("spectrum", {"pattern", "delta", "liminf"});
  r.doc["period"] = c.period;
  r.doc["c"] = c.max_c;
  for (const auto& p : pts) {
    std::string pat;
    for (std::size_t o : p.pattern) pat += (pat.empty() ? "" : " ") + std::to_string(o);
    r.row({{"pattern", pat}, {"delta", p.delta}, {"liminf", p.liminf}});
  }
  emit(r, c);
  return 0;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config; flags override its fields");
  sub->add_option("--word", f.word, "fibonacci | sturmian:3,(3) | psi:<file> | literal:abaab");
  sub->add_option("--phi", f.phi, "letter values, e.g. a=1,b=2");
  sub->add_option("--cf", f.cf, "xi as cf:a0;a1,a2,(period) instead of --word/--phi");
  sub->add_option("--length", f.length, "word prefix length");
  sub->add_option("--count", f.count, "approximants or partial quotients");
  sub->add_option("--bmax", f.bmax, "first-coordinate bound of the minimal-point scan");
  sub->add_option("--eps", f.eps, "epsilons for beta_eps")->delimiter(',');
  sub->add_option("--eps2", f.eps2, "epsilon for the e_k selection");
  sub->add_option("--grace", f.grace, "indices below this are reported but not fatal");
  sub->add_option("--triples", f.triples, "random index triples in verify");
  sub->add_option("--period", f.period, "spectrum: longest offset period");
  sub->add_option("--c", f.max_c, "spectrum: largest offset");
  sub->add_option("--beta", f.beta, "exponents: beta for the epsilon_1 row (default: measured growth)");
  sub->add_option("--trace", f.trace, "exponents: write ratio traces to <prefix>_<tag>.csv");
  sub->add_option("--out", f.out, "output file (default stdout)");
  sub->add_option("--format", f.format, "json or csv");
  sub->add_option("--workers", f.workers, "scan threads (default: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Palindromic prefixes, simultaneous approximation and brackets"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"word", "prefix, palindromic prefix lengths and delta"},
      {"xi", "partial quotients and convergents of xi"},
      {"approximants", "v_i built from the palindromic prefixes"},
      {"minpoints", "minimal points up to --bmax"},
      {"chains", "d_k/e_k pairs and their bracket chains"},
      {"psi", "psi read off the palindromic prefixes"},
      {"verify", "all exact checks; exit 1 on failures at or above --grace"},
      {"exponents", "beta_eps, growth exponent and epsilon_1"},
      {"spectrum", "delta over eventually periodic psi"}};
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunConfig c = resolve(flags);
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "word") return cmd_word(c);
    if (cmd == "xi") return cmd_xi(c);
    if (cmd == "approximants") return cmd_approximants(c);
    if (cmd == "minpoints") return cmd_minpoints(c);
    if (cmd == "chains") return cmd_chains(c);
    if (cmd == "psi") return cmd_psi(c);
    if (cmd == "verify") return cmd_verify(c);
    if (cmd == "exponents") return cmd_exponents(c);
    return cmd_spectrum(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
