#ifndef OPCOVER_HARNESS_HPP
#define OPCOVER_HARNESS_HPP

// Experiment configs, command dispatch, run records and sweeps.  A config is
//
//   {"command": "...", "seed": N, "params": {...},
//    "sweep": {"axis": "<param>", "values": [...]}}      (sweep optional)
//
// Results depend only on (command, params, seed, tool version); worker count
// and wall time never enter the payload.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "opcover/json_io.hpp"

namespace opcover {

inline constexpr const char* kToolVersion = "0.1.0";

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"tail-mc",    "cover-sample", "cover-capacity",
                                              "product-cover", "typicality", "capacity",
                                              "resolvability", "conjecture-probe", "qid-eval"};
  return names;
}

struct ExperimentConfig {
  std::string command;
  json params = json::object();
  std::uint64_t seed = 0;
  std::string output_path;  // empty: standard output
  std::string format = "json";
  std::optional<std::string> sweep_axis;
  json sweep_values = json::array();
};

struct RunRecord {
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::string command;
  std::uint64_t seed = 0;
  json results = json::object();
  std::int64_t wall_time_ms = 0;
};

/// Numeric failure of a run (exit code 3).
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

inline ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw SchemaError("", "config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const std::vector<std::string> known{"command", "seed", "params", "out", "format", "sweep"};
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw SchemaError("/" + it.key(), "unknown top-level field");
  }
  ExperimentConfig c;
  c.command = as_string(field(j, "command", ""), "/command");
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), c.command) == names.end())
    throw SchemaError("/command", "unknown command '" + c.command + "'");
  c.seed = as_uint64(field(j, "seed", ""), "/seed");
  if (const auto* p = optional_field(j, "params", "")) {
    if (!p->is_object()) throw SchemaError("/params", "expected an object");
    c.params = *p;
  }
  if (const auto* o = optional_field(j, "out", "")) c.output_path = as_string(*o, "/out");
  if (const auto* f = optional_field(j, "format", "")) c.format = as_string(*f, "/format");
  if (c.format != "json" && c.format != "csv") throw SchemaError("/format", "format must be json or csv");
  if (const auto* s = optional_field(j, "sweep", "")) {
    c.sweep_axis = as_string(field(*s, "axis", "/sweep"), "/sweep/axis");
    c.sweep_values = as_array(field(*s, "values", "/sweep"), "/sweep/values");
    if (!c.params.contains(*c.sweep_axis)) throw SchemaError("/sweep/axis", "axis is not a param of the template");
  }
  return c;
}

/// 64-bit FNV-1a over the canonical form of {command, params, seed}, in hex.
inline std::string config_hash(const ExperimentConfig& c) {
  const std::string s = canonical_dump({{"command", c.command}, {"params", c.params}, {"seed", c.seed}});
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

struct Params {
  const json& j;
  std::string path = "/params";

  const json& req(const std::string& key) const { return field(j, key, path); }
  const json* opt(const std::string& key) const { return optional_field(j, key, path); }
  std::string at(const std::string& key) const { return child_path(path, key); }

  double number(const std::string& key) const { return as_double(req(key), at(key)); }
  double number(const std::string& key, double fallback) const {
    const auto* v = opt(key);
    return v ? as_double(*v, at(key)) : fallback;
  }
  int integer(const std::string& key) const { return static_cast<int>(as_int(req(key), at(key))); }
  int integer(const std::string& key, int fallback) const {
    const auto* v = opt(key);
    return v ? static_cast<int>(as_int(*v, at(key))) : fallback;
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    const auto* v = opt(key);
    return v ? as_uint64(*v, at(key)) : fallback;
  }
  bool flag(const std::string& key, bool fallback) const {
    const auto* v = opt(key);
    return v ? as_bool(*v, at(key)) : fallback;
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    const auto* v = opt(key);
    return v ? as_string(*v, at(key)) : fallback;
  }
  int positive(const std::string& key) const {
    const int v = integer(key);
    if (v < 1) throw SchemaError(at(key), "must be a positive integer");
    return v;
  }
  void one_of(const std::string& key, const std::string& value, std::initializer_list<const char*> allowed) const {
    for (const char* a : allowed)
      if (value == a) return;
    throw SchemaError(at(key), "unsupported value '" + value + "'");
  }
};

inline json run_tail(const Params& p, std::uint64_t seed, unsigned workers) {
  const auto x = parse_operator_rv(p.req("rv"), p.at("rv"));
  const auto kind = p.text("kind", "chernoff");
  p.one_of("kind", kind, {"chernoff", "two-sided", "markov", "chebyshev", "weak-law"});
  TailOptions o{.trials = p.count("trials", 10000), .seed = seed,
                .force_monte_carlo = p.flag("force_monte_carlo", false), .workers = workers};
  TailReport r;
  if (kind == "chernoff") {
    const auto side = p.text("side", "upper");
    p.one_of("side", side, {"upper", "lower"});
    const int n = p.positive("n");
    const double a = p.number("a"), m = p.number("m");
    r = chernoff_tail(x, n, a, m, side == "upper" ? TailSide::upper : TailSide::lower, o);
  } else if (kind == "two-sided") {
    const int n = p.positive("n");
    r = two_sided_chernoff(x, n, p.number("eps"), o);
  } else if (kind == "markov") {
    r = markov_tail(x, parse_matrix(p.req("threshold"), p.at("threshold")));
  } else if (kind == "chebyshev") {
    r = chebyshev_tail(x, parse_matrix(p.req("delta"), p.at("delta")));
  } else {
    const int n = p.positive("n");
    r = weak_law_tail(x, n, parse_matrix(p.req("delta"), p.at("delta")), o);
  }
  json out = to_json(r);
  out["kind"] = kind;
  return out;
}

inline std::vector<double> edge_distribution(const Params& p, std::size_t edges) {
  if (const auto* v = p.opt("p")) {
    auto d = as_doubles(*v, p.at("p"));
    if (d.size() != edges) throw SchemaError(p.at("p"), "need one probability per edge");
    return d;
  }
  return std::vector<double>(edges, 1.0 / static_cast<double>(edges));
}

inline json run_cover_sample(const Params& p, std::uint64_t seed) {
  const auto g = parse_hypergraph(p.req("hypergraph"), p.at("hypergraph"));
  const auto dist = edge_distribution(p, edge_count(g));
  const auto method = p.text("method", "lemma");
  p.one_of("method", method, {"lemma", "randomized"});
  if (method == "randomized") {
    json out = randomized_to_json(covering_randomized(as_quantum(g), dist, seed));
    out["method"] = method;
    return out;
  }
  const double eps = p.number("eps", 0.1), tau = p.number("tau", 0.1);
  const std::uint64_t fixed_L = p.count("L", 0);
  CoveringResult r;
  std::string kind;
  if (const auto* c = std::get_if<ClassicalHypergraph>(&g)) {
    r = classical_covering_sample(*c, dist, eps, tau, seed, fixed_L);
    kind = "classical";
  } else {
    r = quantum_covering_sample(std::get<QuantumHypergraph>(g), dist, eps, tau, seed, fixed_L);
    kind = "quantum";
  }
  json out = to_json(r);
  out["method"] = method;
  out["kind"] = kind;
  out["eps"] = eps;
  out["tau"] = tau;
  return out;
}

inline json run_cover_capacity(const Params& p) {
  const auto g = as_quantum(parse_hypergraph(p.req("hypergraph"), p.at("hypergraph")));
  json out = to_json(covering_capacity(g, p.number("tol", 1e-10)));
  out["edges"] = g.size();
  out["dim"] = g.dim();
  return out;
}

inline json run_product_cover(const Params& p) {
  const auto g = as_quantum(parse_hypergraph(p.req("hypergraph"), p.at("hypergraph")));
  const int n = p.positive("n");
  json out = {{"n", n}, {"edges", g.size()}, {"dim", g.dim()}};
  const double tuples = std::pow(static_cast<double>(g.size()), n);
  if (tuples <= 20.0) {
    const auto c = covering_number_bruteforce(g, n);
    out["covering_number"] = c ? json(*c) : json(nullptr);
    out["covering_method"] = "bruteforce";
  } else {
    out["covering_number"] = nullptr;
    out["covering_method"] = "skipped";
  }
  const auto f = generalized_covering_number(g, n, p.number("tol", 1e-10));
  out["fractional"] = f.value;
  out["fractional_lower"] = f.lower;
  out["fractional_converged"] = f.converged;
  const auto cap = covering_capacity(g);
  out["capacity"] = finite_or_string(cap.capacity);
  out["capacity_bound"] = finite_or_string(std::exp2(cap.capacity * n));
  return out;
}

inline json run_typicality(const Params& p) {
  const auto kind = p.text("kind", "state");
  p.one_of("kind", kind, {"state", "conditional", "cross", "classical"});
  const double alpha = p.number("alpha");
  if (alpha < 0.0) throw SchemaError(p.at("alpha"), "alpha must be nonnegative");
  json out;
  if (kind == "classical") {
    const auto dist = as_doubles(p.req("p"), p.at("p"));
    const int n = p.positive("n");
    at_path(p.at("p"), [&] {
      detail::check_input_distribution(dist, static_cast<int>(dist.size()));
      return 0;
    });
    const auto t = typical_set(dist, n, alpha);
    out = {{"n", n}, {"alpha", alpha}, {"size", t.sequences.size()}, {"probability", t.probability},
           {"trace_bound", finite_or_string(t.chebyshev_bound)}};
  } else if (kind == "state") {
    const auto rho = parse_matrix(p.req("state"), p.at("state"));
    const auto state = at_path(p.at("state"), [&] { return DensityOperator(rho); });
    out = to_json(typical_projector(state, p.positive("n"), alpha));
  } else {
    const auto w = parse_channel(p.req("channel"), p.at("channel"));
    const auto xs = as_ints(p.req("sequence"), p.at("sequence"));
    if (xs.empty()) throw SchemaError(p.at("sequence"), "empty sequence");
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (xs[i] < 0 || xs[i] >= w.alphabet_size())
        throw SchemaError(child_path(p.at("sequence"), i), "symbol out of range");
    if (kind == "conditional") {
      out = to_json(conditional_typical_projector(w, xs, alpha));
    } else {
      const auto c = cross_typicality(w, xs, alpha);
      out = to_json(c.output_projector);
      out["trace_mass"] = c.trace_mass;
      out["trace_bound"] = finite_or_string(c.trace_bound);
    }
  }
  out["kind"] = kind;
  return out;
}

inline json run_capacity(const Params& p) {
  const auto w = parse_channel(p.req("channel"), p.at("channel"));
  const double tol = p.number("tol", 1e-9);
  if (!(tol > 0.0)) throw SchemaError(p.at("tol"), "tol must be positive");
  const auto r = capacity(w, tol);
  if (!r.converged) throw NumericFailure("budget_exhausted", "capacity iteration did not reach the tolerance");
  return to_json(r);
}

inline RegularizationOptions regularization_options(const Params& p, unsigned workers) {
  RegularizationOptions o;
  o.workers = workers;
  const auto mode = p.text("mode", "derived");
  p.one_of("mode", mode, {"derived", "override"});
  if (mode == "override") {
    o.mode = ConstantsMode::override_constants;
    o.alpha = p.number("alpha");
    o.eps = p.number("eps");
    o.tau = p.number("tau");
  }
  o.L = p.count("L", 0);
  o.K = p.count("K", 0);
  return o;
}

inline json run_resolvability(const Params& p, std::uint64_t seed, unsigned workers) {
  const auto w = parse_channel(p.req("channel"), p.at("channel"));
  const int n = p.positive("n");
  const double lambda = p.number("lambda");
  if (!(lambda > 0.0 && lambda < 1.0)) throw SchemaError(p.at("lambda"), "lambda must lie in (0, 1)");
  const auto dist = p.opt("P") ? parse_distribution(*p.opt("P"), n, w.alphabet_size(), p.at("P"))
                               : parse_distribution("uniform", n, w.alphabet_size(), p.at("P"));
  const auto o = regularization_options(p, workers);
  const auto r = resolvability_regularize(dist, w, n, lambda, seed, o);
  json out = to_json(r, n, w.alphabet_size());
  out["log2_code_count"] = static_cast<double>(code_count_bound(r.K, r.L, w.alphabet_size(), n));
  if (const auto* e = p.opt("probe_eps")) {
    const double eps = as_double(*e, p.at("probe_eps"));
    out["probe"] = to_json(resolution_probe(dist, w, n, eps, derive_seed(seed, 1), workers));
  }
  if (const auto* c = p.opt("capacity_bits")) {
    const double cap = as_double(*c, p.at("capacity_bits"));
    const double delta = p.number("delta", 0.01);
    out["strong_converse_log2log2"] = static_cast<double>(strong_converse_bound(n, cap, delta));
  }
  return out;
}

inline json run_conjecture_probe(const Params& p, std::uint64_t seed) {
  ConjectureProbeOptions o;
  o.which = p.integer("which");
  o.dim = p.integer("dim", 2);
  o.count = p.count("count", 100);
  o.seed = seed;
  o.n = p.integer("n", 2);
  o.family_size = p.integer("family_size", 2);
  o.commuting = p.flag("commuting", false);
  if (o.which < 1 || o.which > 3) throw SchemaError(p.at("which"), "which must be 1, 2 or 3");
  return to_json(conjecture_probe(o));
}

inline json run_qid_eval(const Params& p, std::uint64_t seed, unsigned workers) {
  const auto w = parse_channel(p.req("channel"), p.at("channel"));
  const auto code = parse_qid_code(p.req("code"), w, p.at("code"));
  json out = to_json(evaluate_qid_code(code, w));
  out["entries"] = code.entries.size();
  if (const auto* reg = p.opt("regularize")) {
    const Params rp{*reg, p.at("regularize")};
    const double lambda = rp.number("lambda");
    if (!(lambda > 0.0 && lambda < 1.0)) throw SchemaError(rp.at("lambda"), "lambda must lie in (0, 1)");
    const auto o = regularization_options(rp, workers);
    std::vector<RegularizationResult> regs;
    for (std::size_t i = 0; i < code.entries.size(); ++i)
      regs.push_back(resolvability_regularize(code.entries[i].P, w, code.n, lambda, derive_seed(seed, i), o));
    const auto pr = approximation_preserves_id(code, w, regs);
    bool distinct = true;
    for (std::size_t i = 0; i < regs.size(); ++i)
      for (std::size_t k = i + 1; k < regs.size(); ++k) distinct = distinct && !same_regularized_distribution(regs[i], regs[k]);
    bool certified = true;
    for (const auto& r : regs) certified = certified && r.certified;
    out["regularized"] = {{"lambda1", pr.regularized.lambda1}, {"lambda2", pr.regularized.lambda2},
                          {"max_distance", pr.max_distance}, {"holds", pr.holds},
                          {"distinct", distinct},           {"certified", certified},
                          {"K", regs.front().K},            {"L", regs.front().L}};
  }
  return out;
}

}  // namespace detail

/// Results payload for one run; throws SchemaError or NumericFailure.
inline json run_command(const ExperimentConfig& c, unsigned workers = 0) {
  const detail::Params p{c.params};
  try {
    if (c.command == "tail-mc") return detail::run_tail(p, c.seed, workers);
    if (c.command == "cover-sample") return detail::run_cover_sample(p, c.seed);
    if (c.command == "cover-capacity") return detail::run_cover_capacity(p);
    if (c.command == "product-cover") return detail::run_product_cover(p);
    if (c.command == "typicality") return detail::run_typicality(p);
    if (c.command == "capacity") return detail::run_capacity(p);
    if (c.command == "resolvability") return detail::run_resolvability(p, c.seed, workers);
    if (c.command == "conjecture-probe") return detail::run_conjecture_probe(p, c.seed);
    if (c.command == "qid-eval") return detail::run_qid_eval(p, c.seed, workers);
  } catch (const Error& e) {
    // Argument-range violations found by the library are config errors;
    // everything else is a numeric failure.
    if (e.kind() == ErrorKind::invalid_argument) throw SchemaError("/params", e.what());
    throw NumericFailure(to_string(e.kind()), e.what());
  }
  throw SchemaError("/command", "unknown command '" + c.command + "'");
}

inline RunRecord run(const ExperimentConfig& c, unsigned workers = 0) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord r;
  r.config_hash = config_hash(c);
  r.command = c.command;
  r.seed = c.seed;
  r.results = run_command(c, workers);
  r.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline json to_json(const RunRecord& r) {
  return {{"config_hash", r.config_hash}, {"tool_version", r.tool_version}, {"command", r.command},
          {"seed", r.seed},               {"results", r.results},           {"wall_time_ms", r.wall_time_ms}};
}

inline RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.config_hash = as_string(field(j, "config_hash", ""), "/config_hash");
  r.tool_version = as_string(field(j, "tool_version", ""), "/tool_version");
  r.command = as_string(field(j, "command", ""), "/command");
  r.seed = as_uint64(field(j, "seed", ""), "/seed");
  r.results = field(j, "results", "");
  r.wall_time_ms = as_int(field(j, "wall_time_ms", ""), "/wall_time_ms");
  return r;
}

// ---------------------------------------------------------------------------
// CSV

/// Stable column set per command.
inline const std::vector<std::string>& csv_columns(const std::string& command) {
  static const std::map<std::string, std::vector<std::string>> cols{
      {"tail-mc", {"kind", "n", "method", "trials", "probability", "std_error", "bound", "rigorous_bound",
                   "trivial_bound", "holds"}},
      {"cover-sample", {"method", "kind", "L", "L_bound", "attempts", "certified", "beyond_lemma_bound", "support",
                        "tail_mass", "lower_slack", "upper_slack", "distance", "distance_bound", "failure"}},
      {"cover-capacity", {"edges", "dim", "capacity", "lower", "max_min_eigenvalue", "infinite", "optimizer"}},
      {"product-cover", {"n", "edges", "covering_number", "covering_method", "fractional", "fractional_lower",
                         "capacity", "capacity_bound"}},
      {"typicality", {"kind", "n", "alpha", "rank", "size", "probability", "trace_mass", "trace_bound",
                      "commutator", "entropy"}},
      {"capacity", {"capacity", "gap", "iterations", "converged", "optimizer"}},
      {"resolvability", {"mode", "lambda", "alpha", "eps", "tau", "K", "L", "support", "quantization_error",
                         "measured_distance", "certified", "log2_code_count"}},
      {"conjecture-probe", {"which", "instances", "min_slack", "violations"}},
      {"qid-eval", {"entries", "lambda1", "lambda2", "regularized.lambda1", "regularized.lambda2",
                    "regularized.max_distance", "regularized.holds"}}};
  return cols.at(command);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline std::string csv_value(const json& v) {
  switch (v.type()) {
    case json::value_t::null: return "";
    case json::value_t::string: return csv_escape(v.get<std::string>());
    case json::value_t::number_float: return format_double(v.get<double>());
    case json::value_t::array: {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_value(v[i]);
      return csv_escape(s);
    }
    case json::value_t::object: return csv_escape(canonical_dump(v));
    default: return v.dump();
  }
}

/// Looks up "a.b" as results["a"]["b"].
inline const json* lookup(const json& results, const std::string& column) {
  const json* cur = &results;
  std::size_t start = 0;
  while (true) {
    const auto dot = column.find('.', start);
    const auto key = column.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!cur->is_object() || !cur->contains(key)) return nullptr;
    cur = &(*cur)[key];
    if (dot == std::string::npos) return cur;
    start = dot + 1;
  }
}

inline std::string csv_header(const std::string& command) {
  std::string s;
  for (const auto& c : csv_columns(command)) s += (s.empty() ? "" : ",") + c;
  return s;
}

inline std::string csv_row(const std::string& command, const json& results) {
  std::string s;
  bool first = true;
  for (const auto& c : csv_columns(command)) {
    if (!first) s += ',';
    first = false;
    if (const json* v = lookup(results, c)) s += csv_value(*v);
  }
  return s;
}

inline std::string record_csv(const RunRecord& r) {
  return csv_header(r.command) + "\n" + csv_row(r.command, r.results) + "\n";
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
  std::size_t index = 0;
  json value;
  std::uint64_t seed = 0;
  std::optional<RunRecord> record;
  std::string status = "ok";  // ok | schema | numeric
  std::string error;
};

/// One run per value with seed derive_seed(master, i); failures are recorded
/// per row and the sweep continues.
inline std::vector<SweepRow> sweep(const ExperimentConfig& base, const std::string& axis, const json& values,
                                   unsigned workers = 0) {
  if (!base.params.contains(axis)) throw SchemaError("/sweep/axis", "axis is not a param of the template");
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepRow row;
    row.index = i;
    row.value = values[i];
    row.seed = derive_seed(base.seed, i);
    ExperimentConfig c = base;
    c.params[axis] = values[i];
    c.seed = row.seed;
    c.sweep_axis.reset();
    try {
      row.record = run(c, workers);
    } catch (const SchemaError& e) {
      row.status = "schema";
      row.error = e.path() + ": " + e.what();
    } catch (const NumericFailure& e) {
      row.status = "numeric";
      row.error = e.kind() + ": " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string sweep_csv(const std::string& command, const std::string& axis, const std::vector<SweepRow>& rows) {
  std::string s = "run," + csv_escape("sweep." + axis) + ",seed,status,error," + csv_header(command) + "\n";
  for (const auto& r : rows) {
    s += std::to_string(r.index) + "," + csv_value(r.value) + "," + std::to_string(r.seed) + "," + r.status + "," +
         csv_escape(r.error) + ",";
    if (r.record) {
      s += csv_row(command, r.record->results);
    } else {
      s += std::string(csv_columns(command).size() - 1, ',');
    }
    s += "\n";
  }
  return s;
}

inline json sweep_json(const std::string& axis, const std::vector<SweepRow>& rows) {
  json runs = json::array();
  for (const auto& r : rows) {
    json j = {{"run", r.index}, {"value", r.value}, {"seed", r.seed}, {"status", r.status}, {"error", r.error}};
    if (r.record) j["record"] = to_json(*r.record);
    runs.push_back(j);
  }
  return {{"axis", axis}, {"runs", runs}};
}

/// Serialized output for a config: the run record (or sweep) as JSON or CSV.
/// `include_timing = false` zeroes wall_time_ms, making the bytes a pure
/// function of (config, seed, version).
struct Output {
  std::string text;
  bool any_numeric_failure = false;
};

inline Output render(const ExperimentConfig& c, unsigned workers = 0, bool include_timing = true) {
  Output out;
  if (c.sweep_axis) {
    auto rows = sweep(c, *c.sweep_axis, c.sweep_values, workers);
    for (auto& r : rows) {
      if (r.status == "numeric") out.any_numeric_failure = true;
      if (r.record && !include_timing) r.record->wall_time_ms = 0;
    }
    out.text = c.format == "csv" ? sweep_csv(c.command, *c.sweep_axis, rows)
                                 : canonical_dump(sweep_json(*c.sweep_axis, rows)) + "\n";
    return out;
  }
  RunRecord r = run(c, workers);
  if (!include_timing) r.wall_time_ms = 0;
  out.text = c.format == "csv" ? record_csv(r) : canonical_dump(to_json(r)) + "\n";
  return out;
}

}  // namespace opcover

#endif  // OPCOVER_HARNESS_HPP
