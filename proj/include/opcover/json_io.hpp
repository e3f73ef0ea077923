#ifndef OPCOVER_JSON_IO_HPP
#define OPCOVER_JSON_IO_HPP

// JSON encodings of the domain types, schema errors with field paths, and a
// canonical writer (sorted keys, shortest round-trip floats).
//
//   matrix       {"re": [[..]], "im": [[..]]} | {"diag": [..]} | {"pure": {"re": [..], "im": [..]}}
//   channel      {"states": [matrix, ..]} | {"classical": [[W(y|x)]..]}
//   hypergraph   {"edges": [matrix, ..], "eta": x}
//                | {"classical": {"vertices": n, "edges": [[v..] | {"vertices": [..], "measure": [..]}], "eta": x}}
//   operator RV  {"atoms": [{"p": x, "value": matrix}, ..]}
//   distribution "uniform" | {"dense": [..]} | {"atoms": [{"x": [..], "p": x}, ..]}
//   QID code     {"n": n, "entries": [{"P": distribution, "D": matrix}, ..]}

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "opcover/conjectures.hpp"
#include "opcover/cq_channel.hpp"
#include "opcover/hypergraph_covering.hpp"
#include "opcover/operator_probability.hpp"
#include "opcover/resolvability.hpp"
#include "opcover/typicality.hpp"

namespace opcover {

using json = nlohmann::json;

/// Config does not match the schema; `path` is a JSON pointer to the field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what) : std::runtime_error(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// ---------------------------------------------------------------------------
// Canonical output

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void dump_canonical(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_canonical(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ',';
        dump_canonical(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "\"" + format_double(x) + "\"";
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Sorted keys, no whitespace, shortest round-trip floats; non-finite floats
/// become the strings "inf", "-inf" and "nan".
inline std::string canonical_dump(const json& j) {
  std::string out;
  detail::dump_canonical(j, out);
  return out;
}

inline json finite_or_string(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }

// ---------------------------------------------------------------------------
// Field access

inline std::string child_path(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child_path(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(child_path(path, key), "missing required field");
  return *it;
}

inline const json* optional_field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline double as_double(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw SchemaError(path, "expected a number");
}

inline std::int64_t as_int(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (std::floor(x) == x && std::abs(x) < 9e15) return static_cast<std::int64_t>(x);
  }
  throw SchemaError(path, "expected an integer");
}

inline std::uint64_t as_uint64(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const std::int64_t v = as_int(j, path);
  if (v < 0) throw SchemaError(path, "expected a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

inline bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected a boolean");
  return j.get<bool>();
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

inline const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

inline std::vector<double> as_doubles(const json& j, const std::string& path) {
  std::vector<double> v;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) v.push_back(as_double(j[i], child_path(path, i)));
  return v;
}

inline std::vector<int> as_ints(const json& j, const std::string& path) {
  std::vector<int> v;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i)
    v.push_back(static_cast<int>(as_int(j[i], child_path(path, i))));
  return v;
}

/// Runs a constructor and reports library validation failures at `path`.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

// ---------------------------------------------------------------------------
// Domain types

inline Matrix parse_rows(const json& j, const std::string& path) {
  const auto& rows = as_array(j, path);
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw SchemaError(path, "matrix needs at least one row");
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto rp = child_path(path, static_cast<std::size_t>(i));
    const auto row = as_doubles(rows[i], rp);
    if (static_cast<Eigen::Index>(row.size()) != n) throw SchemaError(rp, "matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
  }
  return m;
}

inline HermitianMatrix parse_matrix(const json& j, const std::string& path) {
  if (const auto* d = optional_field(j, "diag", path)) {
    const auto diag = as_doubles(*d, child_path(path, "diag"));
    if (diag.empty()) throw SchemaError(child_path(path, "diag"), "empty diagonal");
    return HermitianMatrix::diagonal(diag);
  }
  if (const auto* p = optional_field(j, "pure", path)) {
    const auto pp = child_path(path, "pure");
    const auto re = as_doubles(field(*p, "re", pp), child_path(pp, "re"));
    std::vector<double> im(re.size(), 0.0);
    if (const auto* i = optional_field(*p, "im", pp)) im = as_doubles(*i, child_path(pp, "im"));
    if (im.size() != re.size() || re.empty()) throw SchemaError(pp, "re and im must share a nonzero length");
    CVector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t k = 0; k < re.size(); ++k) v(static_cast<Eigen::Index>(k)) = Complex(re[k], im[k]);
    if (v.norm() == 0.0) throw SchemaError(pp, "zero vector");
    return HermitianMatrix::outer(v / v.norm());
  }
  Matrix m = parse_rows(field(j, "re", path), child_path(path, "re"));
  if (const auto* i = optional_field(j, "im", path)) {
    const Matrix im = parse_rows(*i, child_path(path, "im"));
    if (im.rows() != m.rows()) throw SchemaError(child_path(path, "im"), "im must match re in size");
    m += Complex(0.0, 1.0) * im;
  }
  if (const auto* d = optional_field(j, "dim", path))
    if (as_int(*d, child_path(path, "dim")) != m.rows()) throw SchemaError(child_path(path, "dim"), "dim mismatch");
  return at_path(path, [&] { return HermitianMatrix(m); });
}

inline json matrix_to_json(const HermitianMatrix& a) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < a.dim(); ++i) {
    json r = json::array(), c = json::array();
    for (int k = 0; k < a.dim(); ++k) {
      r.push_back(a(i, k).real());
      c.push_back(a(i, k).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"dim", a.dim()}, {"re", re}, {"im", im}};
}

inline CQChannel parse_channel(const json& j, const std::string& path) {
  if (const auto* c = optional_field(j, "classical", path)) {
    const auto cp = child_path(path, "classical");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < as_array(*c, cp).size(); ++i) rows.push_back(as_doubles((*c)[i], child_path(cp, i)));
    return at_path(cp, [&] { return embed_classical(rows); });
  }
  const auto sp = child_path(path, "states");
  const auto& states = as_array(field(j, "states", path), sp);
  std::vector<DensityOperator> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto m = parse_matrix(states[i], child_path(sp, i));
    out.push_back(at_path(child_path(sp, i), [&] { return DensityOperator(m); }));
  }
  return at_path(sp, [&] { return CQChannel(std::move(out)); });
}

using AnyHypergraph = std::variant<QuantumHypergraph, ClassicalHypergraph>;

inline AnyHypergraph parse_hypergraph(const json& j, const std::string& path) {
  if (const auto* c = optional_field(j, "classical", path)) {
    const auto cp = child_path(path, "classical");
    const int nv = static_cast<int>(as_int(field(*c, "vertices", cp), child_path(cp, "vertices")));
    const auto ep = child_path(cp, "edges");
    const auto& edges = as_array(field(*c, "edges", cp), ep);
    std::vector<ClassicalEdge> out;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto p = child_path(ep, i);
      if (edges[i].is_array()) {
        const auto vs = as_ints(edges[i], p);
        if (vs.empty()) throw SchemaError(p, "empty edge");
        out.push_back({vs, std::vector<double>(vs.size(), 1.0 / static_cast<double>(vs.size()))});
      } else {
        out.push_back({as_ints(field(edges[i], "vertices", p), child_path(p, "vertices")),
                       as_doubles(field(edges[i], "measure", p), child_path(p, "measure"))});
      }
    }
    double eta = -1.0;
    if (const auto* e = optional_field(*c, "eta", cp)) eta = as_double(*e, child_path(cp, "eta"));
    return at_path(cp, [&] { return ClassicalHypergraph(nv, std::move(out), eta); });
  }
  const auto ep = child_path(path, "edges");
  const auto& edges = as_array(field(j, "edges", path), ep);
  std::vector<HermitianMatrix> out;
  for (std::size_t i = 0; i < edges.size(); ++i) out.push_back(parse_matrix(edges[i], child_path(ep, i)));
  double eta = -1.0;
  if (const auto* e = optional_field(j, "eta", path)) eta = as_double(*e, child_path(path, "eta"));
  return at_path(path, [&] { return QuantumHypergraph(std::move(out), eta); });
}

inline QuantumHypergraph as_quantum(const AnyHypergraph& g) {
  if (const auto* q = std::get_if<QuantumHypergraph>(&g)) return *q;
  return QuantumHypergraph::diagonal_embedding(std::get<ClassicalHypergraph>(g));
}

inline std::size_t edge_count(const AnyHypergraph& g) {
  return std::visit([](const auto& h) { return h.size(); }, g);
}

inline OperatorRV parse_operator_rv(const json& j, const std::string& path) {
  const auto ap = child_path(path, "atoms");
  const auto& atoms = as_array(field(j, "atoms", path), ap);
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto p = child_path(ap, i);
    out.push_back({as_double(field(atoms[i], "p", p), child_path(p, "p")),
                   parse_matrix(field(atoms[i], "value", p), child_path(p, "value"))});
  }
  return at_path(ap, [&] { return OperatorRV(std::move(out)); });
}

inline SparseDistribution parse_distribution(const json& j, int n, int a, const std::string& path) {
  const std::uint64_t count = at_path(path, [&] { return sequence_count(n, a); });
  SparseDistribution p;
  if (j.is_string()) {
    if (j.get<std::string>() != "uniform") throw SchemaError(path, "unknown distribution keyword");
    if (count > 1'000'000) throw SchemaError(path, "uniform distribution support too large");
    for (std::uint64_t k = 0; k < count; ++k) p[k] = 1.0 / static_cast<double>(count);
  } else if (const auto* d = optional_field(j, "dense", path)) {
    const auto v = as_doubles(*d, child_path(path, "dense"));
    if (v.size() != count) throw SchemaError(child_path(path, "dense"), "dense distribution needs a^n entries");
    for (std::uint64_t k = 0; k < count; ++k)
      if (v[k] != 0.0) p[k] = v[k];
  } else {
    const auto ap = child_path(path, "atoms");
    const auto& atoms = as_array(field(j, "atoms", path), ap);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const auto ip = child_path(ap, i);
      const auto xs = as_ints(field(atoms[i], "x", ip), child_path(ip, "x"));
      if (static_cast<int>(xs.size()) != n) throw SchemaError(child_path(ip, "x"), "sequence length must equal n");
      const auto key = at_path(child_path(ip, "x"), [&] { return encode_sequence(xs, a); });
      p[key] += as_double(field(atoms[i], "p", ip), child_path(ip, "p"));
    }
  }
  at_path(path, [&] {
    check_sparse_distribution(p, n, a);
    return 0;
  });
  return p;
}

inline QIDCode parse_qid_code(const json& j, const CQChannel& w, const std::string& path) {
  QIDCode code;
  code.n = static_cast<int>(as_int(field(j, "n", path), child_path(path, "n")));
  if (code.n < 1) throw SchemaError(child_path(path, "n"), "n must be positive");
  const auto ep = child_path(path, "entries");
  const auto& entries = as_array(field(j, "entries", path), ep);
  if (entries.empty()) throw SchemaError(ep, "code has no entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto p = child_path(ep, i);
    code.entries.push_back({parse_distribution(field(entries[i], "P", p), code.n, w.alphabet_size(), child_path(p, "P")),
                            parse_matrix(field(entries[i], "D", p), child_path(p, "D"))});
  }
  at_path(path, [&] {
    validate_qid_code(code, w);
    return 0;
  });
  return code;
}

// ---------------------------------------------------------------------------
// Results

inline json to_json(const TailReport& r) {
  return {{"probability", r.exact_or_empirical}, {"bound", finite_or_string(r.bound)},
          {"rigorous_bound", finite_or_string(r.rigorous_bound)}, {"n", r.n}, {"trials", r.trials},
          {"seed", r.seed}, {"method", to_string(r.method)}, {"std_error", r.std_error},
          {"trivial_bound", r.trivial_bound}, {"holds", r.holds}};
}

inline json to_json(const CoveringResult& r) {
  std::uint64_t support = 0;
  for (auto c : r.edge_counts) support += c > 0 ? 1 : 0;
  return {{"L", r.L},
          {"L_bound", finite_or_string(r.L_bound)},
          {"edge_counts", r.edge_counts},
          {"support", support},
          {"seed", r.seed},
          {"attempts", r.attempts},
          {"beyond_lemma_bound", r.beyond_lemma_bound},
          {"certified", r.certified},
          {"tail_mass", r.tail_mass},
          {"lower_slack", r.lower_slack},
          {"upper_slack", r.upper_slack},
          {"distance", r.distance},
          {"distance_bound", r.distance_bound},
          {"distance_bound_applies", r.distance_bound_applies},
          {"failure", r.failure}};
}

inline json randomized_to_json(const CoveringResult& r) {
  return {{"L", r.L},
          {"picked", r.picked},
          {"seed", r.seed},
          {"certified", r.certified},
          {"mu", r.mu},
          {"bound_uniform", finite_or_string(r.bound_uniform)},
          {"bound_mixed", finite_or_string(r.bound_mixed)}};
}

inline json to_json(const CoveringCapacity& c) {
  return {{"capacity", finite_or_string(c.capacity)}, {"lower", finite_or_string(c.lower)},
          {"max_min_eigenvalue", c.max_min_eigenvalue}, {"optimizer", c.optimizer}, {"infinite", c.infinite}};
}

inline json to_json(const FractionalCover& f) {
  return {{"value", f.value}, {"lower", f.lower}, {"weights", f.weights}, {"rounds", f.rounds},
          {"cuts", f.cuts}, {"converged", f.converged}};
}

inline json to_json(const TypicalProjector& t) {
  return {{"dim", t.projector.dim()},
          {"kind", t.kind == ProjectorKind::unconditional ? "unconditional" : "conditional"},
          {"n", t.n},
          {"alpha", t.alpha},
          {"rank", t.rank},
          {"trace_mass", t.trace_mass},
          {"trace_bound", finite_or_string(t.trace_bound)},
          {"commutator", t.commutator},
          {"entropy", t.entropy},
          {"rank_constant", t.rank_constant},
          {"eigen_constant", t.eigen_constant}};
}

inline json to_json(const CapacityResult& c) {
  return {{"capacity", c.capacity}, {"gap", c.gap}, {"optimizer", c.optimizer}, {"iterations", c.iterations},
          {"converged", c.converged}};
}

inline json to_json(const QIDEvaluation& e) {
  return {{"lambda1", e.lambda1}, {"lambda2", e.lambda2}, {"errors", e.errors}};
}

inline json to_json(const ConjectureReport& r) {
  json out = {{"which", r.which}, {"instances", r.instances}, {"min_slack", finite_or_string(r.min_slack)},
              {"violations", r.violations}};
  return out;
}

inline json to_json(const RegularizationResult& r, int n, int a) {
  json dist = json::array();
  for (const auto& [k, num] : r.numerators) dist.push_back({{"x", decode_sequence(k, n, a)}, {"numerator", num}});
  json types = json::array();
  for (const auto& t : r.per_type)
    types.push_back({{"counts", t.counts},
                     {"mass", t.mass},
                     {"weight", t.weight},
                     {"L_bound", finite_or_string(t.L_bound)},
                     {"dim", t.dim},
                     {"eta", t.eta},
                     {"support", t.support},
                     {"covering_certified", t.covering_certified},
                     {"tail_mass", t.tail_mass},
                     {"lower_slack", t.lower_slack},
                     {"upper_slack", t.upper_slack},
                     {"edge_distance", t.edge_distance},
                     {"type_distance", t.type_distance},
                     {"failure", t.failure}});
  return {{"mode", to_string(r.mode)},
          {"lambda", r.lambda},
          {"alpha", r.alpha},
          {"eps", r.eps},
          {"tau", r.tau},
          {"K", r.K},
          {"L", r.L},
          {"seed", r.seed},
          {"denominator", r.denominator},
          {"distribution", dist},
          {"support", r.support},
          {"quantization_error", r.quantization_error},
          {"measured_distance", r.measured_distance},
          {"certified", r.certified},
          {"per_type", types}};
}

inline json to_json(const ProbeReport& r) {
  json c = json::array();
  for (const auto& x : r.candidates)
    c.push_back({{"method", x.method}, {"lambda", x.lambda}, {"L", x.L}, {"support", x.support},
                 {"distance", x.distance}});
  return {{"candidates", c}, {"min_support", r.min_support}, {"best", r.best}};
}

}  // namespace opcover

#endif  // OPCOVER_JSON_IO_HPP
