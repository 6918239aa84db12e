#pragma once

// JSON instance files and certificate serialization.
//
// Wire conventions: all numbers are integers, rationals are [num, den] pairs,
// permutations are 0-based image arrays, matrices are row-major. Objects are
// emitted with sorted keys, so equal inputs give byte-identical output.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "closeknit/abstract.hpp"
#include "closeknit/contlogic.hpp"
#include "closeknit/engine.hpp"
#include "closeknit/errors.hpp"
#include "closeknit/galois.hpp"
#include "closeknit/groups.hpp"
#include "closeknit/index.hpp"
#include "closeknit/sets.hpp"
#include "closeknit/vect.hpp"

namespace closeknit::io {

using json = nlohmann::json;

struct Options {
  std::size_t max_orbit = 10000;
  std::size_t max_elements = PermGroup::kDefaultMaxElements;
  std::size_t max_strong_candidates = 100000;
  std::optional<SolveMode> mode;
};

struct SetSpec {
  std::size_t carrier_size = 0;
  std::vector<FiniteSubset> seeds;
  std::vector<Permutation> gamma;
};

struct GroupSpec {
  GroupPtr group;
  std::vector<Subgroup> seeds;
  std::vector<Permutation> gamma;
};

struct VectorSpec {
  std::uint32_t p = 2;
  std::size_t dim = 0;
  std::vector<SubspaceBasis> seeds;
  std::vector<Matrix> gamma;
};

struct GaloisSpec {
  GroupSpec group;
};

struct DeltaQuery {
  DeltaCase kind = DeltaCase::Set;
  std::vector<std::size_t> subset;
  std::size_t param = 0;
  Permutation gamma;
  std::size_t n_max = 0;
  std::optional<std::string> formula;
};

struct MetricSpec {
  MetricStructure structure;
  std::vector<DeltaQuery> queries;
};

using Body = std::variant<SetSpec, GroupSpec, VectorSpec, AbstractDescription, GaloisSpec, MetricSpec>;

struct InstanceFile {
  std::string kind;
  Options options;
  Body body;
};

// ---------------------------------------------------------------------------
// Reading

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw MalformedInput(path + ": " + what);
}

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

inline std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::size_t count_field(const json& obj, const std::string& key, const std::string& path) {
  return as_count(field(obj, key, path), path + "." + key);
}

inline Rational as_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    const auto den = j[1].get<std::int64_t>();
    if (den <= 0) fail(path, "rational denominator must be positive");
    return Rational(j[0].get<std::int64_t>(), den);
  }
  fail(path, "expected an integer or a [num, den] pair (floating point is not accepted)");
}

inline std::vector<std::size_t> as_counts(const json& j, const std::string& path) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) {
    out.push_back(as_count(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Permutation as_perm(const json& j, std::size_t degree, const std::string& path) {
  auto p = as_counts(j, path);
  if (p.size() != degree || !is_permutation(p)) {
    fail(path, "expected a permutation image array of length " + std::to_string(degree));
  }
  return p;
}

inline std::vector<Permutation> perms_field(const json& obj, const std::string& key, std::size_t degree,
                                            const std::string& path, bool required = false) {
  std::vector<Permutation> out;
  if (!obj.contains(key)) {
    if (required) fail(path, "missing field '" + key + "'");
    return out;
  }
  const auto& arr = array(obj[key], path + "." + key);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(as_perm(arr[i], degree, path + "." + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Matrix as_matrix(const json& j, std::size_t cols, const std::string& path) {
  Matrix m;
  const auto& rows = array(j, path);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    auto row = as_counts(rows[r], rp);
    if (row.size() != cols) fail(rp, "expected " + std::to_string(cols) + " entries");
    m.emplace_back(row.begin(), row.end());
  }
  return m;
}

inline IndexValue as_index_value(const json& j, LevelKind kind, const std::string& path) {
  const auto& arr = array(j, path);
  try {
    if (kind == LevelKind::Natural) {
      std::vector<std::int64_t> coords;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number_integer()) fail(path, "natural levels must be integers");
        coords.push_back(arr[i].get<std::int64_t>());
      }
      return IndexValue::natural(coords);
    }
    std::vector<Rational> coords;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      coords.push_back(as_rational(arr[i], path + "[" + std::to_string(i) + "]"));
    }
    return IndexValue::unit(std::move(coords));
  } catch (const StructuralError& e) {
    fail(path, e.what());
  }
}

inline Options parse_options(const json& root) {
  Options o;
  if (!root.contains("options")) return o;
  const auto& j = root["options"];
  if (!j.is_object()) fail("options", "expected an object");
  if (j.contains("max_orbit")) o.max_orbit = count_field(j, "max_orbit", "options");
  if (j.contains("max_elements")) o.max_elements = count_field(j, "max_elements", "options");
  if (j.contains("max_strong_candidates")) {
    o.max_strong_candidates = count_field(j, "max_strong_candidates", "options");
  }
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) fail("options.mode", "expected a string");
    const auto m = j["mode"].get<std::string>();
    if (m == "full") o.mode = SolveMode::FullMeet;
    else if (m == "proof") o.mode = SolveMode::Proof;
    else if (m == "both") o.mode = SolveMode::Both;
    else fail("options.mode", "expected one of full, proof, both");
  }
  return o;
}

inline SetSpec parse_set(const json& j, const std::string& path) {
  SetSpec s;
  s.carrier_size = count_field(j, "carrier_size", path);
  if (s.carrier_size > kMaxCarrierSize) fail(path + ".carrier_size", "exceeds 4096");
  const auto& seeds = array(field(j, "seeds", path), path + ".seeds");
  if (seeds.empty()) fail(path + ".seeds", "at least one seed is required");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::string sp = path + ".seeds[" + std::to_string(i) + "]";
    auto members = as_counts(seeds[i], sp);
    for (auto m : members)
      if (m >= s.carrier_size) fail(sp, "member " + std::to_string(m) + " outside the carrier");
    s.seeds.emplace_back(s.carrier_size, members);
  }
  s.gamma = perms_field(j, "gamma", s.carrier_size, path);
  return s;
}

inline GroupSpec parse_group(const json& j, const std::string& path, const Options& o) {
  GroupSpec g;
  const auto degree = count_field(j, "degree", path);
  auto gens = perms_field(j, "generators", degree, path, true);
  g.group = PermGroup::make(degree, std::move(gens), o.max_elements);
  const auto& seeds = array(field(j, "seeds", path), path + ".seeds");
  if (seeds.empty()) fail(path + ".seeds", "at least one seed is required");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::string sp = path + ".seeds[" + std::to_string(i) + "]";
    std::vector<Permutation> sg;
    for (std::size_t k = 0; k < array(seeds[i], sp).size(); ++k) {
      sg.push_back(as_perm(seeds[i][k], degree, sp + "[" + std::to_string(k) + "]"));
    }
    for (const auto& p : sg)
      if (!g.group->contains(p)) fail(sp, "generator is not an element of the ambient group");
    g.seeds.push_back(generated_by(g.group, sg));
  }
  g.gamma = perms_field(j, "gamma", degree, path);
  return g;
}

inline VectorSpec parse_vector(const json& j, const std::string& path) {
  VectorSpec v;
  const auto p = count_field(j, "p", path);
  if (!is_prime(p) || p >= (1u << 31)) fail(path + ".p", "expected a prime below 2^31");
  v.p = static_cast<std::uint32_t>(p);
  v.dim = count_field(j, "dim", path);
  const auto& seeds = array(field(j, "seeds", path), path + ".seeds");
  if (seeds.empty()) fail(path + ".seeds", "at least one seed is required");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    v.seeds.push_back(SubspaceBasis::span(v.p, v.dim, as_matrix(seeds[i], v.dim, path + ".seeds[" + std::to_string(i) + "]")));
  }
  if (j.contains("gamma")) {
    const auto& gs = array(j["gamma"], path + ".gamma");
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const std::string gp = path + ".gamma[" + std::to_string(i) + "]";
      auto m = as_matrix(gs[i], v.dim, gp);
      if (m.size() != v.dim) fail(gp, "expected a square matrix");
      if (!is_invertible(m, v.p, v.dim)) throw InvalidAction(gp + ": matrix is not invertible mod p");
      v.gamma.push_back(std::move(m));
    }
  }
  return v;
}

inline AbstractDescription parse_abstract(const json& j, const std::string& path) {
  AbstractDescription d;
  d.size = count_field(j, "size", path);
  const auto& meet = array(field(j, "meet", path), path + ".meet");
  for (std::size_t i = 0; i < meet.size(); ++i) {
    d.meet.push_back(as_counts(meet[i], path + ".meet[" + std::to_string(i) + "]"));
  }
  d.family = as_counts(field(j, "family", path), path + ".family");
  LevelKind kind = LevelKind::Natural;
  if (j.contains("level_kind")) {
    const auto k = j["level_kind"];
    if (k == "natural") kind = LevelKind::Natural;
    else if (k == "unit") kind = LevelKind::Unit;
    else fail(path + ".level_kind", "expected \"natural\" or \"unit\"");
  }
  const auto& delta = array(field(j, "delta", path), path + ".delta");
  for (std::size_t s = 0; s < delta.size(); ++s) {
    const std::string rp = path + ".delta[" + std::to_string(s) + "]";
    std::vector<IndexValue> row;
    for (std::size_t a = 0; a < array(delta[s], rp).size(); ++a) {
      row.push_back(as_index_value(delta[s][a], kind, rp + "[" + std::to_string(a) + "]"));
    }
    d.delta.push_back(std::move(row));
  }
  const auto& inc = array(field(j, "increment", path), path + ".increment");
  for (std::size_t s = 0; s < inc.size(); ++s) {
    d.increment.push_back(as_counts(inc[s], path + ".increment[" + std::to_string(s) + "]"));
  }
  d.gamma = perms_field(j, "gamma", d.size, path);
  d.gamma_on_family = perms_field(j, "gamma_on_family", d.family.size(), path);
  return d;
}

inline DeltaCase parse_case(const json& j, const std::string& path) {
  if (j == "set") return DeltaCase::Set;
  if (j == "group") return DeltaCase::Group;
  if (j == "vector") return DeltaCase::Vector;
  fail(path, "expected \"set\", \"group\" or \"vector\"");
}

inline MetricSpec parse_metric(const json& j, const std::string& path) {
  const auto points = count_field(j, "points", path);
  const auto params = count_field(j, "params", path);
  std::vector<std::vector<Rational>> dist;
  if (j.contains("distance")) {
    const auto& rows = array(j["distance"], path + ".distance");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rp = path + ".distance[" + std::to_string(r) + "]";
      std::vector<Rational> row;
      for (std::size_t c = 0; c < array(rows[r], rp).size(); ++c) {
        row.push_back(as_rational(rows[r][c], rp + "[" + std::to_string(c) + "]"));
      }
      dist.push_back(std::move(row));
    }
  } else {
    dist = discrete_distance(points);
  }
  std::vector<Formula> formulas;
  const auto& fs = array(field(j, "formulas", path), path + ".formulas");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const std::string fp = path + ".formulas[" + std::to_string(i) + "]";
    Formula f;
    const auto& name = field(fs[i], "name", fp);
    if (!name.is_string()) fail(fp + ".name", "expected a string");
    f.name = name.get<std::string>();
    const auto& vals = array(field(fs[i], "values", fp), fp + ".values");
    for (std::size_t x = 0; x < vals.size(); ++x) {
      const std::string vp = fp + ".values[" + std::to_string(x) + "]";
      std::vector<Rational> row;
      for (std::size_t a = 0; a < array(vals[x], vp).size(); ++a) {
        row.push_back(as_rational(vals[x][a], vp + "[" + std::to_string(a) + "]"));
      }
      f.values.push_back(std::move(row));
    }
    formulas.push_back(std::move(f));
  }
  std::optional<GroupTable> group;
  if (j.contains("group")) {
    GroupTable g;
    const auto& mul = array(field(j["group"], "mul", path + ".group"), path + ".group.mul");
    for (std::size_t r = 0; r < mul.size(); ++r) {
      g.mul.push_back(as_counts(mul[r], path + ".group.mul[" + std::to_string(r) + "]"));
    }
    group = std::move(g);
  }
  std::optional<VectorCoords> vector;
  if (j.contains("vector")) {
    const std::string vp = path + ".vector";
    VectorCoords v;
    v.p = static_cast<std::uint32_t>(count_field(j["vector"], "p", vp));
    v.dim = count_field(j["vector"], "dim", vp);
    v.coords = as_matrix(field(j["vector"], "coords", vp), v.dim, vp + ".coords");
    vector = std::move(v);
  }
  MetricSpec spec{MetricStructure(points, std::move(dist), std::move(formulas), params, std::move(group),
                                  std::move(vector)),
                  {}};
  if (j.contains("queries")) {
    const auto& qs = array(j["queries"], path + ".queries");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const std::string qp = path + ".queries[" + std::to_string(i) + "]";
      DeltaQuery q;
      q.kind = parse_case(field(qs[i], "case", qp), qp + ".case");
      q.subset = as_counts(field(qs[i], "subset", qp), qp + ".subset");
      for (auto x : q.subset)
        if (x >= points) fail(qp + ".subset", "point out of range");
      q.param = count_field(qs[i], "param", qp);
      if (q.param >= params) fail(qp + ".param", "parameter out of range");
      q.gamma = qs[i].contains("gamma") ? as_perm(qs[i]["gamma"], points, qp + ".gamma")
                                        : identity_permutation(points);
      q.n_max = qs[i].contains("n_max") ? count_field(qs[i], "n_max", qp) : points;
      if (qs[i].contains("formula")) {
        if (!qs[i]["formula"].is_string()) fail(qp + ".formula", "expected a string");
        q.formula = qs[i]["formula"].get<std::string>();
        if (!spec.structure.formula_index(*q.formula)) fail(qp + ".formula", "unknown formula");
      }
      spec.queries.push_back(std::move(q));
    }
  }
  return spec;
}

}  // namespace detail

inline InstanceFile parse_instance(const json& root) {
  using detail::fail;
  if (!root.is_object()) fail("$", "expected a JSON object");
  const auto& kind_j = detail::field(root, "kind", "$");
  if (!kind_j.is_string()) fail("kind", "expected a string");
  InstanceFile f;
  f.kind = kind_j.get<std::string>();
  static const char* kinds[] = {"set", "group", "vector", "abstract", "galois", "metric"};
  bool known = false;
  for (const char* k : kinds) {
    if (f.kind == k) known = true;
    else if (root.contains(k)) fail(k, "block does not match kind '" + f.kind + "'");
  }
  if (!known) fail("kind", "unknown kind '" + f.kind + "'");
  f.options = detail::parse_options(root);
  const auto& block = detail::field(root, f.kind, "$");
  if (f.kind == "set") f.body = detail::parse_set(block, "set");
  else if (f.kind == "group") f.body = detail::parse_group(block, "group", f.options);
  else if (f.kind == "vector") f.body = detail::parse_vector(block, "vector");
  else if (f.kind == "abstract") f.body = detail::parse_abstract(block, "abstract");
  else if (f.kind == "galois") f.body = GaloisSpec{detail::parse_group(block, "galois", f.options)};
  else f.body = detail::parse_metric(block, "metric");
  return f;
}

inline InstanceFile parse_instance_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedInput(std::string("invalid JSON: ") + e.what());
  }
  return parse_instance(j);
}

inline InstanceFile load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

// ---------------------------------------------------------------------------
// Writing

inline json to_json(const Rational& r) { return json::array({r.numerator(), r.denominator()}); }

inline json to_json(const IndexValue& v) {
  json out = json::array();
  for (const auto& c : v.coords()) {
    if (v.kind() == LevelKind::Natural) out.push_back(c.numerator());
    else out.push_back(to_json(c));
  }
  return out;
}

inline json to_json(const DownSet& d) {
  json out = json::array();
  for (const auto& g : d.generators()) out.push_back(to_json(g));
  return out;
}

inline json to_json(const FiniteSubset& s) { return s.members(); }

inline json to_json(const Subgroup& s) {
  json gens = json::array();
  for (auto g : generating_set(s)) gens.push_back(s.ambient()->element(g));
  return {{"order", s.order()}, {"generators", gens}};
}

inline json to_json(const SubspaceBasis& s) { return {{"rank", s.rank()}, {"rows", s.rows()}}; }

inline json to_json(const LatticePoint& p) { return p.id; }

inline json measure_json(std::size_t a, const CountMeasure& m) {
  return {{"index", a}, {"forward", m.forward}, {"backward", m.backward}};
}

inline json measure_json(std::size_t a, const IndexValue& delta) {
  return {{"index", a}, {"delta", to_json(delta)}};
}

inline const char* to_string(SolveMode m) {
  switch (m) {
    case SolveMode::FullMeet: return "full";
    case SolveMode::Proof: return "proof";
    case SolveMode::Both: return "both";
  }
  return "?";
}

template <class E, class M>
json certificate_json(const std::string& kind, const Certificate<E, M>& c) {
  json j;
  j["kind"] = kind;
  j["mode"] = to_string(c.mode);
  j["invariant_element"] = to_json(c.invariant_element);
  j["gamma_fixed"] = c.gamma_fixed;
  j["orbit_size"] = c.orbit_size;
  j["strong_element"] = to_json(c.strong_element);
  j["argmax_indices"] = c.argmax_indices;
  j["m_generators"] = to_json(c.m_generators);
  json ms = json::array();
  for (std::size_t a = 0; a < c.measures.size(); ++a) ms.push_back(measure_json(a, c.measures[a]));
  j["measures"] = ms;
  if (c.measure_bound) j["measure_bound"] = *c.measure_bound;
  if (c.mode_agreement) j["mode_agreement"] = *c.mode_agreement;
  if (c.trace) {
    json t = json::array();
    for (const auto& step : *c.trace) {
      json s{{"event", step.event}, {"element", to_json(step.element)}, {"n", to_json(step.n_value)}};
      if (step.candidate) s["candidate"] = *step.candidate;
      t.push_back(std::move(s));
    }
    j["trace"] = t;
  }
  return j;
}

template <class E>
json family_json(const std::vector<E>& family) {
  json out = json::array();
  for (const auto& f : family) out.push_back(to_json(f));
  return out;
}

inline json descriptor_json(const FixedFieldDescriptor& d) {
  json members = json::array();
  for (const auto& m : d.members) {
    members.push_back({{"index", m.family_index},
                       {"member_over_meet", m.member_over_meet},
                       {"h_over_meet", m.h_over_meet}});
  }
  return {{"group_order", d.group_order},     {"h_order", d.h_order},
          {"index_in_group", d.index_in_group}, {"normal_in_group", d.normal_in_group},
          {"closed", d.closed},               {"family_max_index", d.family_max_index},
          {"members", members},               {"relations", d.relations}};
}

inline json report_json(const ValidationReport& r) {
  json vs = json::array();
  for (const auto& v : r.violations) {
    const char* clause = "";
    switch (v.clause) {
      case Clause::Monotonicity: clause = "MonotonicityViolation"; break;
      case Clause::IncrementAbove:
      case Clause::IncrementStability: clause = "IncrementViolation"; break;
      case Clause::Equivariance: clause = "EquivarianceViolation"; break;
      case Clause::LatticeLaw: clause = "AssociativityViolation"; break;
    }
    vs.push_back({{"clause", clause}, {"condition", to_string(v.clause)}, {"detail", v.detail}});
  }
  return {{"ok", r.ok()},
          {"violations", vs},
          {"elements_checked", r.elements_checked},
          {"pairs_checked", r.pairs_checked},
          {"notes", r.notes}};
}

inline json report_json(const std::vector<AbstractViolation>& violations) {
  json vs = json::array();
  for (const auto& v : violations) vs.push_back({{"clause", to_string(v.clause)}, {"detail", v.detail}});
  return {{"ok", violations.empty()}, {"violations", vs}, {"notes", finite_scale_notes()}};
}

}  // namespace closeknit::io
