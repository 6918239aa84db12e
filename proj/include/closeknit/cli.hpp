#pragma once

// Command-line front end. `run` is the whole program minus main(), so tests can
// drive it with in-memory streams.
//
// Exit codes: 0 success, 1 internal failure or certificate/mode mismatch,
// 2 condition violation, 3 cap exceeded, 4 malformed input.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "closeknit/abstract.hpp"
#include "closeknit/contlogic.hpp"
#include "closeknit/engine.hpp"
#include "closeknit/errors.hpp"
#include "closeknit/galois.hpp"
#include "closeknit/io.hpp"
#include "closeknit/oracle.hpp"

namespace closeknit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitCap = 3;
inline constexpr int kExitInput = 4;

inline int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Validation: return kExitViolation;
    case ErrorCategory::Cap: return kExitCap;
    case ErrorCategory::Input: return kExitInput;
    case ErrorCategory::Internal: return kExitFailure;
  }
  return kExitFailure;
}

namespace detail {

using io::json;

struct Output {
  std::ostream& out;
  std::optional<std::string> path;

  void emit(const json& j) const {
    const auto text = j.dump(2) + "\n";
    if (!path) {
      out << text;
      return;
    }
    std::ofstream f(*path);
    if (!f) throw MalformedInput("cannot write '" + *path + "'");
    f << text;
  }
};

inline SearchLimits limits_of(const io::Options& o) {
  SearchLimits l;
  l.max_strong_candidates = o.max_strong_candidates;
  return l;
}

inline SetInstance make(const io::SetSpec& s, const io::Options& o) {
  return SetInstance(s.carrier_size, s.seeds, s.gamma, o.max_orbit);
}
inline GroupInstance make(const io::GroupSpec& g, const io::Options& o) {
  return GroupInstance(g.group, g.seeds, g.gamma, o.max_orbit);
}
inline VectorInstance make(const io::VectorSpec& v, const io::Options& o) {
  return VectorInstance(v.p, v.dim, v.seeds, v.gamma, o.max_orbit);
}

/// Solve, verify and serialize; returns the exit code.
template <class I>
int solve_and_emit(const I& inst, const std::string& kind, const SolveOptions& opts, const Output& out,
                   std::ostream& err, json extra = json::object()) {
  const auto cert = solve(inst, opts);
  auto j = io::certificate_json(kind, cert);
  j["family"] = io::family_json(inst.family());
  const bool verified = verify_certificate(inst, cert);
  j["verified"] = verified;
  for (auto& [k, v] : extra.items()) j[k] = v;
  out.emit(j);
  if (cert.mode_agreement && !*cert.mode_agreement) {
    err << "error: full-meet and proof paths disagree\n";
    return kExitFailure;
  }
  if (!verified) {
    err << "error: certificate failed verification\n";
    return kExitFailure;
  }
  return kExitOk;
}

inline int cmd_solve(const io::InstanceFile& f, std::optional<SolveMode> mode, bool trace, const Output& out,
                     std::ostream& err) {
  SolveOptions opts;
  opts.mode = mode.value_or(f.options.mode.value_or(SolveMode::FullMeet));
  opts.trace = trace;
  opts.limits = limits_of(f.options);
  if (const auto* s = std::get_if<io::SetSpec>(&f.body)) return solve_and_emit(make(*s, f.options), f.kind, opts, out, err);
  if (const auto* g = std::get_if<io::GroupSpec>(&f.body)) {
    return solve_and_emit(make(*g, f.options), f.kind, opts, out, err);
  }
  if (const auto* v = std::get_if<io::VectorSpec>(&f.body)) {
    return solve_and_emit(make(*v, f.options), f.kind, opts, out, err);
  }
  if (const auto* d = std::get_if<AbstractDescription>(&f.body)) {
    return solve_and_emit(load_abstract(*d), f.kind, opts, out, err);
  }
  if (const auto* g = std::get_if<io::GaloisSpec>(&f.body)) {
    GaloisInstance gi{g->group.group, g->group.seeds, g->group.gamma, f.options.max_orbit};
    const auto r = solve_galois(gi, opts);
    return solve_and_emit(r.instance, f.kind, opts, out, err, {{"descriptor", io::descriptor_json(r.descriptor)}});
  }
  throw MalformedInput("solve does not apply to kind '" + f.kind + "'; use eval-delta");
}

inline int cmd_check(const io::InstanceFile& f, std::size_t samples, std::uint64_t seed, const Output& out) {
  json report;
  bool ok = true;
  auto concrete = [&](const auto& inst) {
    const auto r = validate_conditions(inst, samples, seed);
    report = io::report_json(r);
    ok = r.ok();
  };
  if (const auto* s = std::get_if<io::SetSpec>(&f.body)) concrete(make(*s, f.options));
  else if (const auto* g = std::get_if<io::GroupSpec>(&f.body)) concrete(make(*g, f.options));
  else if (const auto* v = std::get_if<io::VectorSpec>(&f.body)) concrete(make(*v, f.options));
  else if (const auto* gs = std::get_if<io::GaloisSpec>(&f.body)) concrete(make(gs->group, f.options));
  else if (const auto* d = std::get_if<AbstractDescription>(&f.body)) {
    const auto vs = validate_abstract(*d);
    report = io::report_json(vs);
    ok = vs.empty();
  } else {
    throw MalformedInput("check does not apply to kind '" + f.kind + "'");
  }
  report["kind"] = f.kind;
  out.emit(report);
  return ok ? kExitOk : kExitViolation;
}

template <class I, class B>
int oracle_and_emit(const I& inst, const std::string& kind, const B& bound, const io::Options& o,
                    const Output& out) {
  SolveOptions opts;
  opts.limits = limits_of(o);
  const auto n = solve(inst, opts).invariant_element;
  const auto feasible = feasible_set(inst, bound);
  json list = json::array();
  bool found = false;
  for (const auto& e : feasible) {
    list.push_back(io::to_json(e));
    found = found || e == n;
  }
  out.emit({{"kind", kind},
            {"feasible", list},
            {"count", feasible.size()},
            {"engine_element", io::to_json(n)},
            {"engine_in_feasible", found}});
  return kExitOk;
}

inline int cmd_oracle(const io::InstanceFile& f, std::int64_t bound, const Output& out) {
  if (bound < 0) throw MalformedInput("--bound must be non-negative");
  const auto b = static_cast<std::uint64_t>(bound);
  if (const auto* s = std::get_if<io::SetSpec>(&f.body)) return oracle_and_emit(make(*s, f.options), f.kind, b, f.options, out);
  if (const auto* g = std::get_if<io::GroupSpec>(&f.body)) {
    return oracle_and_emit(make(*g, f.options), f.kind, b, f.options, out);
  }
  if (const auto* gs = std::get_if<io::GaloisSpec>(&f.body)) {
    return oracle_and_emit(make(gs->group, f.options), f.kind, b, f.options, out);
  }
  if (const auto* v = std::get_if<io::VectorSpec>(&f.body)) {
    return oracle_and_emit(make(*v, f.options), f.kind, b, f.options, out);
  }
  if (const auto* d = std::get_if<AbstractDescription>(&f.body)) {
    const auto inst = load_abstract(*d);
    // Abstract levels are compared coordinatewise against a constant vector.
    const auto shape = inst.delta(inst.family().front(), 0);
    std::optional<IndexValue> level;
    if (shape.kind() == LevelKind::Natural) {
      level = IndexValue::natural(std::vector<std::int64_t>(shape.size(), bound));
    } else {
      level = IndexValue::unit(std::vector<Rational>(shape.size(), Rational(std::min<std::int64_t>(bound, 1))));
    }
    return oracle_and_emit(inst, f.kind, level, f.options, out);
  }
  throw MalformedInput("oracle does not apply to kind '" + f.kind + "'");
}

inline int cmd_eval_delta(const io::InstanceFile& f, const Output& out) {
  const auto* spec = std::get_if<io::MetricSpec>(&f.body);
  if (!spec) throw MalformedInput("eval-delta needs a metric instance");
  const auto& m = spec->structure;
  json queries = json::array();
  for (const auto& q : spec->queries) {
    json table = json::array();
    for (std::size_t phi = 0; phi < m.formulas().size(); ++phi) {
      if (q.formula && m.formulas()[phi].name != *q.formula) continue;
      json values = json::array();
      for (const auto& r : delta_sweep(q.kind, m, q.subset, q.param, q.gamma, phi, q.n_max)) {
        values.push_back(io::to_json(r));
      }
      json row{{"formula", m.formulas()[phi].name}, {"values", values}};
      // The discrete reduction is defined only for a discrete metric and a {0,1}-valued formula.
      try {
        row["discrete_reduction"] = discrete_reduction(q.kind, m, q.subset, q.param, phi);
      } catch (const ContractViolation&) {
      }
      table.push_back(std::move(row));
    }
    queries.push_back({{"case", to_string(q.kind)},
                       {"subset", q.subset},
                       {"param", q.param},
                       {"gamma", q.gamma},
                       {"n_max", q.n_max},
                       {"table", table}});
  }
  out.emit({{"kind", f.kind}, {"queries", queries}});
  return kExitOk;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant close-knit elements: solve, check, oracle, eval-delta"};
  app.require_subcommand(1);

  std::string input, output, mode_name;
  bool trace = false;
  std::size_t samples = 64;
  std::uint64_t seed = 1;
  std::int64_t bound = 0;

  auto* solve_cmd = app.add_subcommand("solve", "Find the invariant element and emit a verified certificate");
  solve_cmd->add_option("-i,--input", input, "Instance JSON file")->required();
  solve_cmd->add_option("-o,--output", output, "Write the certificate here instead of stdout");
  solve_cmd->add_option("--mode", mode_name, "full, proof or both")
      ->check(CLI::IsMember({"full", "proof", "both"}));
  solve_cmd->add_flag("--trace", trace, "Record the proof-path trace");

  auto* check_cmd = app.add_subcommand("check", "Validate the close-knit conditions");
  check_cmd->add_option("-i,--input", input, "Instance JSON file")->required();
  check_cmd->add_option("-o,--output", output, "Write the report here instead of stdout");
  check_cmd->add_option("--samples", samples, "Random elements to add to the family meets");
  check_cmd->add_option("--seed", seed, "Sampling seed");

  auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate invariant elements within a measure bound");
  oracle_cmd->add_option("-i,--input", input, "Instance JSON file")->required();
  oracle_cmd->add_option("-o,--output", output, "Write the result here instead of stdout");
  oracle_cmd->add_option("--bound", bound, "Measure bound")->required();

  auto* eval_cmd = app.add_subcommand("eval-delta", "Tabulate delta_{phi,n} for a metric instance");
  eval_cmd->add_option("-i,--input", input, "Instance JSON file")->required();
  eval_cmd->add_option("-o,--output", output, "Write the table here instead of stdout");

  std::vector<std::string> storage{"closeknit"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const auto file = io::load_instance_file(input);
    const detail::Output sink{out, output.empty() ? std::nullopt : std::optional<std::string>(output)};
    if (solve_cmd->parsed()) {
      std::optional<SolveMode> mode;
      if (mode_name == "full") mode = SolveMode::FullMeet;
      else if (mode_name == "proof") mode = SolveMode::Proof;
      else if (mode_name == "both") mode = SolveMode::Both;
      return detail::cmd_solve(file, mode, trace, sink, err);
    }
    if (check_cmd->parsed()) return detail::cmd_check(file, samples, seed, sink);
    if (oracle_cmd->parsed()) return detail::cmd_oracle(file, bound, sink);
    return detail::cmd_eval_delta(file, sink);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace closeknit::cli
