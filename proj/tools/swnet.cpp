// swnet: command-line front end. Reports go to stdout as JSON, CSV tables to
// --out (or stdout when the command only produces a table).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "swnet/errors.hpp"
#include "swnet/instance.hpp"
#include "swnet/lpopt.hpp"
#include "swnet/matching.hpp"
#include "swnet/multisink.hpp"

using nlohmann::json;
using namespace swnet;

namespace {

enum ExitCode { kOk = 0, kError = 1, kInfeasible = 2, kSchema = 3, kNumerical = 4 };

struct Common {
  std::string instance;
  std::string out;
  double tol = 1e-9;
  bool timing = false;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json scalar_json(double x) { return x; }
json scalar_json(const Rational& x) { return {{"exact", format_scalar(x)}, {"value", to_double(x)}}; }

template <typename Scalar>
json point_json(const GroundSet& g, const RatePoint<Scalar>& r) {
  json out = json::object();
  for (int i = 0; i < g.size(); ++i) out[g.label(i)] = scalar_json(r[i]);
  return out;
}

json subsets_json(const GroundSet& g, const std::vector<Subset>& sets) {
  json out = json::array();
  for (Subset u : sets) out.push_back(g.describe(u));
  return out;
}

template <typename Scalar>
json verdict_json(const GroundSet& g, const Verdict<Scalar>& v) {
  json out = {{"outcome", to_string(v.outcome)}};
  if (v.pair) {
    out["T"] = g.describe(v.pair->t);
    out["U"] = g.describe(v.pair->u);
  }
  if (v.vertex) out["vertex"] = point_json(g, *v.vertex);
  if (!v.diagnostic.empty()) out["diagnostic"] = v.diagnostic;
  return out;
}

template <typename Scalar>
json classification_json(const GroundSet& g, const Classification<Scalar>& c) {
  return {{"type", to_string(c.type)},
          {"hypotheses_hold", c.hypotheses_hold},
          {"han", verdict_json(g, c.han)},
          {"cross", verdict_json(g, c.cross)},
          {"sigma_face", verdict_json(g, c.sigma_face)},
          {"rho_face", verdict_json(g, c.rho_face)}};
}

json multisink_verdict_json(const Network<double>& net, const GroundSet& g, const MultiSinkVerdict<double>& v) {
  json out = {{"holds", v.holds}};
  if (v.witness) {
    out["sink"] = net.node_name(v.witness->sink);
    out["U"] = g.describe(v.witness->subset);
  }
  if (v.vertex) out["vertex"] = point_json(g, *v.vertex);
  if (!v.diagnostic.empty()) out["diagnostic"] = v.diagnostic;
  return out;
}

struct Loaded {
  Instance inst;
  std::optional<Network<double>> net;
  std::optional<JointSource> src;
};

Loaded load(const std::string& path) {
  if (path.empty()) throw SchemaError("an instance file is required");
  Loaded l;
  l.inst = path == "-" ? parse_instance_text(std::string(std::istreambuf_iterator<char>(std::cin), {}))
                       : load_instance(path);
  if (l.inst.network) {
    l.net = to_network(*l.inst.network);
    std::vector<std::string> labels;
    for (const auto& s : l.inst.network->sources) labels.push_back(s.node);
    l.src = to_source(*l.inst.source, labels);
  }
  return l;
}

const Network<double>& need_network(const Loaded& l) {
  if (!l.net) throw SchemaError("this command needs a network instance");
  return *l.net;
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

Permutation parse_permutation(const std::string& spec, const GroundSet& g) {
  std::vector<int> order;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto idx = g.index_of(item);
    if (!idx) throw SchemaError("unknown source label '" + item + "' in permutation");
    order.push_back(*idx);
  }
  if (static_cast<int>(order.size()) != g.size()) throw SchemaError("a permutation must list every source once");
  try {
    return Permutation(order);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

json cmd_check(const Common& c) {
  const auto l = load(c.instance);
  json report = {{"command", "check"}};
  if (l.inst.setfunctions) {
    const auto& sf = *l.inst.setfunctions;
    const auto sigma = to_setfunction(sf.labels, sf.sigma);
    const auto rho = to_setfunction(sf.labels, sf.rho);
    const auto cls = classify_intersection(sigma, rho);
    report["classification"] = classification_json(sigma.ground(), cls);
    report["sigma_cross"] = verdict_json(sigma.ground(), check_sigma_cross(sigma, rho));
    report["rho_cross"] = verdict_json(sigma.ground(), check_rho_cross(sigma, rho));
    return report;
  }
  const auto& net = need_network(l);
  const auto sigma = sw_setfunction(*l.src);
  const auto& g = sigma.ground();
  const auto entropies = entropy_vector(*l.src);
  report["multisink_feasible"] = multisink_verdict_json(net, g, check_multisink_feasible(entropies, net));
  report["multisink_vertices_feasible"] =
      multisink_verdict_json(net, g, check_multisink_vertices_feasible(entropies, net));
  json sinks = json::array();
  for (NodeId t : net.sinks()) {
    const auto rho = rho_c(net, t);
    json entry = {{"sink", net.node_name(t)}};
    entry["classification"] = classification_json(g, classify_intersection(sigma, rho));
    entry["sigma_cross"] = verdict_json(g, check_sigma_cross(sigma, rho));
    entry["rho_cross"] = verdict_json(g, check_rho_cross(sigma, rho));
    if (net.sinks().size() == 1) entry["conditional_entropy_cross"] = verdict_json(g, check_conditional_entropy_cross(*l.src, net));
    sinks.push_back(entry);
  }
  report["sinks"] = sinks;
  return report;
}

json vertex_report_json(const JointSource& src) {
  const auto rep = enumerate_sw_vertices(src);
  const auto& g = src.ground();
  json vertices = json::array();
  const auto mult = rep.multiplicity();
  for (std::size_t i = 0; i < rep.distinct_vertices.size(); ++i) {
    json perms = json::array();
    for (const auto& pi : rep.permutations[i]) {
      std::string s;
      for (int e : pi.order()) s += (s.empty() ? "" : ",") + g.label(e);
      perms.push_back(s);
    }
    vertices.push_back({{"rates", point_json(g, rep.distinct_vertices[i])},
                        {"multiplicity", mult[i]},
                        {"permutations", perms},
                        {"active_sets", subsets_json(g, rep.active_sets[i])}});
  }
  return {{"count", rep.distinct_vertices.size()}, {"vertices", vertices}, {"ci_matches_numeric", rep.ci_matches_numeric}};
}

json cmd_vertices(const Common& c, int grid) {
  json report = {{"command", "vertices"}};
  if (!c.instance.empty()) {
    const auto l = load(c.instance);
    if (!l.src) throw SchemaError("the vertices command needs a source model");
    report["report"] = vertex_report_json(*l.src);
  }
  if (grid > 0) {
    if (grid < 2) throw SchemaError("--grid needs at least two points");
    std::string csv = "p,q,vertices\n";
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        const double p = static_cast<double>(i) / (grid - 1);
        const double q = static_cast<double>(j) / (grid - 1);
        const auto rep = enumerate_sw_vertices(markov3(p, q));
        csv += fmt(p) + "," + fmt(q) + "," + std::to_string(rep.distinct_vertices.size()) + "\n";
      }
    if (c.out.empty()) {
      report["grid_csv"] = csv;
    } else {
      write_text(c.out, csv);
      report["grid_csv_file"] = c.out;
    }
  }
  if (c.instance.empty() && grid <= 0) throw SchemaError("vertices needs an instance or --grid");
  return report;
}

template <typename Scalar>
json single_solution_json(const Network<double>& dnet, const Network<Scalar>& net, const SetFunction<Scalar>& sigma) {
  const auto sol = solve_primal(net, sigma);
  const auto& g = sigma.ground();
  json out = {{"status", to_string(sol.status)}};
  if (sol.status != LpStatus::optimal) {
    if (sol.status == LpStatus::infeasible) {
      // Name the violated cut for the diagnostic.
      const auto v = check_han(sigma, rho_c(net, net.sink()));
      throw InfeasibleError(v.holds() ? "the single-sink program is infeasible" : v.diagnostic);
    }
    throw NumericalError(std::string("the single-sink program is ") + to_string(sol.status));
  }
  out["objective"] = scalar_json(sol.objective);
  json flow = json::object();
  for (int a = 0; a < net.arc_count(); ++a) {
    const auto& arc = dnet.arc(a);
    const std::string key = arc.name.empty() ? dnet.node_name(arc.tail) + "->" + dnet.node_name(arc.head) : arc.name;
    flow[key] = scalar_json(sol.flow[a]);
  }
  out["flow"] = flow;
  out["rates"] = point_json(g, sol.rates);
  json duals = {{"x", json::object()}, {"z", json::object()}, {"y", json::object()}};
  for (int a = 0; a < net.arc_count(); ++a) duals["x"][std::to_string(a)] = scalar_json(sol.x[a]);
  for (NodeId v = 0; v < net.node_count(); ++v) duals["z"][dnet.node_name(v)] = scalar_json(sol.z[v]);
  for (std::size_t j = 0; j < sol.y_subsets.size(); ++j)
    if (sol.y[j] != Scalar(0)) duals["y"][g.describe(sol.y_subsets[j])] = scalar_json(sol.y[j]);
  out["duals"] = duals;
  const Scalar total = sol.rates.sum();
  const Scalar joint = sigma(g.full());
  out["total_rate"] = scalar_json(total);
  out["joint_entropy"] = scalar_json(joint);
  out["total_rate_matches"] = std::abs(to_double(total) - to_double(joint)) <= 1e-7;

  // Is the optimal rate a vertex of the SW region, and does any defining
  // permutation certify it?
  bool is_vertex = false;
  json certificate = nullptr;
  for (const auto& pi : all_permutations(g.size())) {
    const auto r = contrapolymatroid_vertex(sigma, pi);
    if (!points_equal<double>(vector_cast<double>(r), vector_cast<double>(sol.rates), 1e-7)) continue;
    is_vertex = true;
    const auto cert = certify_vertex_optimal(net, sigma, pi);
    if (cert.certificate) {
      json y = json::object();
      for (std::size_t i = 0; i < cert.certificate->chain.size(); ++i)
        y[g.describe(cert.certificate->chain[i])] = scalar_json(cert.certificate->y[i]);
      certificate = {{"permutation", g.describe(g.full())}, {"y", y},
                     {"dual_objective", scalar_json(cert.certificate->dual_objective)}};
      std::string order;
      for (int e : pi.order()) order += (order.empty() ? "" : ",") + g.label(e);
      certificate["permutation"] = order;
      break;
    }
  }
  out["sw_vertex"] = is_vertex;
  if (!is_vertex) out["note"] = "optimal rate not a SW vertex";
  out["vertex_certificate"] = certificate;
  return out;
}

template <typename Scalar>
json multi_solution_json(const Network<double>& dnet, const SetFunction<Scalar>& entropies, const Network<Scalar>& net) {
  const auto sol = solve_multisink(entropies, net);
  const auto& g = entropies.ground();
  const auto& aug = sol.augmented.net;
  auto arc_key = [&](int a) {
    const auto& arc = aug.arc(a);
    if (a < dnet.arc_count() && !dnet.arc(a).name.empty()) return dnet.arc(a).name;
    return aug.node_name(arc.tail) + "->" + aug.node_name(arc.head);
  };
  json physical = json::object();
  for (int a = 0; a < aug.arc_count(); ++a) physical[arc_key(a)] = scalar_json(sol.physical[a]);
  json sinks = json::array();
  for (std::size_t k = 0; k < sol.sinks.size(); ++k) {
    json f = json::object();
    for (int a = 0; a < aug.arc_count(); ++a) f[arc_key(a)] = scalar_json(sol.virtual_flows[k][a]);
    sinks.push_back({{"sink", net.node_name(sol.sinks[k])}, {"virtual_flow", f}, {"rates", point_json(g, sol.rates[k])}});
  }
  return {{"status", "optimal"},
          {"objective", scalar_json(sol.cost)},
          {"physical_flow", physical},
          {"sinks", sinks},
          {"max_rates", point_json(g, sol.max_rates)}};
}

json cmd_solve(const Common& c, const std::string& mode, bool rational) {
  const auto l = load(c.instance);
  const auto& net = need_network(l);
  json report = {{"command", "solve"}, {"mode", mode}, {"rational", rational}};
  if (mode == "single") {
    const auto sigma = sw_setfunction(*l.src);
    report["solution"] = rational ? single_solution_json(net, net.cast<Rational>(), sigma.cast<Rational>())
                                  : single_solution_json(net, net, sigma);
  } else if (mode == "multi") {
    const auto h = entropy_vector(*l.src);
    report["solution"] =
        rational ? multi_solution_json(net, h.cast<Rational>(), net.cast<Rational>()) : multi_solution_json(net, h, net);
  } else {
    throw SchemaError("--mode must be single or multi");
  }
  return report;
}

json cmd_sweep(const Common& c, const std::string& from, const std::string& to, int grid) {
  const auto l = load(c.instance);
  const auto& net = need_network(l);
  const auto sigma = sw_setfunction(*l.src);
  const auto ra = contrapolymatroid_vertex(sigma, parse_permutation(from, sigma.ground()));
  const auto rb = contrapolymatroid_vertex(sigma, parse_permutation(to, sigma.ground()));
  std::string csv = "lambda,cost_mixed,cost_exact,total_mixed,total_exact\n";
  for (const auto& row : lambda_sweep(net, ra, rb, grid))
    csv += fmt(row.lambda) + "," + fmt(row.cost_mixed) + "," + fmt(row.cost_exact) + "," + fmt(row.total_mixed) + "," +
           fmt(row.total_exact) + "\n";
  write_text(c.out, csv);
  return nullptr;
}

json cmd_bounds(const Common& c, bool rational) {
  const auto l = load(c.instance);
  const auto& net = need_network(l);
  const auto h = entropy_vector(*l.src);
  json report = {{"command", "bounds"}, {"rational", rational}};
  auto fill = [&](const auto& hh, const auto& nn) {
    const auto b = multisink_bounds(hh, nn);
    const auto sol = solve_multisink(hh, nn);
    json singles = json::object();
    for (std::size_t k = 0; k < b.single_costs.size(); ++k) singles[nn.node_name(nn.sinks()[k])] = scalar_json(b.single_costs[k]);
    report["lower"] = scalar_json(b.lower);
    report["upper"] = scalar_json(b.upper);
    report["optimum"] = scalar_json(sol.cost);
    report["single_sink_optima"] = singles;
    report["sandwich_holds"] = b.lower <= sol.cost + tolerance<std::decay_t<decltype(b.lower)>>() &&
                               sol.cost <= b.upper + tolerance<std::decay_t<decltype(b.lower)>>();
  };
  if (rational) {
    fill(h.cast<Rational>(), net.cast<Rational>());
  } else {
    fill(h, net);
  }
  return report;
}

json cmd_subgradient(const Common& c, int iters, std::uint64_t seed) {
  const auto l = load(c.instance);
  const auto& net = need_network(l);
  const auto h = entropy_vector(*l.src);
  const double optimum = solve_multisink(h, net).cost;
  const auto bounds = multisink_bounds(h, net);
  SubgradientOptions opts;
  opts.iterations = iters;
  opts.reference = optimum;
  opts.upper_estimate = bounds.upper;
  const auto trace = subgradient_solve(h, net, opts);
  json report = {{"command", "subgradient"},
                 {"seed", seed},
                 {"iterations", trace.iterates.size()},
                 {"optimum", optimum},
                 {"lower", bounds.lower},
                 {"upper", bounds.upper},
                 {"best_dual", trace.best_dual},
                 {"best_gap", trace.iterates.empty() ? 0.0 : trace.iterates.back().best_gap},
                 {"step", {{"a", trace.step_a}, {"b", trace.step_b}}}};
  if (!trace.diagnostic.empty()) report["diagnostic"] = trace.diagnostic;
  std::string csv = "iteration,dual_value,best_dual,best_gap\n";
  for (const auto& it : trace.iterates)
    csv += std::to_string(it.iteration) + "," + fmt(it.dual_value) + "," + fmt(it.best_dual) + "," + fmt(it.best_gap) + "\n";
  if (c.out.empty()) {
    report["trace_csv"] = csv;
  } else {
    write_text(c.out, csv);
    report["trace_csv_file"] = c.out;
  }
  return report;
}

json cmd_fixture(const Common& c, const std::string& name, std::uint64_t seed) {
  write_text(c.out, emit_instance(builtin_instance(name, seed)).dump(2) + "\n");
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slepian-Wolf rate regions over capacitated networks"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_instance) {
    auto* opt = sub->add_option("instance", common.instance, "instance JSON file ('-' reads stdin)");
    if (needs_instance) opt->required();
    sub->add_option("--out", common.out, "write CSV or instance output to this file");
    sub->add_option("--tol", common.tol, "comparison tolerance in float mode")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", common.timing, "include wall-clock timing in the report");
  };

  auto* check = app.add_subcommand("check", "feasibility and containment verdicts with witnesses");
  add_common(check, true);

  int grid = 0;
  auto* vertices = app.add_subcommand("vertices", "distinct SW vertices; --grid sweeps markov3(p, q)");
  add_common(vertices, false);
  vertices->add_option("--grid", grid, "points per axis of the (p, q) grid");

  std::string mode = "single";
  bool rational = false;
  auto* solve = app.add_subcommand("solve", "minimum-cost rates and flows");
  add_common(solve, true);
  solve->add_option("--mode", mode, "single or multi")->check(CLI::IsMember({"single", "multi"}));
  solve->add_flag("--rational", rational, "solve in exact rational arithmetic");

  std::string from, to;
  int sweep_grid = 11;
  auto* sweep = app.add_subcommand("sweep", "cost along the segment between two SW vertices (CSV)");
  add_common(sweep, true);
  sweep->add_option("--from", from, "permutation for R_a, e.g. s1,s2")->required();
  sweep->add_option("--to", to, "permutation for R_b")->required();
  sweep->add_option("--grid", sweep_grid, "number of lambda values")->check(CLI::Range(2, 100000));

  bool bounds_rational = false;
  auto* bounds = app.add_subcommand("bounds", "single-sink bounds on the multi-sink optimum");
  add_common(bounds, true);
  bounds->add_flag("--rational", bounds_rational, "solve in exact rational arithmetic");

  int iters = 1000;
  std::uint64_t seed = 0;
  auto* subgradient = app.add_subcommand("subgradient", "dual decomposition baseline (trace CSV)");
  add_common(subgradient, true);
  subgradient->add_option("--iters", iters, "iterations")->check(CLI::PositiveNumber);
  subgradient->add_option("--seed", seed, "recorded in the report; the method itself is deterministic");

  std::string fixture_name;
  std::uint64_t fixture_seed = 1;
  auto* fixture = app.add_subcommand("fixture", "print a built-in instance");
  fixture->add_option("name", fixture_name, "instance name")->required()->check(CLI::IsMember(builtin_instance_names()));
  fixture->add_option("--seed", fixture_seed, "seed for generated instances");
  fixture->add_option("--out", common.out, "write the instance to this file");

  CLI11_PARSE(app, argc, argv);
  set_float_tolerance(common.tol);

  const auto start = std::chrono::steady_clock::now();
  try {
    json report;
    if (*check) report = cmd_check(common);
    if (*vertices) report = cmd_vertices(common, grid);
    if (*solve) report = cmd_solve(common, mode, rational);
    if (*sweep) report = cmd_sweep(common, from, to, sweep_grid);
    if (*bounds) report = cmd_bounds(common, bounds_rational);
    if (*subgradient) report = cmd_subgradient(common, iters, seed);
    if (*fixture) report = cmd_fixture(common, fixture_name, fixture_seed);
    if (!report.is_null()) {
      if (common.timing)
        report["timing_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      std::cout << report.dump(2) << "\n";
    }
    return kOk;
  } catch (const SchemaError& e) {
    std::cerr << json{{"error", "schema"}, {"message", e.what()}}.dump() << "\n";
    return kSchema;
  } catch (const InfeasibleError& e) {
    std::cerr << json{{"error", "infeasible"}, {"message", e.what()}}.dump() << "\n";
    return kInfeasible;
  } catch (const NumericalError& e) {
    std::cerr << json{{"error", "numerical"}, {"message", e.what()}}.dump() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "failed"}, {"message", e.what()}}.dump() << "\n";
    return kError;
  }
}
