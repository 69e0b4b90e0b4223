#include "swnet/multisink.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "swnet/errors.hpp"

namespace swnet {

template <typename Scalar>
AugmentedNetwork<Scalar> augment(const Network<Scalar>& net, const SetFunction<Scalar>& entropies) {
  if (entropies.size() != net.source_count())
    throw std::invalid_argument("entropy table and network disagree on the source count");
  AugmentedNetwork<Scalar> aug;
  aug.net = net.template cast<Scalar>();
  aug.base_arc_count = net.arc_count();
  aug.super_source = aug.net.add_node("s*");
  for (int i = 0; i < net.source_count(); ++i)
    aug.super_arcs.push_back(aug.net.add_arc(aug.super_source, net.source(i), entropies(Subset::singleton(i)),
                                             Scalar(0), "s*->" + net.node_name(net.source(i))));
  aug.total_entropy = entropies(Subset::full(net.source_count()));
  return aug;
}

namespace {

template <typename Scalar>
std::vector<SetFunction<Scalar>> per_sink_rho(const Network<Scalar>& net) {
  std::vector<SetFunction<Scalar>> out;
  for (NodeId t : net.sinks()) out.push_back(rho_c(net, t));
  return out;
}

template <typename Scalar>
MultiSinkVerdict<Scalar> scan(const SetFunction<Scalar>& demand, const Network<Scalar>& net, const char* what) {
  if (net.sinks().empty()) throw std::invalid_argument("the network has no sink");
  const auto rhos = per_sink_rho(net);
  MultiSinkVerdict<Scalar> v;
  for (Subset::Mask m = 0; m < demand.ground().subset_count(); ++m) {
    const Subset u(m);
    for (std::size_t k = 0; k < rhos.size(); ++k) {
      if (approx_leq<Scalar>(demand(u), rhos[k](u))) continue;
      v.holds = false;
      v.witness = SinkWitness{net.sinks()[k], u};
      v.diagnostic = std::string(what) + " exceeds the min-cut capacity from " + demand.ground().describe(u) +
                     " to sink " + net.node_name(net.sinks()[k]);
      return v;
    }
  }
  return v;
}

template <typename Scalar>
struct MultiSinkLp {
  LpModel<Scalar> model;
  std::vector<std::vector<int>> f;  // [sink][augmented arc]
  std::vector<int> p;               // [augmented arc]
  std::vector<std::vector<int>> r;  // [sink][source]
};

template <typename Scalar>
MultiSinkLp<Scalar> build_multisink_lp(const AugmentedNetwork<Scalar>& aug, const SetFunction<Scalar>& sigma,
                                       const std::vector<NodeId>& sinks) {
  const auto& net = aug.net;
  const int arcs = net.arc_count();
  const int n = net.source_count();
  MultiSinkLp<Scalar> lp{LpModel<Scalar>(OptSense::minimize), {}, {}, {}};
  auto& model = lp.model;
  for (int a = 0; a < arcs; ++a)
    lp.p.push_back(model.add_variable("p" + std::to_string(a), Scalar(0), net.arc(a).capacity,
                                      a < aug.base_arc_count ? net.arc(a).cost : Scalar(0)));
  for (std::size_t k = 0; k < sinks.size(); ++k) {
    const NodeId t = sinks[k];
    const std::string tag = "^" + net.node_name(t);
    std::vector<int> f;
    for (int a = 0; a < arcs; ++a) f.push_back(model.add_variable("f" + std::to_string(a) + tag, Scalar(0), std::nullopt));
    std::vector<int> r;
    for (int i = 0; i < n; ++i)
      r.push_back(model.add_variable("R" + std::to_string(i) + tag, std::nullopt, std::nullopt));
    for (int a = 0; a < arcs; ++a)
      model.add_row("share" + std::to_string(a) + tag, {{f[a], Scalar(1)}, {lp.p[a], Scalar(-1)}}, RowSense::less_equal,
                    Scalar(0));
    for (NodeId v = 0; v < net.node_count(); ++v) {
      if (v == t) continue;
      std::vector<std::pair<int, Scalar>> terms;
      for (int a = 0; a < arcs; ++a) {
        if (net.arc(a).head == v) terms.emplace_back(f[a], Scalar(1));
        if (net.arc(a).tail == v) terms.emplace_back(f[a], Scalar(-1));
      }
      const Scalar delta = v == aug.super_source ? Scalar(-aug.total_entropy) : Scalar(0);
      model.add_row("flow(" + net.node_name(v) + ")" + tag, terms, RowSense::equal, delta);
    }
    for (int i = 0; i < n; ++i)
      model.add_row("feed" + std::to_string(i) + tag, {{f[aug.super_arcs[i]], Scalar(1)}, {r[i], Scalar(-1)}},
                    RowSense::greater_equal, Scalar(0));
    for (Subset::Mask m = 1; m < sigma.ground().subset_count(); ++m) {
      std::vector<std::pair<int, Scalar>> terms;
      for (int e : Subset(m).elements()) terms.emplace_back(r[e], Scalar(1));
      model.add_row("rate" + sigma.ground().describe(Subset(m)) + tag, terms, RowSense::greater_equal, sigma(Subset(m)));
    }
    lp.f.push_back(std::move(f));
    lp.r.push_back(std::move(r));
  }
  return lp;
}

template <typename Scalar>
MultiSinkSolution<Scalar> solve_for_sinks(const SetFunction<Scalar>& entropies, const Network<Scalar>& net,
                                          const std::vector<NodeId>& sinks, const LpOptions& options) {
  const auto sigma = sw_setfunction(entropies);
  MultiSinkSolution<Scalar> out;
  out.augmented = augment(net, entropies);
  out.sinks = sinks;
  const auto lp = build_multisink_lp(out.augmented, sigma, sinks);
  const auto sol = lp_solve(lp.model, options);
  if (sol.status != LpStatus::optimal)
    throw InfeasibleError(std::string("multi-sink program is ") + to_string(sol.status));
  const int arcs = out.augmented.net.arc_count();
  const int n = net.source_count();
  out.physical.resize(arcs);
  for (int a = 0; a < arcs; ++a) out.physical[a] = sol.primal[lp.p[a]];
  out.max_rates = RatePoint<Scalar>::Zero(n);
  for (std::size_t k = 0; k < sinks.size(); ++k) {
    FlowAssignment<Scalar> f(arcs);
    for (int a = 0; a < arcs; ++a) f[a] = sol.primal[lp.f[k][a]];
    RatePoint<Scalar> r(n);
    for (int i = 0; i < n; ++i) {
      r[i] = sol.primal[lp.r[k][i]];
      if (k == 0 || r[i] > out.max_rates[i]) out.max_rates[i] = r[i];
    }
    out.virtual_flows.push_back(std::move(f));
    out.rates.push_back(std::move(r));
  }
  out.cost = sol.objective;
  return out;
}

}  // namespace

template <typename Scalar>
MultiSinkVerdict<Scalar> check_multisink_feasible(const SetFunction<Scalar>& entropies, const Network<Scalar>& net) {
  return scan(sw_setfunction(entropies), net, "the conditional entropy");
}

template <typename Scalar>
MultiSinkVerdict<Scalar> check_multisink_vertices_feasible(const SetFunction<Scalar>& entropies,
                                                           const Network<Scalar>& net) {
  auto v = scan(entropies, net, "the joint entropy");
  if (!v.holds) {
    // The vertex ordering S \ U before U puts R(U) = H(X_U).
    const int n = entropies.size();
    std::vector<int> order = (complement(v.witness->subset, n)).elements();
    for (int e : v.witness->subset.elements()) order.push_back(e);
    v.vertex = contrapolymatroid_vertex(sw_setfunction(entropies), Permutation(order));
  }
  return v;
}

template <typename Scalar>
MultiSinkSolution<Scalar> solve_multisink(const SetFunction<Scalar>& entropies, const Network<Scalar>& net,
                                          const LpOptions& lp) {
  const auto verdict = check_multisink_feasible(entropies, net);
  if (!verdict.holds) throw InfeasibleError(verdict.diagnostic);
  return solve_for_sinks(entropies, net, net.sinks(), lp);
}

template <typename Scalar>
MultiSinkBounds<Scalar> multisink_bounds(const SetFunction<Scalar>& entropies, const Network<Scalar>& net,
                                         const LpOptions& lp) {
  const auto verdict = check_multisink_feasible(entropies, net);
  if (!verdict.holds) throw InfeasibleError(verdict.diagnostic);
  MultiSinkBounds<Scalar> out;
  FlowAssignment<Scalar> envelope;
  for (NodeId t : net.sinks()) {
    auto single = solve_for_sinks(entropies, net, {t}, lp);
    if (out.single_costs.empty() || single.cost > out.lower) out.lower = single.cost;
    const auto& f = single.virtual_flows.front();
    if (out.single_flows.empty()) {
      envelope = f;
    } else {
      for (int a = 0; a < f.size(); ++a)
        if (f[a] > envelope[a]) envelope[a] = f[a];
    }
    out.single_costs.push_back(single.cost);
    out.single_flows.push_back(f);
  }
  out.upper = Scalar(0);
  for (int a = 0; a < net.arc_count(); ++a) out.upper += net.arc(a).cost * envelope[a];
  return out;
}

namespace {

struct Lagrangian {
  double value = 0.0;
  std::vector<Vector<double>> flows;  // per sink, augmented arcs
  std::vector<Vector<double>> rates;  // per sink
  Vector<double> p;
};

Lagrangian evaluate(const AugmentedNetwork<double>& aug, const SetFunction<double>& sigma,
                    const std::vector<NodeId>& sinks, const std::vector<Vector<double>>& lambda,
                    const std::vector<Vector<double>>& mu) {
  const auto& net = aug.net;
  const int arcs = net.arc_count();
  Lagrangian out;
  out.p = Vector<double>::Zero(arcs);
  for (int a = 0; a < arcs; ++a) {
    double reduced = a < aug.base_arc_count ? net.arc(a).cost : 0.0;
    for (const auto& l : lambda) reduced -= l[a];
    if (reduced < 0.0) {
      out.p[a] = net.arc(a).capacity;
      out.value += reduced * net.arc(a).capacity;
    }
  }
  for (std::size_t k = 0; k < sinks.size(); ++k) {
    std::vector<FlowProblemArc<double>> problem;
    for (int a = 0; a < arcs; ++a) problem.push_back({net.arc(a).tail, net.arc(a).head, net.arc(a).capacity, lambda[k][a]});
    for (std::size_t i = 0; i < aug.super_arcs.size(); ++i) problem[aug.super_arcs[i]].cost -= mu[k][i];
    auto ssp = successive_shortest_paths<double>(net.node_count(), problem, aug.super_source, sinks[k], aug.total_entropy);
    if (ssp.sent < aug.total_entropy - 1e-9)
      throw InfeasibleError("sink " + net.node_name(sinks[k]) + " cannot receive the joint entropy");
    auto greedy = greedy_linear_opt(sigma, mu[k], OptSense::minimize, BaseSide::sigma);
    out.value += ssp.cost + greedy.objective;
    out.flows.push_back(std::move(ssp.flow));
    out.rates.push_back(std::move(greedy.point));
  }
  return out;
}

}  // namespace

SubgradientTrace subgradient_solve(const SetFunction<double>& entropies, const Network<double>& net,
                                   const SubgradientOptions& options) {
  if (options.iterations < 1) throw std::invalid_argument("at least one iteration is required");
  const auto verdict = check_multisink_feasible(entropies, net);
  if (!verdict.holds) throw InfeasibleError(verdict.diagnostic);
  const auto aug = augment(net, entropies);
  const auto sigma = sw_setfunction(entropies);
  const auto& sinks = net.sinks();
  const int arcs = aug.net.arc_count();
  const int n = net.source_count();

  std::vector<Vector<double>> lambda(sinks.size(), Vector<double>::Zero(arcs));
  std::vector<Vector<double>> mu(sinks.size(), Vector<double>::Zero(n));

  const double upper = options.upper_estimate ? *options.upper_estimate : to_double(multisink_bounds(entropies, net).upper);
  SubgradientTrace trace;
  trace.reference = options.reference ? *options.reference : upper;
  trace.step_b = options.step.b;

  auto gap = [&](double best) {
    const double denom = std::abs(trace.reference) > 0.0 ? std::abs(trace.reference) : 1.0;
    return (trace.reference - best) / denom;
  };

  double best = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.iterations; ++it) {
    const auto lag = evaluate(aug, sigma, sinks, lambda, mu);
    if (!std::isfinite(lag.value)) {
      trace.diagnostic = "non-finite Lagrangian value at iteration " + std::to_string(it);
      break;
    }
    best = std::max(best, lag.value);
    trace.iterates.push_back({it, lag.value, best, gap(best)});

    // Subgradient of the dual function at (lambda, mu).
    std::vector<Vector<double>> g_lambda;
    std::vector<Vector<double>> g_mu;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < sinks.size(); ++k) {
      Vector<double> gl = lag.flows[k] - lag.p;
      Vector<double> gm(n);
      for (int i = 0; i < n; ++i) gm[i] = lag.rates[k][i] - lag.flows[k][aug.super_arcs[i]];
      // Projection keeps only directions that can move.
      for (int a = 0; a < arcs; ++a)
        if (lambda[k][a] <= 0.0 && gl[a] < 0.0) gl[a] = 0.0;
      for (int i = 0; i < n; ++i)
        if (mu[k][i] <= 0.0 && gm[i] < 0.0) gm[i] = 0.0;
      norm2 += gl.squaredNorm() + gm.squaredNorm();
      g_lambda.push_back(std::move(gl));
      g_mu.push_back(std::move(gm));
    }
    if (norm2 <= 1e-18) break;  // the multipliers are optimal
    if (it == 0) {
      trace.step_a = options.step.a ? *options.step.a
                                    : options.step.scale * options.step.b * std::max(upper - lag.value, 1e-9) / norm2;
    }
    const double step = trace.step_a / (trace.step_b + it);
    double largest = 0.0;
    for (std::size_t k = 0; k < sinks.size(); ++k) {
      lambda[k] = (lambda[k] + step * g_lambda[k]).cwiseMax(0.0);
      mu[k] = (mu[k] + step * g_mu[k]).cwiseMax(0.0);
      largest = std::max({largest, lambda[k].maxCoeff(), n > 0 ? mu[k].maxCoeff() : 0.0});
    }
    if (!std::isfinite(largest) || largest > 1e12) {
      trace.diagnostic = "multipliers diverged at iteration " + std::to_string(it) + "; the step rule is too aggressive";
      break;
    }
  }
  trace.best_dual = best;
  return trace;
}

Network<double> random_geometric_network(const GeometricOptions& options) {
  if (options.nodes < 2 || options.sources + options.sinks > options.nodes)
    throw std::invalid_argument("not enough nodes for the requested sources and sinks");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  const int n = options.nodes;
  std::vector<double> x(n), y(n);
  for (int v = 0; v < n; ++v) {
    x[v] = coord(rng);
    y[v] = coord(rng);
  }
  struct Link {
    double length;
    int u, v;
  };
  std::vector<Link> links;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) links.push_back({std::hypot(x[u] - x[v], y[u] - y[v]), u, v});
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.length < b.length; });

  // Union-find so that short links which join components are always kept.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<Link> chosen;
  std::vector<bool> used(links.size(), false);
  for (std::size_t i = 0; i < links.size() && static_cast<int>(chosen.size()) * 2 < options.arc_target; ++i) {
    chosen.push_back(links[i]);
    used[i] = true;
    parent[find(links[i].u)] = find(links[i].v);
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (used[i] || find(links[i].u) == find(links[i].v)) continue;
    chosen.push_back(links[i]);
    parent[find(links[i].u)] = find(links[i].v);
  }
  std::vector<double> lengths;
  for (const auto& l : chosen) lengths.push_back(l.length);
  std::nth_element(lengths.begin(), lengths.begin() + lengths.size() / 2, lengths.end());
  const double median = lengths[lengths.size() / 2];

  Network<double> net;
  for (int v = 0; v < n; ++v) net.add_node("v" + std::to_string(v));
  for (const auto& l : chosen) {
    const double cap = l.length < median ? 40.0 : 20.0;
    net.add_arc(l.u, l.v, cap, 1.0);
    net.add_arc(l.v, l.u, cap, 1.0);
  }
  std::vector<int> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  for (int i = 0; i < options.sources; ++i) net.add_source(nodes[i]);
  for (int i = 0; i < options.sinks; ++i) net.add_sink(nodes[options.sources + i]);
  return net;
}

#define SWNET_INSTANTIATE(S)                                                                                       \
  template AugmentedNetwork<S> augment(const Network<S>&, const SetFunction<S>&);                                 \
  template MultiSinkVerdict<S> check_multisink_feasible(const SetFunction<S>&, const Network<S>&);                \
  template MultiSinkVerdict<S> check_multisink_vertices_feasible(const SetFunction<S>&, const Network<S>&);       \
  template MultiSinkSolution<S> solve_multisink(const SetFunction<S>&, const Network<S>&, const LpOptions&);      \
  template MultiSinkBounds<S> multisink_bounds(const SetFunction<S>&, const Network<S>&, const LpOptions&);

SWNET_INSTANTIATE(double)
SWNET_INSTANTIATE(Rational)

}  // namespace swnet
