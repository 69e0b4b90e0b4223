#include "swnet/lpopt.hpp"

#include <stdexcept>

#include "swnet/errors.hpp"

namespace swnet {

namespace {

// True when R(U) >= sigma(U) follows from the rows of a two-block split.
template <typename Scalar>
bool splits(const SetFunction<Scalar>& sigma, Subset u) {
  if (u.size() < 2) return false;
  const Subset::Mask m = u.mask();
  const Subset::Mask low = m & (~m + 1);
  // Fix the lowest element in the first block so each split is seen once.
  for (Subset::Mask v = (m - 1) & m; v != 0; v = (v - 1) & m) {
    if (!(v & low)) continue;
    const Subset a(v);
    if (approx_leq<Scalar>(sigma(u), sigma(a) + sigma(u - a))) return true;
  }
  return false;
}

template <typename Scalar>
std::vector<Subset> rate_row_subsets(const SetFunction<Scalar>& sigma, const PrimalOptions& options) {
  std::vector<Subset> out;
  for (Subset::Mask m = 0; m < sigma.ground().subset_count(); ++m) {
    const Subset u(m);
    if (options.prune && (u.empty() || splits(sigma, u))) continue;
    out.push_back(u);
  }
  return out;
}

void require_single_sink(int sinks) {
  if (sinks != 1) throw std::invalid_argument("the single-sink program needs exactly one sink");
}

}  // namespace

template <typename Scalar>
PrimalModel<Scalar> build_primal(const Network<Scalar>& net, const SetFunction<Scalar>& sigma,
                                 const PrimalOptions& options) {
  require_single_sink(static_cast<int>(net.sinks().size()));
  if (sigma.size() != net.source_count()) throw std::invalid_argument("sigma and network disagree on the source count");
  const NodeId t = net.sink();
  PrimalModel<Scalar> pm{LpModel<Scalar>(OptSense::minimize), {}};
  auto& model = pm.model;
  auto& idx = pm.index;
  for (int a = 0; a < net.arc_count(); ++a) {
    const auto& arc = net.arc(a);
    idx.flow_vars.push_back(model.add_variable("f(" + net.node_name(arc.tail) + "," + net.node_name(arc.head) + ")",
                                               Scalar(0), std::nullopt, arc.cost));
  }
  for (int i = 0; i < net.source_count(); ++i)
    idx.rate_vars.push_back(
        model.add_variable("R(" + net.node_name(net.source(i)) + ")", std::nullopt, std::nullopt, net.source_costs()[i]));

  for (int a = 0; a < net.arc_count(); ++a)
    idx.capacity_rows.push_back(
        model.add_row("cap" + std::to_string(a), {{idx.flow_vars[a], Scalar(1)}}, RowSense::less_equal, net.arc(a).capacity));

  idx.conservation_rows.assign(net.node_count(), -1);
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (v == t) continue;
    std::vector<std::pair<int, Scalar>> terms;
    for (int a = 0; a < net.arc_count(); ++a) {
      if (net.arc(a).head == v) terms.emplace_back(idx.flow_vars[a], Scalar(1));
      if (net.arc(a).tail == v) terms.emplace_back(idx.flow_vars[a], Scalar(-1));
    }
    if (auto s = net.source_index(v)) terms.emplace_back(idx.rate_vars[*s], Scalar(1));
    idx.conservation_rows[v] = model.add_row("flow(" + net.node_name(v) + ")", terms, RowSense::equal, Scalar(0));
  }

  for (Subset u : rate_row_subsets(sigma, options)) {
    std::vector<std::pair<int, Scalar>> terms;
    for (int e : u.elements()) terms.emplace_back(idx.rate_vars[e], Scalar(1));
    idx.rate_subsets.push_back(u);
    idx.rate_rows.push_back(
        model.add_row("rate" + sigma.ground().describe(u), terms, RowSense::greater_equal, sigma(u)));
  }
  if (options.cap_total_rate) {
    std::vector<std::pair<int, Scalar>> terms;
    for (int v : idx.rate_vars) terms.emplace_back(v, Scalar(1));
    idx.total_rate_row =
        model.add_row("total_rate", terms, RowSense::less_equal, sigma(Subset::full(sigma.size())));
  }
  return pm;
}

PrimalModel<double> build_primal(const Network<double>& net, const JointSource& src, const PrimalOptions& options) {
  return build_primal(net, sw_setfunction(src), options);
}

template <typename Scalar>
DualModel<Scalar> build_dual(const Network<Scalar>& net, const SetFunction<Scalar>& sigma,
                             const PrimalOptions& options) {
  require_single_sink(static_cast<int>(net.sinks().size()));
  if (options.cap_total_rate) throw UnsupportedError("the dual model does not cover the total-rate cap");
  const NodeId t = net.sink();
  DualModel<Scalar> dm{LpModel<Scalar>(OptSense::maximize), {}, {}, {}, {}};
  auto& model = dm.model;
  for (int a = 0; a < net.arc_count(); ++a)
    dm.x_vars.push_back(model.add_variable("x" + std::to_string(a), std::nullopt, Scalar(0), net.arc(a).capacity));
  for (Subset u : rate_row_subsets(sigma, options)) {
    dm.y_subsets.push_back(u);
    dm.y_vars.push_back(model.add_variable("y" + sigma.ground().describe(u), Scalar(0), std::nullopt, sigma(u)));
  }
  dm.z_vars.assign(net.node_count(), -1);
  for (NodeId v = 0; v < net.node_count(); ++v)
    if (v != t) dm.z_vars[v] = model.add_variable("z(" + net.node_name(v) + ")", std::nullopt, std::nullopt);

  for (int a = 0; a < net.arc_count(); ++a) {
    const auto& arc = net.arc(a);
    std::vector<std::pair<int, Scalar>> terms{{dm.x_vars[a], Scalar(1)}};
    if (arc.head != t) terms.emplace_back(dm.z_vars[arc.head], Scalar(1));
    if (arc.tail != t) terms.emplace_back(dm.z_vars[arc.tail], Scalar(-1));
    model.add_row("arc" + std::to_string(a), terms, RowSense::less_equal, arc.cost);
  }
  for (int i = 0; i < net.source_count(); ++i) {
    std::vector<std::pair<int, Scalar>> terms;
    for (std::size_t j = 0; j < dm.y_subsets.size(); ++j)
      if (dm.y_subsets[j].contains(i)) terms.emplace_back(dm.y_vars[j], Scalar(1));
    terms.emplace_back(dm.z_vars[net.source(i)], Scalar(1));
    model.add_row("source" + std::to_string(i), terms, RowSense::equal, net.source_costs()[i]);
  }
  return dm;
}

DualModel<double> build_dual(const Network<double>& net, const JointSource& src, const PrimalOptions& options) {
  return build_dual(net, sw_setfunction(src), options);
}

template <typename Scalar>
PrimalSolution<Scalar> solve_primal(const Network<Scalar>& net, const SetFunction<Scalar>& sigma,
                                    const PrimalOptions& options, const LpOptions& lp) {
  const auto pm = build_primal(net, sigma, options);
  const auto sol = lp_solve(pm.model, lp);
  PrimalSolution<Scalar> out;
  out.status = sol.status;
  if (sol.status != LpStatus::optimal) return out;
  const auto& idx = pm.index;
  out.objective = sol.objective;
  out.flow.resize(net.arc_count());
  out.x.resize(net.arc_count());
  for (int a = 0; a < net.arc_count(); ++a) {
    out.flow[a] = sol.primal[idx.flow_vars[a]];
    out.x[a] = sol.duals[idx.capacity_rows[a]];
  }
  out.rates.resize(net.source_count());
  for (int i = 0; i < net.source_count(); ++i) out.rates[i] = sol.primal[idx.rate_vars[i]];
  out.y_subsets = idx.rate_subsets;
  out.y.resize(static_cast<Eigen::Index>(idx.rate_rows.size()));
  for (std::size_t j = 0; j < idx.rate_rows.size(); ++j) out.y[j] = sol.duals[idx.rate_rows[j]];
  out.z = NodePotentials<Scalar>::Zero(net.node_count());
  for (NodeId v = 0; v < net.node_count(); ++v)
    if (idx.conservation_rows[v] >= 0) out.z[v] = sol.duals[idx.conservation_rows[v]];
  return out;
}

template <typename Scalar>
bool verify_convex_combination_optimality(const Network<Scalar>& net, const std::vector<RatePoint<Scalar>>& rates,
                                          const std::vector<FlowAssignment<Scalar>>& flows,
                                          const NodePotentials<Scalar>& z) {
  if (rates.size() != flows.size()) throw std::invalid_argument("one flow per rate point is required");
  const NodeId t = net.sink();
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (!flow_supports(net, flows[i], rates[i], t)) return false;
    if (!complementary_slackness(net, flows[i], z)) return false;
  }
  return true;
}

template <typename Scalar>
EqualPathCost<Scalar> equal_path_cost_potentials(const Network<Scalar>& net) {
  const NodeId t = net.sink();
  const int n = net.node_count();
  const Scalar eps = tolerance<Scalar>();
  // Shortest cost to t and the next hop, by Bellman-Ford (costs are nonnegative).
  std::vector<std::optional<Scalar>> dist(n);
  std::vector<int> next(n, -1);
  dist[t] = Scalar(0);
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    for (const auto& arc : net.arcs()) {
      if (!dist[arc.head]) continue;
      Scalar cand = arc.cost + *dist[arc.head];
      if (!dist[arc.tail] || cand < *dist[arc.tail] - eps) {
        dist[arc.tail] = cand;
        next[arc.tail] = arc.head;
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (NodeId v = 0; v < n; ++v)
    if (!dist[v]) throw std::invalid_argument("node " + net.node_name(v) + " has no path to the sink");

  auto shortest_path = [&](NodeId v) {
    std::vector<NodeId> path{v};
    while (v != t) {
      v = next[v];
      path.push_back(v);
    }
    return path;
  };

  EqualPathCost<Scalar> out;
  for (const auto& arc : net.arcs()) {
    const Scalar via = arc.cost + *dist[arc.head];
    if (approx_equal<Scalar>(via, *dist[arc.tail])) continue;
    PathWitness<Scalar> w;
    w.from = arc.tail;
    w.cheaper = shortest_path(arc.tail);
    w.cheaper_cost = *dist[arc.tail];
    w.costlier = shortest_path(arc.head);
    w.costlier.insert(w.costlier.begin(), arc.tail);
    w.costlier_cost = via;
    out.witness = std::move(w);
    return out;
  }
  NodePotentials<Scalar> z(n);
  for (NodeId v = 0; v < n; ++v) z[v] = -*dist[v];
  out.potentials = std::move(z);
  return out;
}

template <typename Scalar>
VertexCertification<Scalar> certify_vertex_optimal(const Network<Scalar>& net, const SetFunction<Scalar>& sigma,
                                                   const Permutation& pi) {
  const NodeId t = net.sink();
  const int n = net.source_count();
  VertexCertification<Scalar> out;
  out.rates = contrapolymatroid_vertex(sigma, pi);
  const auto mcf = min_cost_flow(net, out.rates, t);
  out.flow = mcf.flow;
  const auto& h = net.source_costs();
  out.primal_cost = mcf.cost + h.dot(out.rates);

  // h(s_i) - z(s_i) >= h(s_{i+1}) - z(s_{i+1}) and h(s_n) - z(s_n) >= 0, as
  // difference constraints alongside complementary slackness.
  std::vector<PotentialBound<Scalar>> order;
  for (int i = 0; i + 1 < n; ++i) {
    const int a = pi[i];
    const int b = pi[i + 1];
    order.push_back({net.source(b), net.source(a), h[a] - h[b]});
  }
  order.push_back({t, net.source(pi[n - 1]), h[pi[n - 1]]});
  const auto z = common_potentials(net, {out.flow}, t, order);
  if (!z) {
    out.reason = "no potentials satisfy complementary slackness with the reduced source costs ordered along the permutation";
    return out;
  }

  Certificate<Scalar> cert;
  cert.z = *z;
  const auto kbar = reduced_arc_costs(net, cert.z);
  cert.x.resize(net.arc_count());
  for (int a = 0; a < net.arc_count(); ++a) cert.x[a] = kbar[a] < Scalar(0) ? kbar[a] : Scalar(0);
  cert.y.resize(n);
  auto hbar = [&](int i) { return h[pi[i]] - cert.z[net.source(pi[i])]; };
  for (int i = 0; i < n; ++i) {
    cert.chain.push_back(pi.prefix(i + 1));
    cert.y[i] = i + 1 < n ? Scalar(hbar(i) - hbar(i + 1)) : hbar(i);
  }
  cert.dual_objective = net.capacities().dot(cert.x);
  for (int i = 0; i < n; ++i) cert.dual_objective += sigma(cert.chain[i]) * cert.y[i];
  // Equality follows from complementary slackness; a mismatch means the flow was
  // not optimal for the vertex.
  const Scalar slack = Scalar(1e-7) * (Scalar(1) + (out.primal_cost < Scalar(0) ? Scalar(-out.primal_cost) : out.primal_cost));
  const Scalar eps = is_exact_v<Scalar> ? Scalar(0) : slack;
  if (!approx_equal<Scalar>(cert.dual_objective, out.primal_cost, eps))
    throw NumericalError("certificate objective " + format_scalar(cert.dual_objective) +
                         " disagrees with the primal cost " + format_scalar(out.primal_cost));
  out.certificate = std::move(cert);
  return out;
}

std::vector<SweepRow> lambda_sweep(const Network<double>& net, const RatePoint<double>& ra,
                                   const RatePoint<double>& rb, int grid) {
  if (grid < 2) throw std::invalid_argument("a sweep needs at least two grid points");
  const NodeId t = net.sink();
  const auto fa = min_cost_flow(net, ra, t).flow;
  const auto fb = min_cost_flow(net, rb, t).flow;
  const auto& h = net.source_costs();
  std::vector<SweepRow> rows;
  for (int i = 0; i < grid; ++i) {
    SweepRow row;
    row.lambda = static_cast<double>(i) / (grid - 1);
    const double lam = row.lambda;
    const RatePoint<double> r = lam * ra + (1.0 - lam) * rb;
    const FlowAssignment<double> mixed = lam * fa + (1.0 - lam) * fb;
    row.cost_mixed = flow_cost(net, mixed);
    row.cost_exact = min_cost_flow(net, r, t).cost;
    row.total_mixed = row.cost_mixed + h.dot(r);
    row.total_exact = row.cost_exact + h.dot(r);
    rows.push_back(row);
  }
  return rows;
}

RelayFixture relay_fixture(RelayVariant variant, double p) {
  Network<double> net;
  const NodeId s1 = net.add_node("s1");
  const NodeId s2 = net.add_node("s2");
  const NodeId r = net.add_node("r");
  const NodeId t = net.add_node("t");
  const double direct = (1.0 + binary_entropy(p)) / 2.0;
  const double k1 = variant == RelayVariant::no_gap ? 2.0 : 1.0;
  net.add_arc(s1, t, direct, k1, "a1");
  net.add_arc(r, t, 2.0, 1.0, "a2");
  net.add_arc(s1, r, 0.5, 1.0, "a3");
  net.add_arc(s2, r, 1.0, 2.0, "a4");
  const bool imbalanced = variant == RelayVariant::imbalanced;
  net.add_source(s1, imbalanced ? 1.5 : 0.0);
  net.add_source(s2, 0.0);
  net.add_sink(t);
  return RelayFixture{std::move(net), bsc_pair(p)};
}

#define SWNET_INSTANTIATE(S)                                                                                      \
  template PrimalModel<S> build_primal(const Network<S>&, const SetFunction<S>&, const PrimalOptions&);          \
  template DualModel<S> build_dual(const Network<S>&, const SetFunction<S>&, const PrimalOptions&);              \
  template PrimalSolution<S> solve_primal(const Network<S>&, const SetFunction<S>&, const PrimalOptions&,        \
                                          const LpOptions&);                                                     \
  template bool verify_convex_combination_optimality(const Network<S>&, const std::vector<RatePoint<S>>&,        \
                                                     const std::vector<FlowAssignment<S>>&,                     \
                                                     const NodePotentials<S>&);                                  \
  template EqualPathCost<S> equal_path_cost_potentials(const Network<S>&);                                       \
  template VertexCertification<S> certify_vertex_optimal(const Network<S>&, const SetFunction<S>&,               \
                                                         const Permutation&);

SWNET_INSTANTIATE(double)
SWNET_INSTANTIATE(Rational)

}  // namespace swnet
