#pragma once

// Several sinks each decoding all sources: per-sink virtual flows from a super
// source, a shared physical flow, the resulting linear program, bounds from
// single-sink problems, and a subgradient baseline on a partial Lagrangian.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swnet/lp.hpp"
#include "swnet/netflow.hpp"
#include "swnet/sourcemodel.hpp"

namespace swnet {

// Base network plus a super source s* with arcs (s*, s) of capacity H(X_s) and
// cost zero. Base arcs keep their indices; super arcs follow.
template <typename Scalar>
struct AugmentedNetwork {
  Network<Scalar> net;
  NodeId super_source = -1;
  std::vector<int> super_arcs;  // per source
  int base_arc_count = 0;
  Scalar total_entropy{0};      // H(X_S), pushed from s* to every sink
};

// `entropies` is H(X_U) for every U.
template <typename Scalar>
AugmentedNetwork<Scalar> augment(const Network<Scalar>& net, const SetFunction<Scalar>& entropies);

struct SinkWitness {
  NodeId sink = -1;
  Subset subset;
};

template <typename Scalar>
struct MultiSinkVerdict {
  bool holds = true;
  std::optional<SinkWitness> witness;
  // Vertex-feasibility failures also name the vertex that cannot be routed.
  std::optional<RatePoint<Scalar>> vertex;
  std::string diagnostic;
};

// sigma_SW(U) <= min_t rho_c^(t)(U) for all U.
template <typename Scalar>
MultiSinkVerdict<Scalar> check_multisink_feasible(const SetFunction<Scalar>& entropies, const Network<Scalar>& net);
// H(X_U) <= min_t rho_c^(t)(U) for all U.
template <typename Scalar>
MultiSinkVerdict<Scalar> check_multisink_vertices_feasible(const SetFunction<Scalar>& entropies,
                                                           const Network<Scalar>& net);

template <typename Scalar>
struct MultiSinkSolution {
  AugmentedNetwork<Scalar> augmented;
  std::vector<NodeId> sinks;
  // Indexed like the augmented arcs.
  std::vector<FlowAssignment<Scalar>> virtual_flows;
  FlowAssignment<Scalar> physical;
  std::vector<RatePoint<Scalar>> rates;
  // Componentwise max of the per-sink rates.
  RatePoint<Scalar> max_rates;
  Scalar cost{0};
};

// minimize sum_{a in A} k(a) p(a) over f^(t) <= p <= c*, per-sink conservation
// of H(X_S) from s* to t, f^(t)(s*, s) >= R^(t)(s), R^(t)(U) >= sigma_SW(U).
// Throws InfeasibleError naming a violated (t, U).
template <typename Scalar>
MultiSinkSolution<Scalar> solve_multisink(const SetFunction<Scalar>& entropies, const Network<Scalar>& net,
                                          const LpOptions& lp = {});

template <typename Scalar>
struct MultiSinkBounds {
  Scalar lower{0};
  Scalar upper{0};
  // Single-sink optima, one per sink.
  std::vector<Scalar> single_costs;
  std::vector<FlowAssignment<Scalar>> single_flows;
};

// lower = max_t single-sink optimum, upper = cost of the arc-wise max of the
// single-sink optimal flows.
template <typename Scalar>
MultiSinkBounds<Scalar> multisink_bounds(const SetFunction<Scalar>& entropies, const Network<Scalar>& net,
                                         const LpOptions& lp = {});

// Step size a / (b + k) at iteration k (0-based). With a unset, a is chosen so
// the first step is `scale` times the Polyak step toward `upper_estimate`.
struct StepRule {
  std::optional<double> a;
  double b = 10.0;
  double scale = 0.5;
};

struct SubgradientOptions {
  int iterations = 1000;
  StepRule step;
  // Feasible objective used to scale the first step; the single-sink upper bound
  // by default.
  std::optional<double> upper_estimate;
  // Optimal value to report gaps against; the upper estimate otherwise.
  std::optional<double> reference;
  std::uint64_t seed = 0;
};

struct SubgradientIterate {
  int iteration = 0;
  double dual_value = 0.0;
  double best_dual = 0.0;
  // (reference - best_dual) / |reference|.
  double best_gap = 0.0;
};

struct SubgradientTrace {
  std::vector<SubgradientIterate> iterates;
  double best_dual = 0.0;
  double reference = 0.0;
  double step_a = 0.0;
  double step_b = 0.0;
  // Set when the run stopped early on non-finite values or exploding multipliers.
  std::string diagnostic;
};

// Relaxes f^(t) <= p and f^(t)(s*, s) >= R^(t)(s). Each Lagrangian evaluation is
// one min-cost flow per sink plus a greedy minimization over the SW base
// polyhedron; every dual value is a lower bound on the optimum.
SubgradientTrace subgradient_solve(const SetFunction<double>& entropies, const Network<double>& net,
                                   const SubgradientOptions& options = {});

// Nodes uniform in the unit square; the closest pairs are joined by arcs in both
// directions until `arc_target` arcs exist (then the graph is patched so every
// node reaches every sink). Capacity 40 for the shorter half of the links and 20
// otherwise, unit costs. Sources and sinks are distinct random nodes.
struct GeometricOptions {
  int nodes = 50;
  int arc_target = 286;
  int sources = 10;
  int sinks = 3;
  std::uint64_t seed = 1;
};
Network<double> random_geometric_network(const GeometricOptions& options = {});

}  // namespace swnet
