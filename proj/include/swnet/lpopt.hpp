#pragma once

// The joint rate/flow linear program for a single sink, its dual, and the
// potential-based optimality certificates for vertex rates.

#include <optional>
#include <string>
#include <vector>

#include "swnet/lp.hpp"
#include "swnet/netflow.hpp"
#include "swnet/sourcemodel.hpp"
#include "swnet/subsetfn.hpp"

namespace swnet {

struct PrimalOptions {
  // Drop the empty-set row and every rate row implied by a split
  // sigma(U) = sigma(U1) + sigma(U2).
  bool prune = false;
  // Add R(S) <= sigma(S), restricting the rates to the base polyhedron.
  bool cap_total_rate = false;
};

// Row and column bookkeeping shared by the primal and dual models.
struct PrimalIndex {
  std::vector<int> flow_vars;          // per arc
  std::vector<int> rate_vars;          // per source
  std::vector<int> capacity_rows;      // per arc
  std::vector<int> conservation_rows;  // per node, -1 for the sink
  std::vector<Subset> rate_subsets;    // subsets with a rate row
  std::vector<int> rate_rows;          // parallel to rate_subsets
  int total_rate_row = -1;
};

template <typename Scalar>
struct PrimalModel {
  LpModel<Scalar> model;
  PrimalIndex index;
};

// minimize k^T f + h^T R subject to capacities, conservation away from the
// sink (R(s) injected at source s) and R(U) >= sigma(U). Free R.
template <typename Scalar>
PrimalModel<Scalar> build_primal(const Network<Scalar>& net, const SetFunction<Scalar>& sigma,
                                 const PrimalOptions& options = {});
PrimalModel<double> build_primal(const Network<double>& net, const JointSource& src, const PrimalOptions& options = {});

template <typename Scalar>
struct DualModel {
  LpModel<Scalar> model;
  std::vector<int> x_vars;          // per arc, <= 0
  std::vector<Subset> y_subsets;
  std::vector<int> y_vars;          // parallel to y_subsets, >= 0
  std::vector<int> z_vars;          // per node, -1 for the sink (z(t) = 0)
};

// maximize c^T x + sigma^T y subject to x(a) + z(head) - z(tail) <= k(a) and
// sum_{U∋s} y_U + z(s) = h(s).
template <typename Scalar>
DualModel<Scalar> build_dual(const Network<Scalar>& net, const SetFunction<Scalar>& sigma,
                             const PrimalOptions& options = {});
DualModel<double> build_dual(const Network<double>& net, const JointSource& src, const PrimalOptions& options = {});

template <typename Scalar>
struct PrimalSolution {
  LpStatus status = LpStatus::infeasible;
  FlowAssignment<Scalar> flow;
  RatePoint<Scalar> rates;
  Scalar objective{0};
  // Solver duals in the dual model's sign convention.
  Vector<Scalar> x;
  std::vector<Subset> y_subsets;
  Vector<Scalar> y;
  NodePotentials<Scalar> z;  // z(t) = 0
};

template <typename Scalar>
PrimalSolution<Scalar> solve_primal(const Network<Scalar>& net, const SetFunction<Scalar>& sigma,
                                    const PrimalOptions& options = {}, const LpOptions& lp = {});

// True when every flow satisfies complementary slackness against z; then every
// convex mix of the flows is a min-cost flow for the mixed rates.
template <typename Scalar>
bool verify_convex_combination_optimality(const Network<Scalar>& net, const std::vector<RatePoint<Scalar>>& rates,
                                          const std::vector<FlowAssignment<Scalar>>& flows,
                                          const NodePotentials<Scalar>& z);

template <typename Scalar>
struct PathWitness {
  NodeId from = 0;
  std::vector<NodeId> cheaper;
  std::vector<NodeId> costlier;
  Scalar cheaper_cost{0};
  Scalar costlier_cost{0};
};

template <typename Scalar>
struct EqualPathCost {
  std::optional<NodePotentials<Scalar>> potentials;
  std::optional<PathWitness<Scalar>> witness;
};

// z(v) = -(cost of every v-t path) when those costs agree for each v; otherwise a
// pair of v-t walks with different costs. Throws std::invalid_argument if some
// node cannot reach the sink.
template <typename Scalar>
EqualPathCost<Scalar> equal_path_cost_potentials(const Network<Scalar>& net);

template <typename Scalar>
struct Certificate {
  NodePotentials<Scalar> z;
  Vector<Scalar> x;
  // Chain prefixes U_1 ⊂ ... ⊂ U_n of the permutation with their duals.
  std::vector<Subset> chain;
  Vector<Scalar> y;
  Scalar dual_objective{0};
};

template <typename Scalar>
struct VertexCertification {
  RatePoint<Scalar> rates;
  FlowAssignment<Scalar> flow;
  Scalar primal_cost{0};
  // Empty means inconclusive, not suboptimal.
  std::optional<Certificate<Scalar>> certificate;
  std::string reason;
};

// Min-cost flow for the vertex R_pi, then a search for potentials with
// complementary slackness and h(s) - z(s) nonincreasing along pi and
// nonnegative. Throws InfeasibleError if R_pi cannot be routed.
template <typename Scalar>
VertexCertification<Scalar> certify_vertex_optimal(const Network<Scalar>& net, const SetFunction<Scalar>& sigma,
                                                   const Permutation& pi);

struct SweepRow {
  double lambda = 0.0;
  double cost_mixed = 0.0;
  double cost_exact = 0.0;
  double total_mixed = 0.0;
  double total_exact = 0.0;
};

// R_lambda = lambda R_a + (1 - lambda) R_b on `grid` evenly spaced lambdas in [0, 1].
std::vector<SweepRow> lambda_sweep(const Network<double>& net, const RatePoint<double>& ra,
                                   const RatePoint<double>& rb, int grid);

// Two sources feeding a sink directly (s1) and through a shared relay (s1, s2).
// Arcs a1: s1->t, a2: r->t, a3: s1->r, a4: s2->r with capacities
// (1 + H(p)) / 2, 2, 1/2, 1. `gap` routes s1 more cheaply on a1, `no_gap`
// prices both s1 routes at 2, `imbalanced` adds source costs h = (1.5, 0) to
// the gap costs.
enum class RelayVariant { gap, no_gap, imbalanced };

struct RelayFixture {
  Network<double> net;
  JointSource source;
};

RelayFixture relay_fixture(RelayVariant variant, double p = 0.1);

}  // namespace swnet
