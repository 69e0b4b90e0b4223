#pragma once

// Capacitated networks: max-flow/min-cut, the min-cut capacity set function,
// min-cost flow with dual node potentials, and flow/rate support checks.

#include <optional>
#include <string>
#include <vector>

#include "swnet/subsetfn.hpp"

namespace swnet {

using NodeId = int;

template <typename Scalar>
struct Arc {
  NodeId tail = 0;
  NodeId head = 0;
  Scalar capacity{0};
  Scalar cost{0};
  std::string name;
};

// Simple digraph with nonnegative capacities and costs, sources carrying a
// per-bit cost h(s), and one or more sinks disjoint from the sources.
template <typename Scalar>
class Network {
 public:
  NodeId add_node(std::string name);
  // Rejects self loops, parallel arcs, negative capacity or cost.
  int add_arc(NodeId tail, NodeId head, Scalar capacity, Scalar cost, std::string name = {});
  void add_source(NodeId node, Scalar cost = Scalar(0));
  void add_sink(NodeId node);

  int node_count() const { return static_cast<int>(node_names_.size()); }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  int source_count() const { return static_cast<int>(sources_.size()); }

  const std::string& node_name(NodeId v) const { return node_names_.at(v); }
  std::optional<NodeId> find_node(const std::string& name) const;
  const Arc<Scalar>& arc(int a) const { return arcs_.at(a); }
  const std::vector<Arc<Scalar>>& arcs() const { return arcs_; }
  std::optional<int> find_arc(NodeId tail, NodeId head) const;

  const std::vector<NodeId>& sources() const { return sources_; }
  NodeId source(int i) const { return sources_.at(i); }
  const Vector<Scalar>& source_costs() const { return source_costs_; }
  void set_source_costs(Vector<Scalar> h);
  // Index of node v among the sources, if it is one.
  std::optional<int> source_index(NodeId v) const;
  const std::vector<NodeId>& sinks() const { return sinks_; }
  // The unique sink; throws if there are several.
  NodeId sink() const;

  // Ground set labelled by source node names.
  GroundSet ground() const;

  Vector<Scalar> capacities() const;
  Vector<Scalar> costs() const;
  void set_arc_costs(const Vector<Scalar>& k);
  void set_arc_capacities(const Vector<Scalar>& c);

  // Sum of all arc capacities plus one; dominates every finite cut.
  Scalar infinite_capacity() const;

  template <typename To>
  Network<To> cast() const {
    Network<To> out;
    for (const auto& n : node_names_) out.add_node(n);
    for (const auto& a : arcs_)
      out.add_arc(a.tail, a.head, scalar_cast<To>(a.capacity), scalar_cast<To>(a.cost), a.name);
    for (int i = 0; i < source_count(); ++i) out.add_source(sources_[i], scalar_cast<To>(source_costs_[i]));
    for (NodeId t : sinks_) out.add_sink(t);
    return out;
  }

 private:
  std::vector<std::string> node_names_;
  std::vector<Arc<Scalar>> arcs_;
  std::vector<NodeId> sources_;
  Vector<Scalar> source_costs_;
  std::vector<NodeId> sinks_;
};

// Per-arc flow values.
template <typename Scalar>
using FlowAssignment = Vector<Scalar>;

// Dual node potentials z(v), normalized so that z(sink) = 0.
template <typename Scalar>
using NodePotentials = Vector<Scalar>;

template <typename Scalar>
struct MaxFlowResult {
  Scalar value{0};
  // Source side of a minimum cut: contains the chosen sources, excludes t.
  std::vector<bool> cut;
  FlowAssignment<Scalar> flow;

  Scalar cut_capacity(const Network<Scalar>& net) const;
};

// Max flow from the sources in `sources` (a subset of the network's source set)
// to t, via a super source with dominating capacity. Dinic blocking flows.
template <typename Scalar>
MaxFlowResult<Scalar> max_flow_min_cut(const Network<Scalar>& net, Subset sources, NodeId t);

// rho_c(U) = min-cut capacity from U to t for every U.
template <typename Scalar>
SetFunction<Scalar> rho_c(const Network<Scalar>& net, NodeId t);

// Capacity, conservation away from sources and t, and net outflow R(s) at sources.
template <typename Scalar>
bool flow_supports(const Network<Scalar>& net, const FlowAssignment<Scalar>& f, const RatePoint<Scalar>& rates,
                   NodeId t);

template <typename Scalar>
Scalar flow_cost(const Network<Scalar>& net, const FlowAssignment<Scalar>& f) {
  return net.costs().dot(f);
}

// k(a) - (z(head) - z(tail)).
template <typename Scalar>
Vector<Scalar> reduced_arc_costs(const Network<Scalar>& net, const NodePotentials<Scalar>& z);

// Complementary slackness of f against z: negative reduced cost forces
// saturation, positive reduced cost forces zero flow.
template <typename Scalar>
bool complementary_slackness(const Network<Scalar>& net, const FlowAssignment<Scalar>& f,
                             const NodePotentials<Scalar>& z);

template <typename Scalar>
struct MinCostFlowResult {
  FlowAssignment<Scalar> flow;
  NodePotentials<Scalar> potentials;
  Scalar cost{0};
};

// Cheapest flow supporting the given rates to t (successive shortest paths with
// potentials). Throws InfeasibleError naming a violated cut when the rates
// exceed what the network carries.
template <typename Scalar>
MinCostFlowResult<Scalar> min_cost_flow(const Network<Scalar>& net, const RatePoint<Scalar>& rates, NodeId t);

// Potentials for which every given flow satisfies complementary slackness, if any
// exist (difference-constraint feasibility). Extra constraints
// z(to) - z(from) <= bound may be appended.
template <typename Scalar>
struct PotentialBound {
  NodeId from;
  NodeId to;
  Scalar bound;
};
template <typename Scalar>
std::optional<NodePotentials<Scalar>> common_potentials(const Network<Scalar>& net,
                                                        const std::vector<FlowAssignment<Scalar>>& flows, NodeId t,
                                                        const std::vector<PotentialBound<Scalar>>& extra = {});

// Lower-level engine also used for flows with a super source: sends `amount`
// from `source` to `sink` at minimum cost over an arbitrary arc list (costs may
// be negative on arcs leaving `source` as long as no negative cycle exists).
template <typename Scalar>
struct FlowProblemArc {
  NodeId tail;
  NodeId head;
  Scalar capacity;
  Scalar cost;
};
template <typename Scalar>
struct SspResult {
  Vector<Scalar> flow;
  Scalar sent{0};
  Scalar cost{0};
  // Nodes reachable from `source` in the final residual graph.
  std::vector<bool> reachable;
};
template <typename Scalar>
SspResult<Scalar> successive_shortest_paths(int node_count, const std::vector<FlowProblemArc<Scalar>>& arcs,
                                            NodeId source, NodeId sink, const Scalar& amount);

}  // namespace swnet
