#include "swnet/netflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

#include "swnet/errors.hpp"

namespace swnet {

template <typename Scalar>
NodeId Network<Scalar>::add_node(std::string name) {
  if (find_node(name)) throw std::invalid_argument("duplicate node name: " + name);
  node_names_.push_back(std::move(name));
  return node_count() - 1;
}

template <typename Scalar>
std::optional<NodeId> Network<Scalar>::find_node(const std::string& name) const {
  auto it = std::find(node_names_.begin(), node_names_.end(), name);
  if (it == node_names_.end()) return std::nullopt;
  return static_cast<NodeId>(it - node_names_.begin());
}

template <typename Scalar>
int Network<Scalar>::add_arc(NodeId tail, NodeId head, Scalar capacity, Scalar cost, std::string name) {
  if (tail < 0 || tail >= node_count() || head < 0 || head >= node_count())
    throw std::invalid_argument("arc endpoint does not exist");
  if (tail == head) throw std::invalid_argument("self loops are not allowed");
  if (find_arc(tail, head)) throw std::invalid_argument("parallel arcs are not allowed");
  if (capacity < Scalar(0)) throw std::invalid_argument("arc capacity must be nonnegative");
  if (cost < Scalar(0)) throw std::invalid_argument("arc cost must be nonnegative");
  if (name.empty()) name = "a" + std::to_string(arc_count() + 1);
  arcs_.push_back(Arc<Scalar>{tail, head, std::move(capacity), std::move(cost), std::move(name)});
  return arc_count() - 1;
}

template <typename Scalar>
std::optional<int> Network<Scalar>::find_arc(NodeId tail, NodeId head) const {
  for (int a = 0; a < arc_count(); ++a)
    if (arcs_[a].tail == tail && arcs_[a].head == head) return a;
  return std::nullopt;
}

template <typename Scalar>
void Network<Scalar>::add_source(NodeId node, Scalar cost) {
  if (node < 0 || node >= node_count()) throw std::invalid_argument("source node does not exist");
  if (source_index(node)) throw std::invalid_argument("duplicate source");
  if (std::find(sinks_.begin(), sinks_.end(), node) != sinks_.end())
    throw std::invalid_argument("a sink cannot be a source");
  if (source_count() >= kMaxGroundSize) throw std::invalid_argument("at most 20 sources are supported");
  sources_.push_back(node);
  source_costs_.conservativeResize(source_count());
  source_costs_[source_count() - 1] = std::move(cost);
}

template <typename Scalar>
void Network<Scalar>::set_source_costs(Vector<Scalar> h) {
  if (h.size() != source_count()) throw std::invalid_argument("one source cost per source is required");
  source_costs_ = std::move(h);
}

template <typename Scalar>
void Network<Scalar>::add_sink(NodeId node) {
  if (node < 0 || node >= node_count()) throw std::invalid_argument("sink node does not exist");
  if (source_index(node)) throw std::invalid_argument("a source cannot be a sink");
  if (std::find(sinks_.begin(), sinks_.end(), node) != sinks_.end()) throw std::invalid_argument("duplicate sink");
  sinks_.push_back(node);
}

template <typename Scalar>
std::optional<int> Network<Scalar>::source_index(NodeId v) const {
  auto it = std::find(sources_.begin(), sources_.end(), v);
  if (it == sources_.end()) return std::nullopt;
  return static_cast<int>(it - sources_.begin());
}

template <typename Scalar>
NodeId Network<Scalar>::sink() const {
  if (sinks_.size() != 1) throw std::invalid_argument("network must have exactly one sink here");
  return sinks_.front();
}

template <typename Scalar>
GroundSet Network<Scalar>::ground() const {
  std::vector<std::string> labels;
  for (NodeId s : sources_) labels.push_back(node_names_[s]);
  return GroundSet(std::move(labels));
}

template <typename Scalar>
Vector<Scalar> Network<Scalar>::capacities() const {
  Vector<Scalar> c(arc_count());
  for (int a = 0; a < arc_count(); ++a) c[a] = arcs_[a].capacity;
  return c;
}

template <typename Scalar>
Vector<Scalar> Network<Scalar>::costs() const {
  Vector<Scalar> k(arc_count());
  for (int a = 0; a < arc_count(); ++a) k[a] = arcs_[a].cost;
  return k;
}

template <typename Scalar>
void Network<Scalar>::set_arc_costs(const Vector<Scalar>& k) {
  if (k.size() != arc_count()) throw std::invalid_argument("one cost per arc is required");
  for (int a = 0; a < arc_count(); ++a) {
    if (k[a] < Scalar(0)) throw std::invalid_argument("arc cost must be nonnegative");
    arcs_[a].cost = k[a];
  }
}

template <typename Scalar>
void Network<Scalar>::set_arc_capacities(const Vector<Scalar>& c) {
  if (c.size() != arc_count()) throw std::invalid_argument("one capacity per arc is required");
  for (int a = 0; a < arc_count(); ++a) {
    if (c[a] < Scalar(0)) throw std::invalid_argument("arc capacity must be nonnegative");
    arcs_[a].capacity = c[a];
  }
}

template <typename Scalar>
Scalar Network<Scalar>::infinite_capacity() const {
  Scalar total(1);
  for (const auto& a : arcs_) total += a.capacity;
  return total;
}

namespace {

template <typename Scalar>
struct Residual {
  struct Edge {
    int to;
    int rev;
    Scalar cap;
    Scalar cost;
    int arc;  // index into the caller's arc list, -1 for reverse edges
  };
  explicit Residual(int n) : adj(n) {}

  void add(int u, int v, const Scalar& cap, const Scalar& cost, int arc) {
    adj[u].push_back(Edge{v, static_cast<int>(adj[v].size()), cap, cost, arc});
    adj[v].push_back(Edge{u, static_cast<int>(adj[u].size()) - 1, Scalar(0), -cost, -1});
  }

  void push(int u, Edge& e, const Scalar& amount) {
    e.cap -= amount;
    adj[e.to][e.rev].cap += amount;
  }

  std::vector<bool> reachable_from(int s) const {
    const Scalar eps = tolerance<Scalar>();
    std::vector<bool> seen(adj.size(), false);
    std::vector<int> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto& e : adj[u])
        if (e.cap > eps && !seen[e.to]) {
          seen[e.to] = true;
          stack.push_back(e.to);
        }
    }
    return seen;
  }

  // Flow on each forward edge, indexed by arc.
  Vector<Scalar> arc_flows(int arc_count) const {
    Vector<Scalar> f = Vector<Scalar>::Zero(arc_count);
    for (const auto& edges : adj)
      for (const auto& e : edges)
        if (e.arc >= 0) f[e.arc] = adj[e.to][e.rev].cap;
    return f;
  }

  std::vector<std::vector<Edge>> adj;
};

template <typename Scalar>
class Dinic {
 public:
  Dinic(Residual<Scalar>& g, int s, int t) : g_(g), s_(s), t_(t), level_(g.adj.size()), next_(g.adj.size()) {}

  Scalar run() {
    Scalar total(0);
    while (bfs()) {
      std::fill(next_.begin(), next_.end(), 0);
      while (true) {
        Scalar pushed = dfs(s_, Scalar(-1));
        if (!(pushed > eps_)) break;
        total += pushed;
      }
    }
    return total;
  }

 private:
  bool bfs() {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s_] = 0;
    q.push(s_);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const auto& e : g_.adj[u])
        if (e.cap > eps_ && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
    }
    return level_[t_] >= 0;
  }

  // limit < 0 means unbounded.
  Scalar dfs(int u, const Scalar& limit) {
    if (u == t_) return limit;
    for (int& i = next_[u]; i < static_cast<int>(g_.adj[u].size()); ++i) {
      auto& e = g_.adj[u][i];
      if (!(e.cap > eps_) || level_[e.to] != level_[u] + 1) continue;
      Scalar room = (limit < Scalar(0) || e.cap < limit) ? e.cap : limit;
      Scalar pushed = dfs(e.to, room);
      if (pushed > eps_) {
        g_.push(u, e, pushed);
        return pushed;
      }
    }
    return Scalar(0);
  }

  Residual<Scalar>& g_;
  int s_;
  int t_;
  std::vector<int> level_;
  std::vector<int> next_;
  Scalar eps_ = tolerance<Scalar>();
};

}  // namespace

template <typename Scalar>
Scalar MaxFlowResult<Scalar>::cut_capacity(const Network<Scalar>& net) const {
  Scalar total(0);
  for (const auto& a : net.arcs())
    if (cut[a.tail] && !cut[a.head]) total += a.capacity;
  return total;
}

template <typename Scalar>
MaxFlowResult<Scalar> max_flow_min_cut(const Network<Scalar>& net, Subset sources, NodeId t) {
  const int n = net.node_count();
  if (t < 0 || t >= n) throw std::invalid_argument("sink does not exist");
  if (net.source_index(t)) throw std::invalid_argument("sink cannot be a source");
  Residual<Scalar> g(n + 1);
  const int super = n;
  for (int a = 0; a < net.arc_count(); ++a) {
    const auto& arc = net.arc(a);
    g.add(arc.tail, arc.head, arc.capacity, Scalar(0), a);
  }
  const Scalar inf = net.infinite_capacity();
  for (int i = 0; i < net.source_count(); ++i)
    if (sources.contains(i)) g.add(super, net.source(i), inf, Scalar(0), -1);

  MaxFlowResult<Scalar> result;
  result.value = Dinic<Scalar>(g, super, t).run();
  auto reach = g.reachable_from(super);
  result.cut.assign(reach.begin(), reach.begin() + n);
  result.flow = g.arc_flows(net.arc_count());
  return result;
}

template <typename Scalar>
SetFunction<Scalar> rho_c(const Network<Scalar>& net, NodeId t) {
  return SetFunction<Scalar>::tabulate(net.ground(), [&](Subset u) {
    return u.empty() ? Scalar(0) : max_flow_min_cut(net, u, t).value;
  });
}

template <typename Scalar>
bool flow_supports(const Network<Scalar>& net, const FlowAssignment<Scalar>& f, const RatePoint<Scalar>& rates,
                   NodeId t) {
  if (f.size() != net.arc_count() || rates.size() != net.source_count()) return false;
  const Scalar eps = tolerance<Scalar>();
  Vector<Scalar> net_out = Vector<Scalar>::Zero(net.node_count());
  for (int a = 0; a < net.arc_count(); ++a) {
    const auto& arc = net.arc(a);
    if (f[a] < -eps || f[a] > arc.capacity + eps) return false;
    net_out[arc.tail] += f[a];
    net_out[arc.head] -= f[a];
  }
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (v == t) continue;
    const auto s = net.source_index(v);
    const Scalar expected = s ? rates[*s] : Scalar(0);
    if (!approx_equal<Scalar>(net_out[v], expected)) return false;
  }
  return true;
}

template <typename Scalar>
Vector<Scalar> reduced_arc_costs(const Network<Scalar>& net, const NodePotentials<Scalar>& z) {
  Vector<Scalar> kbar(net.arc_count());
  for (int a = 0; a < net.arc_count(); ++a) {
    const auto& arc = net.arc(a);
    kbar[a] = arc.cost - (z[arc.head] - z[arc.tail]);
  }
  return kbar;
}

template <typename Scalar>
bool complementary_slackness(const Network<Scalar>& net, const FlowAssignment<Scalar>& f,
                             const NodePotentials<Scalar>& z) {
  const Scalar eps = tolerance<Scalar>();
  const auto kbar = reduced_arc_costs(net, z);
  for (int a = 0; a < net.arc_count(); ++a) {
    if (kbar[a] < -eps && f[a] < net.arc(a).capacity - eps) return false;
    if (kbar[a] > eps && f[a] > eps) return false;
  }
  return true;
}

template <typename Scalar>
SspResult<Scalar> successive_shortest_paths(int node_count, const std::vector<FlowProblemArc<Scalar>>& arcs,
                                            NodeId source, NodeId sink, const Scalar& amount) {
  const Scalar eps = tolerance<Scalar>();
  Residual<Scalar> g(node_count);
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a) g.add(arcs[a].tail, arcs[a].head, arcs[a].capacity, arcs[a].cost, a);

  // Initial potentials: Bellman-Ford from the source over arcs with room.
  std::vector<std::optional<Scalar>> dist0(node_count);
  dist0[source] = Scalar(0);
  for (int round = 0; round < node_count; ++round) {
    bool changed = false;
    for (int u = 0; u < node_count; ++u) {
      if (!dist0[u]) continue;
      for (const auto& e : g.adj[u]) {
        if (!(e.cap > eps)) continue;
        Scalar cand = *dist0[u] + e.cost;
        if (!dist0[e.to] || cand < *dist0[e.to] - eps) {
          dist0[e.to] = cand;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  std::vector<Scalar> pot(node_count, Scalar(0));
  for (int v = 0; v < node_count; ++v)
    if (dist0[v]) pot[v] = *dist0[v];

  SspResult<Scalar> result;
  while (result.sent < amount - eps) {
    // Dijkstra on reduced costs; dense O(V^2) selection.
    std::vector<std::optional<Scalar>> dist(node_count);
    std::vector<std::pair<int, int>> parent(node_count, {-1, -1});
    std::vector<bool> done(node_count, false);
    dist[source] = Scalar(0);
    while (true) {
      int u = -1;
      for (int v = 0; v < node_count; ++v)
        if (!done[v] && dist[v] && (u < 0 || *dist[v] < *dist[u])) u = v;
      if (u < 0) break;
      done[u] = true;
      for (int i = 0; i < static_cast<int>(g.adj[u].size()); ++i) {
        const auto& e = g.adj[u][i];
        if (!(e.cap > eps) || done[e.to]) continue;
        Scalar rc = e.cost + pot[u] - pot[e.to];
        if (rc < Scalar(0)) rc = Scalar(0);  // rounding
        Scalar cand = *dist[u] + rc;
        if (!dist[e.to] || cand < *dist[e.to]) {
          dist[e.to] = cand;
          parent[e.to] = {u, i};
        }
      }
    }
    if (!dist[sink]) break;
    for (int v = 0; v < node_count; ++v)
      if (dist[v]) pot[v] += *dist[v];

    Scalar bottleneck = amount - result.sent;
    for (int v = sink; v != source; v = parent[v].first) {
      const auto& e = g.adj[parent[v].first][parent[v].second];
      if (e.cap < bottleneck) bottleneck = e.cap;
    }
    for (int v = sink; v != source; v = parent[v].first) {
      auto& e = g.adj[parent[v].first][parent[v].second];
      g.push(parent[v].first, e, bottleneck);
    }
    result.sent += bottleneck;
  }
  result.flow = g.arc_flows(static_cast<int>(arcs.size()));
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a) result.cost += arcs[a].cost * result.flow[a];
  result.reachable = g.reachable_from(source);
  return result;
}

namespace {

// z(v) = -(shortest residual path cost v -> t), with a dominating shortcut arc
// from every node to t so that nodes cut off from t still get finite values.
template <typename Scalar>
NodePotentials<Scalar> residual_potentials(const Network<Scalar>& net, const FlowAssignment<Scalar>& f, NodeId t) {
  const Scalar eps = tolerance<Scalar>();
  const int n = net.node_count();
  Scalar shortcut(1);
  for (const auto& a : net.arcs()) shortcut += a.cost;
  Vector<Scalar> d = Vector<Scalar>::Constant(n, shortcut);
  d[t] = Scalar(0);
  for (int round = 0; round <= n; ++round) {
    bool changed = false;
    for (int a = 0; a < net.arc_count(); ++a) {
      const auto& arc = net.arc(a);
      if (f[a] < arc.capacity - eps && arc.cost + d[arc.head] < d[arc.tail] - eps) {
        d[arc.tail] = arc.cost + d[arc.head];
        changed = true;
      }
      if (f[a] > eps && d[arc.tail] - arc.cost < d[arc.head] - eps) {
        d[arc.head] = d[arc.tail] - arc.cost;
        changed = true;
      }
    }
    if (!changed) break;
  }
  NodePotentials<Scalar> z = -d;
  const Scalar zt = z[t];
  for (int v = 0; v < n; ++v) z[v] -= zt;
  return z;
}

}  // namespace

template <typename Scalar>
MinCostFlowResult<Scalar> min_cost_flow(const Network<Scalar>& net, const RatePoint<Scalar>& rates, NodeId t) {
  const Scalar eps = tolerance<Scalar>();
  if (rates.size() != net.source_count()) throw std::invalid_argument("one rate per source is required");
  for (int i = 0; i < rates.size(); ++i)
    if (rates[i] < -eps) throw InfeasibleError("rates must be nonnegative");
  const int n = net.node_count();
  std::vector<FlowProblemArc<Scalar>> arcs;
  for (const auto& a : net.arcs()) arcs.push_back({a.tail, a.head, a.capacity, a.cost});
  const int super = n;
  Scalar total(0);
  for (int i = 0; i < net.source_count(); ++i) {
    Scalar r = rates[i] < Scalar(0) ? Scalar(0) : rates[i];
    arcs.push_back({super, net.source(i), r, Scalar(0)});
    total += r;
  }
  auto ssp = successive_shortest_paths<Scalar>(n + 1, arcs, super, t, total);
  if (ssp.sent < total - eps) {
    Subset witness;
    for (int i = 0; i < net.source_count(); ++i)
      if (ssp.reachable[net.source(i)]) witness = witness.with(i);
    throw InfeasibleError("rates exceed the min-cut capacity of sources " + net.ground().describe(witness));
  }
  MinCostFlowResult<Scalar> result;
  result.flow = ssp.flow.head(net.arc_count());
  result.cost = flow_cost(net, result.flow);
  result.potentials = residual_potentials(net, result.flow, t);
  return result;
}

template <typename Scalar>
std::optional<NodePotentials<Scalar>> common_potentials(const Network<Scalar>& net,
                                                        const std::vector<FlowAssignment<Scalar>>& flows, NodeId t,
                                                        const std::vector<PotentialBound<Scalar>>& extra) {
  const Scalar eps = tolerance<Scalar>();
  std::vector<PotentialBound<Scalar>> edges = extra;
  for (int a = 0; a < net.arc_count(); ++a) {
    const auto& arc = net.arc(a);
    bool some_unsaturated = false;
    bool some_positive = false;
    for (const auto& f : flows) {
      if (f[a] < arc.capacity - eps) some_unsaturated = true;
      if (f[a] > eps) some_positive = true;
    }
    if (some_unsaturated) edges.push_back({arc.tail, arc.head, arc.cost});  // z(head) - z(tail) <= k
    if (some_positive) edges.push_back({arc.head, arc.tail, -arc.cost});   // z(tail) - z(head) <= -k
  }
  const int n = net.node_count();
  Vector<Scalar> d = Vector<Scalar>::Zero(n);
  bool changed = true;
  for (int round = 0; round <= n && changed; ++round) {
    changed = false;
    for (const auto& e : edges) {
      if (d[e.from] + e.bound < d[e.to] - eps) {
        d[e.to] = d[e.from] + e.bound;
        changed = true;
      }
    }
  }
  if (changed) return std::nullopt;  // negative cycle
  const Scalar dt = d[t];
  for (int v = 0; v < n; ++v) d[v] -= dt;
  return d;
}

#define SWNET_INSTANTIATE(S)                                                                                        \
  template class Network<S>;                                                                                        \
  template struct MaxFlowResult<S>;                                                                                 \
  template MaxFlowResult<S> max_flow_min_cut(const Network<S>&, Subset, NodeId);                                    \
  template SetFunction<S> rho_c(const Network<S>&, NodeId);                                                         \
  template bool flow_supports(const Network<S>&, const FlowAssignment<S>&, const RatePoint<S>&, NodeId);            \
  template Vector<S> reduced_arc_costs(const Network<S>&, const NodePotentials<S>&);                                \
  template bool complementary_slackness(const Network<S>&, const FlowAssignment<S>&, const NodePotentials<S>&);     \
  template SspResult<S> successive_shortest_paths(int, const std::vector<FlowProblemArc<S>>&, NodeId, NodeId,       \
                                                  const S&);                                                        \
  template MinCostFlowResult<S> min_cost_flow(const Network<S>&, const RatePoint<S>&, NodeId);                      \
  template std::optional<NodePotentials<S>> common_potentials(const Network<S>&, const std::vector<FlowAssignment<S>>&, \
                                                              NodeId, const std::vector<PotentialBound<S>>&);

SWNET_INSTANTIATE(double)
SWNET_INSTANTIATE(Rational)

}  // namespace swnet
