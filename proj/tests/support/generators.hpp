#pragma once

// Seeded random instances for unit, property and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "swnet/netflow.hpp"
#include "swnet/sourcemodel.hpp"
#include "swnet/subsetfn.hpp"

namespace swnet::testing {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Subset random_nonempty_subset(Rng& rng, int n) {
  return Subset(static_cast<Subset::Mask>(uniform_int(rng, 1, (1 << n) - 1)));
}

// Modular part plus convex functions of |U ∩ B|: integer-valued, nondecreasing, supermodular.
inline SetFunction<double> random_supermodular(Rng& rng, int n, int weight = 3, int curvature = 2) {
  std::vector<int> w(n);
  for (int& x : w) x = uniform_int(rng, 0, weight);
  struct Block { Subset b; int c; };
  std::vector<Block> blocks(uniform_int(rng, 0, 3));
  for (auto& bl : blocks) bl = {random_nonempty_subset(rng, n), uniform_int(rng, 0, curvature)};
  return SetFunction<double>::tabulate(GroundSet::indexed(n), [&](Subset u) {
    double v = 0;
    for (int e : u.elements()) v += w[e];
    for (const auto& bl : blocks) {
      const int k = (u & bl.b).size();
      v += bl.c * k * (k - 1) / 2.0;
    }
    return v;
  });
}

// Modular part plus truncations c * min(|U ∩ B|, m): integer-valued, nondecreasing, submodular.
inline SetFunction<double> random_submodular(Rng& rng, int n, int weight = 5, int block_weight = 4) {
  std::vector<int> w(n);
  for (int& x : w) x = uniform_int(rng, 0, weight);
  struct Block { Subset b; int c; int m; };
  std::vector<Block> blocks(uniform_int(rng, 0, 3));
  for (auto& bl : blocks) {
    bl.b = random_nonempty_subset(rng, n);
    bl.c = uniform_int(rng, 0, block_weight);
    bl.m = uniform_int(rng, 1, bl.b.size());
  }
  return SetFunction<double>::tabulate(GroundSet::indexed(n), [&](Subset u) {
    double v = 0;
    for (int e : u.elements()) v += w[e];
    for (const auto& bl : blocks) v += bl.c * std::min((u & bl.b).size(), bl.m);
    return v;
  });
}

// A random joint pmf; with `sparse`, about a quarter of the cells are zero.
inline JointSource random_source(Rng& rng, int n, int alphabet = 2, bool sparse = false) {
  std::vector<int> sizes(n, alphabet);
  std::size_t cells = 1;
  for (int s : sizes) cells *= s;
  std::vector<double> pmf(cells);
  double total = 0;
  for (auto& p : pmf) {
    p = (sparse && uniform_int(rng, 0, 3) == 0) ? 0.0 : uniform_real(rng, 0.05, 1.0);
    total += p;
  }
  if (total == 0) pmf[0] = total = 1;
  for (auto& p : pmf) p /= total;
  return JointSource(GroundSet::indexed(n), sizes, pmf);
}

// Binary sources with a built-in conditional independence: roles[0..3] are the
// element indices playing (t, u, v, w) with p(w) p(u|w) p(v|w) p(t|u,v,w), so
// u ⊥ v | w. Only n = 4 is supported.
inline JointSource ci_source(Rng& rng, const std::vector<int>& roles) {
  auto coin = [&] { return uniform_real(rng, 0.1, 0.9); };
  const double pw = coin();
  const double pu[2] = {coin(), coin()};
  const double pv[2] = {coin(), coin()};
  double pt[2][2][2];
  for (auto& a : pt)
    for (auto& b : a)
      for (auto& c : b) c = coin();
  std::vector<double> pmf(16, 0.0);
  for (int t = 0; t < 2; ++t)
    for (int u = 0; u < 2; ++u)
      for (int v = 0; v < 2; ++v)
        for (int w = 0; w < 2; ++w) {
          const double p = (w ? pw : 1 - pw) * (u ? pu[w] : 1 - pu[w]) * (v ? pv[w] : 1 - pv[w]) *
                           (t ? pt[u][v][w] : 1 - pt[u][v][w]);
          int x[4];
          x[roles[0]] = t;
          x[roles[1]] = u;
          x[roles[2]] = v;
          x[roles[3]] = w;
          // Last source varies fastest.
          pmf[(x[0] << 3) | (x[1] << 2) | (x[2] << 1) | x[3]] += p;
        }
  return JointSource(GroundSet::indexed(4), {2, 2, 2, 2}, pmf);
}

struct NetworkShape {
  int nodes = 6;
  int sources = 2;
  int sinks = 1;
  double arc_probability = 0.4;
  int max_capacity = 4;
  int max_cost = 5;
  int max_source_cost = 0;
  // Capacities are multiples of this unit.
  double capacity_unit = 1.0;
};

// Random simple digraph with integer costs and capacities on a grid. Sources are nodes
// 0..sources-1, sinks the last nodes. Every source gets an arc into the
// non-source part so it is never isolated.
inline Network<double> random_network(Rng& rng, const NetworkShape& shape) {
  Network<double> net;
  // Source nodes are named like GroundSet::indexed labels.
  for (int v = 0; v < shape.nodes; ++v)
    net.add_node(v < shape.sources ? "s" + std::to_string(v + 1) : "v" + std::to_string(v));
  auto random_arc = [&](int u, int v) {
    if (u == v || net.find_arc(u, v)) return;
    net.add_arc(u, v, shape.capacity_unit * uniform_int(rng, 1, shape.max_capacity), uniform_int(rng, 0, shape.max_cost));
  };
  for (int u = 0; u < shape.nodes; ++u)
    for (int v = 0; v < shape.nodes; ++v)
      if (u != v && uniform_real(rng, 0, 1) < shape.arc_probability) random_arc(u, v);
  for (int s = 0; s < shape.sources; ++s) random_arc(s, uniform_int(rng, shape.sources, shape.nodes - 1));
  for (int s = 0; s < shape.sources; ++s) net.add_source(s, uniform_int(rng, 0, shape.max_source_cost));
  for (int k = 0; k < shape.sinks; ++k) net.add_sink(shape.nodes - 1 - k);
  return net;
}

}  // namespace swnet::testing
