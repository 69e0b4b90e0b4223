#include <doctest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "swnet/errors.hpp"
#include "swnet/instance.hpp"
#include "swnet/lpopt.hpp"
#include "swnet/matching.hpp"
#include "swnet/multisink.hpp"

using namespace swnet;
using namespace swnet::testing;

namespace {

struct Loaded {
  Network<double> net;
  JointSource src;
};

Loaded builtin(const std::string& name) {
  const auto inst = builtin_instance(name);
  std::vector<std::string> labels;
  for (const auto& s : inst.network->sources) labels.push_back(s.node);
  return {to_network(*inst.network), to_source(*inst.source, labels)};
}

}  // namespace

TEST_CASE("augmentation") {
  const auto [net, src] = builtin("butterfly");
  const auto h = entropy_vector(src);
  const auto aug = augment(net, h);
  CHECK(aug.net.node_count() == net.node_count() + 1);
  CHECK(aug.base_arc_count == net.arc_count());
  REQUIRE(aug.super_arcs.size() == 2);
  for (int i = 0; i < 2; ++i) {
    const auto& a = aug.net.arc(aug.super_arcs[i]);
    CHECK(a.tail == aug.super_source);
    CHECK(a.head == net.source(i));
    CHECK(a.capacity == doctest::Approx(h(Subset::singleton(i))));
    CHECK(a.cost == 0);
  }
  CHECK(aug.total_entropy == doctest::Approx(h(Subset(3))));
}

TEST_CASE("multi-sink feasibility") {
  SUBCASE("one sink reduces to Han's condition") {
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
      const auto net = random_network(rng, {.nodes = 5, .sources = 2, .max_capacity = 2});
      const auto src = random_source(rng, 2);
      const auto h = entropy_vector(src);
      const auto rho = rho_c(net, net.sink());
      CHECK(check_multisink_feasible(h, net).holds == check_han(sw_setfunction(src), rho).holds());
      CHECK(check_multisink_vertices_feasible(h, net).holds == check_sigma_cross(sw_setfunction(src), rho).holds());
    }
  }
  SUBCASE("butterfly") {
    const auto [net, src] = builtin("butterfly");
    const auto h = entropy_vector(src);
    CHECK(check_multisink_feasible(h, net).holds);
    CHECK(check_multisink_vertices_feasible(h, net).holds);
    const auto sol = solve_multisink(h, net);
    CHECK(sol.cost > 0);
  }
  SUBCASE("starved sink") {
    const auto [net, src] = builtin("starved");
    const auto v = check_multisink_feasible(entropy_vector(src), net);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness);
    CHECK(net.node_name(v.witness->sink) == "t2");
    CHECK_THROWS_AS(solve_multisink(entropy_vector(src), net), InfeasibleError);
  }
  SUBCASE("feasible rates but an unroutable vertex") {
    Rng rng(42);
    bool found = false;
    for (int trial = 0; trial < 500 && !found; ++trial) {
      // Correlated pairs and half-unit capacities leave room between H(X|Y) and H(X).
      NetworkShape shape{.nodes = 6, .sources = 2, .sinks = 2, .max_capacity = 4};
      shape.capacity_unit = 0.5;
      const auto net = random_network(rng, shape);
      const auto src = bsc_pair(uniform_real(rng, 0.02, 0.3));
      const auto h = entropy_vector(src);
      if (!check_multisink_feasible(h, net).holds) continue;
      const auto v = check_multisink_vertices_feasible(h, net);
      if (v.holds) continue;
      found = true;
      REQUIRE(v.witness);
      REQUIRE(v.vertex);
      // The witness vertex exceeds the witness sink's min-cut capacity.
      const auto rho = rho_c(net, v.witness->sink);
      bool exceeds = false;
      for (Subset::Mask m = 1; m < 4; ++m) exceeds = exceeds || subset_sum<double>(*v.vertex, Subset(m)) > rho(Subset(m)) + 1e-9;
      CHECK(exceeds);
    }
    CHECK(found);
  }
}

TEST_CASE("multi-sink LP") {
  SUBCASE("one sink without source costs equals the single-sink optimum") {
    for (auto v : {RelayVariant::gap, RelayVariant::no_gap}) {
      const auto fx = relay_fixture(v, 0.1);
      const auto multi = solve_multisink(entropy_vector(fx.source), fx.net);
      const auto single = solve_primal(fx.net, sw_setfunction(fx.source));
      CHECK(std::abs(multi.cost - single.objective) <= 1e-7);
      const auto b = multisink_bounds(entropy_vector(fx.source), fx.net);
      CHECK(std::abs(b.lower - multi.cost) <= 1e-7);
      CHECK(std::abs(b.upper - multi.cost) <= 1e-7);
    }
  }
  SUBCASE("two-sink toy sits strictly inside its bounds") {
    const auto [net, src] = builtin("two-sink");
    const auto h = entropy_vector(src);
    const auto sol = solve_multisink(h, net);
    const auto b = multisink_bounds(h, net);
    CHECK(sol.cost == doctest::Approx(25));
    CHECK(b.lower == doctest::Approx(14));
    CHECK(b.upper == doctest::Approx(28));
    const auto exact = solve_multisink(h.cast<Rational>(), net.cast<Rational>());
    const auto eb = multisink_bounds(h.cast<Rational>(), net.cast<Rational>());
    CHECK(eb.lower < exact.cost);
    CHECK(exact.cost < eb.upper);
  }
  SUBCASE("butterfly shares the bottleneck arc") {
    const auto [net, src] = builtin("butterfly");
    const auto sol = solve_multisink(entropy_vector(src), net);
    bool coded = false;
    for (int a = 0; a < net.arc_count(); ++a) {
      const double sum = sol.virtual_flows[0][a] + sol.virtual_flows[1][a];
      coded = coded || sol.physical[a] < sum - 1e-7;
    }
    CHECK(coded);
  }
  SUBCASE("solution invariants") {
    Rng rng(43);
    int solved = 0;
    for (int trial = 0; trial < 60 && solved < 15; ++trial) {
      const auto net = random_network(rng, {.nodes = 7, .sources = 2, .sinks = 2, .max_capacity = 3});
      const auto src = random_source(rng, 2);
      const auto h = entropy_vector(src);
      if (!check_multisink_feasible(h, net).holds) continue;
      ++solved;
      const auto sol = solve_multisink(h, net);
      const auto& aug = sol.augmented;
      const auto sigma = sw_setfunction(src);
      for (std::size_t k = 0; k < sol.sinks.size(); ++k) {
        const auto& f = sol.virtual_flows[k];
        for (int a = 0; a < aug.net.arc_count(); ++a) {
          CHECK(f[a] >= -1e-9);
          CHECK(f[a] <= sol.physical[a] + 1e-9);
          CHECK(sol.physical[a] <= aug.net.arc(a).capacity + 1e-9);
        }
        const auto& r = sol.rates[k];
        for (Subset::Mask m = 1; m < 4; ++m) CHECK(subset_sum<double>(r, Subset(m)) >= sigma(Subset(m)) - 1e-7);
        // The base-network part of the virtual flow carries exactly R^(t).
        const FlowAssignment<double> base = f.head(aug.base_arc_count);
        CHECK(flow_supports(net, base, r, sol.sinks[k]));
        for (int i = 0; i < 2; ++i) CHECK(f[aug.super_arcs[i]] == doctest::Approx(r[i]).epsilon(1e-7));
      }
      for (int i = 0; i < 2; ++i) CHECK(sol.max_rates[i] == doctest::Approx(std::max(sol.rates[0][i], sol.rates[1][i])));
    }
    CHECK(solved == 15);
  }
}

TEST_CASE("subgradient baseline") {
  SUBCASE("single sink, single arc") {
    Network<double> net;
    const auto s = net.add_node("s1");
    const auto t = net.add_node("t");
    net.add_arc(s, t, 2, 3);
    net.add_source(s);
    net.add_sink(t);
    const auto src = JointSource(GroundSet({"s1"}), {2}, {0.5, 0.5});
    const auto trace = subgradient_solve(entropy_vector(src), net, {.iterations = 200, .step = {}, .upper_estimate = {}, .reference = 3.0});
    CHECK(std::abs(trace.best_dual - 3.0) <= 1e-6);
  }
  SUBCASE("two-sink toy") {
    const auto [net, src] = builtin("two-sink");
    const auto h = entropy_vector(src);
    const double opt = solve_multisink(h, net).cost;
    const auto b = multisink_bounds(h, net);
    const auto trace = subgradient_solve(h, net, {.iterations = 1000, .step = {}, .upper_estimate = b.upper, .reference = opt});
    // A zero subgradient ends the run early: the multipliers are then optimal.
    CHECK(trace.iterates.size() <= 1000);
    CHECK(trace.diagnostic.empty());
    CHECK((opt - trace.best_dual) / opt <= 0.01);
    double best = -1e300;
    for (const auto& it : trace.iterates) {
      CHECK(it.dual_value <= opt + 1e-7);
      best = std::max(best, it.dual_value);
      CHECK(it.best_dual == best);
    }
    CHECK(trace.step_b == 10.0);
  }
  SUBCASE("divergent step sizes stop with a diagnostic") {
    const auto [net, src] = builtin("two-sink");
    SubgradientOptions opts;
    opts.iterations = 1000;
    opts.step.a = 1e15;
    const auto trace = subgradient_solve(entropy_vector(src), net, opts);
    CHECK(trace.iterates.size() < 1000);
    CHECK_FALSE(trace.diagnostic.empty());
  }
}

TEST_CASE("random geometric networks") {
  const auto a = random_geometric_network({.seed = 3});
  const auto b = random_geometric_network({.seed = 3});
  CHECK(a.node_count() == 50);
  CHECK(a.arc_count() == b.arc_count());
  CHECK(a.arc_count() >= 280);
  CHECK(a.source_count() == 10);
  CHECK(a.sinks().size() == 3);
  for (const auto& arc : a.arcs()) {
    CHECK((arc.capacity == 20 || arc.capacity == 40));
    CHECK(arc.cost == 1);
  }
  for (NodeId t : a.sinks()) CHECK(max_flow_min_cut(a, a.ground().full(), t).value > 0);
}
