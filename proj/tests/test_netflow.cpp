#include <doctest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "swnet/errors.hpp"
#include "swnet/lpopt.hpp"
#include "swnet/netflow.hpp"

using namespace swnet;
using namespace swnet::testing;

namespace {

RatePoint<double> point(std::initializer_list<double> xs) {
  RatePoint<double> r(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) r[i++] = x;
  return r;
}

}  // namespace

TEST_CASE("network construction") {
  Network<double> net;
  const auto a = net.add_node("a");
  const auto b = net.add_node("b");
  net.add_arc(a, b, 1, 1);
  CHECK_THROWS(net.add_arc(a, b, 2, 1));
  CHECK_THROWS(net.add_arc(a, a, 1, 1));
  CHECK_THROWS(net.add_arc(a, b + 5, 1, 1));
  net.add_source(a);
  CHECK_THROWS(net.add_sink(a));
  net.add_sink(b);
  CHECK(net.sink() == b);
  CHECK(net.ground().label(0) == "a");
  CHECK(net.find_node("b") == b);
}

TEST_CASE("max flow and min cut") {
  SUBCASE("single arc") {
    Network<double> net;
    const auto s = net.add_node("s");
    const auto t = net.add_node("t");
    net.add_arc(s, t, 3, 0);
    net.add_source(s);
    net.add_sink(t);
    const auto r = max_flow_min_cut(net, Subset(1), t);
    CHECK(r.value == 3);
    CHECK(r.cut == std::vector<bool>{true, false});
  }
  SUBCASE("two parallel paths") {
    Network<double> net;
    const auto s = net.add_node("s");
    const auto m = net.add_node("m");
    const auto t = net.add_node("t");
    net.add_arc(s, t, 1, 0);
    net.add_arc(s, m, 2, 0);
    net.add_arc(m, t, 5, 0);
    net.add_source(s);
    net.add_sink(t);
    const auto r = max_flow_min_cut(net, Subset(1), t);
    CHECK(r.value == 3);
    CHECK(r.cut_capacity(net) == 3);
  }
  SUBCASE("random six-node graphs against exhaustive cuts") {
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
      const auto net = random_network(rng, {.nodes = 6, .sources = 3, .sinks = 1, .arc_probability = 0.35});
      for (Subset::Mask m = 0; m < 8; ++m) {
        const auto r = max_flow_min_cut(net, Subset(m), net.sink());
        CHECK(r.value == doctest::Approx(cut_oracle(net, Subset(m), net.sink())));
        CHECK(r.cut_capacity(net) == doctest::Approx(r.value));
        CHECK_FALSE(r.cut[net.sink()]);
        for (int e : Subset(m).elements()) CHECK(r.cut[net.source(e)]);
      }
    }
  }
}

TEST_CASE("min-cut capacity set function") {
  SUBCASE("disjoint unit paths are modular") {
    Network<double> net;
    const auto t = net.add_node("t");
    for (int i = 0; i < 3; ++i) {
      const auto s = net.add_node("s" + std::to_string(i));
      const auto m = net.add_node("m" + std::to_string(i));
      net.add_arc(s, m, 1, 0);
      net.add_arc(m, t, 1, 0);
      net.add_source(s);
    }
    net.add_sink(t);
    const auto rho = rho_c(net, t);
    for (Subset::Mask m = 0; m < 8; ++m) CHECK(rho(Subset(m)) == Subset(m).size());
  }
  SUBCASE("shared bottleneck") {
    const double own[3] = {2, 3, 1};
    const double bottleneck = 4;
    Network<double> net;
    const auto b = net.add_node("b");
    const auto t = net.add_node("t");
    net.add_arc(b, t, bottleneck, 0);
    for (int i = 0; i < 3; ++i) {
      const auto s = net.add_node("s" + std::to_string(i));
      net.add_arc(s, b, own[i], 0);
      net.add_source(s);
    }
    net.add_sink(t);
    const auto rho = rho_c(net, t);
    for (Subset::Mask m = 0; m < 8; ++m) {
      double sum = 0;
      for (int e : Subset(m).elements()) sum += own[e];
      CHECK(rho(Subset(m)) == std::min(sum, bottleneck));
      CHECK(rho(Subset(m)) == cut_oracle(net, Subset(m), t));
    }
  }
  SUBCASE("relay fixture") {
    const auto fx = relay_fixture(RelayVariant::gap, 0.1);
    const auto rho = rho_c(fx.net, fx.net.sink());
    const double expected = fx.net.arc(0).capacity + fx.net.arc(2).capacity;
    CHECK(rho(Subset(1)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rho(Subset(1)) == doctest::Approx(cut_oracle(fx.net, Subset(1), fx.net.sink())));
  }
}

TEST_CASE("flow support") {
  const auto fx = relay_fixture(RelayVariant::gap, 0.1);
  const auto& net = fx.net;
  const NodeId t = net.sink();
  CHECK(flow_supports<double>(net, FlowAssignment<double>::Zero(4), point({0, 0}), t));

  Network<double> path;
  const auto s = path.add_node("s");
  const auto m = path.add_node("m");
  const auto tt = path.add_node("t");
  path.add_arc(s, m, 1, 1);
  path.add_arc(m, tt, 1, 1);
  path.add_source(s);
  path.add_sink(tt);
  CHECK(flow_supports(path, point({1, 1}), point({1}), tt));
  CHECK_FALSE(flow_supports(path, point({1, 0.5}), point({1}), tt));
  CHECK_FALSE(flow_supports(path, point({2, 2}), point({2}), tt));

  const double h = binary_entropy(0.1);
  const auto ra = point({h, 1});
  const auto rb = point({1, h});
  const auto fa = min_cost_flow(net, ra, t).flow;
  const auto fb = min_cost_flow(net, rb, t).flow;
  for (double lambda = 0; lambda <= 1.0 + 1e-12; lambda += 0.125)
    CHECK(flow_supports<double>(net, lambda * fa + (1 - lambda) * fb, lambda * ra + (1 - lambda) * rb, t));
}

TEST_CASE("min-cost flow") {
  SUBCASE("single path at capacity") {
    Network<double> net;
    const auto s = net.add_node("s");
    const auto m = net.add_node("m");
    const auto t = net.add_node("t");
    net.add_arc(s, m, 2.5, 3);
    net.add_arc(m, t, 2.5, 4);
    net.add_source(s);
    net.add_sink(t);
    const auto r = min_cost_flow(net, point({2.5}), t);
    CHECK(r.cost == doctest::Approx(2.5 * 7));
    CHECK(r.potentials[t] == 0);
    CHECK(complementary_slackness(net, r.flow, r.potentials));
  }
  SUBCASE("relay fixture matches the flow LP") {
    for (auto v : {RelayVariant::gap, RelayVariant::no_gap}) {
      const auto fx = relay_fixture(v, 0.1);
      const double h = binary_entropy(0.1);
      for (const auto& rate : {point({h, 1}), point({1, h}), point({0.7, 0.8})}) {
        const auto r = min_cost_flow(fx.net, rate, fx.net.sink());
        const auto lp = flow_lp(fx.net, rate, fx.net.sink());
        REQUIRE(lp.status == LpStatus::optimal);
        CHECK(r.cost == doctest::Approx(lp.objective).epsilon(1e-9));
        CHECK(flow_supports(fx.net, r.flow, rate, fx.net.sink()));
        CHECK(complementary_slackness(fx.net, r.flow, r.potentials));
      }
    }
  }
  SUBCASE("equal route costs make every split optimal") {
    const auto fx = relay_fixture(RelayVariant::no_gap, 0.1);
    const auto& net = fx.net;
    for (double r1 : {0.3, 0.5, 0.9}) {
      const auto rate = point({r1, 0.6});
      CHECK(min_cost_flow(net, rate, net.sink()).cost == doctest::Approx(2 * r1 + 3 * 0.6));
      // Push as much of s1 as possible through the relay instead.
      const double via = std::min(r1, net.arc(2).capacity);
      FlowAssignment<double> f(4);
      f << r1 - via, via + 0.6, via, 0.6;
      CHECK(flow_supports(net, f, rate, net.sink()));
      CHECK(flow_cost(net, f) == doctest::Approx(2 * r1 + 3 * 0.6));
    }
  }
  SUBCASE("infeasible rates name a violated cut") {
    const auto fx = relay_fixture(RelayVariant::gap, 0.1);
    try {
      min_cost_flow(fx.net, point({5, 0}), fx.net.sink());
      FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
      CHECK(std::string(e.what()).find("s1") != std::string::npos);
    }
  }
  SUBCASE("rational mode agrees with the flow LP exactly") {
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
      const auto net = random_network(rng, {.nodes = 6, .sources = 2});
      const auto rho = rho_c(net, net.sink());
      const auto r = polymatroid_vertex(rho, Permutation({1, 0}), 2);
      const auto q = net.cast<Rational>();
      const RatePoint<Rational> rq = vector_cast<Rational>(r) / Rational(2);
      const auto exact = min_cost_flow(q, rq, q.sink());
      const auto lp = flow_lp(q, rq, q.sink());
      REQUIRE(lp.status == LpStatus::optimal);
      CHECK(exact.cost == lp.objective);
      CHECK(complementary_slackness(q, exact.flow, exact.potentials));
    }
  }
}

TEST_CASE("reduced costs and shared potentials") {
  const auto fx = relay_fixture(RelayVariant::no_gap, 0.1);
  const double h = binary_entropy(0.1);
  const auto fa = min_cost_flow(fx.net, point({h, 1}), fx.net.sink());
  const auto fb = min_cost_flow(fx.net, point({1, h}), fx.net.sink());
  const auto z = common_potentials(fx.net, {fa.flow, fb.flow}, fx.net.sink());
  REQUIRE(z);
  CHECK((*z)[fx.net.sink()] == 0);
  const auto kbar = reduced_arc_costs(fx.net, *z);
  for (int a = 0; a < 4; ++a) {
    const auto& arc = fx.net.arc(a);
    CHECK(kbar[a] == doctest::Approx(arc.cost - ((*z)[arc.head] - (*z)[arc.tail])));
  }
  CHECK(complementary_slackness(fx.net, fa.flow, *z));
  CHECK(complementary_slackness(fx.net, fb.flow, *z));
}
