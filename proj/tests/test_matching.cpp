#include <doctest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "swnet/errors.hpp"
#include "swnet/lpopt.hpp"
#include "swnet/matching.hpp"

using namespace swnet;
using namespace swnet::testing;

namespace {

SetFunction<double> pair_function(double a, double b, double ab) {
  Vector<double> v(4);
  v << 0, a, b, ab;
  return SetFunction<double>(GroundSet::indexed(2), v);
}

bool in_polymatroid(const SetFunction<double>& rho, const RatePoint<double>& r) {
  if ((r.array() < -1e-9).any()) return false;
  for (Subset::Mask m = 1; m < rho.ground().subset_count(); ++m)
    if (subset_sum<double>(r, Subset(m)) > rho(Subset(m)) + 1e-9) return false;
  return true;
}

bool in_contrapolymatroid(const SetFunction<double>& sigma, const RatePoint<double>& r) {
  for (Subset::Mask m = 1; m < sigma.ground().subset_count(); ++m)
    if (subset_sum<double>(r, Subset(m)) < sigma(Subset(m)) - 1e-9) return false;
  return true;
}

bool sigma_vertices_inside(const SetFunction<double>& sigma, const SetFunction<double>& rho) {
  for (const auto& pi : all_permutations(sigma.size()))
    if (!in_polymatroid(rho, contrapolymatroid_vertex(sigma, pi))) return false;
  return true;
}

bool rho_vertices_inside(const SetFunction<double>& sigma, const SetFunction<double>& rho) {
  for (const auto& pi : all_permutations(sigma.size()))
    if (!in_contrapolymatroid(sigma, polymatroid_vertex(rho, pi, rho.size()))) return false;
  return true;
}

Network<double> direct_network(const std::vector<double>& caps) {
  Network<double> net;
  const auto t = net.add_node("t");
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const auto s = net.add_node("s" + std::to_string(i + 1));
    net.add_arc(s, t, caps[i], 1);
    net.add_source(s);
  }
  net.add_sink(t);
  return net;
}

}  // namespace

TEST_CASE("Han's condition") {
  const auto sigma = sw_setfunction(bsc_pair(0.1));
  CHECK(check_han(sigma, rho_c(direct_network({5, 5}), 0)).holds());

  const auto fig2 = pair_function(2, 2, 3);
  const auto v = check_han(fig2, fig2);
  CHECK(v.outcome == Outcome::hypothesis_violated);
  CHECK(v.diagnostic.find("supermodular") != std::string::npos);
  CHECK_FALSE(intersection_nonempty(fig2, fig2));
  CHECK(hrep_vertices(fig2, fig2).empty());

  Rng rng(31);
  int holds = 0, fails = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto s = random_supermodular(rng, 3);
    const auto r = random_submodular(rng, 3);
    const auto verdict = check_han(s, r);
    REQUIRE(verdict.outcome != Outcome::hypothesis_violated);
    CHECK(verdict.holds() == !hrep_vertices(s, r).empty());
    CHECK(verdict.holds() == intersection_nonempty(s, r));
    if (verdict.holds()) {
      ++holds;
    } else {
      ++fails;
      REQUIRE(verdict.pair);
      CHECK(s(verdict.pair->u) > r(verdict.pair->u));
    }
  }
  CHECK(holds > 0);
  CHECK(fails > 0);
}

TEST_CASE("cross inequality") {
  Rng rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    const auto rho = random_submodular(rng, n);
    CHECK(check_cross_inequality(dual_setfunction(rho), rho).holds());
  }
  int failing = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_supermodular(rng, 3);
    const auto r = random_submodular(rng, 3);
    const auto v = check_cross_inequality(s, r);
    // Direct evaluation over all (T, U).
    bool direct = true;
    for (Subset::Mask t = 0; t < 8; ++t)
      for (Subset::Mask u = 0; u < 8; ++u) {
        const Subset T(t), U(u);
        if (s(U) - s(U - T) > r(T) - r(T - U) + 1e-9) direct = false;
        // Disjoint pairs are the tautology 0 <= 0.
        if ((T & U).empty()) CHECK(s(U) - s(U - T) == r(T) - r(T - U));
      }
    CHECK(v.holds() == direct);
    if (!v.holds()) {
      ++failing;
      REQUIRE(v.pair);
      CHECK_FALSE((v.pair->t & v.pair->u).empty());
    }
    // The T = U specialization is Han's condition.
    bool han = true;
    for (Subset::Mask u = 0; u < 8; ++u) han = han && s(Subset(u)) <= r(Subset(u)) + 1e-9;
    CHECK(han == check_han(s, r).holds());
  }
  CHECK(failing > 0);

  const auto big = SetFunction<double>::tabulate(GroundSet::indexed(13), [](Subset u) { return double(u.size()); });
  CHECK_THROWS_AS(check_cross_inequality(big, big), UnsupportedError);
}

TEST_CASE("face and cross conditions") {
  Rng rng(33);
  int sigma_fail = 0, rho_fail = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    const auto s = random_supermodular(rng, n);
    const auto r = random_submodular(rng, n);
    const auto sf = check_sigma_face(s, r);
    const auto sc = check_sigma_cross(s, r);
    const auto rf = check_rho_face(s, r);
    const auto rc = check_rho_cross(s, r);
    CHECK(sf.holds() == sc.holds());
    CHECK(rf.holds() == rc.holds());
    CHECK(sf.holds() == sigma_vertices_inside(s, r));
    CHECK(rf.holds() == rho_vertices_inside(s, r));
    // Contrapolymatroid of the dual of rho inside that of sigma.
    const auto rho_bar = dual_setfunction(r);
    bool contained = true;
    for (const auto& pi : all_permutations(n)) contained = contained && in_contrapolymatroid(s, contrapolymatroid_vertex(rho_bar, pi));
    CHECK(rc.holds() == contained);
    if (!sf.holds()) {
      ++sigma_fail;
      REQUIRE(sf.vertex);
      CHECK_FALSE(in_polymatroid(r, *sf.vertex));
      CHECK(in_contrapolymatroid(s, *sf.vertex));
      REQUIRE(sc.vertex);
      CHECK_FALSE(in_polymatroid(r, *sc.vertex));
    }
    if (!rf.holds()) {
      ++rho_fail;
      REQUIRE(rf.vertex);
      CHECK_FALSE(in_contrapolymatroid(s, *rf.vertex));
      CHECK(in_polymatroid(r, *rf.vertex));
    }
    if (sf.holds())
      for (const auto& pi : all_permutations(n)) CHECK(in_polymatroid(r, contrapolymatroid_vertex(s, pi)));
  }
  CHECK(sigma_fail > 0);
  CHECK(rho_fail > 0);

  SUBCASE("SW against min-cut capacities") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto net = random_network(rng, {.nodes = 5, .sources = 2, .max_capacity = 2});
      const auto src = random_source(rng, 2);
      const auto sigma = sw_setfunction(src);
      const auto rho = rho_c(net, net.sink());
      bool entropies_fit = true;
      for (Subset::Mask m = 1; m < 4; ++m) entropies_fit = entropies_fit && entropy(src, Subset(m)) <= rho(Subset(m)) + 1e-9;
      CHECK(check_sigma_cross(sigma, rho).holds() == entropies_fit);
    }
  }
  SUBCASE("hypotheses are validated") {
    const auto fig2 = pair_function(2, 2, 3);
    CHECK(check_sigma_face(fig2, fig2).outcome == Outcome::hypothesis_violated);
    CHECK(check_rho_cross(fig2, pair_function(1, 1, 3)).outcome == Outcome::hypothesis_violated);
  }
}

TEST_CASE("intersection classification") {
  CHECK(classify_intersection(pair_function(2, 2, 3), pair_function(2, 2, 3)).type == IntersectionType::empty);
  CHECK_FALSE(classify_intersection(pair_function(2, 2, 3), pair_function(2, 2, 3)).hypotheses_hold);
  const auto rho = pair_function(2, 2, 3);
  CHECK(classify_intersection(dual_setfunction(rho), rho).type == IntersectionType::gp);
  CHECK(std::string(to_string(IntersectionType::sigma_contained)) == "Bsigma-contained");

  Rng rng(34);
  bool sigma_only = false, rho_only = false, both = false, empty = false;
  for (int trial = 0; trial < 2000 && !(sigma_only && rho_only && both && empty); ++trial) {
    const int n = uniform_int(rng, 2, 4);
    const auto s = random_supermodular(rng, n);
    const auto r = random_submodular(rng, n);
    const auto c = classify_intersection(s, r);
    const bool sf = check_sigma_face(s, r).holds();
    const bool rf = check_rho_face(s, r).holds();
    switch (c.type) {
      case IntersectionType::sigma_contained:
        CHECK(sf);
        CHECK_FALSE(rf);
        sigma_only = true;
        break;
      case IntersectionType::rho_contained:
        CHECK(rf);
        CHECK_FALSE(sf);
        rho_only = true;
        break;
      case IntersectionType::both_contained:
        CHECK((sf && rf));
        CHECK_FALSE(check_cross_inequality(s, r).holds());
        both = true;
        break;
      case IntersectionType::empty:
        CHECK(hrep_vertices(s, r).empty());
        empty = true;
        break;
      case IntersectionType::gp:
        CHECK(same_point_set(intersection_vertices(s, r), hrep_vertices(s, r)));
        break;
      case IntersectionType::generic:
        CHECK_FALSE(sf);
        CHECK_FALSE(rf);
        CHECK_FALSE(hrep_vertices(s, r).empty());
        break;
    }
  }
  CHECK(sigma_only);
  CHECK(rho_only);
  CHECK(empty);
}

TEST_CASE("conditional-entropy cross condition") {
  const auto src = bsc_pair(0.1);
  CHECK(check_conditional_entropy_cross(src, direct_network({5, 5})).holds());
  // The pair needs 1 + H(0.1) bits in total; squeeze both through one arc.
  Network<double> tight;
  const auto a = tight.add_node("s1");
  const auto b = tight.add_node("s2");
  const auto m = tight.add_node("m");
  const auto t = tight.add_node("t");
  tight.add_arc(a, m, 5, 1);
  tight.add_arc(b, m, 5, 1);
  tight.add_arc(m, t, 1.2, 1);
  tight.add_source(a);
  tight.add_source(b);
  tight.add_sink(t);
  const auto v = check_conditional_entropy_cross(src, tight);
  CHECK(v.outcome == Outcome::fails);
  REQUIRE(v.pair);

  Rng rng(35);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = uniform_int(rng, 2, 3);
    const auto net = random_network(rng, {.nodes = 6, .sources = n, .max_capacity = 2});
    const auto s = random_source(rng, n, 2, trial % 3 == 0);
    const auto verdict = check_conditional_entropy_cross(s, net);
    CHECK(verdict.holds() == check_cross_inequality(sw_setfunction(s), rho_c(net, net.sink())).holds());
  }
}
