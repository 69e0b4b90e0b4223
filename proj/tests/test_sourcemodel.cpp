#include <doctest.h>

#include <numeric>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "swnet/sourcemodel.hpp"

using namespace swnet;
using namespace swnet::testing;

namespace {

constexpr Subset s1 = Subset::singleton(0);
constexpr Subset s2 = Subset::singleton(1);
constexpr Subset s3 = Subset::singleton(2);

// Distinct SW vertices computed from oracle entropies alone.
std::size_t oracle_vertex_count(const JointSource& src) {
  const int n = src.size();
  std::vector<RatePoint<double>> pts;
  for (const auto& pi : all_permutations(n)) {
    RatePoint<double> r(n);
    for (int i = 0; i < n; ++i) {
      // R(pi_i) = H(X_S \ U_{i-1}) - H(X_S \ U_i)
      r[pi[i]] = entropy_oracle(src, complement(pi.prefix(i), n)) - entropy_oracle(src, complement(pi.prefix(i + 1), n));
    }
    pts.push_back(r);
  }
  return dedup_points<double>(pts, 1e-9).size();
}

}  // namespace

TEST_CASE("entropy") {
  CHECK(entropy(independent_sources({{0.5, 0.5}}), s1) == doctest::Approx(1.0));
  for (double p : {0.1, 0.25, 0.4}) {
    const auto src = bsc_pair(p);
    CHECK(entropy(src, s1 | s2) == doctest::Approx(1 + binary_entropy(p)).epsilon(1e-12));
  }
  CHECK(entropy(bsc_pair(0.5), s1 | s2) == doctest::Approx(2.0));
  CHECK(entropy(bsc_pair(0.3), Subset()) == 0.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK_THROWS(JointSource(GroundSet::indexed(1), {2}, {0.5, 0.6}));
  CHECK_THROWS(JointSource(GroundSet::indexed(1), {2}, {1.5, -0.5}));
  CHECK_THROWS(JointSource(GroundSet::indexed(2), {2, 2}, {0.5, 0.5}));
}

TEST_CASE("Slepian-Wolf set function") {
  const auto indep = independent_sources({{0.5, 0.5}, {0.2, 0.8}, {0.1, 0.3, 0.6}});
  const auto sw = sw_setfunction(indep);
  for (Subset::Mask m = 0; m < 8; ++m) {
    double expected = 0;
    for (int e : Subset(m).elements()) expected += entropy(indep, Subset::singleton(e));
    CHECK(sw(Subset(m)) == doctest::Approx(expected).epsilon(1e-12));
  }

  const double p = 0.15;
  const auto bsc = sw_setfunction(bsc_pair(p));
  CHECK(bsc(s1) == doctest::Approx(binary_entropy(p)).epsilon(1e-12));
  CHECK(bsc(s2) == doctest::Approx(binary_entropy(p)).epsilon(1e-12));
  CHECK(bsc(s1 | s2) == doctest::Approx(1 + binary_entropy(p)).epsilon(1e-12));

  const auto src = markov3(0.1, 0.3);
  const auto mk = sw_setfunction(src);
  const double total = entropy_oracle(src, Subset::full(3));
  for (Subset::Mask m = 0; m < 8; ++m)
    CHECK(std::abs(mk(Subset(m)) - (total - entropy_oracle(src, complement(Subset(m), 3)))) <= 1e-12);
  CHECK(std::abs(conditional_entropy(src, s1 | s3, s2) - (entropy_oracle(src, Subset(7)) - entropy_oracle(src, s2))) <=
        1e-12);
}

TEST_CASE("conditional mutual information") {
  const auto indep = independent_sources({{0.5, 0.5}, {0.3, 0.7}, {0.9, 0.1}});
  CHECK(std::abs(cond_mutual_info(indep, s1, s2, s3)) <= 1e-12);
  CHECK(std::abs(cond_mutual_info(indep, s1 | s2, s3, Subset())) <= 1e-12);
  CHECK(std::abs(cond_mutual_info(markov3(0.1, 0.2), s1, s3, s2)) <= 1e-12);
  CHECK(cond_mutual_info(markov3(0.1, 0.2), s1, s3, Subset()) > 1e-3);

  const auto bsc = bsc_pair(0.1);
  const double direct = entropy_oracle(bsc, s1) + entropy_oracle(bsc, s2) - entropy_oracle(bsc, s1 | s2);
  CHECK(cond_mutual_info(bsc, s1, s2, Subset()) == doctest::Approx(1 - binary_entropy(0.1)).epsilon(1e-12));
  CHECK(std::abs(cond_mutual_info(bsc, s1, s2, Subset()) - direct) <= 1e-12);
  CHECK_THROWS(cond_mutual_info(bsc, s1, s1 | s2, Subset()));
}

TEST_CASE("vertex-sum decomposition") {
  SUBCASE("chain prefixes have no mutual-information terms") {
    const auto src = markov3(0.2, 0.35);
    const auto sw = sw_setfunction(src);
    for (const auto& pi : all_permutations(3))
      for (int i = 1; i <= 3; ++i) {
        const auto d = vertex_sum_decomposition(src, pi, pi.prefix(i));
        for (double t : d.mi_terms) CHECK(std::abs(t) <= 1e-12);
        CHECK(d.base_term == doctest::Approx(sw(pi.prefix(i))).epsilon(1e-12));
      }
  }
  SUBCASE("Markov fixture, pi = (3, 1, 2)") {
    const auto src = markov3(0.1, 0.2);
    const Permutation pi({2, 0, 1});
    const auto r = contrapolymatroid_vertex(sw_setfunction(src), pi);
    const double h1_given_2 = entropy_oracle(src, s1 | s2) - entropy_oracle(src, s2);
    const double h1_given_23 = entropy_oracle(src, Subset(7)) - entropy_oracle(src, s2 | s3);
    CHECK(std::abs(r[0] - h1_given_2) <= 1e-12);
    CHECK(std::abs(r[0] - h1_given_23) <= 1e-12);
    const auto d = vertex_sum_decomposition(src, pi, s1);
    CHECK(std::abs(d.base_term + std::accumulate(d.mi_terms.begin(), d.mi_terms.end(), 0.0) - r[0]) <= 1e-12);
  }
  SUBCASE("random three-source pmfs, every (pi, U)") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const auto src = random_source(rng, 3, uniform_int(rng, 2, 3), trial % 2 == 1);
      const auto sw = sw_setfunction(src);
      for (const auto& pi : all_permutations(3)) {
        const auto r = contrapolymatroid_vertex(sw, pi);
        for (Subset::Mask m = 1; m < 8; ++m) {
          const auto d = vertex_sum_decomposition(src, pi, Subset(m));
          const double sum = d.base_term + std::accumulate(d.mi_terms.begin(), d.mi_terms.end(), 0.0);
          CHECK(std::abs(sum - subset_sum<double>(r, Subset(m))) <= 1e-9);
          const auto terms = active_constraint_terms(src, pi, Subset(m));
          const double excess = std::accumulate(terms.begin(), terms.end(), 0.0);
          CHECK(std::abs(excess - (subset_sum<double>(r, Subset(m)) - sw(Subset(m)))) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("vertex enumeration") {
  CHECK(enumerate_sw_vertices(markov3(0.1, 0.2)).distinct_vertices.size() == 5);
  CHECK(enumerate_sw_vertices(markov3(0.3, 0.8)).distinct_vertices.size() == 5);
  CHECK(enumerate_sw_vertices(markov3(0.5, 0.5)).distinct_vertices.size() == 1);
  CHECK(enumerate_sw_vertices(independent_sources({{0.5, 0.5}, {0.1, 0.9}, {0.7, 0.3}})).distinct_vertices.size() == 1);
  for (auto [p, q] : {std::pair{0.5, 0.2}, std::pair{0.3, 0.5}, std::pair{0.0, 0.2}, std::pair{0.1, 1.0}}) {
    const auto src = markov3(p, q);
    CHECK(enumerate_sw_vertices(src).distinct_vertices.size() == oracle_vertex_count(src));
  }

  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = uniform_int(rng, 2, 4);
    const auto src = random_source(rng, n, 2, true);
    const auto rep = enumerate_sw_vertices(src);
    CHECK(rep.ci_matches_numeric);
    const auto mult = rep.multiplicity();
    std::size_t total = 0;
    for (auto m : mult) total += m;
    std::size_t fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    CHECK(total == fact);
    for (std::size_t v = 0; v < rep.distinct_vertices.size(); ++v) {
      const auto& pi = rep.permutations[v].front();
      for (int i = 1; i <= n; ++i) {
        const auto& act = rep.active_sets[v];
        CHECK(std::find(act.begin(), act.end(), pi.prefix(i)) != act.end());
      }
    }
    CHECK(rep.distinct_vertices.size() == oracle_vertex_count(src));
  }
  CHECK_THROWS(enumerate_sw_vertices(random_source(rng, 9, 2)));
}
