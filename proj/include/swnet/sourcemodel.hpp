#pragma once

// Discrete joint sources: entropies in bits, the conditional-entropy set function
// that defines the Slepian-Wolf region, and the conditional-independence
// structure that makes its vertices degenerate.

#include <vector>

#include "swnet/subsetfn.hpp"

namespace swnet {

// Conditional mutual information below this counts as independence.
inline constexpr double kCiTolerance = 1e-9;

class JointSource {
 public:
  // pmf is row-major over the product alphabet: the last source varies fastest.
  JointSource(GroundSet ground, std::vector<int> alphabet_sizes, std::vector<double> pmf);

  const GroundSet& ground() const { return ground_; }
  int size() const { return ground_.size(); }
  const std::vector<int>& alphabet_sizes() const { return alphabet_sizes_; }
  const std::vector<double>& pmf() const { return pmf_; }

  // Marginal pmf over the sources in u, row-major in increasing source index.
  std::vector<double> marginal(Subset u) const;

 private:
  GroundSet ground_;
  std::vector<int> alphabet_sizes_;
  std::vector<double> pmf_;
};

// Two binary sources, uniform marginals, P(X1 != X2) = p.
JointSource bsc_pair(double p);
// X1 - X2 - X3 Markov chain: (X1, X2) as bsc_pair(p), X3 = X2 flipped w.p. q.
JointSource markov3(double p, double q);
// Product of independent marginals.
JointSource independent_sources(const std::vector<std::vector<double>>& marginals);

// Binary entropy function, bits.
double binary_entropy(double p);

double entropy(const JointSource& src, Subset u);
// H(X_A | X_B).
double conditional_entropy(const JointSource& src, Subset a, Subset b);

// H(X_U) for every U.
SetFunction<double> entropy_vector(const JointSource& src);

// sigma_SW(U) = H(X_U | X_{U^c}) = H(X_S) - H(X_{U^c}).
SetFunction<double> sw_setfunction(const JointSource& src);
template <typename Scalar>
SetFunction<Scalar> sw_setfunction(const SetFunction<Scalar>& entropies) {
  const int n = entropies.size();
  const Scalar total = entropies(Subset::full(n));
  return SetFunction<Scalar>::tabulate(entropies.ground(),
                                       [&](Subset u) { return Scalar(total - entropies(complement(u, n))); });
}

// I(X_A ; X_B | X_C) for pairwise disjoint A, B, C.
double cond_mutual_info(const JointSource& src, Subset a, Subset b, Subset c);

// Sum-rate of U at the SW vertex R_pi split as a conditional entropy plus the
// conditional mutual informations of the vertex-sum identity (terms j = 2..m).
struct VertexSumDecomposition {
  double base_term = 0.0;
  std::vector<double> mi_terms;
};
VertexSumDecomposition vertex_sum_decomposition(const JointSource& src, const Permutation& pi, Subset u);

// The m mutual-information terms whose vanishing is equivalent to
// R_pi(U) = sigma_SW(U) (terms j = 1..m, with k_0 = 0).
std::vector<double> active_constraint_terms(const JointSource& src, const Permutation& pi, Subset u);
// Prop-style active-constraint test via conditional independence.
bool is_active_by_ci(const JointSource& src, const Permutation& pi, Subset u, double eps = kCiTolerance);

inline constexpr int kMaxEnumeratedSources = 8;

struct VertexReport {
  std::vector<RatePoint<double>> distinct_vertices;
  // Permutations mapping to each vertex; sizes sum to n!.
  std::vector<std::vector<Permutation>> permutations;
  // Subsets U with R(U) = sigma_SW(U), by the conditional-independence criterion
  // for the first defining permutation.
  std::vector<std::vector<Subset>> active_sets;
  // Numeric R(U) == sigma_SW(U) agreed with the CI criterion everywhere.
  bool ci_matches_numeric = true;

  std::vector<std::size_t> multiplicity() const;
};

VertexReport enumerate_sw_vertices(const JointSource& src, double eps = 1e-9);

}  // namespace swnet
