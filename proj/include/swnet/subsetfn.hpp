#pragma once

// Subsets of a small ground set as bitmasks, dense set-function tables, and the
// greedy vertex formulas for polymatroids, contrapolymatroids and their
// intersection.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swnet/scalar.hpp"

namespace swnet {

inline constexpr int kMaxGroundSize = 20;

class Subset {
 public:
  using Mask = std::uint32_t;

  constexpr Subset() = default;
  constexpr explicit Subset(Mask mask) : mask_(mask) {}

  static constexpr Subset singleton(int i) { return Subset(Mask{1} << i); }
  static constexpr Subset full(int n) { return Subset((Mask{1} << n) - 1); }

  constexpr Mask mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(int i) const { return (mask_ >> i) & 1U; }
  int size() const { return __builtin_popcount(mask_); }

  constexpr bool is_subset_of(Subset other) const { return (mask_ & ~other.mask_) == 0; }

  constexpr Subset with(int i) const { return Subset(mask_ | (Mask{1} << i)); }
  constexpr Subset without(int i) const { return Subset(mask_ & ~(Mask{1} << i)); }

  friend constexpr Subset operator|(Subset a, Subset b) { return Subset(a.mask_ | b.mask_); }
  friend constexpr Subset operator&(Subset a, Subset b) { return Subset(a.mask_ & b.mask_); }
  // Set difference.
  friend constexpr Subset operator-(Subset a, Subset b) { return Subset(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(Subset a, Subset b) = default;
  friend constexpr auto operator<=>(Subset a, Subset b) = default;

  std::vector<int> elements() const;

 private:
  Mask mask_ = 0;
};

// Complement within a ground set of size n.
constexpr Subset complement(Subset u, int n) { return Subset::full(n) - u; }

class GroundSet {
 public:
  explicit GroundSet(std::vector<std::string> labels);
  // Labels "s1".."sn".
  static GroundSet indexed(int n);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> index_of(std::string_view label) const;
  Subset full() const { return Subset::full(size()); }
  std::size_t subset_count() const { return std::size_t{1} << size(); }

  std::string describe(Subset u) const;

  friend bool operator==(const GroundSet&, const GroundSet&) = default;

 private:
  std::vector<std::string> labels_;
};

// A bijection on {0,...,n-1}; order[i] is the element placed i-th.
class Permutation {
 public:
  explicit Permutation(std::vector<int> order);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(order_.size()); }
  int operator[](int i) const { return order_[i]; }
  const std::vector<int>& order() const { return order_; }
  // The first i elements.
  Subset prefix(int i) const;
  // Position of element e in the order.
  int position_of(int e) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> order_;
};

// All n! permutations in lexicographic order.
std::vector<Permutation> all_permutations(int n);

template <typename Scalar>
using RatePoint = Vector<Scalar>;

template <typename Scalar>
Scalar subset_sum(const RatePoint<Scalar>& r, Subset u) {
  Scalar total(0);
  for (int i = 0; i < r.size(); ++i)
    if (u.contains(i)) total += r[i];
  return total;
}

// A real function on all subsets of a ground set, stored densely by mask.
template <typename Scalar>
class SetFunction {
 public:
  // values[mask]; requires values[0] == 0.
  SetFunction(GroundSet ground, Vector<Scalar> values);

  template <typename Fn>
  static SetFunction tabulate(GroundSet ground, Fn&& fn) {
    Vector<Scalar> values(static_cast<Eigen::Index>(ground.subset_count()));
    for (Subset::Mask m = 0; m < ground.subset_count(); ++m) values[m] = fn(Subset(m));
    values[0] = Scalar(0);
    return SetFunction(std::move(ground), std::move(values));
  }

  const GroundSet& ground() const { return ground_; }
  int size() const { return ground_.size(); }
  const Vector<Scalar>& values() const { return values_; }
  const Scalar& operator()(Subset u) const { return values_[u.mask()]; }

  template <typename To>
  SetFunction<To> cast() const {
    return SetFunction<To>(ground_, vector_cast<To>(values_));
  }

 private:
  GroundSet ground_;
  Vector<Scalar> values_;
};

// A violated diminishing-returns pair: f(A+i) + f(A+j) vs f(A+i+j) + f(A).
struct ModularityViolation {
  Subset base;
  int first = -1;
  int second = -1;
};

template <typename Scalar>
std::optional<ModularityViolation> submodularity_violation(const SetFunction<Scalar>& f);
template <typename Scalar>
std::optional<ModularityViolation> supermodularity_violation(const SetFunction<Scalar>& f);

template <typename Scalar>
bool is_submodular(const SetFunction<Scalar>& f) {
  return !submodularity_violation(f).has_value();
}
template <typename Scalar>
bool is_supermodular(const SetFunction<Scalar>& f) {
  return !supermodularity_violation(f).has_value();
}
template <typename Scalar>
bool is_nondecreasing(const SetFunction<Scalar>& f);

// g(U) = f(S) - f(S \ U); maps supermodular to submodular and back.
template <typename Scalar>
SetFunction<Scalar> dual_setfunction(const SetFunction<Scalar>& f);

// Raw greedy formula R(pi(i)) = f(U_pi(i)) - f(U_pi(i-1)), with no hypothesis check.
template <typename Scalar>
RatePoint<Scalar> prefix_increments(const SetFunction<Scalar>& f, const Permutation& pi);

// Vertex of the contrapolymatroid Q_sigma for pi. Throws HypothesisError unless
// sigma is supermodular.
template <typename Scalar>
RatePoint<Scalar> contrapolymatroid_vertex(const SetFunction<Scalar>& sigma, const Permutation& pi);

// Vertex of the polymatroid P_rho: greedy increments on the first k elements of
// pi, zero afterwards. Throws HypothesisError unless rho is submodular.
template <typename Scalar>
RatePoint<Scalar> polymatroid_vertex(const SetFunction<Scalar>& rho, const Permutation& pi, int k);

// First (T, U) with sigma(U) - sigma(U \ T) > rho(T) - rho(T \ U), scanning all 4^n pairs.
struct SubsetPair {
  Subset t;
  Subset u;
};
template <typename Scalar>
std::optional<SubsetPair> cross_inequality_violation(const SetFunction<Scalar>& sigma,
                                                     const SetFunction<Scalar>& rho);

// The vertex R_pi^j of the generalized polymatroid {sigma <= R(U) <= rho}.
template <typename Scalar>
RatePoint<Scalar> intersection_vertex(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho,
                                      const Permutation& pi, int j);

// All vertices of Q_sigma ∩ P_rho by the closed-form formula over (pi, j),
// deduplicated. Throws HypothesisError when sigma/rho are not super/submodular or
// the cross inequality fails (the formula is not valid then).
template <typename Scalar>
std::vector<RatePoint<Scalar>> intersection_vertices(const SetFunction<Scalar>& sigma,
                                                     const SetFunction<Scalar>& rho);

// Removes componentwise duplicates (first occurrence kept, input order preserved).
template <typename Scalar>
std::vector<RatePoint<Scalar>> dedup_points(const std::vector<RatePoint<Scalar>>& points,
                                            const Scalar& eps = tolerance<Scalar>());

template <typename Scalar>
bool points_equal(const RatePoint<Scalar>& a, const RatePoint<Scalar>& b,
                  const Scalar& eps = tolerance<Scalar>());


enum class BaseSide { sigma, rho };

// Linear optimization of h^T R over the intersection, solved by the greedy on a
// base polyhedron. With side == sigma, f is supermodular and the minimizing
// weights must be nonnegative (maximizing: nonpositive); with side == rho, f is
// submodular and the signs flip. Mixed-sign weights throw UnsupportedError.
template <typename Scalar>
struct GreedyResult {
  RatePoint<Scalar> point;
  Permutation order;
  Scalar objective;
};

template <typename Scalar>
GreedyResult<Scalar> greedy_linear_opt(const SetFunction<Scalar>& f, const RatePoint<Scalar>& weights,
                                       OptSense sense, BaseSide side);

}  // namespace swnet
