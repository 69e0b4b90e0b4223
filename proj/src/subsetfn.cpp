#include "swnet/subsetfn.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "swnet/errors.hpp"

namespace swnet {

std::vector<int> Subset::elements() const {
  std::vector<int> out;
  for (Mask m = mask_; m != 0; m &= m - 1) out.push_back(__builtin_ctz(m));
  return out;
}

GroundSet::GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty() || static_cast<int>(labels_.size()) > kMaxGroundSize)
    throw std::invalid_argument("ground set size must be in [1, 20]");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw std::invalid_argument("ground set labels must be unique");
}

GroundSet GroundSet::indexed(int n) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("s" + std::to_string(i));
  return GroundSet(std::move(labels));
}

std::optional<int> GroundSet::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

std::string GroundSet::describe(Subset u) const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int e : u.elements()) {
    if (!first) os << ',';
    os << labels_.at(e);
    first = false;
  }
  os << '}';
  return os.str();
}

Permutation::Permutation(std::vector<int> order) : order_(std::move(order)) {
  std::vector<bool> seen(order_.size(), false);
  for (int e : order_) {
    if (e < 0 || e >= static_cast<int>(order_.size()) || seen[e])
      throw std::invalid_argument("permutation must be a bijection on [n]");
    seen[e] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return Permutation(std::move(order));
}

Subset Permutation::prefix(int i) const {
  Subset u;
  for (int k = 0; k < i; ++k) u = u.with(order_[k]);
  return u;
}

int Permutation::position_of(int e) const {
  auto it = std::find(order_.begin(), order_.end(), e);
  if (it == order_.end()) throw std::out_of_range("element not in permutation");
  return static_cast<int>(it - order_.begin());
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

template <typename Scalar>
SetFunction<Scalar>::SetFunction(GroundSet ground, Vector<Scalar> values)
    : ground_(std::move(ground)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != ground_.subset_count())
    throw std::invalid_argument("set function table must have 2^n entries");
  if (!approx_zero<Scalar>(values_[0])) throw std::invalid_argument("set function must vanish on the empty set");
  values_[0] = Scalar(0);
}

namespace {

// Local exchange test: f(A+i) + f(A+j) >= f(A+i+j) + f(A) for all A and i,j not in A
// is equivalent to submodularity. sign = -1 checks supermodularity.
template <typename Scalar>
std::optional<ModularityViolation> local_violation(const SetFunction<Scalar>& f, int sign) {
  const int n = f.size();
  const Scalar eps = tolerance<Scalar>();
  for (Subset::Mask m = 0; m < f.ground().subset_count(); ++m) {
    Subset a(m);
    for (int i = 0; i < n; ++i) {
      if (a.contains(i)) continue;
      for (int j = i + 1; j < n; ++j) {
        if (a.contains(j)) continue;
        Scalar gap = f(a.with(i)) + f(a.with(j)) - f(a.with(i).with(j)) - f(a);
        if (sign < 0) gap = -gap;
        if (gap < -eps) return ModularityViolation{a, i, j};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

template <typename Scalar>
std::optional<ModularityViolation> submodularity_violation(const SetFunction<Scalar>& f) {
  return local_violation(f, +1);
}

template <typename Scalar>
std::optional<ModularityViolation> supermodularity_violation(const SetFunction<Scalar>& f) {
  return local_violation(f, -1);
}

template <typename Scalar>
bool is_nondecreasing(const SetFunction<Scalar>& f) {
  const Scalar eps = tolerance<Scalar>();
  for (Subset::Mask m = 0; m < f.ground().subset_count(); ++m)
    for (int i = 0; i < f.size(); ++i)
      if (!Subset(m).contains(i) && f(Subset(m).with(i)) < f(Subset(m)) - eps) return false;
  return true;
}

template <typename Scalar>
SetFunction<Scalar> dual_setfunction(const SetFunction<Scalar>& f) {
  const int n = f.size();
  const Scalar top = f(Subset::full(n));
  return SetFunction<Scalar>::tabulate(f.ground(), [&](Subset u) { return top - f(complement(u, n)); });
}

template <typename Scalar>
RatePoint<Scalar> prefix_increments(const SetFunction<Scalar>& f, const Permutation& pi) {
  if (pi.size() != f.size()) throw std::invalid_argument("permutation size does not match ground set");
  RatePoint<Scalar> r(f.size());
  Subset prev;
  for (int i = 0; i < pi.size(); ++i) {
    Subset cur = prev.with(pi[i]);
    r[pi[i]] = f(cur) - f(prev);
    prev = cur;
  }
  return r;
}

template <typename Scalar>
RatePoint<Scalar> contrapolymatroid_vertex(const SetFunction<Scalar>& sigma, const Permutation& pi) {
  if (!is_supermodular(sigma)) throw HypothesisError("contrapolymatroid vertex needs a supermodular function");
  return prefix_increments(sigma, pi);
}

template <typename Scalar>
RatePoint<Scalar> polymatroid_vertex(const SetFunction<Scalar>& rho, const Permutation& pi, int k) {
  if (k < 0 || k > rho.size()) throw std::invalid_argument("polymatroid vertex: k out of range");
  if (!is_submodular(rho)) throw HypothesisError("polymatroid vertex needs a submodular function");
  RatePoint<Scalar> r = prefix_increments(rho, pi);
  for (int i = k; i < pi.size(); ++i) r[pi[i]] = Scalar(0);
  return r;
}

template <typename Scalar>
std::optional<SubsetPair> cross_inequality_violation(const SetFunction<Scalar>& sigma,
                                                     const SetFunction<Scalar>& rho) {
  const Scalar eps = tolerance<Scalar>();
  const auto count = sigma.ground().subset_count();
  for (Subset::Mask tm = 0; tm < count; ++tm) {
    const Subset t(tm);
    for (Subset::Mask um = 0; um < count; ++um) {
      const Subset u(um);
      if ((t & u).empty()) continue;  // reads 0 <= 0
      if (sigma(u) - sigma(u - t) > rho(t) - rho(t - u) + eps) return SubsetPair{t, u};
    }
  }
  return std::nullopt;
}

template <typename Scalar>
RatePoint<Scalar> intersection_vertex(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho,
                                      const Permutation& pi, int j) {
  const int n = sigma.size();
  RatePoint<Scalar> r(n);
  for (int i = 0; i < n; ++i) {
    const Subset before = pi.prefix(i);
    const Subset upto = before.with(pi[i]);
    if (i < j) {
      r[pi[i]] = rho(upto) - rho(before);
    } else {
      r[pi[i]] = sigma(complement(before, n)) - sigma(complement(upto, n));
    }
  }
  return r;
}

template <typename Scalar>
std::vector<RatePoint<Scalar>> intersection_vertices(const SetFunction<Scalar>& sigma,
                                                     const SetFunction<Scalar>& rho) {
  if (!(sigma.ground() == rho.ground())) throw std::invalid_argument("set functions on different ground sets");
  if (!is_supermodular(sigma)) throw HypothesisError("sigma is not supermodular");
  if (!is_submodular(rho)) throw HypothesisError("rho is not submodular");
  if (auto bad = cross_inequality_violation(sigma, rho))
    throw HypothesisError("cross inequality fails at T=" + sigma.ground().describe(bad->t) +
                          ", U=" + sigma.ground().describe(bad->u));
  const int n = sigma.size();
  std::vector<RatePoint<Scalar>> points;
  for (const auto& pi : all_permutations(n))
    for (int j = 0; j <= n; ++j) points.push_back(intersection_vertex(sigma, rho, pi, j));
  return dedup_points(points);
}

template <typename Scalar>
bool points_equal(const RatePoint<Scalar>& a, const RatePoint<Scalar>& b, const Scalar& eps) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!approx_equal<Scalar>(a[i], b[i], eps)) return false;
  return true;
}

template <typename Scalar>
std::vector<RatePoint<Scalar>> dedup_points(const std::vector<RatePoint<Scalar>>& points, const Scalar& eps) {
  std::vector<RatePoint<Scalar>> out;
  for (const auto& p : points) {
    bool dup = std::any_of(out.begin(), out.end(), [&](const auto& q) { return points_equal<Scalar>(p, q, eps); });
    if (!dup) out.push_back(p);
  }
  return out;
}

template <typename Scalar>
GreedyResult<Scalar> greedy_linear_opt(const SetFunction<Scalar>& f, const RatePoint<Scalar>& weights,
                                       OptSense sense, BaseSide side) {
  const int n = f.size();
  if (weights.size() != n) throw std::invalid_argument("weight vector size does not match ground set");
  // Reduce to minimizing w^T R.
  RatePoint<Scalar> w = sense == OptSense::minimize ? RatePoint<Scalar>(weights) : RatePoint<Scalar>(-weights);
  const bool want_nonneg = side == BaseSide::sigma;
  for (int i = 0; i < n; ++i) {
    if (want_nonneg ? w[i] < Scalar(0) : w[i] > Scalar(0))
      throw UnsupportedError("greedy optimization needs sign-definite weights for this base polyhedron");
  }
  if (side == BaseSide::sigma && !is_supermodular(f)) throw HypothesisError("sigma is not supermodular");
  if (side == BaseSide::rho && !is_submodular(f)) throw HypothesisError("rho is not submodular");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // sigma side: heaviest weight takes the smallest increment first.
  // rho side: most negative weight takes the largest increment first.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return want_nonneg ? w[a] > w[b] : w[a] < w[b];
  });
  Permutation pi(order);
  RatePoint<Scalar> r = prefix_increments(f, pi);
  return GreedyResult<Scalar>{r, pi, weights.dot(r)};
}

#define SWNET_INSTANTIATE(S)                                                                                  \
  template class SetFunction<S>;                                                                              \
  template std::optional<ModularityViolation> submodularity_violation(const SetFunction<S>&);                \
  template std::optional<ModularityViolation> supermodularity_violation(const SetFunction<S>&);              \
  template bool is_nondecreasing(const SetFunction<S>&);                                                      \
  template SetFunction<S> dual_setfunction(const SetFunction<S>&);                                            \
  template RatePoint<S> prefix_increments(const SetFunction<S>&, const Permutation&);                         \
  template RatePoint<S> contrapolymatroid_vertex(const SetFunction<S>&, const Permutation&);                  \
  template RatePoint<S> polymatroid_vertex(const SetFunction<S>&, const Permutation&, int);                   \
  template std::optional<SubsetPair> cross_inequality_violation(const SetFunction<S>&, const SetFunction<S>&); \
  template RatePoint<S> intersection_vertex(const SetFunction<S>&, const SetFunction<S>&, const Permutation&, \
                                            int);                                                             \
  template std::vector<RatePoint<S>> intersection_vertices(const SetFunction<S>&, const SetFunction<S>&);     \
  template std::vector<RatePoint<S>> dedup_points(const std::vector<RatePoint<S>>&, const S&);                \
  template bool points_equal(const RatePoint<S>&, const RatePoint<S>&, const S&);                             \
  template GreedyResult<S> greedy_linear_opt(const SetFunction<S>&, const RatePoint<S>&, OptSense, BaseSide);

SWNET_INSTANTIATE(double)
SWNET_INSTANTIATE(Rational)

}  // namespace swnet
