#include "swnet/sourcemodel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace swnet {

JointSource::JointSource(GroundSet ground, std::vector<int> alphabet_sizes, std::vector<double> pmf)
    : ground_(std::move(ground)), alphabet_sizes_(std::move(alphabet_sizes)), pmf_(std::move(pmf)) {
  if (static_cast<int>(alphabet_sizes_.size()) != ground_.size())
    throw std::invalid_argument("one alphabet size per source is required");
  std::size_t cells = 1;
  for (int a : alphabet_sizes_) {
    if (a < 1) throw std::invalid_argument("alphabet sizes must be positive");
    cells *= static_cast<std::size_t>(a);
  }
  if (pmf_.size() != cells) throw std::invalid_argument("pmf size does not match the product alphabet");
  double total = 0.0;
  for (double p : pmf_) {
    if (!(p >= 0.0)) throw std::invalid_argument("pmf entries must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("pmf must sum to one");
}

std::vector<double> JointSource::marginal(Subset u) const {
  const int n = size();
  std::size_t cells = 1;
  for (int i = 0; i < n; ++i)
    if (u.contains(i)) cells *= alphabet_sizes_[i];
  std::vector<double> out(cells, 0.0);
  std::vector<int> digits(n, 0);
  for (double p : pmf_) {
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      if (u.contains(i)) idx = idx * alphabet_sizes_[i] + digits[i];
    out[idx] += p;
    for (int i = n - 1; i >= 0; --i) {
      if (++digits[i] < alphabet_sizes_[i]) break;
      digits[i] = 0;
    }
  }
  return out;
}

JointSource bsc_pair(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bsc_pair: p must lie in [0, 1]");
  const double same = (1.0 - p) / 2.0;
  const double diff = p / 2.0;
  return JointSource(GroundSet::indexed(2), {2, 2}, {same, diff, diff, same});
}

JointSource markov3(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("markov3: p and q must lie in [0, 1]");
  std::vector<double> pmf;
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int x3 = 0; x3 < 2; ++x3) {
        const double pair = x1 == x2 ? (1.0 - p) / 2.0 : p / 2.0;
        pmf.push_back(pair * (x2 == x3 ? 1.0 - q : q));
      }
  return JointSource(GroundSet::indexed(3), {2, 2, 2}, std::move(pmf));
}

JointSource independent_sources(const std::vector<std::vector<double>>& marginals) {
  const int n = static_cast<int>(marginals.size());
  std::vector<int> sizes;
  for (const auto& m : marginals) sizes.push_back(static_cast<int>(m.size()));
  std::vector<double> pmf{1.0};
  for (const auto& m : marginals) {
    std::vector<double> next;
    for (double a : pmf)
      for (double b : m) next.push_back(a * b);
    pmf = std::move(next);
  }
  return JointSource(GroundSet::indexed(n), std::move(sizes), std::move(pmf));
}

namespace {

double entropy_bits(const std::vector<double>& pmf) {
  double h = 0.0;
  for (double p : pmf)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

// All quantities below work from the entropy table H(X_U).
double cmi_from_table(const SetFunction<double>& h, Subset a, Subset b, Subset c) {
  if (a.empty() || b.empty()) return 0.0;
  const double value = h(a | c) + h(b | c) - h(a | b | c) - h(c);
  return value < 0.0 ? 0.0 : value;  // clamp rounding below zero
}

struct ChainPositions {
  std::vector<int> k;  // 1-based positions of U's elements in pi, increasing
};

ChainPositions positions_in(const Permutation& pi, Subset u) {
  ChainPositions out;
  for (int i = 0; i < pi.size(); ++i)
    if (u.contains(pi[i])) out.k.push_back(i + 1);
  return out;
}

// j-th term (1-based) of the vertex-sum identity; k_0 = 0.
double chain_term(const SetFunction<double>& h, const Permutation& pi, Subset u, const ChainPositions& pos,
                  std::size_t j) {
  const int n = pi.size();
  const int k_prev = j == 1 ? 0 : pos.k[j - 2];
  const int k_cur = pos.k[j - 1];
  const Subset a = u - pi.prefix(k_prev);
  const Subset b = pi.prefix(k_cur - 1) - pi.prefix(k_prev);
  const Subset c = complement(pi.prefix(k_cur), n) - u;
  return cmi_from_table(h, a, b, c);
}

std::vector<double> active_terms_from_table(const SetFunction<double>& h, const Permutation& pi, Subset u) {
  const auto pos = positions_in(pi, u);
  std::vector<double> terms;
  for (std::size_t j = 1; j <= pos.k.size(); ++j) terms.push_back(chain_term(h, pi, u, pos, j));
  return terms;
}

}  // namespace

double binary_entropy(double p) { return entropy_bits({p, 1.0 - p}); }

double entropy(const JointSource& src, Subset u) {
  if (u.empty()) return 0.0;
  return entropy_bits(src.marginal(u));
}

double conditional_entropy(const JointSource& src, Subset a, Subset b) {
  return entropy(src, a | b) - entropy(src, b);
}

SetFunction<double> entropy_vector(const JointSource& src) {
  return SetFunction<double>::tabulate(src.ground(), [&](Subset u) { return entropy(src, u); });
}

SetFunction<double> sw_setfunction(const JointSource& src) { return sw_setfunction(entropy_vector(src)); }

double cond_mutual_info(const JointSource& src, Subset a, Subset b, Subset c) {
  if (!(a & b).empty() || !(a & c).empty() || !(b & c).empty())
    throw std::invalid_argument("conditional mutual information needs pairwise disjoint arguments");
  if (a.empty() || b.empty()) return 0.0;
  const double value = entropy(src, a | c) + entropy(src, b | c) - entropy(src, a | b | c) - entropy(src, c);
  return value < 0.0 ? 0.0 : value;
}

VertexSumDecomposition vertex_sum_decomposition(const JointSource& src, const Permutation& pi, Subset u) {
  if (u.empty()) throw std::invalid_argument("vertex-sum decomposition needs a nonempty subset");
  const auto h = entropy_vector(src);
  const int n = src.size();
  const auto pos = positions_in(pi, u);
  VertexSumDecomposition out;
  const Subset cond = complement(pi.prefix(pos.k.front()), n) - u;
  out.base_term = h(u | cond) - h(cond);
  for (std::size_t j = 2; j <= pos.k.size(); ++j) out.mi_terms.push_back(chain_term(h, pi, u, pos, j));
  return out;
}

std::vector<double> active_constraint_terms(const JointSource& src, const Permutation& pi, Subset u) {
  return active_terms_from_table(entropy_vector(src), pi, u);
}

bool is_active_by_ci(const JointSource& src, const Permutation& pi, Subset u, double eps) {
  for (double t : active_constraint_terms(src, pi, u))
    if (t > eps) return false;
  return true;
}

std::vector<std::size_t> VertexReport::multiplicity() const {
  std::vector<std::size_t> out;
  for (const auto& perms : permutations) out.push_back(perms.size());
  return out;
}

VertexReport enumerate_sw_vertices(const JointSource& src, double eps) {
  const int n = src.size();
  if (n > kMaxEnumeratedSources) throw std::invalid_argument("vertex enumeration is limited to 8 sources");
  const auto h = entropy_vector(src);
  const auto sigma = sw_setfunction(h);
  VertexReport report;
  for (const auto& pi : all_permutations(n)) {
    const RatePoint<double> r = prefix_increments(sigma, pi);
    std::size_t idx = 0;
    while (idx < report.distinct_vertices.size() && !points_equal<double>(report.distinct_vertices[idx], r, eps))
      ++idx;
    if (idx == report.distinct_vertices.size()) {
      report.distinct_vertices.push_back(r);
      report.permutations.push_back({pi});
      std::vector<Subset> active;
      for (Subset::Mask m = 1; m < src.ground().subset_count(); ++m) {
        const Subset u(m);
        bool by_ci = true;
        for (double t : active_terms_from_table(h, pi, u))
          if (t > kCiTolerance) by_ci = false;
        const bool numeric = std::abs(subset_sum(r, u) - sigma(u)) <= eps;
        if (by_ci != numeric) report.ci_matches_numeric = false;
        if (by_ci) active.push_back(u);
      }
      report.active_sets.push_back(std::move(active));
    } else {
      report.permutations[idx].push_back(pi);
    }
  }
  return report;
}

}  // namespace swnet
