#include "swnet/matching.hpp"

#include "swnet/errors.hpp"
#include "swnet/lp.hpp"

namespace swnet {

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::holds:
      return "holds";
    case Outcome::fails:
      return "fails";
    case Outcome::hypothesis_violated:
      return "hypothesis_violated";
  }
  return "unknown";
}

const char* to_string(IntersectionType type) {
  switch (type) {
    case IntersectionType::empty:
      return "empty";
    case IntersectionType::generic:
      return "generic";
    case IntersectionType::sigma_contained:
      return "Bsigma-contained";
    case IntersectionType::rho_contained:
      return "Brho-contained";
    case IntersectionType::both_contained:
      return "both-contained";
    case IntersectionType::gp:
      return "gp";
  }
  return "unknown";
}

namespace {

template <typename Scalar>
std::optional<Verdict<Scalar>> hypothesis_failure(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho) {
  if (!(sigma.ground() == rho.ground())) throw std::invalid_argument("set functions on different ground sets");
  const auto& g = sigma.ground();
  Verdict<Scalar> v;
  v.outcome = Outcome::hypothesis_violated;
  if (auto bad = supermodularity_violation(sigma)) {
    v.diagnostic = "sigma is not supermodular at base " + g.describe(bad->base) + " with elements " +
                   g.label(bad->first) + ", " + g.label(bad->second);
    return v;
  }
  if (auto bad = submodularity_violation(rho)) {
    v.diagnostic = "rho is not submodular at base " + g.describe(bad->base) + " with elements " +
                   g.label(bad->first) + ", " + g.label(bad->second);
    return v;
  }
  return std::nullopt;
}

template <typename Scalar>
Verdict<Scalar> failure(const GroundSet& g, Subset t, Subset u, std::string what) {
  Verdict<Scalar> v;
  v.outcome = Outcome::fails;
  v.pair = SubsetPair{t, u};
  v.diagnostic = what + " fails at T=" + g.describe(t) + ", U=" + g.describe(u);
  return v;
}

// Permutation listing the elements of each block in turn.
Permutation blocks(int n, std::initializer_list<Subset> parts) {
  std::vector<int> order;
  for (Subset part : parts)
    for (int e : part.elements()) order.push_back(e);
  if (static_cast<int>(order.size()) != n) throw std::logic_error("blocks do not partition the ground set");
  return Permutation(std::move(order));
}

}  // namespace

template <typename Scalar>
Verdict<Scalar> check_han(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho) {
  if (auto bad = hypothesis_failure(sigma, rho)) return *bad;
  for (Subset::Mask m = 0; m < sigma.ground().subset_count(); ++m) {
    const Subset u(m);
    if (!approx_leq<Scalar>(sigma(u), rho(u))) return failure<Scalar>(sigma.ground(), u, u, "sigma(U) <= rho(U)");
  }
  return {};
}

template <typename Scalar>
Verdict<Scalar> check_cross_inequality(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho) {
  if (sigma.size() > kMaxCrossGroundSize)
    throw UnsupportedError("cross inequality scan is limited to 12 sources");
  if (auto bad = hypothesis_failure(sigma, rho)) return *bad;
  if (auto pair = cross_inequality_violation(sigma, rho))
    return failure<Scalar>(sigma.ground(), pair->t, pair->u, "cross inequality");
  return {};
}

template <typename Scalar>
Verdict<Scalar> check_sigma_face(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho) {
  if (auto bad = hypothesis_failure(sigma, rho)) return *bad;
  const int n = sigma.size();
  for (Subset::Mask tm = 0; tm < sigma.ground().subset_count(); ++tm) {
    const Subset t(tm);
    // Enumerate U ⊆ T.
    for (Subset::Mask um = tm;; um = (um - 1) & tm) {
      const Subset u(um);
      if (!approx_leq<Scalar>(sigma(t) - sigma(t - u), rho(u))) {
        auto v = failure<Scalar>(sigma.ground(), t, u, "sigma face condition");
        v.vertex = contrapolymatroid_vertex(sigma, blocks(n, {t - u, u, complement(t, n)}));
        return v;
      }
      if (um == 0) break;
    }
  }
  return {};
}

template <typename Scalar>
Verdict<Scalar> check_sigma_cross(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho) {
  if (auto bad = hypothesis_failure(sigma, rho)) return *bad;
  const int n = sigma.size();
  const Subset s = Subset::full(n);
  for (Subset::Mask m = 0; m < sigma.ground().subset_count(); ++m) {
    const Subset u(m);
    if (!approx_leq<Scalar>(sigma(s) - sigma(s - u), rho(u))) {
      auto v = failure<Scalar>(sigma.ground(), s, u, "sigma cross condition");
      v.vertex = contrapolymatroid_vertex(sigma, blocks(n, {s - u, u}));
      return v;
    }
  }
  return {};
}

template <typename Scalar>
Verdict<Scalar> check_rho_face(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho) {
  if (auto bad = hypothesis_failure(sigma, rho)) return *bad;
  const int n = sigma.size();
  for (Subset::Mask tm = 0; tm < sigma.ground().subset_count(); ++tm) {
    const Subset t(tm);
    for (Subset::Mask um = tm;; um = (um - 1) & tm) {
      const Subset u(um);
      if (!approx_leq<Scalar>(sigma(u), rho(t) - rho(t - u))) {
        auto v = failure<Scalar>(sigma.ground(), t, u, "rho face condition");
        v.vertex = polymatroid_vertex(rho, blocks(n, {t - u, u, complement(t, n)}), n);
        return v;
      }
      if (um == 0) break;
    }
  }
  return {};
}

template <typename Scalar>
Verdict<Scalar> check_rho_cross(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho) {
  if (auto bad = hypothesis_failure(sigma, rho)) return *bad;
  const int n = sigma.size();
  const Subset s = Subset::full(n);
  for (Subset::Mask m = 0; m < sigma.ground().subset_count(); ++m) {
    const Subset u(m);
    if (!approx_leq<Scalar>(sigma(u), rho(s) - rho(s - u))) {
      auto v = failure<Scalar>(sigma.ground(), s, u, "rho cross condition");
      v.vertex = polymatroid_vertex(rho, blocks(n, {s - u, u}), n);
      return v;
    }
  }
  return {};
}

template <typename Scalar>
bool intersection_nonempty(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho) {
  const int n = sigma.size();
  LpModel<Scalar> model;
  for (int i = 0; i < n; ++i) model.add_variable(sigma.ground().label(i), Scalar(0), std::nullopt);
  for (Subset::Mask m = 1; m < sigma.ground().subset_count(); ++m) {
    std::vector<std::pair<int, Scalar>> terms;
    for (int e : Subset(m).elements()) terms.emplace_back(e, Scalar(1));
    model.add_row("lo" + std::to_string(m), terms, RowSense::greater_equal, sigma(Subset(m)));
    model.add_row("hi" + std::to_string(m), terms, RowSense::less_equal, rho(Subset(m)));
  }
  return lp_solve(model).status == LpStatus::optimal;
}

template <typename Scalar>
Classification<Scalar> classify_intersection(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho) {
  Classification<Scalar> c;
  c.han = check_han(sigma, rho);
  if (c.han.outcome == Outcome::hypothesis_violated) {
    c.hypotheses_hold = false;
    c.cross = c.sigma_face = c.rho_face = c.han;
    c.type = intersection_nonempty(sigma, rho) ? IntersectionType::generic : IntersectionType::empty;
    return c;
  }
  c.cross = check_cross_inequality(sigma, rho);
  c.sigma_face = check_sigma_face(sigma, rho);
  c.rho_face = check_rho_face(sigma, rho);
  if (!c.han.holds()) {
    c.type = IntersectionType::empty;
  } else if (c.cross.holds()) {
    c.type = IntersectionType::gp;
  } else if (c.sigma_face.holds() && c.rho_face.holds()) {
    c.type = IntersectionType::both_contained;
  } else if (c.sigma_face.holds()) {
    c.type = IntersectionType::sigma_contained;
  } else if (c.rho_face.holds()) {
    c.type = IntersectionType::rho_contained;
  } else {
    c.type = IntersectionType::generic;
  }
  return c;
}

Verdict<double> check_conditional_entropy_cross(const JointSource& src, const Network<double>& net) {
  const int n = src.size();
  if (n != net.source_count()) throw std::invalid_argument("source model and network disagree on the source count");
  if (n > kMaxCrossGroundSize) throw UnsupportedError("cross inequality scan is limited to 12 sources");
  const auto rho = rho_c(net, net.sink());
  const double eps = float_tolerance();
  const std::size_t count = std::size_t{1} << n;
  for (Subset::Mask tm = 0; tm < count; ++tm) {
    const Subset t(tm);
    for (Subset::Mask um = 0; um < count; ++um) {
      const Subset u(um);
      const double lhs = conditional_entropy(src, u & t, complement(u, n));
      if (lhs > rho(t) - rho(t - u) + eps)
        return failure<double>(src.ground(), t, u, "conditional entropy cross condition");
    }
  }
  return {};
}

#define SWNET_INSTANTIATE(S)                                                                             \
  template Verdict<S> check_han(const SetFunction<S>&, const SetFunction<S>&);                          \
  template Verdict<S> check_cross_inequality(const SetFunction<S>&, const SetFunction<S>&);             \
  template Verdict<S> check_sigma_face(const SetFunction<S>&, const SetFunction<S>&);                   \
  template Verdict<S> check_sigma_cross(const SetFunction<S>&, const SetFunction<S>&);                  \
  template Verdict<S> check_rho_face(const SetFunction<S>&, const SetFunction<S>&);                     \
  template Verdict<S> check_rho_cross(const SetFunction<S>&, const SetFunction<S>&);                    \
  template bool intersection_nonempty(const SetFunction<S>&, const SetFunction<S>&);                    \
  template Classification<S> classify_intersection(const SetFunction<S>&, const SetFunction<S>&);

SWNET_INSTANTIATE(double)
SWNET_INSTANTIATE(Rational)

}  // namespace swnet
