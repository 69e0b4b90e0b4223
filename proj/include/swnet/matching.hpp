#pragma once

// Feasibility and containment conditions between a supermodular sigma and a
// submodular rho, with witnesses on failure, and the resulting classification
// of the intersection {R : sigma(U) <= R(U) <= rho(U), R >= 0}.

#include <optional>
#include <string>

#include "swnet/netflow.hpp"
#include "swnet/sourcemodel.hpp"
#include "swnet/subsetfn.hpp"

namespace swnet {

enum class Outcome { holds, fails, hypothesis_violated };

const char* to_string(Outcome outcome);

template <typename Scalar>
struct Verdict {
  Outcome outcome = Outcome::holds;
  // Violating (T, U) pair. Conditions indexed by a single U report T = U.
  std::optional<SubsetPair> pair;
  // For containment conditions: a vertex of the base polyhedron that falls outside.
  std::optional<RatePoint<Scalar>> vertex;
  std::string diagnostic;

  bool holds() const { return outcome == Outcome::holds; }
};

// sigma(U) <= rho(U) for all U.
template <typename Scalar>
Verdict<Scalar> check_han(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho);

// sigma(U) - sigma(U \ T) <= rho(T) - rho(T \ U) for all T, U. Rejects n > 12.
template <typename Scalar>
Verdict<Scalar> check_cross_inequality(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho);

inline constexpr int kMaxCrossGroundSize = 12;

// sigma(T) - sigma(T \ U) <= rho(U) for nested U ⊆ T.
template <typename Scalar>
Verdict<Scalar> check_sigma_face(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho);
// sigma(S) - sigma(S \ U) <= rho(U).
template <typename Scalar>
Verdict<Scalar> check_sigma_cross(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho);
// sigma(U) <= rho(T) - rho(T \ U) for nested U ⊆ T.
template <typename Scalar>
Verdict<Scalar> check_rho_face(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho);
// sigma(U) <= rho(S) - rho(S \ U).
template <typename Scalar>
Verdict<Scalar> check_rho_cross(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho);

enum class IntersectionType { empty, generic, sigma_contained, rho_contained, both_contained, gp };

const char* to_string(IntersectionType type);

template <typename Scalar>
struct Classification {
  IntersectionType type = IntersectionType::generic;
  bool hypotheses_hold = true;
  Verdict<Scalar> han;
  Verdict<Scalar> cross;
  Verdict<Scalar> sigma_face;
  Verdict<Scalar> rho_face;
};

// With valid hypotheses the label follows from the checkers. Otherwise the
// checkers are silent and an LP feasibility solve separates empty from generic.
template <typename Scalar>
Classification<Scalar> classify_intersection(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho);

// LP feasibility of {sigma(U) <= R(U) <= rho(U) for nonempty U, R >= 0}. No
// hypotheses needed.
template <typename Scalar>
bool intersection_nonempty(const SetFunction<Scalar>& sigma, const SetFunction<Scalar>& rho);

// H(X_{U∩T} | X_{U^c}) <= rho_c(T) - rho_c(T \ U) for all T, U.
Verdict<double> check_conditional_entropy_cross(const JointSource& src, const Network<double>& net);

}  // namespace swnet
