#pragma once

#include <cmath>
#include <string>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace swnet {

using Rational = boost::multiprecision::mpq_rational;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class OptSense { minimize, maximize };

template <typename Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

// Comparison tolerance for floating point mode. Exact mode always compares
// with zero slack.
double float_tolerance();
void set_float_tolerance(double eps);

class ScopedTolerance {
 public:
  explicit ScopedTolerance(double eps) : saved_(float_tolerance()) { set_float_tolerance(eps); }
  ~ScopedTolerance() { set_float_tolerance(saved_); }
  ScopedTolerance(const ScopedTolerance&) = delete;
  ScopedTolerance& operator=(const ScopedTolerance&) = delete;

 private:
  double saved_;
};

template <typename Scalar>
Scalar tolerance() {
  if constexpr (is_exact_v<Scalar>) {
    return Scalar(0);
  } else {
    return Scalar(float_tolerance());
  }
}

template <typename Scalar>
bool approx_zero(const Scalar& x, const Scalar& eps = tolerance<Scalar>()) {
  return x <= eps && -x <= eps;
}

template <typename Scalar>
bool approx_equal(const Scalar& a, const Scalar& b, const Scalar& eps = tolerance<Scalar>()) {
  return approx_zero<Scalar>(a - b, eps);
}

// a <= b up to tolerance.
template <typename Scalar>
bool approx_leq(const Scalar& a, const Scalar& b, const Scalar& eps = tolerance<Scalar>()) {
  return a <= b + eps;
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// Best rational approximation of x with |x - r| <= max_error (continued fractions).
Rational rationalize(double x, double max_error = 1e-12);

template <typename Scalar>
Scalar from_double(double x) {
  if constexpr (is_exact_v<Scalar>) {
    return rationalize(x);
  } else {
    return x;
  }
}

template <typename To, typename From>
To scalar_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (is_exact_v<To>) {
    return rationalize(to_double(x));
  } else {
    return static_cast<To>(to_double(x));
  }
}

template <typename To, typename From>
Vector<To> vector_cast(const Vector<From>& v) {
  Vector<To> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = scalar_cast<To>(v[i]);
  return out;
}

std::string format_scalar(double x);
std::string format_scalar(const Rational& x);

}  // namespace swnet
