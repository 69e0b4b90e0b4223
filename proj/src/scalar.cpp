#include "swnet/scalar.hpp"

#include <atomic>
#include <cstdio>
#include <stdexcept>

namespace swnet {

namespace {
std::atomic<double> g_float_tolerance{1e-9};
}  // namespace

double float_tolerance() { return g_float_tolerance.load(std::memory_order_relaxed); }

void set_float_tolerance(double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
  g_float_tolerance.store(eps, std::memory_order_relaxed);
}

Rational rationalize(double x, double max_error) {
  using boost::multiprecision::mpz_int;
  if (!std::isfinite(x)) throw std::invalid_argument("cannot rationalize a non-finite value");
  const Rational exact(x);  // doubles are dyadic rationals
  const Rational err = Rational(max_error);
  mpz_int num = boost::multiprecision::numerator(exact);
  mpz_int den = boost::multiprecision::denominator(exact);
  // Convergents h/k of the continued fraction of num/den.
  mpz_int h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  while (true) {
    mpz_int a = num / den;
    if (num < 0 && a * den != num) a -= 1;  // floor
    mpz_int h = a * h_prev + h_prev2;
    mpz_int k = a * k_prev + k_prev2;
    Rational approx(h, k);
    const Rational diff = approx - exact;
    if (abs(diff) <= err) return approx;
    mpz_int rem = num - a * den;
    if (rem == 0) return approx;
    num = den;
    den = rem;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
}

std::string format_scalar(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_scalar(const Rational& x) { return x.str(); }

}  // namespace swnet
