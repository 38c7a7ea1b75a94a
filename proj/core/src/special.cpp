#include "cellcert/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cellcert {
namespace {

constexpr double kInvSqrtPi = 0.564189583547756286948;  // 1/sqrt(pi)
constexpr double kSqrt2 = std::numbers::sqrt2;

// Maclaurin series; converges to full precision for |t| <= 2.
double erf_series(double t) {
  const double t2 = t * t;
  double term = t;
  double sum = 0.0;
  for (int n = 0; n < 200; ++n) {
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    term *= -t2 / (n + 1);
  }
  return 2.0 * kInvSqrtPi * sum;
}

// Laplace continued fraction for sqrt(pi) * exp(t^2) * erfc(t), t >= 2:
//   F(t) = 1 / (t + (1/2)/(t + (2/2)/(t + (3/2)/(t + ...))))
// evaluated with the modified Lentz algorithm.
double erfcx_cf(double t) {
  const double tiny = 1e-300;
  double f = tiny;
  double c = tiny;
  double d = 0.0;
  for (int n = 1; n <= 300; ++n) {
    const double a = n == 1 ? 1.0 : (n - 1) / 2.0;
    d = t + a * d;
    if (d == 0.0) d = tiny;
    c = t + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return kInvSqrtPi * f;
}

}  // namespace

double erf(double t) {
  if (std::isnan(t)) throw std::invalid_argument("erf: NaN input");
  const double a = std::abs(t);
  double v;
  if (a <= 2.0) {
    v = erf_series(a);
  } else if (a >= 30.0) {
    v = 1.0;
  } else {
    v = 1.0 - std::exp(-a * a) * erfcx_cf(a);
  }
  return t < 0 ? -v : v;
}

double erfc(double t) {
  if (std::isnan(t)) throw std::invalid_argument("erfc: NaN input");
  if (t < 0) return 2.0 - erfc(-t);
  if (t <= 2.0) return 1.0 - erf_series(t);
  const double e = -t * t;
  if (e < -745.0) return 0.0;
  return std::exp(e) * erfcx_cf(t);
}

double erfcx(double t) {
  if (std::isnan(t)) throw std::invalid_argument("erfcx: NaN input");
  if (t >= 2.0) return erfcx_cf(t);
  if (t < -26.0) throw OverflowDomain("erfcx: overflow for t < -26");
  return std::exp(t * t) * (1.0 - erf_series(std::abs(t)) * (t < 0 ? -1.0 : 1.0));
}

double gauss_tail(double a) {
  if (std::isnan(a)) throw std::invalid_argument("gauss_tail: NaN input");
  return 0.5 * erfc(a / kSqrt2);
}

double gauss_hazard(double t) {
  if (std::isnan(t)) throw std::invalid_argument("gauss_hazard: NaN input");
  if (t >= 0.0) {
    return std::sqrt(2.0 / std::numbers::pi) / erfcx(t / kSqrt2);
  }
  const double phi =
      std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
  return phi / gauss_tail(t);
}

}  // namespace cellcert
