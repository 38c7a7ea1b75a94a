#pragma once

#include "cellcert/errors.hpp"

namespace cellcert {

/// Gauss error function (1/sqrt(pi)) * integral of exp(-x^2) over [-t, t].
/// Maclaurin series for |t| <= 2, continued fraction beyond; absolute error
/// below 1e-12 everywhere, relative error ~1e-13 on the series range.
double erf(double t);

/// 1 - erf(t), with full relative accuracy on the decaying side (t > 0).
double erfc(double t);

/// exp(t^2) * erfc(t); the scaled form that never underflows for t >= 0.
double erfcx(double t);

/// Standard normal upper tail Q(a) = P(gamma >= a), gamma ~ N(0,1).
double gauss_tail(double a);

/// Mills-ratio reciprocal phi(t)/Q(t); stable for arbitrarily large t.
double gauss_hazard(double t);

}  // namespace cellcert
