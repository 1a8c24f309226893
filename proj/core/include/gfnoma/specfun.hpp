#pragma once

#include "gfnoma/quadrature.hpp"

namespace gfnoma::specfun {

// Upper incomplete gamma Gamma(a, x). Negative parameters (needed for the
// channel-estimation closed forms, a = 2/alpha - 1) are lifted through the
// recurrence Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x}) / a.
double upper_inc_gamma(double a, double x);

// Gauss hypergeometric F(1, b; b+1; x) for x <= 0, b > 0, evaluated from the
// integral representation b * int_0^1 t^{b-1} / (1 - x t) dt.
double gauss_2f1_one(double b, double x);

// Exponential integral Ei(x) for x < 0.
double exp_integral_ei(double x);

}  // namespace gfnoma::specfun
