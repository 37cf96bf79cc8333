#pragma once

namespace extsum {

// Regularized incomplete beta function I_x(a, b), evaluated with the
// continued-fraction expansion (modified Lentz). a, b > 0; x in [0, 1].
double incbeta(double a, double b, double x);

// Standard normal CDF.
double normal_cdf(double z);

// Two-sided or one-sided p-value for Student's t with df degrees of freedom.
double t_pvalue(double t, double df, int tails);

// Upper-tail probability P(F >= f) for the F distribution.
double f_sf(double f, double df1, double df2);

}  // namespace extsum
