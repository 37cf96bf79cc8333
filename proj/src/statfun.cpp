#include "extsum/statfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace extsum {

namespace {

// Continued fraction for I_x(a, b) by the modified Lentz method.
double incbeta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double eps = std::numeric_limits<double>::epsilon();
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 10.0 * eps) break;
  }
  return h;
}

}  // namespace

double incbeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("incbeta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("incbeta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x));
  // The continued fraction converges fast for x < (a+1)/(a+b+2); otherwise
  // use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * incbeta_cf(a, b, x) / a;
  }
  return 1.0 - front * incbeta_cf(b, a, 1.0 - x) / b;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double t_pvalue(double t, double df, int tails) {
  if (tails != 1 && tails != 2) {
    throw std::invalid_argument("t_pvalue: tails must be 1 or 2");
  }
  if (df <= 0.0) throw std::invalid_argument("t_pvalue: df must be positive");
  // P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2)
  double x = df / (df + t * t);
  double two_sided = incbeta(0.5 * df, 0.5, x);
  return tails == 2 ? two_sided : 0.5 * two_sided;
}

double f_sf(double f, double df1, double df2) {
  if (df1 <= 0.0 || df2 <= 0.0) {
    throw std::invalid_argument("f_sf: degrees of freedom must be positive");
  }
  if (f <= 0.0) return 1.0;
  // P(F >= f) = I_{df2/(df2 + df1 f)}(df2/2, df1/2)
  return incbeta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f));
}

}  // namespace extsum
