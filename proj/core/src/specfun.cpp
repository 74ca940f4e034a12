#include "csls/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csls/errors.hpp"

namespace csls {

namespace {

void check_params(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InputError("incomplete beta: parameters must be positive and finite");
  }
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Modified Lentz evaluation of the continued fraction for I(x; a, b),
// convergent for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 100000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) return h;
  }
  throw NumericalError("incomplete beta: continued fraction did not converge");
}

// Density of the Beta(a, b) law, the derivative of I(.; a, b).
double beta_density(double x, double a, double b) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b));
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
  check_params(a, b);
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("incomplete beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double inv_reg_inc_beta(double y, double a, double b) {
  check_params(a, b);
  if (!(y >= 0.0 && y <= 1.0)) throw InputError("inverse incomplete beta: y outside [0, 1]");
  if (y == 0.0) return 0.0;
  if (y == 1.0) return 1.0;

  // Bracketed Newton: a Newton step is accepted only if it stays strictly
  // inside the current bracket, otherwise bisect.
  double lo = 0.0;
  double hi = 1.0;
  double x = 0.5;
  for (int iter = 0; iter < 400; ++iter) {
    const double f = reg_inc_beta(x, a, b) - y;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double dens = beta_density(x, a, b);
    double next = (dens > 0.0 && std::isfinite(dens)) ? x - f / dens : -1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * x || hi - lo <= std::numeric_limits<double>::min()) {
      break;
    }
  }
  return x;
}

CapGeometry cap_geometry(double epsilon, int n) {
  if (!(epsilon >= 0.0)) throw InputError("cap measure epsilon must be >= 0");
  if (n < 2) throw InputError("cap geometry needs dimension n >= 2");
  CapGeometry g;
  g.epsilon = epsilon;
  if (epsilon == 0.0) return g;
  if (2.0 * epsilon >= 1.0) {
    // At 2 eps = 1 the cap is a hemisphere (delta = 0); beyond it the
    // inverse has no solution. Either way the bound built on it is vacuous.
    g.delta = 0.0;
    g.d = std::sqrt(2.0);
    g.degenerate = true;
    return g;
  }
  // w = I^-1(2 eps): delta = sqrt(1 - w) and 2 - 2 delta = 2 w / (1 + delta).
  const double w = inv_reg_inc_beta(2.0 * epsilon, 0.5 * (n - 1), 0.5);
  g.delta = std::sqrt(std::max(0.0, 1.0 - w));
  g.d = std::sqrt(2.0 * w / (1.0 + g.delta));
  return g;
}

double cap_delta(double epsilon, int n) { return cap_geometry(epsilon, n).delta; }

double cap_chord(double epsilon, int n) { return cap_geometry(epsilon, n).d; }

}  // namespace csls
