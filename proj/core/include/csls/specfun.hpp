#pragma once

// Regularized incomplete beta function and the spherical-cap geometry built
// on it.

namespace csls {

/// I(x; a, b). Absolute error <= 1e-12. Throws InputError outside
/// x in [0, 1], a > 0, b > 0.
double reg_inc_beta(double x, double a, double b);

/// x in [0, 1] with I(x; a, b) = y, |I(x) - y| <= 1e-10.
double inv_reg_inc_beta(double y, double a, double b);

/// Height threshold and chord bound of the spherical cap of measure epsilon
/// on the unit sphere in R^n.
struct CapGeometry {
  double epsilon = 0.0;
  double delta = 1.0;  // cap is {x : c^T x > |c| delta}
  double d = 0.0;      // sqrt(2 - 2 delta)
  /// epsilon >= 1/2: delta saturates at 0 and d at sqrt(2).
  bool degenerate = false;
};

/// Throws InputError for epsilon < 0 or n < 2.
CapGeometry cap_geometry(double epsilon, int n);

/// delta(epsilon) = sqrt(1 - I^-1(2 epsilon; (n-1)/2, 1/2)).
double cap_delta(double epsilon, int n);

/// d(epsilon) = sqrt(2 - 2 delta(epsilon)), evaluated without cancellation.
double cap_chord(double epsilon, int n);

}  // namespace csls
