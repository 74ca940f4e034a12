#pragma once

// Dense linear algebra for small n x n matrices (n <= kMaxDimension).
//
// Everything here is a value type; results never alias their inputs.

#include <cstddef>
#include <span>
#include <vector>

namespace csls {

namespace tolerance {
/// Relative reconstruction residual guaranteed by eig_sym and cholesky.
inline constexpr double kDecomposition = 1e-10;
/// Cyclic Jacobi sweep cap before eig_sym gives up.
inline constexpr int kJacobiMaxSweeps = 100;
}  // namespace tolerance

inline constexpr int kMaxDimension = 8;

using Vector = std::vector<double>;

/// General square matrix, row-major storage.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n);
  SquareMatrix(int n, std::vector<double> row_major);

  static SquareMatrix identity(int n);

  [[nodiscard]] int dim() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  [[nodiscard]] std::span<const double> data() const { return a_; }

  [[nodiscard]] SquareMatrix transpose() const;
  [[nodiscard]] bool all_finite() const;

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<double> a_;
};

/// Symmetric matrix storing only the upper triangle, packed row by row:
/// (0,0) (0,1) ... (0,n-1) (1,1) ... (n-1,n-1).
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n);
  SymMatrix(int n, std::vector<double> packed_upper);

  static SymMatrix identity(int n);
  static SymMatrix diagonal(std::span<const double> d);
  /// Symmetric part of a square matrix, (M + M^T)/2.
  static SymMatrix from_square(const SquareMatrix& m);
  /// x x^T.
  static SymMatrix outer(std::span<const double> x);

  [[nodiscard]] int dim() const { return n_; }
  [[nodiscard]] static std::size_t packed_size(int n) {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2;
  }
  [[nodiscard]] static std::size_t packed_index(int n, int i, int j);

  double& operator()(int i, int j) { return p_[packed_index(n_, i, j)]; }
  double operator()(int i, int j) const { return p_[packed_index(n_, i, j)]; }

  [[nodiscard]] std::span<const double> packed() const { return p_; }
  [[nodiscard]] std::span<double> packed() { return p_; }

  [[nodiscard]] SquareMatrix to_square() const;
  [[nodiscard]] bool all_finite() const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<double> p_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  SquareMatrix eigenvectors;        // column k pairs with eigenvalues[k]
};

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);
SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b);
SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b);
SquareMatrix operator*(double s, const SquareMatrix& a);
Vector operator*(const SquareMatrix& a, std::span<const double> x);
SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);

/// x^T P x.
double quad_form(const SymMatrix& p, std::span<const double> x);
/// A^T P A, symmetric by construction.
SymMatrix congruence(const SquareMatrix& a, const SymMatrix& p);
/// Frobenius inner product <A, B> = trace(A B).
double frobenius_dot(const SymMatrix& a, const SymMatrix& b);
double frobenius_norm(const SymMatrix& a);
double frobenius_norm(const SquareMatrix& a);

/// Cyclic Jacobi eigendecomposition. Throws NumericalError on non-finite
/// input or when the sweep cap is hit.
EigenDecomposition eig_sym(const SymMatrix& m);

/// Returns lower-triangular L with L L^T = P. Throws NumericalError
/// ("not positive definite") on a non-positive pivot.
SquareMatrix cholesky(const SymMatrix& p);

/// Largest singular value, sqrt(lambda_max(A^T A)).
double spectral_norm(const SquareMatrix& a);

/// Largest eigenvalue modulus of a general square matrix. Closed form for
/// n <= 2; normalized repeated squaring otherwise.
double spectral_radius(const SquareMatrix& a);

/// Frobenius-nearest matrix whose spectrum lies in [lo, hi].
SymMatrix project_psd_box(const SymMatrix& m, double lo, double hi);

/// Smallest t with S <= t P, i.e. lambda_max(L^-1 S L^-T) for P = L L^T.
double max_generalized_eig(const SymMatrix& s, const SymMatrix& p);

/// Reassemble Q diag(lambda) Q^T.
SymMatrix reconstruct(const EigenDecomposition& e);

}  // namespace csls
