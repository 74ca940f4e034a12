#include "csls/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <string>

#include "csls/errors.hpp"

namespace csls {

namespace {

void require_dim(int n) {
  if (n < 0 || n > kMaxDimension) {
    throw InputError("matrix dimension " + std::to_string(n) + " outside [0, " +
                     std::to_string(kMaxDimension) + "]");
  }
}

void require_same(int a, int b) {
  if (a != b) throw InputError("matrix dimension mismatch");
}

// Full (unpacked) symmetric working copy used by the Jacobi iteration.
std::vector<double> unpack(const SymMatrix& m) {
  const int n = m.dim();
  std::vector<double> a(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] = m(i, j);
  }
  return a;
}

}  // namespace

SquareMatrix::SquareMatrix(int n) : n_(n) {
  require_dim(n);
  a_.assign(static_cast<std::size_t>(n * n), 0.0);
}

SquareMatrix::SquareMatrix(int n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
  require_dim(n);
  if (a_.size() != static_cast<std::size_t>(n * n)) {
    throw InputError("square matrix expects " + std::to_string(n * n) + " entries");
  }
}

SquareMatrix SquareMatrix::identity(int n) {
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::transpose() const {
  SquareMatrix t(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

bool SquareMatrix::all_finite() const {
  return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
}

SymMatrix::SymMatrix(int n) : n_(n) {
  require_dim(n);
  p_.assign(packed_size(n), 0.0);
}

SymMatrix::SymMatrix(int n, std::vector<double> packed_upper) : n_(n), p_(std::move(packed_upper)) {
  require_dim(n);
  if (p_.size() != packed_size(n)) {
    throw InputError("symmetric matrix expects " + std::to_string(packed_size(n)) +
                     " packed entries");
  }
}

std::size_t SymMatrix::packed_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // Rows 0..i-1 hold n, n-1, ..., n-i+1 entries.
  const auto ui = static_cast<std::size_t>(i);
  const auto un = static_cast<std::size_t>(n);
  return ui * un - ui * (ui - 1) / 2 + static_cast<std::size_t>(j - i);
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

SymMatrix SymMatrix::from_square(const SquareMatrix& a) {
  SymMatrix m(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = i; j < a.dim(); ++j) m(i, j) = 0.5 * (a(i, j) + a(j, i));
  }
  return m;
}

SymMatrix SymMatrix::outer(std::span<const double> x) {
  SymMatrix m(static_cast<int>(x.size()));
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = i; j < m.dim(); ++j) {
      m(i, j) = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    }
  }
  return m;
}

SquareMatrix SymMatrix::to_square() const {
  SquareMatrix a(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) a(i, j) = (*this)(i, j);
  }
  return a;
}

bool SymMatrix::all_finite() const {
  return std::all_of(p_.begin(), p_.end(), [](double v) { return std::isfinite(v); });
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  require_same(a.dim(), b.dim());
  const int n = a.dim();
  SquareMatrix c(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
  require_same(a.dim(), b.dim());
  SquareMatrix c(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) + b(i, j);
  }
  return c;
}

SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
  return a + (-1.0) * b;
}

SquareMatrix operator*(double s, const SquareMatrix& a) {
  SquareMatrix c(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) c(i, j) = s * a(i, j);
  }
  return c;
}

Vector operator*(const SquareMatrix& a, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(a.dim())) throw InputError("vector dimension mismatch");
  Vector y(x.size(), 0.0);
  for (int i = 0; i < a.dim(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  require_same(a.dim(), b.dim());
  SymMatrix c = a;
  auto cp = c.packed();
  auto bp = b.packed();
  for (std::size_t k = 0; k < cp.size(); ++k) cp[k] += bp[k];
  return c;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return a + (-1.0) * b; }

SymMatrix operator*(double s, const SymMatrix& a) {
  SymMatrix c = a;
  for (double& v : c.packed()) v *= s;
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("vector dimension mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double quad_form(const SymMatrix& p, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(p.dim())) throw InputError("vector dimension mismatch");
  const int n = p.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    s += p(i, i) * xi * xi;
    for (int j = i + 1; j < n; ++j) s += 2.0 * p(i, j) * xi * x[static_cast<std::size_t>(j)];
  }
  return s;
}

SymMatrix congruence(const SquareMatrix& a, const SymMatrix& p) {
  require_same(a.dim(), p.dim());
  const SquareMatrix pa = p.to_square() * a;
  const int n = a.dim();
  SymMatrix r(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a(k, i) * pa(k, j);
      r(i, j) = s;
    }
  }
  return r;
}

double frobenius_dot(const SymMatrix& a, const SymMatrix& b) {
  require_same(a.dim(), b.dim());
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    s += a(i, i) * b(i, i);
    for (int j = i + 1; j < a.dim(); ++j) s += 2.0 * a(i, j) * b(i, j);
  }
  return s;
}

double frobenius_norm(const SymMatrix& a) { return std::sqrt(frobenius_dot(a, a)); }

double frobenius_norm(const SquareMatrix& a) {
  const auto d = a.data();
  return std::sqrt(std::inner_product(d.begin(), d.end(), d.begin(), 0.0));
}

EigenDecomposition eig_sym(const SymMatrix& m) {
  if (!m.all_finite()) throw NumericalError("eig_sym: non-finite entries");
  const int n = m.dim();
  std::vector<double> a = unpack(m);
  SquareMatrix q = SquareMatrix::identity(n);
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i * n + j)]; };

  double total = 0.0;
  for (double v : a) total += v * v;

  bool converged = n <= 1;
  for (int sweep = 0; sweep < tolerance::kJacobiMaxSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off <= 1e-32 * total || off == 0.0) {
      converged = true;
      break;
    }
    for (int p = 0; p < n; ++p) {
      for (int r = p + 1; r < n; ++r) {
        const double apr = at(p, r);
        if (apr == 0.0) continue;
        // Symmetric Schur 2x2: choose (c, s) annihilating a(p, r).
        const double theta = (at(r, r) - at(p, p)) / (2.0 * apr);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akr = at(k, r);
          at(k, p) = c * akp - s * akr;
          at(k, r) = s * akp + c * akr;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double ark = at(r, k);
          at(p, k) = c * apk - s * ark;
          at(r, k) = s * apk + c * ark;
        }
        for (int k = 0; k < n; ++k) {
          const double qkp = q(k, p);
          const double qkr = q(k, r);
          q(k, p) = c * qkp - s * qkr;
          q(k, r) = s * qkp + c * qkr;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off > 1e-32 * total && off != 0.0) throw NumericalError("eig_sym: Jacobi sweep cap reached");
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return at(x, x) < at(y, y); });

  EigenDecomposition e;
  e.eigenvalues.resize(static_cast<std::size_t>(n));
  e.eigenvectors = SquareMatrix(n);
  for (int k = 0; k < n; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    e.eigenvalues[static_cast<std::size_t>(k)] = at(src, src);
    for (int i = 0; i < n; ++i) e.eigenvectors(i, k) = q(i, src);
  }
  return e;
}

SymMatrix reconstruct(const EigenDecomposition& e) {
  const int n = e.eigenvectors.dim();
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += e.eigenvectors(i, k) * e.eigenvalues[static_cast<std::size_t>(k)] * e.eigenvectors(j, k);
      }
      m(i, j) = s;
    }
  }
  return m;
}

SquareMatrix cholesky(const SymMatrix& p) {
  if (!p.all_finite()) throw NumericalError("cholesky: non-finite entries");
  const int n = p.dim();
  SquareMatrix l(n);
  for (int j = 0; j < n; ++j) {
    double d = p(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw NumericalError("cholesky: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = p(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

double spectral_norm(const SquareMatrix& a) {
  const SymMatrix ata = congruence(a, SymMatrix::identity(a.dim()));
  const auto e = eig_sym(ata);
  if (e.eigenvalues.empty()) return 0.0;
  return std::sqrt(std::max(0.0, e.eigenvalues.back()));
}

double spectral_radius(const SquareMatrix& a) {
  const int n = a.dim();
  if (n == 0) return 0.0;
  if (n == 1) return std::abs(a(0, 0));
  if (n == 2) {
    const double half_tr = 0.5 * (a(0, 0) + a(1, 1));
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = half_tr * half_tr - det;
    if (disc < 0.0) return std::sqrt(det);  // complex pair, |lambda|^2 = det
    const double r = std::sqrt(disc);
    return std::max(std::abs(half_tr + r), std::abs(half_tr - r));
  }
  // rho(A) = lim ||A^(2^k)||^(1/2^k). The iterate stays normalized; with
  // A^(2^k) = c_k B_k, log_scale holds log(c_k) / 2^k.
  SquareMatrix b = a;
  double s = frobenius_norm(b);
  if (s == 0.0) return 0.0;
  b = (1.0 / s) * b;
  double log_scale = std::log(s);
  double weight = 1.0;
  for (int k = 0; k < 60; ++k) {
    b = b * b;
    s = frobenius_norm(b);
    if (s == 0.0) return 0.0;
    b = (1.0 / s) * b;
    weight *= 0.5;
    log_scale += weight * std::log(s);
  }
  return std::exp(log_scale);
}

SymMatrix project_psd_box(const SymMatrix& m, double lo, double hi) {
  if (lo > hi) throw InputError("project_psd_box: lo > hi");
  EigenDecomposition e = eig_sym(m);
  bool changed = false;
  for (double& v : e.eigenvalues) {
    const double c = std::clamp(v, lo, hi);
    changed = changed || c != v;
    v = c;
  }
  if (!changed) return m;
  return reconstruct(e);
}

double max_generalized_eig(const SymMatrix& s, const SymMatrix& p) {
  require_same(s.dim(), p.dim());
  const int n = p.dim();
  const SquareMatrix l = cholesky(p);
  // z = L^-1 S by forward substitution, column by column.
  SquareMatrix z(n);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      double v = s(i, c);
      for (int k = 0; k < i; ++k) v -= l(i, k) * z(k, c);
      z(i, c) = v / l(i, i);
    }
  }
  // w = L^-1 z^T, so w^T = z L^-T = L^-1 S L^-T.
  SquareMatrix w(n);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      double v = z(c, i);
      for (int k = 0; k < i; ++k) v -= l(i, k) * w(k, c);
      w(i, c) = v / l(i, i);
    }
  }
  const auto e = eig_sym(SymMatrix::from_square(w));
  return e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
}

}  // namespace csls
