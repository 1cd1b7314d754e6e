#pragma once

// Dense complex linear algebra for small Hermitian problems: cyclic Jacobi
// eigendecomposition, spectral matrix functions, trace norm, Kronecker
// product and partial trace.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qent/errors.hpp"

namespace qent {

/// Working precision for states and entropies. The 64-bit-mantissa format
/// keeps identities at the 1e-9 level for ill-conditioned states whose
/// relative entropies reach 1e4.
using Real = long double;

/// Tolerances shared across the library.
namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kNegativeEigenvalue = 1e-10;
inline constexpr double kSupport = 1e-14;
inline constexpr double kJacobiRelative = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;
}  // namespace tol

/// Dense row-major complex matrix. Most operations expect square input; Kraus
/// operators and isometries are the rectangular exceptions.
template <class R>
class BasicMatrix {
 public:
  using Scalar = std::complex<R>;

  BasicMatrix() = default;

  BasicMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Scalar{}) {}

  explicit BasicMatrix(std::size_t dim) : BasicMatrix(dim, dim) {}

  BasicMatrix(std::size_t rows, std::size_t cols, std::vector<Scalar> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionMismatch("entries array has " + std::to_string(data_.size()) +
                              " elements, expected " + std::to_string(rows_ * cols_));
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw NonFinite("matrix entry is NaN or infinite");
      }
    }
  }

  BasicMatrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  /// Elementwise precision conversion.
  template <class S>
  explicit BasicMatrix(const BasicMatrix<S>& other) : rows_(other.rows()), cols_(other.cols()) {
    data_.reserve(rows_ * cols_);
    for (const auto& z : other.data()) data_.emplace_back(static_cast<R>(z.real()), static_cast<R>(z.imag()));
  }

  static BasicMatrix identity(std::size_t dim) {
    BasicMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = R(1);
    return m;
  }

  template <class T>
  static BasicMatrix diagonal(std::span<const T> values) {
    BasicMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = static_cast<R>(values[i]);
    return m;
  }

  template <class T>
  static BasicMatrix diagonal(const std::vector<T>& values) {
    return diagonal(std::span<const T>(values));
  }

  static BasicMatrix diagonal(std::initializer_list<R> values) {
    return diagonal(std::span<const R>(values.begin(), values.size()));
  }

  /// |v><w|
  static BasicMatrix outer(std::span<const Scalar> v, std::span<const Scalar> w) {
    BasicMatrix m(v.size(), w.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t dim() const { return rows_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Scalar> data() const { return data_; }

  BasicMatrix adjoint() const {
    BasicMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  Scalar trace() const {
    Scalar t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  R frobenius_norm() const {
    R s = 0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  /// max |M_ij - conj(M_ji)|
  R hermiticity_defect() const {
    if (!is_square()) return std::numeric_limits<R>::infinity();
    R worst = 0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
  }

  BasicMatrix& operator+=(const BasicMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  BasicMatrix& operator-=(const BasicMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  BasicMatrix& operator*=(Scalar s) {
    for (auto& z : data_) z *= s;
    return *this;
  }
  BasicMatrix& operator*=(R s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend BasicMatrix operator+(BasicMatrix a, const BasicMatrix& b) { return a += b; }
  friend BasicMatrix operator-(BasicMatrix a, const BasicMatrix& b) { return a -= b; }
  friend BasicMatrix operator*(BasicMatrix a, Scalar s) { return a *= s; }
  friend BasicMatrix operator*(Scalar s, BasicMatrix a) { return a *= s; }
  friend BasicMatrix operator*(R s, BasicMatrix a) { return a *= s; }

  friend BasicMatrix operator*(const BasicMatrix& a, const BasicMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product inner dimensions differ");
    BasicMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar aik = a(i, k);
        if (aik == Scalar{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend std::vector<Scalar> operator*(const BasicMatrix& a, std::span<const Scalar> v) {
    if (a.cols_ != v.size()) throw DimensionMismatch("matrix-vector dimensions differ");
    std::vector<Scalar> out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

 private:
  void require_same_shape(const BasicMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

using ComplexMatrix = BasicMatrix<Real>;
using Complex = ComplexMatrix::Scalar;
using ComplexVector = std::vector<Complex>;

template <class R>
R frobenius_distance(const BasicMatrix<R>& a, const BasicMatrix<R>& b) {
  return (a - b).frobenius_norm();
}

template <class R>
BasicMatrix<R> commutator(const BasicMatrix<R>& a, const BasicMatrix<R>& b) {
  return a * b - b * a;
}

/// Column `j` of `m` as a vector.
template <class R>
std::vector<std::complex<R>> column(const BasicMatrix<R>& m, std::size_t j) {
  std::vector<std::complex<R>> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, j);
  return v;
}

inline Real vector_norm(std::span<const Complex> v) {
  Real s = 0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// Eigenvalues in nondecreasing order with orthonormal eigenvectors as the
/// columns of `vectors`.
template <class R>
struct BasicSpectrum {
  std::vector<R> values;
  BasicMatrix<R> vectors;

  std::size_t dim() const { return values.size(); }

  /// Re <v_k|M|v_k>
  R expectation(const BasicMatrix<R>& m, std::size_t k) const {
    const std::size_t n = dim();
    std::complex<R> s{};
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<R> row{};
      for (std::size_t j = 0; j < n; ++j) row += m(i, j) * vectors(j, k);
      s += std::conj(vectors(i, k)) * row;
    }
    return s.real();
  }

  /// V diag(f(lambda)) V^dagger
  template <class F>
  BasicMatrix<R> apply(F&& f) const {
    const std::size_t n = dim();
    std::vector<R> fv(n);
    for (std::size_t k = 0; k < n; ++k) fv[k] = f(values[k]);
    BasicMatrix<R> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (fv[k] == R(0)) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const std::complex<R> vik = vectors(i, k) * fv[k];
        for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(vectors(j, k));
      }
    }
    return out;
  }

  BasicMatrix<R> reconstruct() const {
    return apply([](R x) { return x; });
  }
};

using Spectrum = BasicSpectrum<Real>;

namespace detail {

inline void require_square(std::size_t rows, std::size_t cols, const char* what) {
  if (rows != cols) throw DimensionMismatch(std::string(what) + " requires a square matrix");
}

template <class R>
void require_hermitian(const BasicMatrix<R>& m) {
  require_square(m.rows(), m.cols(), "Hermitian operation");
  const R defect = m.hermiticity_defect();
  if (defect > R(tol::kHermitian)) {
    throw NotHermitian("max |M_ij - conj(M_ji)| = " + std::to_string(static_cast<double>(defect)));
  }
}

// A <- J^dagger A J and V <- V J with J acting on coordinates (p, q).
template <class R>
void jacobi_rotate(BasicMatrix<R>& a, BasicMatrix<R>& v, std::size_t p, std::size_t q) {
  using C = std::complex<R>;
  const C apq = a(p, q);
  const R mag = std::abs(apq);
  if (mag == R(0)) return;
  const C phase = apq / mag;  // e^{i phi}
  const R app = a(p, p).real();
  const R aqq = a(q, q).real();
  const R theta = (aqq - app) / (2 * mag);
  R t = 1 / (std::abs(theta) + std::sqrt(theta * theta + 1));
  if (theta < 0) t = -t;
  const R c = 1 / std::sqrt(t * t + 1);
  const R s = t * c;

  // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
  const C jpp = c;
  const C jpq = s;
  const C jqp = -s * std::conj(phase);
  const C jqq = c * std::conj(phase);
  const std::size_t n = a.rows();

  for (std::size_t i = 0; i < n; ++i) {
    const C aip = a(i, p);
    const C aiq = a(i, q);
    a(i, p) = aip * jpp + aiq * jqp;
    a(i, q) = aip * jpq + aiq * jqq;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const C apj = a(p, j);
    const C aqj = a(q, j);
    a(p, j) = std::conj(jpp) * apj + std::conj(jqp) * aqj;
    a(q, j) = std::conj(jpq) * apj + std::conj(jqq) * aqj;
  }
  a(p, q) = C{};
  a(q, p) = C{};
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;

  for (std::size_t i = 0; i < n; ++i) {
    const C vip = v(i, p);
    const C viq = v(i, q);
    v(i, p) = vip * jpp + viq * jqp;
    v(i, q) = vip * jpq + viq * jqq;
  }
}

template <class R>
R off_diagonal_norm(const BasicMatrix<R>& a) {
  R s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Converges when the off-diagonal Frobenius norm drops below
/// 1e-13 * ||M||_F; throws NoConvergence after 100 sweeps. Eigenvectors are
/// phase-normalized so that their first nonzero component is real positive.
template <class R>
BasicSpectrum<R> eig_hermitian(const BasicMatrix<R>& m) {
  using C = std::complex<R>;
  detail::require_hermitian(m);
  const std::size_t n = m.rows();

  BasicMatrix<R> a = m;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const C sym = R(0.5) * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = sym;
      a(j, i) = std::conj(sym);
    }
  }
  BasicMatrix<R> v = BasicMatrix<R>::identity(n);

  const R threshold = R(tol::kJacobiRelative) * m.frobenius_norm();
  int sweep = 0;
  while (detail::off_diagonal_norm(a) > threshold) {
    if (sweep++ >= tol::kJacobiMaxSweeps) {
      throw NoConvergence("Jacobi iteration did not converge in " +
                          std::to_string(tol::kJacobiMaxSweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  BasicSpectrum<R> out{std::vector<R>(n), BasicMatrix<R>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src).real();
    C phase = R(1);
    std::size_t lead = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const R mag = std::abs(v(i, src));
      if (mag > R(1e-14)) {
        phase = std::conj(v(i, src)) / mag;
        lead = i;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, src) * phase;
    out.vectors(lead, k) = out.vectors(lead, k).real();
  }
  return out;
}

/// Spectrum of a PSD matrix with eigenvalues in (-1e-10, 0) clipped to 0.
/// Throws NotPSD for any eigenvalue below -1e-10.
template <class R>
BasicSpectrum<R> psd_spectrum(const BasicMatrix<R>& m) {
  BasicSpectrum<R> s = eig_hermitian(m);
  for (R& x : s.values) {
    if (x < -R(tol::kNegativeEigenvalue)) {
      throw NotPSD("eigenvalue " + std::to_string(static_cast<double>(x)) + " below -1e-10");
    }
    if (x < 0) x = 0;
  }
  return s;
}

/// Scalar power with the conventions used for operator powers: x^0 = 1 for
/// every x (so M^0 = I), 0^p = 0 for p > 0, and for p < 0 eigenvalues off the
/// support (<= 1e-14) map to 0.
inline Real spectral_pow(Real x, Real p) {
  if (p == 0) return 1;
  if (x <= Real(tol::kSupport)) return p > 0 && x > 0 ? std::pow(x, p) : Real(0);
  if (p == 1) return x;
  return std::pow(x, p);
}

/// M^p for PSD M via the spectrum. Negative exponents act on the support only.
inline ComplexMatrix matrix_power(const Spectrum& s, Real p) {
  return s.apply([p](Real x) { return spectral_pow(x, p); });
}

/// M^q for PSD M and q in [0, 2]; M^0 = I on the full space.
inline ComplexMatrix matrix_power_q(const ComplexMatrix& m, double q) {
  if (!(q >= 0.0 && q <= 2.0)) throw OutOfRange("q must lie in [0, 2]");
  return matrix_power(psd_spectrum(m), q);
}

struct MatrixLog {
  ComplexMatrix log;      ///< natural log on the support, zero elsewhere
  ComplexMatrix support;  ///< orthogonal projector onto the support
  std::size_t rank = 0;
};

/// Natural logarithm of a PSD matrix on its support; eigenvalues below 1e-14
/// count as zero and are excluded.
inline MatrixLog matrix_log(const ComplexMatrix& m) {
  const Spectrum s = psd_spectrum(m);
  const auto on_support = [](Real x) { return x > Real(tol::kSupport); };
  MatrixLog out;
  out.log = s.apply([&](Real x) { return on_support(x) ? std::log(x) : Real(0); });
  out.support = s.apply([&](Real x) { return on_support(x) ? Real(1) : Real(0); });
  out.rank = static_cast<std::size_t>(std::count_if(s.values.begin(), s.values.end(), on_support));
  return out;
}

/// Tr|M| for Hermitian M.
inline Real trace_norm(const ComplexMatrix& m) {
  const Spectrum s = eig_hermitian(m);
  Real sum = 0;
  for (Real x : s.values) sum += std::abs(x);
  return sum;
}

/// (A (x) B)_{(i dB + k), (j dB + l)} = A_ij B_kl
template <class R>
BasicMatrix<R> kron(const BasicMatrix<R>& a, const BasicMatrix<R>& b) {
  BasicMatrix<R> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto aij = a(i, j);
      if (aij == std::complex<R>{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

inline ComplexVector kron(std::span<const Complex> a, std::span<const Complex> b) {
  ComplexVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i * b.size() + k] = a[i] * b[k];
  return out;
}

enum class Keep { First, Second };

/// Reduction of an operator on C^dA (x) C^dB to the kept factor.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dA, std::size_t dB,
                                   Keep keep) {
  if (!m.is_square() || m.rows() != dA * dB || dA == 0 || dB == 0) {
    throw DimensionMismatch("partial_trace: matrix of dimension " + std::to_string(m.rows()) +
                            " is not " + std::to_string(dA) + "x" + std::to_string(dB));
  }
  if (keep == Keep::First) {
    ComplexMatrix out(dA);
    for (std::size_t i = 0; i < dA; ++i)
      for (std::size_t j = 0; j < dA; ++j)
        for (std::size_t k = 0; k < dB; ++k) out(i, j) += m(i * dB + k, j * dB + k);
    return out;
  }
  ComplexMatrix out(dB);
  for (std::size_t k = 0; k < dB; ++k)
    for (std::size_t l = 0; l < dB; ++l)
      for (std::size_t i = 0; i < dA; ++i) out(k, l) += m(i * dB + k, i * dB + l);
  return out;
}

}  // namespace qent
