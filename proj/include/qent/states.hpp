#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qent/errors.hpp"
#include "qent/linalg.hpp"
#include "qent/random.hpp"

namespace qent {

inline constexpr double kDensityTolerance = 1e-10;

struct DensityReport {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;
  bool passed = false;

  std::string describe() const {
    return "hermiticity defect " + std::to_string(hermiticity_defect) + ", trace defect " +
           std::to_string(trace_defect) + ", min eigenvalue " + std::to_string(min_eigenvalue);
  }
};

/// Checks Hermiticity, unit trace and positivity of `m` against `tolerance`.
/// Never throws on bad input; the report carries the failure.
inline DensityReport validate_density(const ComplexMatrix& m, double tolerance) {
  DensityReport r;
  r.tolerance = tolerance;
  if (!m.is_square() || m.rows() == 0) {
    r.hermiticity_defect = r.trace_defect = INFINITY;
    r.min_eigenvalue = -INFINITY;
    return r;
  }
  r.hermiticity_defect = m.hermiticity_defect();
  r.trace_defect = std::abs(m.trace() - Complex{1.0, 0.0});
  const ComplexMatrix hermitian_part = Real(0.5) * (m + m.adjoint());
  try {
    r.min_eigenvalue = eig_hermitian(hermitian_part).values.front();
  } catch (const NoConvergence&) {
    r.min_eigenvalue = -INFINITY;
  }
  r.passed = r.hermiticity_defect <= tolerance && r.trace_defect <= tolerance &&
             r.min_eigenvalue >= -tolerance;
  return r;
}

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m) : matrix_(std::move(m)) {
    const DensityReport r = validate_density(matrix_, kDensityTolerance);
    if (!r.passed) throw InvalidDensity(r.describe());
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.rows(); }

  Spectrum spectrum() const { return psd_spectrum(matrix_); }

  /// Tr[rho^2]
  double purity() const {
    Real s = 0;
    for (const auto& z : matrix_.data()) s += std::norm(z);
    return static_cast<double>(s);
  }

 private:
  ComplexMatrix matrix_;
};

/// A density operator on C^dA (x) C^dB.
class BipartiteState {
 public:
  BipartiteState(DensityOperator state, std::size_t dA, std::size_t dB)
      : state_(std::move(state)), dA_(dA), dB_(dB) {
    if (dA == 0 || dB == 0 || dA * dB != state_.dim()) {
      throw DimensionMismatch("bipartite factorization " + std::to_string(dA) + "x" +
                              std::to_string(dB) + " does not match dimension " +
                              std::to_string(state_.dim()));
    }
  }

  BipartiteState(ComplexMatrix m, std::size_t dA, std::size_t dB)
      : BipartiteState(DensityOperator(std::move(m)), dA, dB) {}

  const DensityOperator& state() const { return state_; }
  const ComplexMatrix& matrix() const { return state_.matrix(); }
  std::size_t dA() const { return dA_; }
  std::size_t dB() const { return dB_; }
  std::size_t dim() const { return state_.dim(); }

  DensityOperator reduced_first() const {
    return DensityOperator(partial_trace(matrix(), dA_, dB_, Keep::First));
  }
  DensityOperator reduced_second() const {
    return DensityOperator(partial_trace(matrix(), dA_, dB_, Keep::Second));
  }

 private:
  DensityOperator state_;
  std::size_t dA_;
  std::size_t dB_;
};

/// |v><v| / ||v||^2
inline DensityOperator density_from_pure(std::span<const Complex> v) {
  const Real n2 = std::pow(vector_norm(v), 2);
  if (!(n2 > 0)) throw ZeroVector("pure state vector has zero norm");
  return DensityOperator((1 / n2) * ComplexMatrix::outer(v, v));
}

enum class Bell { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

/// Bell vector in the basis |uu>, |ud>, |du>, |dd>.
inline ComplexVector bell_vector(Bell kind) {
  const Real h = std::numbers::sqrt2_v<Real> / 2;
  switch (kind) {
    case Bell::PsiPlus: return {0.0, h, h, 0.0};
    case Bell::PsiMinus: return {0.0, h, -h, 0.0};
    case Bell::PhiPlus: return {h, 0.0, 0.0, h};
    case Bell::PhiMinus: return {h, 0.0, 0.0, -h};
  }
  throw OutOfRange("unknown Bell state");
}

inline BipartiteState bell_state(Bell kind) {
  const ComplexVector v = bell_vector(kind);
  return BipartiteState(density_from_pure(v), 2, 2);
}

/// F |Psi-><Psi-| + (1-F)/3 (|Psi+><Psi+| + |Phi-><Phi-| + |Phi+><Phi+|)
inline BipartiteState werner_state(double F) {
  if (!(F >= 0.0 && F <= 1.0)) throw OutOfRange("Werner fidelity must lie in [0, 1]");
  auto projector = [](Bell b) {
    const ComplexVector v = bell_vector(b);
    return ComplexMatrix::outer(v, v);
  };
  const Real f = F;
  ComplexMatrix m = f * projector(Bell::PsiMinus);
  const Real rest = (1 - f) / 3;
  m += rest * projector(Bell::PsiPlus);
  m += rest * projector(Bell::PhiMinus);
  m += rest * projector(Bell::PhiPlus);
  return BipartiteState(std::move(m), 2, 2);
}

inline ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

/// Orthonormalizes the columns of `m` in place by modified Gram-Schmidt with
/// one reorthogonalization pass. The implied R factor has a positive real
/// diagonal, which is the phase fix that makes QR of a Gaussian matrix Haar.
inline void orthonormalize_columns(ComplexMatrix& m) {
  const std::size_t rows = m.rows();
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj = 0;
        for (std::size_t i = 0; i < rows; ++i) proj += std::conj(m(i, k)) * m(i, j);
        for (std::size_t i = 0; i < rows; ++i) m(i, j) -= proj * m(i, k);
      }
    }
    Real n = 0;
    for (std::size_t i = 0; i < rows; ++i) n += std::norm(m(i, j));
    n = std::sqrt(n);
    if (!(n > 1e-300)) throw ZeroVector("rank-deficient matrix in orthonormalization");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) /= n;
  }
}

/// Hilbert-Schmidt random state G G^dagger / Tr[G G^dagger].
inline DensityOperator random_density(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw OutOfRange("dimension must be positive");
  Rng rng(seed);
  const ComplexMatrix g = gaussian_matrix(dim, dim, rng);
  ComplexMatrix m = g * g.adjoint();
  const Real tr = m.trace().real();
  m *= 1 / tr;
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < dim; ++j) m(j, i) = std::conj(m(i, j));
  }
  return DensityOperator(std::move(m));
}

/// Haar-random unitary.
inline ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw OutOfRange("dimension must be positive");
  Rng rng(seed);
  ComplexMatrix u = gaussian_matrix(dim, dim, rng);
  orthonormalize_columns(u);
  return u;
}

/// Haar-random unit vector.
inline ComplexVector random_pure_vector(std::size_t dim, Rng& rng) {
  ComplexVector v(dim);
  for (auto& z : v) z = rng.complex_normal();
  const Real n = vector_norm(v);
  for (auto& z : v) z /= n;
  return v;
}

/// U rho U^dagger
inline DensityOperator conjugate(const DensityOperator& rho, const ComplexMatrix& u) {
  return DensityOperator(u * rho.matrix() * u.adjoint());
}

/// rho_1 (x) rho_2 built from the reductions of `sigma`.
inline DensityOperator reduced_product(const BipartiteState& sigma) {
  return DensityOperator(
      kron(partial_trace(sigma.matrix(), sigma.dA(), sigma.dB(), Keep::First),
           partial_trace(sigma.matrix(), sigma.dA(), sigma.dB(), Keep::Second)));
}

inline BipartiteState product_state(const DensityOperator& a, const DensityOperator& b) {
  return BipartiteState(kron(a.matrix(), b.matrix()), a.dim(), b.dim());
}

/// sigma (x) sigma' regrouped from (A, B, A', B') into (A A') vs (B B').
inline BipartiteState tensor_bipartite(const BipartiteState& s, const BipartiteState& t) {
  const std::size_t a = s.dA(), b = s.dB(), a2 = t.dA(), b2 = t.dB();
  const std::size_t dA = a * a2, dB = b * b2;
  // index in the regrouped basis -> index in kron(s, t)
  auto source = [&](std::size_t idx) {
    const std::size_t left = idx / dB, right = idx % dB;
    const std::size_t i = left / a2, i2 = left % a2;
    const std::size_t j = right / b2, j2 = right % b2;
    return (i * b + j) * (a2 * b2) + (i2 * b2 + j2);
  };
  const ComplexMatrix full = kron(s.matrix(), t.matrix());
  ComplexMatrix out(dA * dB);
  for (std::size_t r = 0; r < dA * dB; ++r)
    for (std::size_t c = 0; c < dA * dB; ++c) out(r, c) = full(source(r), source(c));
  return BipartiteState(std::move(out), dA, dB);
}

}  // namespace qent
