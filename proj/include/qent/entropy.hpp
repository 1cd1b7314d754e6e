#pragma once

// Tsallis entropy, von Neumann entropy, Umegaki relative entropy and the
// quantum Tsallis relative entropy D_q. All logarithms are natural.

#include <cmath>
#include <limits>

#include "qent/errors.hpp"
#include "qent/linalg.hpp"
#include "qent/states.hpp"

namespace qent {

/// Weight of rho outside supp(sigma) above which a relative entropy diverges.
inline constexpr double kSupportViolation = 1e-10;

struct EntropyValue {
  double value = 0.0;  ///< +inf only when support_violation is set
  double q = 1.0;
  bool support_violation = false;

  bool finite() const { return !support_violation; }
};

/// ln_q(x) = (x^{1-q} - 1) / (1 - q), with ln_1 = ln.
///
/// At x = 0 returns -inf when 1 - q <= 0; callers only reach that through
/// spectra already restricted to the support.
inline double q_log(double x, double q) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("q_log requires x >= 0");
  if (q == 1.0) return std::log(x);
  if (x == 0.0) {
    if (1.0 - q <= 0.0) return -std::numeric_limits<double>::infinity();
    return -1.0 / (1.0 - q);
  }
  return (std::pow(x, 1.0 - q) - 1.0) / (1.0 - q);
}

inline void require_q_range(double q) {
  if (!(q >= 0.0 && q <= 2.0)) throw OutOfRange("q must lie in [0, 2], got " + std::to_string(q));
}

/// S(rho) = -Tr[rho ln rho], with 0 ln 0 = 0.
inline double von_neumann_entropy(const DensityOperator& rho) {
  Real s = 0;
  for (Real x : rho.spectrum().values)
    if (x > tol::kSupport) s -= x * std::log(x);
  return static_cast<double>(s);
}

/// S_q(rho) = -sum lambda^q ln_q lambda over the nonzero spectrum.
inline double tsallis_entropy(const DensityOperator& rho, double q) {
  require_q_range(q);
  if (q == 1.0) return von_neumann_entropy(rho);
  const Real qq = q;
  Real s = 0;
  for (Real x : rho.spectrum().values)
    if (x > tol::kSupport) s -= (x - std::pow(x, qq)) / (1 - qq);
  return static_cast<double>(s);
}

namespace detail {

inline void require_same_dim(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionMismatch("relative entropy of states with dimensions " +
                            std::to_string(rho.dim()) + " and " + std::to_string(sigma.dim()));
  }
}

// Tr[P_sigma^perp rho] given the spectrum of sigma.
inline Real weight_off_support(const Spectrum& sigma, const ComplexMatrix& rho) {
  Real w = 0;
  for (std::size_t k = 0; k < sigma.dim(); ++k)
    if (sigma.values[k] <= tol::kSupport) w += sigma.expectation(rho, k);
  return w;
}

// -Tr[rho ln rho]
inline Real entropy_of(const Spectrum& rho) {
  Real s = 0;
  for (Real x : rho.values)
    if (x > tol::kSupport) s -= x * std::log(x);
  return s;
}

// Tr[rho ln sigma] restricted to supp(sigma).
inline Real cross_log_term(const Spectrum& sigma, const ComplexMatrix& rho) {
  Real s = 0;
  for (std::size_t k = 0; k < sigma.dim(); ++k)
    if (sigma.values[k] > tol::kSupport) s += std::log(sigma.values[k]) * sigma.expectation(rho, k);
  return s;
}

}  // namespace detail

/// U(rho|sigma) from precomputed spectra; +inf on support violation.
inline EntropyValue umegaki_from_spectra(const Spectrum& rho_spec, const ComplexMatrix& rho,
                                         const Spectrum& sigma_spec) {
  EntropyValue out;
  out.q = 1.0;
  if (detail::weight_off_support(sigma_spec, rho) > kSupportViolation) {
    out.value = std::numeric_limits<double>::infinity();
    out.support_violation = true;
    return out;
  }
  out.value = static_cast<double>(-detail::entropy_of(rho_spec) -
                                  detail::cross_log_term(sigma_spec, rho));
  return out;
}

/// U(rho|sigma) = Tr[rho (ln rho - ln sigma)].
inline EntropyValue umegaki_relative_entropy(const DensityOperator& rho,
                                             const DensityOperator& sigma) {
  detail::require_same_dim(rho, sigma);
  return umegaki_from_spectra(rho.spectrum(), rho.matrix(), sigma.spectrum());
}

/// D_q(rho|sigma) = Tr[rho - rho^q sigma^{1-q}] / (1 - q) for q in [0, 2].
///
/// Evaluated through the symmetrized trace Tr[sigma^{(1-q)/2} rho^q
/// sigma^{(1-q)/2}]. q = 1 dispatches to the Umegaki entropy. Powers follow
/// M^0 = I, so D_0 vanishes identically. For q > 1 a support violation gives
/// +inf and sigma^{1-q} is taken on supp(sigma).
inline EntropyValue tsallis_relative_entropy(const DensityOperator& rho,
                                             const DensityOperator& sigma, double q) {
  require_q_range(q);
  detail::require_same_dim(rho, sigma);
  if (q == 1.0) return umegaki_relative_entropy(rho, sigma);

  EntropyValue out;
  out.q = q;
  // rho^0 = I makes both traces equal to one
  if (q == 0.0) return out;
  const Spectrum sigma_spec = sigma.spectrum();
  if (q > 1.0 && detail::weight_off_support(sigma_spec, rho.matrix()) > kSupportViolation) {
    out.value = std::numeric_limits<double>::infinity();
    out.support_violation = true;
    return out;
  }
  const Real qq = q;
  const ComplexMatrix half = matrix_power(sigma_spec, (1 - qq) / 2);
  const ComplexMatrix rho_q = matrix_power(rho.spectrum(), qq);
  const Real overlap = (half * rho_q * half).trace().real();
  out.value = static_cast<double>((rho.matrix().trace().real() - overlap) / (1 - qq));
  return out;
}

}  // namespace qent
