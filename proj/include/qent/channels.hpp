#pragma once

// Trace-preserving completely positive maps in Kraus form.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qent/errors.hpp"
#include "qent/linalg.hpp"
#include "qent/random.hpp"
#include "qent/states.hpp"

namespace qent {

inline constexpr double kCptpTolerance = 1e-10;

/// A finite Kraus set {K_i}, each d_out x d_in. The constructor checks shapes
/// only; use validate_cptp (or QuantumChannel::checked) for trace preservation.
class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw InvalidChannel("Kraus list is empty");
    d_out_ = kraus_.front().rows();
    d_in_ = kraus_.front().cols();
    for (const auto& k : kraus_) {
      if (k.rows() != d_out_ || k.cols() != d_in_) {
        throw InvalidChannel("Kraus operators have inconsistent shapes");
      }
    }
  }

  static QuantumChannel checked(std::vector<ComplexMatrix> kraus, double tolerance = kCptpTolerance);

  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }

 private:
  std::vector<ComplexMatrix> kraus_;
  std::size_t d_in_ = 0;
  std::size_t d_out_ = 0;
};

struct CptpReport {
  double defect = 0.0;  ///< ||sum K^dagger K - I||_F
  double tolerance = 0.0;
  bool passed = false;
};

inline CptpReport validate_cptp(const QuantumChannel& channel, double tolerance) {
  ComplexMatrix sum(channel.d_in());
  for (const auto& k : channel.kraus()) sum += k.adjoint() * k;
  CptpReport r;
  r.tolerance = tolerance;
  r.defect = frobenius_distance(sum, ComplexMatrix::identity(channel.d_in()));
  r.passed = r.defect < tolerance;
  return r;
}

inline QuantumChannel QuantumChannel::checked(std::vector<ComplexMatrix> kraus, double tolerance) {
  QuantumChannel ch(std::move(kraus));
  const CptpReport r = validate_cptp(ch, tolerance);
  if (!r.passed) {
    throw InvalidChannel("sum K^dagger K deviates from identity by " + std::to_string(r.defect));
  }
  return ch;
}

/// sum_i K_i rho K_i^dagger
inline ComplexMatrix apply_kraus(const QuantumChannel& channel, const ComplexMatrix& rho) {
  if (rho.rows() != channel.d_in() || !rho.is_square()) {
    throw DimensionMismatch("channel expects input dimension " + std::to_string(channel.d_in()) +
                            ", got " + std::to_string(rho.rows()));
  }
  ComplexMatrix out(channel.d_out());
  for (const auto& k : channel.kraus()) out += k * rho * k.adjoint();
  return out;
}

inline DensityOperator apply_channel(const QuantumChannel& channel, const DensityOperator& rho) {
  return DensityOperator(apply_kraus(channel, rho.matrix()));
}

inline BipartiteState apply_channel(const QuantumChannel& channel, const BipartiteState& sigma,
                                    std::size_t dA_out, std::size_t dB_out) {
  return BipartiteState(apply_kraus(channel, sigma.matrix()), dA_out, dB_out);
}

inline QuantumChannel identity_channel(std::size_t d) {
  return QuantumChannel({ComplexMatrix::identity(d)});
}

inline QuantumChannel unitary_channel(ComplexMatrix u) { return QuantumChannel({std::move(u)}); }

/// rho -> (1 - p) rho + p I/d from the identity and the d^2 - 1 nontrivial
/// Weyl operators X^a Z^b.
inline QuantumChannel depolarizing_channel(std::size_t d, double p) {
  if (d == 0) throw OutOfRange("dimension must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("depolarizing probability must lie in [0, 1]");
  const double d2 = static_cast<double>(d * d);
  std::vector<ComplexMatrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p + p / d2) * ComplexMatrix::identity(d));
  if (p > 0.0) {
    const double w = std::sqrt(p / d2);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        if (a == 0 && b == 0) continue;
        // (X^a Z^b)|j> = omega^{b j} |j + a mod d>
        ComplexMatrix weyl(d);
        for (std::size_t j = 0; j < d; ++j) {
          const double angle = 2.0 * std::numbers::pi * static_cast<double>(b * j % d) /
                               static_cast<double>(d);
          weyl((j + a) % d, j) = w * std::polar(1.0, angle);
        }
        kraus.push_back(std::move(weyl));
      }
  }
  return QuantumChannel(std::move(kraus));
}

/// rho -> sum_i P_i rho P_i for pairwise orthogonal projectors summing to I.
inline QuantumChannel pinching_channel(std::vector<ComplexMatrix> projectors) {
  constexpr double kTol = 1e-10;
  if (projectors.empty()) throw InvalidProjectors("no projectors given");
  const std::size_t d = projectors.front().rows();
  ComplexMatrix sum(d);
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const auto& p = projectors[i];
    if (!p.is_square() || p.rows() != d) throw InvalidProjectors("projector shapes differ");
    if (p.hermiticity_defect() > kTol) throw InvalidProjectors("projector is not Hermitian");
    if (frobenius_distance(p * p, p) > kTol) throw InvalidProjectors("projector is not idempotent");
    for (std::size_t j = 0; j < i; ++j)
      if ((p * projectors[j]).frobenius_norm() > kTol)
        throw InvalidProjectors("projectors are not pairwise orthogonal");
    sum += p;
  }
  if (frobenius_distance(sum, ComplexMatrix::identity(d)) > kTol) {
    throw InvalidProjectors("projectors do not sum to the identity");
  }
  return QuantumChannel(std::move(projectors));
}

/// Pinching onto the computational basis: rho -> diag(rho).
inline QuantumChannel computational_pinching(std::size_t d) {
  std::vector<ComplexMatrix> ps;
  for (std::size_t i = 0; i < d; ++i) {
    ComplexMatrix p(d);
    p(i, i) = 1.0;
    ps.push_back(std::move(p));
  }
  return pinching_channel(std::move(ps));
}

/// Kraus operators are the d x d blocks of a random (k d) x d isometry.
inline QuantumChannel random_channel(std::size_t d, std::size_t k, std::uint64_t seed) {
  if (d == 0 || k == 0) throw OutOfRange("dimension and Kraus count must be positive");
  Rng rng(seed);
  ComplexMatrix iso = gaussian_matrix(k * d, d, rng);
  orthonormalize_columns(iso);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(k);
  for (std::size_t b = 0; b < k; ++b) {
    ComplexMatrix block(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) block(i, j) = iso(b * d + i, j);
    kraus.push_back(std::move(block));
  }
  return QuantumChannel(std::move(kraus));
}

/// Phi_1 (x) Phi_2 with Kraus set {K_i (x) L_j}.
inline QuantumChannel local_channel(const QuantumChannel& first, const QuantumChannel& second) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(first.kraus().size() * second.kraus().size());
  for (const auto& k : first.kraus())
    for (const auto& l : second.kraus()) kraus.push_back(kron(k, l));
  return QuantumChannel(std::move(kraus));
}

}  // namespace qent
