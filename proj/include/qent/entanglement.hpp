#pragma once

// Entanglement measures built on relative entropies: the pure-state degree
// E(sigma), the mutual-entropy measure E^M, the Tsallis measure E_q^T, the
// relative entropy of entanglement E^R (numerical upper bound), and the
// solver for the q at which E_q^T reaches a given E^R.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qent/entropy.hpp"
#include "qent/errors.hpp"
#include "qent/linalg.hpp"
#include "qent/nelder_mead.hpp"
#include "qent/random.hpp"
#include "qent/states.hpp"

namespace qent {

/// sum_i p_i |a_i><a_i| (x) |b_i><b_i|
struct SeparableDecomposition {
  std::size_t dA = 0;
  std::size_t dB = 0;
  std::vector<double> weights;
  std::vector<ComplexVector> factors_a;
  std::vector<ComplexVector> factors_b;

  std::size_t size() const { return weights.size(); }

  ComplexMatrix assemble() const {
    ComplexMatrix out(dA * dB);
    for (std::size_t t = 0; t < size(); ++t) {
      const ComplexVector v = kron(std::span<const Complex>(factors_a[t]),
                                   std::span<const Complex>(factors_b[t]));
      const Real p = weights[t];
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex vi = p * v[i];
        for (std::size_t j = 0; j < v.size(); ++j) out(i, j) += vi * std::conj(v[j]);
      }
    }
    return out;
  }

  /// Simplex and unit-norm checks at 1e-12.
  bool valid() const {
    double sum = 0.0;
    for (double w : weights) {
      if (w < -1e-12) return false;
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) return false;
    for (std::size_t t = 0; t < size(); ++t) {
      if (factors_a[t].size() != dA || factors_b[t].size() != dB) return false;
      if (std::abs(vector_norm(factors_a[t]) - 1.0) > 1e-12) return false;
      if (std::abs(vector_norm(factors_b[t]) - 1.0) > 1e-12) return false;
    }
    return true;
  }
};

struct MeasureResult {
  double value = 0.0;
  std::optional<SeparableDecomposition> optimizer_state;
  int iterations = 0;
  bool converged = true;
};

/// E(sigma) = S(tr_B sigma) for a pure bipartite state.
inline double pure_entanglement(const BipartiteState& sigma) {
  const double purity = sigma.state().purity();
  if (!(purity > 1.0 - 1e-8)) {
    throw NotPure("Tr[sigma^2] = " + std::to_string(purity));
  }
  return von_neumann_entropy(sigma.reduced_first());
}

/// E^M(sigma) = U(sigma | rho_1 (x) rho_2).
inline MeasureResult mutual_entropy_measure(const BipartiteState& sigma) {
  MeasureResult r;
  r.value = umegaki_relative_entropy(sigma.state(), reduced_product(sigma)).value;
  return r;
}

/// E_q^T(sigma) = D_q(sigma | rho_1 (x) rho_2) for q in [0, 1]; q = 1 is E^M.
inline MeasureResult tsallis_measure(const BipartiteState& sigma, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw OutOfRange("Tsallis measure needs q in [0, 1]");
  MeasureResult r;
  r.value = tsallis_relative_entropy(sigma.state(), reduced_product(sigma), q).value;
  return r;
}

struct ReeOptions {
  std::size_t restarts = 8;
  /// Product terms in the ansatz; 0 means (dA dB)^2.
  std::size_t terms = 0;
  /// Nelder-Mead iteration cap for one simplex cycle.
  int cycle_iterations = 20000;
  /// Each restart re-seeds the simplex at its best point up to this many times.
  int max_cycles = 12;
  std::size_t stall_window = 50;
  double stall_tolerance = 1e-8;
  std::uint64_t seed = 0;
  /// Throw OptimizerFailure when no restart converged. When false the best
  /// unconverged point is returned, still a valid upper bound, with
  /// `converged` cleared.
  bool require_convergence = true;
};

namespace detail {

// Parameter layout per term: [w, Re a (dA), Im a (dA), Re b (dB), Im b (dB)];
// weights are w^2 normalized, factors are normalized on assembly.
class SeparableAnsatz {
 public:
  SeparableAnsatz(std::size_t dA, std::size_t dB, std::size_t terms)
      : dA_(dA), dB_(dB), terms_(terms) {}

  std::size_t stride() const { return 1 + 2 * dA_ + 2 * dB_; }
  std::size_t parameters() const { return terms_ * stride(); }

  /// Empty when the parameters are degenerate (zero weights or zero vectors).
  std::optional<SeparableDecomposition> decode(std::span<const double> x) const {
    SeparableDecomposition d;
    d.dA = dA_;
    d.dB = dB_;
    double total = 0.0;
    for (std::size_t t = 0; t < terms_; ++t) {
      const double* p = x.data() + t * stride();
      d.weights.push_back(p[0] * p[0]);
      total += p[0] * p[0];
      ComplexVector a(dA_), b(dB_);
      for (std::size_t i = 0; i < dA_; ++i) a[i] = {p[1 + i], p[1 + dA_ + i]};
      for (std::size_t i = 0; i < dB_; ++i) b[i] = {p[1 + 2 * dA_ + i], p[1 + 2 * dA_ + dB_ + i]};
      const double na = vector_norm(a), nb = vector_norm(b);
      if (!(na > 1e-150) || !(nb > 1e-150)) return std::nullopt;
      for (auto& z : a) z /= na;
      for (auto& z : b) z /= nb;
      d.factors_a.push_back(std::move(a));
      d.factors_b.push_back(std::move(b));
    }
    if (!(total > 1e-300) || !std::isfinite(total)) return std::nullopt;
    for (double& w : d.weights) w /= total;
    return d;
  }

  /// Double-precision assembly of sum_t p_t |a_t b_t><a_t b_t| straight from
  /// the parameters; false when they are degenerate.
  bool assemble_fast(std::span<const double> x, BasicMatrix<double>& out) const {
    using C = std::complex<double>;
    const std::size_t n = dA_ * dB_;
    out = BasicMatrix<double>(n);
    double total = 0.0;
    for (std::size_t t = 0; t < terms_; ++t) total += x[t * stride()] * x[t * stride()];
    if (!(total > 1e-300) || !std::isfinite(total)) return false;
    std::vector<C> a(dA_), b(dB_), v(n);
    for (std::size_t t = 0; t < terms_; ++t) {
      const double* p = x.data() + t * stride();
      double na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < dA_; ++i) {
        a[i] = {p[1 + i], p[1 + dA_ + i]};
        na += std::norm(a[i]);
      }
      for (std::size_t i = 0; i < dB_; ++i) {
        b[i] = {p[1 + 2 * dA_ + i], p[1 + 2 * dA_ + dB_ + i]};
        nb += std::norm(b[i]);
      }
      if (!(na > 1e-300) || !(nb > 1e-300)) return false;
      const double scale = std::sqrt(p[0] * p[0] / (total * na * nb));
      for (std::size_t i = 0; i < dA_; ++i)
        for (std::size_t k = 0; k < dB_; ++k) v[i * dB_ + k] = scale * a[i] * b[k];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) out(i, j) += v[i] * std::conj(v[j]);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) out(i, j) = std::conj(out(j, i));
    return true;
  }

  std::vector<double> encode(const SeparableDecomposition& d) const {
    std::vector<double> x(parameters(), 0.0);
    for (std::size_t t = 0; t < terms_ && t < d.size(); ++t) {
      double* p = x.data() + t * stride();
      p[0] = std::sqrt(std::max(d.weights[t], 0.0));
      for (std::size_t i = 0; i < dA_; ++i) {
        p[1 + i] = d.factors_a[t][i].real();
        p[1 + dA_ + i] = d.factors_a[t][i].imag();
      }
      for (std::size_t i = 0; i < dB_; ++i) {
        p[1 + 2 * dA_ + i] = d.factors_b[t][i].real();
        p[1 + 2 * dA_ + dB_ + i] = d.factors_b[t][i].imag();
      }
    }
    return x;
  }

  std::vector<double> random_point(Rng& rng) const {
    std::vector<double> x(parameters());
    for (double& v : x) v = rng.normal();
    return x;
  }

  /// rho_1 (x) rho_2 expanded over product eigenbases; surplus terms get
  /// random factors with negligible weight.
  std::vector<double> reduced_product_point(const BipartiteState& sigma, Rng& rng) const {
    const Spectrum a = psd_spectrum(partial_trace(sigma.matrix(), dA_, dB_, Keep::First));
    const Spectrum b = psd_spectrum(partial_trace(sigma.matrix(), dA_, dB_, Keep::Second));
    SeparableDecomposition d;
    d.dA = dA_;
    d.dB = dB_;
    for (std::size_t i = 0; i < dA_; ++i)
      for (std::size_t j = 0; j < dB_; ++j) {
        d.weights.push_back(a.values[i] * b.values[j]);
        d.factors_a.push_back(column(a.vectors, i));
        d.factors_b.push_back(column(b.vectors, j));
      }
    while (d.size() < terms_) {
      d.weights.push_back(1e-6);
      d.factors_a.push_back(random_pure_vector(dA_, rng));
      d.factors_b.push_back(random_pure_vector(dB_, rng));
    }
    return encode(d);
  }

 private:
  std::size_t dA_, dB_, terms_;
};

}  // namespace detail

/// Upper bound on E^R(sigma) = min over separable rho of U(sigma|rho).
///
/// Minimizes U(sigma | sum_i p_i |a_i b_i><a_i b_i|) with Nelder-Mead over an
/// unconstrained parameterization. Restart 0 starts from the reduced product
/// rho_1 (x) rho_2, the others from seeded random mixtures. Each restart runs
/// simplex cycles, re-seeding the simplex at the incumbent, until a cycle
/// improves by less than `stall_tolerance`. A restart counts as converged when
/// its best value moved by less than `stall_tolerance` over its final
/// `stall_window` iterations. The lowest value wins, ties to the lowest
/// restart index. Restarts are independent and deterministic per
/// (seed, restart index).
inline MeasureResult relative_entropy_of_entanglement(const BipartiteState& sigma,
                                                      const ReeOptions& opts = {}) {
  const std::size_t dA = sigma.dA(), dB = sigma.dB();
  if (dA > 4 || dB > 4) throw OutOfRange("relative entropy of entanglement supports dA, dB <= 4");
  if (opts.restarts == 0) throw OutOfRange("at least one restart is required");
  const std::size_t terms = opts.terms == 0 ? (dA * dB) * (dA * dB) : opts.terms;
  const detail::SeparableAnsatz ansatz(dA, dB, terms);
  const ComplexMatrix& target = sigma.matrix();
  const double neg_entropy = -von_neumann_entropy(sigma.state());

  // The search runs in double; only the reported value is recomputed at
  // full working precision.
  const BasicMatrix<double> target_fast(target);
  auto objective = [&](const std::vector<double>& x) -> double {
    BasicMatrix<double> rho;
    if (!ansatz.assemble_fast(x, rho)) return 1e6;
    BasicSpectrum<double> s;
    try {
      s = eig_hermitian(rho);
    } catch (const Error&) {
      return 1e6;
    }
    double off_support = 0.0, cross = 0.0;
    for (std::size_t k = 0; k < s.dim(); ++k) {
      const double w = s.expectation(target_fast, k);
      if (s.values[k] > tol::kSupport) {
        cross += std::log(s.values[k]) * w;
      } else {
        off_support += w;
      }
    }
    if (off_support > kSupportViolation) return 1e3 * (1.0 + off_support);
    return neg_entropy - cross;
  };

  NelderMeadOptions nm;
  nm.max_iterations = opts.cycle_iterations;

  MeasureResult best;
  best.value = std::numeric_limits<double>::infinity();
  MeasureResult fallback = best;
  bool any_converged = false;
  std::vector<double> best_x, fallback_x;

  for (std::size_t r = 0; r < opts.restarts; ++r) {
    Rng rng(derive_seed(opts.seed, r));
    std::vector<double> x =
        r == 0 ? ansatz.reduced_product_point(sigma, rng) : ansatz.random_point(rng);
    double value = objective(x);
    std::vector<double> history;
    int iterations = 0;
    for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
      const NelderMeadResult res = nelder_mead(objective, x, nm);
      iterations += res.iterations;
      history.insert(history.end(), res.best_history.begin(), res.best_history.end());
      const double improvement = value - res.value;
      if (res.value < value) {
        value = res.value;
        x = res.x;
      }
      if (improvement < opts.stall_tolerance) break;
    }
    const std::size_t w = opts.stall_window;
    const bool converged =
        history.size() < w || history[history.size() - w] - history.back() < opts.stall_tolerance;
    any_converged = any_converged || converged;
    if (converged && value < best.value) {
      best.value = value;
      best.iterations = iterations;
      best_x = x;
    }
    if (value < fallback.value) {
      fallback.value = value;
      fallback.iterations = iterations;
      fallback_x = x;
    }
  }
  if (!any_converged) {
    if (opts.require_convergence) throw OptimizerFailure("no restart of the E^R search converged");
    best = fallback;
    best_x = fallback_x;
  }
  // penalty values mean no feasible separable state was ever reached
  if (!(best.value < 1e3)) throw OptimizerFailure("E^R search found no state with full support");

  SeparableDecomposition decomposition = *ansatz.decode(best_x);
  const DensityOperator closest(decomposition.assemble());
  best.value = umegaki_relative_entropy(sigma.state(), closest).value;
  best.optimizer_state = std::move(decomposition);
  best.converged = any_converged;
  return best;
}

struct QBracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct QStarReport {
  double q_star = 0.0;
  double residual = 0.0;        ///< |E_{q*}^T - target|
  std::vector<QBracket> brackets;  ///< every sign change on the 0.01 grid, in order
  bool at_open_endpoint = false;   ///< root sits at q -> 1 (target == E^M)
  int bisection_steps = 0;
};

/// Smallest q in [0, 1) with E_q^T(sigma) = target.
///
/// Scans q = 0, 0.01, ..., 0.99 and the q -> 1 limit E^M, then bisects the
/// first bracket to |g| < tol. Throws NoRoot unless 0 <= target <= E^M + 1e-9.
inline QStarReport match_q(const BipartiteState& sigma, double target, double tol) {
  if (!(tol > 0.0)) throw OutOfRange("tolerance must be positive");
  const DensityOperator reference = reduced_product(sigma);
  auto g = [&](double q) {
    return tsallis_relative_entropy(sigma.state(), reference, q).value - target;
  };
  const double mutual = umegaki_relative_entropy(sigma.state(), reference).value;
  if (!(target >= -1e-12) || target > mutual + 1e-9) {
    throw NoRoot("target " + std::to_string(target) + " outside [0, E^M = " +
                 std::to_string(mutual) + "]");
  }

  constexpr int kGrid = 100;
  std::vector<double> qs(kGrid + 1), gs(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    qs[i] = i == kGrid ? 1.0 : static_cast<double>(i) / kGrid;
    gs[i] = i == kGrid ? mutual - target : g(qs[i]);
  }

  QStarReport report;
  for (int i = 0; i < kGrid; ++i) {
    if (std::abs(gs[i]) < tol) {
      report.brackets.push_back({qs[i], qs[i]});
      continue;
    }
    const bool next_zero = std::abs(gs[i + 1]) < tol;
    if (next_zero && i + 1 < kGrid) continue;
    if (next_zero || (gs[i] < 0.0) != (gs[i + 1] < 0.0)) report.brackets.push_back({qs[i], qs[i + 1]});
  }
  if (report.brackets.empty()) {
    throw NoRoot("no sign change of E_q^T - target on [0, 1)");
  }

  const QBracket first = report.brackets.front();
  if (first.lo == first.hi) {
    report.q_star = first.lo;
    report.residual = std::abs(g(first.lo));
    return report;
  }
  double lo = first.lo, hi = first.hi;
  const bool lo_negative = g(lo) < 0.0;
  double mid = 0.5 * (lo + hi);
  double gm = g(mid);
  while (std::abs(gm) >= tol && hi - lo > 1e-15 && report.bisection_steps < 200) {
    if ((gm < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
    mid = 0.5 * (lo + hi);
    gm = g(mid);
    ++report.bisection_steps;
  }
  report.q_star = mid;
  report.residual = std::abs(gm);
  report.at_open_endpoint = first.hi == 1.0 && std::abs(mutual - target) < tol;
  return report;
}

}  // namespace qent
