#pragma once

// Randomized property suites. Every suite is deterministic given
// (seed, trials): trial t draws from seed + t, and each random object in a
// trial uses its own derived stream.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "qent/channels.hpp"
#include "qent/entanglement.hpp"
#include "qent/entropy.hpp"
#include "qent/linalg.hpp"
#include "qent/random.hpp"
#include "qent/states.hpp"
#include "qent/werner.hpp"

namespace qent {

struct VerifyConfig {
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  /// Overrides every suite's q values when nonempty; each suite keeps only
  /// the values inside its own domain.
  std::vector<double> q_grid;
  double slack = 1e-9;       ///< inequality and identity slack
  double continuity = 1e-3;  ///< q -> 1 limits
  double commuting = 1e-12;  ///< commuting-case oracle
};

struct PropertyStats {
  std::string name;
  long checks = 0;
  long passed = 0;
  /// Smallest margin seen (bound - observed); negative means a violation.
  double worst_slack = std::numeric_limits<double>::infinity();
};

struct PropertyFailure {
  std::string suite;
  std::string property;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double observed = 0.0;
  double slack = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyStats> properties;
  std::vector<PropertyFailure> failures;
  double seconds = 0.0;

  bool ok() const { return failures.empty(); }
};

/// Accumulates checks for one suite.
class SuiteRecorder {
 public:
  explicit SuiteRecorder(std::string suite) { report_.suite = std::move(suite); }

  void set_trial(std::size_t trial, std::uint64_t seed) {
    trial_ = trial;
    seed_ = seed;
  }

  /// Passes iff observed <= bound.
  void at_most(const std::string& property, double observed, double bound,
               const std::string& detail = {}) {
    record(property, observed, bound - observed, detail);
  }

  /// Passes iff observed >= bound.
  void at_least(const std::string& property, double observed, double bound,
                const std::string& detail = {}) {
    record(property, observed, observed - bound, detail);
  }

  void holds(const std::string& property, bool ok, const std::string& detail = {}) {
    record(property, ok ? 1.0 : 0.0, ok ? 0.0 : -1.0, detail);
  }

  SuiteReport finish(double seconds) {
    std::sort(report_.failures.begin(), report_.failures.end(),
              [](const PropertyFailure& a, const PropertyFailure& b) {
                return a.trial != b.trial ? a.trial < b.trial : a.property < b.property;
              });
    report_.seconds = seconds;
    return std::move(report_);
  }

 private:
  void record(const std::string& property, double observed, double margin,
              const std::string& detail) {
    auto it = std::find_if(report_.properties.begin(), report_.properties.end(),
                           [&](const PropertyStats& s) { return s.name == property; });
    if (it == report_.properties.end()) {
      report_.properties.push_back({property});
      it = std::prev(report_.properties.end());
    }
    ++it->checks;
    // NaN margins count as failures
    const bool ok = margin >= 0.0;
    if (ok) ++it->passed;
    if (!(margin >= it->worst_slack)) it->worst_slack = margin;
    if (!ok) {
      report_.failures.push_back({report_.suite, property, trial_, seed_, observed, margin, detail});
    }
  }

  SuiteReport report_;
  std::size_t trial_ = 0;
  std::uint64_t seed_ = 0;
};

namespace detail {

inline std::vector<double> default_q_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
  for (int i = 11; i <= 20; ++i) g.push_back(i / 10.0);
  return g;
}

inline std::vector<double> q_values(const VerifyConfig& cfg, double lo, double hi,
                                    bool open_lo = true, bool open_hi = true) {
  const std::vector<double> src = cfg.q_grid.empty() ? default_q_grid() : cfg.q_grid;
  std::vector<double> out;
  for (double q : src) {
    const bool above = open_lo ? q > lo : q >= lo;
    const bool below = open_hi ? q < hi : q <= hi;
    if (above && below) out.push_back(q);
  }
  return out;
}

// q in (0,1) and (1,2]
inline std::vector<double> deformed_q(const VerifyConfig& cfg) {
  auto a = q_values(cfg, 0.0, 1.0);
  auto b = q_values(cfg, 1.0, 2.0, true, false);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::string qtag(double q) { return "q=" + std::to_string(q); }

inline ComplexMatrix random_hermitian(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  const ComplexMatrix g = gaussian_matrix(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

inline BipartiteState random_bipartite(std::size_t dA, std::size_t dB, std::uint64_t seed) {
  return BipartiteState(random_density(dA * dB, seed), dA, dB);
}

inline BipartiteState random_pure_bipartite(std::size_t dA, std::size_t dB, std::uint64_t seed) {
  Rng rng(seed);
  const ComplexVector v = random_pure_vector(dA * dB, rng);
  return BipartiteState(density_from_pure(v), dA, dB);
}

inline double dq(const DensityOperator& rho, const DensityOperator& sigma, double q) {
  return tsallis_relative_entropy(rho, sigma, q).value;
}

inline double et(const BipartiteState& s, double q) { return tsallis_measure(s, q).value; }

using Trial = std::function<void(SuiteRecorder&, std::uint64_t seed, std::size_t trial)>;

inline SuiteReport run_trials(const std::string& name, const VerifyConfig& cfg, std::size_t trials,
                              const Trial& body) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteRecorder rec(name);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = cfg.seed + t;
    rec.set_trial(t, seed);
    try {
      body(rec, seed, t);
    } catch (const Error& e) {
      rec.holds("no-exception", false, e.what());
    }
  }
  return rec.finish(
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

constexpr std::size_t kDims[] = {2, 3, 4};

}  // namespace detail

// Eigendecomposition, spectral powers, trace norm and partial trace.
inline SuiteReport verify_linalg(const VerifyConfig& cfg) {
  return detail::run_trials("linalg", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    for (std::size_t d : detail::kDims) {
      const ComplexMatrix h = detail::random_hermitian(d, derive_seed(seed, 10 + d));
      const Spectrum s = eig_hermitian(h);
      r.at_most("eig-reconstruction", frobenius_distance(s.reconstruct(), h), 1e-10);
      r.at_most("eig-orthonormality",
                frobenius_distance(s.vectors.adjoint() * s.vectors, ComplexMatrix::identity(d)), 1e-10);
      r.holds("eig-sorted", std::is_sorted(s.values.begin(), s.values.end()));

      const ComplexMatrix rho = random_density(d, derive_seed(seed, 20 + d)).matrix();
      r.at_most("power-one", frobenius_distance(matrix_power_q(rho, 1.0), rho), 1e-12);
      for (double q : {0.3, 0.5, 1.7}) {
        r.at_most("power-commutes", commutator(rho, matrix_power_q(rho, q)).frobenius_norm(), 1e-10);
      }

      const ComplexMatrix h2 = detail::random_hermitian(d, derive_seed(seed, 30 + d));
      const double a = trace_norm(h), b = trace_norm(h2), ab = trace_norm(h + h2);
      r.at_least("trace-norm-nonnegative", a, 0.0);
      r.at_most("trace-norm-triangle", ab, a + b + 1e-12);
      r.at_most("trace-norm-zero", trace_norm(ComplexMatrix(d)), 1e-12);
    }
    const ComplexMatrix m1 = detail::random_hermitian(6, derive_seed(seed, 40));
    const ComplexMatrix m2 = detail::random_hermitian(6, derive_seed(seed, 41));
    for (Keep k : {Keep::First, Keep::Second}) {
      const ComplexMatrix lhs = partial_trace(2.0 * m1 + m2, 2, 3, k);
      const ComplexMatrix rhs = 2.0 * partial_trace(m1, 2, 3, k) + partial_trace(m2, 2, 3, k);
      r.at_most("partial-trace-linear", frobenius_distance(lhs, rhs), 1e-12);
      r.at_most("partial-trace-preserves-trace",
                std::abs(partial_trace(m1, 2, 3, k).trace() - m1.trace()), 1e-12);
    }
  });
}

// Constructor outputs are valid density operators.
inline SuiteReport verify_states(const VerifyConfig& cfg) {
  return detail::run_trials("states", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    auto check = [&](const std::string& name, const ComplexMatrix& m) {
      r.holds(name, validate_density(m, 1e-9).passed);
    };
    Rng rng(derive_seed(seed, 1));
    for (std::size_t d : detail::kDims) {
      check("random-density-valid", random_density(d, derive_seed(seed, 100 + d)).matrix());
      check("pure-density-valid", density_from_pure(random_pure_vector(d, rng)).matrix());
      const ComplexMatrix u = random_unitary(d, derive_seed(seed, 200 + d));
      r.at_most("random-unitary-unitary",
                frobenius_distance(u.adjoint() * u, ComplexMatrix::identity(d)), 1e-10);
    }
    const double F = rng.uniform();
    check("werner-valid", werner_state(F).matrix());
    check("reduced-product-valid",
          reduced_product(detail::random_bipartite(2, 3, derive_seed(seed, 2))).matrix());
    for (Bell b : {Bell::PsiPlus, Bell::PsiMinus, Bell::PhiPlus, Bell::PhiMinus})
      check("bell-valid", bell_state(b).matrix());
  });
}

// |S(s1) - S(s2)| <= S(s) <= S(s1) + S(s2)
inline SuiteReport verify_araki_lieb(const VerifyConfig& cfg) {
  return detail::run_trials("araki-lieb", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    for (auto [dA, dB] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}}) {
      const BipartiteState s = detail::random_bipartite(dA, dB, derive_seed(seed, dA * 10 + dB));
      const double S = von_neumann_entropy(s.state());
      const double S1 = von_neumann_entropy(s.reduced_first());
      const double S2 = von_neumann_entropy(s.reduced_second());
      r.at_most("araki-lieb-lower", std::abs(S1 - S2), S + cfg.slack);
      r.at_most("araki-lieb-upper", S, S1 + S2 + cfg.slack);
    }
  });
}

// Pure bipartite states: equal reduced entropies and E^M = 2 E.
inline SuiteReport verify_pure_states(const VerifyConfig& cfg) {
  return detail::run_trials("pure-states", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    for (auto [dA, dB] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}}) {
      const BipartiteState s = detail::random_pure_bipartite(dA, dB, derive_seed(seed, dA * 10 + dB));
      const double S1 = von_neumann_entropy(s.reduced_first());
      const double S2 = von_neumann_entropy(s.reduced_second());
      r.at_most("reduced-entropies-equal", std::abs(S1 - S2), cfg.slack);
      r.at_most("mutual-equals-twice-entropy",
                std::abs(mutual_entropy_measure(s).value - 2.0 * pure_entanglement(s)), cfg.slack);
    }
  });
}

inline SuiteReport verify_nonnegativity(const VerifyConfig& cfg) {
  const auto qs = detail::deformed_q(cfg);
  return detail::run_trials("nonnegativity", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    for (std::size_t d : detail::kDims) {
      const DensityOperator rho = random_density(d, derive_seed(seed, 10 + d));
      const DensityOperator sigma = random_density(d, derive_seed(seed, 20 + d));
      for (double q : qs) r.at_least("D_q-nonnegative", detail::dq(rho, sigma, q), -cfg.slack, detail::qtag(q));
    }
  });
}

inline SuiteReport verify_unitary_invariance(const VerifyConfig& cfg) {
  const auto qs = detail::deformed_q(cfg);
  return detail::run_trials("unitary-invariance", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    for (std::size_t d : detail::kDims) {
      const DensityOperator rho = random_density(d, derive_seed(seed, 10 + d));
      const DensityOperator sigma = random_density(d, derive_seed(seed, 20 + d));
      const ComplexMatrix u = random_unitary(d, derive_seed(seed, 30 + d));
      const DensityOperator rho_u = conjugate(rho, u), sigma_u = conjugate(sigma, u);
      for (double q : qs) {
        r.at_most("D_q-unitary-invariant",
                  std::abs(detail::dq(rho_u, sigma_u, q) - detail::dq(rho, sigma, q)), cfg.slack,
                  detail::qtag(q));
      }
      r.at_most("U-unitary-invariant",
                std::abs(umegaki_relative_entropy(rho_u, sigma_u).value -
                         umegaki_relative_entropy(rho, sigma).value),
                cfg.slack);
    }
  });
}

// D_q(Phi rho | Phi sigma) <= D_q(rho | sigma)
inline SuiteReport verify_monotonicity(const VerifyConfig& cfg) {
  const auto q_sub = detail::q_values(cfg, 0.0, 1.0);
  const auto q_all = detail::deformed_q(cfg);
  return detail::run_trials("monotonicity", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    Rng rng(derive_seed(seed, 1));
    for (std::size_t d : detail::kDims) {
      const DensityOperator rho = random_density(d, derive_seed(seed, 10 + d));
      const DensityOperator sigma = random_density(d, derive_seed(seed, 20 + d));
      auto check = [&](const std::string& name, const QuantumChannel& ch, const std::vector<double>& qs) {
        const DensityOperator a = apply_channel(ch, rho), b = apply_channel(ch, sigma);
        for (double q : qs) {
          r.at_most(name, detail::dq(a, b, q), detail::dq(rho, sigma, q) + cfg.slack, detail::qtag(q));
        }
      };
      const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
      check("random-channel", random_channel(d, k, derive_seed(seed, 30 + d)), q_sub);
      check("depolarizing", depolarizing_channel(d, rng.uniform()), q_all);
      check("pinching", computational_pinching(d), q_all);

      // pinching in a random basis, two blocks
      const ComplexMatrix u = random_unitary(d, derive_seed(seed, 40 + d));
      ComplexMatrix p1(d), p2(d);
      for (std::size_t j = 0; j < d; ++j) {
        const ComplexVector v = column(u, j);
        (j < d / 2 ? p1 : p2) += ComplexMatrix::outer(v, v);
      }
      check("pinching", pinching_channel({p1, p2}), q_all);
      const DensityOperator a = conjugate(rho, u), b = conjugate(sigma, u);
      for (double q : q_all) {
        r.at_most("unitary-channel-equal",
                  std::abs(detail::dq(a, b, q) - detail::dq(rho, sigma, q)), cfg.slack, detail::qtag(q));
      }
    }
  });
}

// q in (0,1): D_q >= Tr|rho - sigma|. q in (1,2]: D_q >= U >= Tr|rho - sigma|^2 / 2.
inline SuiteReport verify_lemma_bounds(const VerifyConfig& cfg) {
  const auto q_sub = detail::q_values(cfg, 0.0, 1.0);
  const auto q_super = detail::q_values(cfg, 1.0, 2.0, true, false);
  return detail::run_trials("lemma-bounds", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    for (std::size_t d : detail::kDims) {
      const DensityOperator rho = random_density(d, derive_seed(seed, 10 + d));
      const DensityOperator sigma = random_density(d, derive_seed(seed, 20 + d));
      const double tn = trace_norm(rho.matrix() - sigma.matrix());
      const double u = umegaki_relative_entropy(rho, sigma).value;
      for (double q : q_sub) {
        r.at_least("D_q-above-trace-distance", detail::dq(rho, sigma, q), tn - cfg.slack, detail::qtag(q));
      }
      for (double q : q_super) {
        r.at_least("D_q-above-umegaki", detail::dq(rho, sigma, q), u - cfg.slack, detail::qtag(q));
      }
      r.at_least("umegaki-above-pinsker", u, 0.5 * tn * tn - cfg.slack);
    }
  });
}

// D_q(rho|rho) = 0, and D_q > 0.009 whenever Tr|rho - sigma| > 0.01 (q in (0,1)).
inline SuiteReport verify_equality_condition(const VerifyConfig& cfg) {
  const auto q_sub = detail::q_values(cfg, 0.0, 1.0);
  const auto q_all = detail::deformed_q(cfg);
  return detail::run_trials("equality", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    for (std::size_t d : detail::kDims) {
      const DensityOperator rho = random_density(d, derive_seed(seed, 10 + d));
      const DensityOperator sigma = random_density(d, derive_seed(seed, 20 + d));
      for (double q : q_all) r.at_most("D_q-self-zero", std::abs(detail::dq(rho, rho, q)), cfg.slack, detail::qtag(q));
      if (trace_norm(rho.matrix() - sigma.matrix()) > 0.01) {
        for (double q : q_sub) r.at_least("D_q-separates", detail::dq(rho, sigma, q), 0.009, detail::qtag(q));
      }
    }
  });
}

// D_q(r1 (x) r2 | s1 (x) s2) = D1 + D2 + (q - 1) D1 D2
inline SuiteReport verify_pseudoadditivity(const VerifyConfig& cfg) {
  const auto qs = detail::deformed_q(cfg);
  return detail::run_trials("pseudoadditivity", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    const std::size_t d2 = 2 + seed % 2;
    const DensityOperator r1 = random_density(2, derive_seed(seed, 1));
    const DensityOperator s1 = random_density(2, derive_seed(seed, 2));
    const DensityOperator r2 = random_density(d2, derive_seed(seed, 3));
    const DensityOperator s2 = random_density(d2, derive_seed(seed, 4));
    const DensityOperator rr(kron(r1.matrix(), r2.matrix()));
    const DensityOperator ss(kron(s1.matrix(), s2.matrix()));
    for (double q : qs) {
      const double a = detail::dq(r1, s1, q), b = detail::dq(r2, s2, q);
      r.at_most("pseudoadditivity-residual",
                std::abs(detail::dq(rr, ss, q) - (a + b + (q - 1.0) * a * b)), cfg.slack, detail::qtag(q));
    }
  });
}

// |D_{1 +- 1e-4} - U| < continuity
inline SuiteReport verify_q_continuity(const VerifyConfig& cfg) {
  return detail::run_trials("q-continuity", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    for (std::size_t d : detail::kDims) {
      const DensityOperator rho = random_density(d, derive_seed(seed, 10 + d));
      const DensityOperator sigma = random_density(d, derive_seed(seed, 20 + d));
      const double u = umegaki_relative_entropy(rho, sigma).value;
      for (double q : {1.0 - 1e-4, 1.0 + 1e-4}) {
        r.at_most("D_q-to-umegaki", std::abs(detail::dq(rho, sigma, q) - u), cfg.continuity, detail::qtag(q));
      }
      const BipartiteState s = detail::random_bipartite(2, 2, derive_seed(seed, 50 + d));
      r.at_most("E_q-to-E^M", std::abs(detail::et(s, 1.0 - 1e-4) - mutual_entropy_measure(s).value),
                cfg.continuity);
    }
  });
}

/// Scalar D_q for simultaneously diagonal states with spectra p and s.
inline double commuting_tsallis(const std::vector<double>& p, const std::vector<double>& s, double q) {
  double overlap = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    mass += p[i];
    const double pq = q == 0.0 ? 1.0 : (p[i] > 0.0 ? std::pow(p[i], q) : 0.0);
    const double sq = 1.0 - q == 0.0 ? 1.0 : (s[i] > 0.0 ? std::pow(s[i], 1.0 - q) : 0.0);
    overlap += pq * sq;
  }
  return (mass - overlap) / (1.0 - q);
}

// Matrix-path D_q equals the scalar eigenvalue sum on diagonal pairs.
inline SuiteReport verify_commuting_oracle(const VerifyConfig& cfg) {
  const auto qs = detail::deformed_q(cfg);
  return detail::run_trials("commuting-oracle", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    Rng rng(derive_seed(seed, 1));
    for (std::size_t d : detail::kDims) {
      auto simplex_point = [&] {
        std::vector<double> v(d);
        double sum = 0.0;
        for (double& x : v) sum += x = -std::log(1.0 - rng.uniform());
        for (double& x : v) x /= sum;
        return v;
      };
      const std::vector<double> p = simplex_point(), s = simplex_point();
      const DensityOperator rho(ComplexMatrix::diagonal(p)), sigma(ComplexMatrix::diagonal(s));
      for (double q : qs) {
        r.at_most("matrix-equals-scalar",
                  std::abs(detail::dq(rho, sigma, q) - commuting_tsallis(p, s, q)), cfg.commuting,
                  detail::qtag(q));
      }
    }
  });
}

// E_q^T vanishes on sigma = rho_1 (x) rho_2 and is strictly positive
// otherwise (q in (0,1)).
inline SuiteReport verify_product_zero(const VerifyConfig& cfg) {
  const auto qs = detail::q_values(cfg, 0.0, 1.0);
  return detail::run_trials("product-zero", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    const BipartiteState prod = product_state(random_density(2, derive_seed(seed, 1)),
                                              random_density(2, derive_seed(seed, 2)));
    const BipartiteState corr = detail::random_bipartite(2, 2, derive_seed(seed, 3));
    const double gap = trace_norm(corr.matrix() - reduced_product(corr).matrix());
    for (double q : qs) {
      r.at_most("product-state-zero", std::abs(detail::et(prod, q)), cfg.slack, detail::qtag(q));
      if (gap > 1e-8) r.holds("correlated-state-positive", detail::et(corr, q) > 0.0, detail::qtag(q));
    }
    const BipartiteState bell = bell_state(Bell::PhiPlus);
    for (double q : qs) r.at_least("bell-positive", detail::et(bell, q), 1e-3, detail::qtag(q));
  });
}

inline SuiteReport verify_local_unitary(const VerifyConfig& cfg) {
  const auto qs = detail::q_values(cfg, 0.0, 1.0);
  return detail::run_trials("local-unitary", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    const BipartiteState s = detail::random_bipartite(2, 2, derive_seed(seed, 1));
    const ComplexMatrix u = kron(random_unitary(2, derive_seed(seed, 2)), random_unitary(2, derive_seed(seed, 3)));
    const BipartiteState t(u * s.matrix() * u.adjoint(), 2, 2);
    for (double q : qs) r.at_most("E_q-local-unitary", std::abs(detail::et(t, q) - detail::et(s, q)), cfg.slack, detail::qtag(q));
    r.at_most("E^M-local-unitary",
              std::abs(mutual_entropy_measure(t).value - mutual_entropy_measure(s).value), cfg.slack);
  });
}

inline SuiteReport verify_local_channel(const VerifyConfig& cfg) {
  const auto qs = detail::q_values(cfg, 0.0, 1.0);
  return detail::run_trials("local-channel", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    const BipartiteState s = detail::random_bipartite(2, 2, derive_seed(seed, 1));
    Rng rng(derive_seed(seed, 2));
    const QuantumChannel phi = local_channel(
        random_channel(2, 1 + static_cast<std::size_t>(rng.uniform() * 3.0), derive_seed(seed, 3)),
        random_channel(2, 1 + static_cast<std::size_t>(rng.uniform() * 3.0), derive_seed(seed, 4)));
    const BipartiteState t = apply_channel(phi, s, 2, 2);
    for (double q : qs) r.at_most("E_q-local-channel", detail::et(t, q), detail::et(s, q) + cfg.slack, detail::qtag(q));
  });
}

// E_q^T(s (x) s') <= E_q^T(s) + E_q^T(s'), with the exact pseudoadditive identity.
inline SuiteReport verify_subadditivity(const VerifyConfig& cfg) {
  const auto qs = detail::q_values(cfg, 0.0, 1.0);
  return detail::run_trials("subadditivity", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    const BipartiteState s = detail::random_bipartite(2, 2, derive_seed(seed, 1));
    const BipartiteState t = detail::random_bipartite(2, 2, derive_seed(seed, 2));
    const BipartiteState st = tensor_bipartite(s, t);
    for (double q : qs) {
      const double a = detail::et(s, q), b = detail::et(t, q), ab = detail::et(st, q);
      r.at_most("E_q-subadditive", ab, a + b + cfg.slack, detail::qtag(q));
      r.at_most("E_q-pseudoadditive", std::abs(ab - (a + b + (q - 1.0) * a * b)), cfg.slack, detail::qtag(q));
    }
    r.at_most("E^M-additive",
              std::abs(mutual_entropy_measure(st).value -
                       (mutual_entropy_measure(s).value + mutual_entropy_measure(t).value)),
              cfg.slack);
  });
}

inline SuiteReport verify_channels(const VerifyConfig& cfg) {
  return detail::run_trials("channels", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    Rng rng(derive_seed(seed, 1));
    for (std::size_t d : detail::kDims) {
      const QuantumChannel rc = random_channel(d, 1 + seed % 3, derive_seed(seed, 10 + d));
      r.at_most("random-channel-cptp", validate_cptp(rc, kCptpTolerance).defect, kCptpTolerance);
      const double p = rng.uniform();
      const QuantumChannel dep = depolarizing_channel(d, p);
      r.at_most("depolarizing-cptp", validate_cptp(dep, kCptpTolerance).defect, kCptpTolerance);
      const DensityOperator rho = random_density(d, derive_seed(seed, 20 + d));
      const ComplexMatrix expected = (1.0 - p) * rho.matrix() + (p / static_cast<double>(d)) * ComplexMatrix::identity(d);
      r.at_most("depolarizing-formula", frobenius_distance(apply_kraus(dep, rho.matrix()), expected), 1e-10);
      r.at_most("channel-output-trace", std::abs(apply_kraus(rc, rho.matrix()).trace() - Complex{1}), 1e-12);
    }
    const QuantumChannel loc = local_channel(random_channel(2, 2, derive_seed(seed, 30)),
                                             random_channel(3, 2, derive_seed(seed, 31)));
    r.at_most("local-channel-cptp", validate_cptp(loc, kCptpTolerance).defect, kCptpTolerance);
  });
}

// Werner closed forms against the matrix path. Deterministic: one pass.
inline SuiteReport verify_werner(const VerifyConfig& cfg) {
  return detail::run_trials("werner", cfg, std::min<std::size_t>(cfg.trials, 1), [&](SuiteRecorder& r, std::uint64_t, std::size_t) {
    for (int i = 0; i <= 20; ++i) {
      const double F = i / 20.0;
      const BipartiteState w = werner_state(F);
      for (int j = 1; j <= 19; ++j) {
        const double q = j / 20.0;
        r.at_most("closed-form-vs-matrix", std::abs(werner_tsallis_closed(F, q) - detail::et(w, q)), 1e-10);
      }
      r.at_most("closed-form-q-limit",
                std::abs(werner_tsallis_closed(F, 1.0 - 1e-5) - mutual_entropy_measure(w).value), 1e-3);
      r.at_most("mutual-closed-vs-matrix",
                std::abs(werner_mutual_closed(F) - mutual_entropy_measure(w).value), 1e-10);
    }
  });
}

// E^R upper bound never exceeds E^M. Uses a short search from rho_1 (x) rho_2.
inline SuiteReport verify_er_ordering(const VerifyConfig& cfg) {
  return detail::run_trials("er-ordering", cfg, cfg.trials, [&](SuiteRecorder& r, std::uint64_t seed, std::size_t) {
    const BipartiteState s = detail::random_bipartite(2, 2, derive_seed(seed, 1));
    ReeOptions opts;
    opts.restarts = 1;
    opts.cycle_iterations = 300;
    opts.max_cycles = 1;
    opts.seed = seed;
    opts.require_convergence = false;
    const MeasureResult er = relative_entropy_of_entanglement(s, opts);
    r.at_most("E^R-below-E^M", er.value, mutual_entropy_measure(s).value + cfg.slack);
    r.at_least("E^R-nonnegative", er.value, -1e-10);
  });
}

using SuiteFn = SuiteReport (*)(const VerifyConfig&);

/// Named suites in their canonical run order.
inline const std::vector<std::pair<std::string, SuiteFn>>& suite_registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"linalg", verify_linalg},
      {"states", verify_states},
      {"channels", verify_channels},
      {"araki-lieb", verify_araki_lieb},
      {"pure-states", verify_pure_states},
      {"nonnegativity", verify_nonnegativity},
      {"unitary-invariance", verify_unitary_invariance},
      {"monotonicity", verify_monotonicity},
      {"lemma-bounds", verify_lemma_bounds},
      {"equality", verify_equality_condition},
      {"pseudoadditivity", verify_pseudoadditivity},
      {"q-continuity", verify_q_continuity},
      {"commuting-oracle", verify_commuting_oracle},
      {"product-zero", verify_product_zero},
      {"local-unitary", verify_local_unitary},
      {"local-channel", verify_local_channel},
      {"subadditivity", verify_subadditivity},
      {"werner", verify_werner},
      {"er-ordering", verify_er_ordering},
  };
  return suites;
}

/// Runs `name` or, for "all", every registered suite. Unknown names throw OutOfRange.
inline std::vector<SuiteReport> run_suites(const std::string& name, const VerifyConfig& cfg) {
  std::vector<SuiteReport> out;
  for (const auto& [suite, fn] : suite_registry()) {
    if (name == "all" || name == suite) out.push_back(fn(cfg));
  }
  if (out.empty()) throw OutOfRange("unknown suite '" + name + "'");
  return out;
}

}  // namespace qent
