#pragma once

// Closed-form quantities for the two-qubit Werner family W_F and the sweep
// comparing E_q^T(W_F) with E^R(W_F).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qent/errors.hpp"

namespace qent {

namespace detail {

inline void require_fidelity(double F) {
  if (!(F >= 0.0 && F <= 1.0)) throw OutOfRange("Werner fidelity must lie in [0, 1]");
}

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace detail

/// E^R(W_F): 0 for F <= 1/2, F ln F + (1-F) ln(1-F) + ln 2 above.
inline double werner_er_closed(double F) {
  detail::require_fidelity(F);
  if (F <= 0.5) return 0.0;
  return detail::xlogx(F) + detail::xlogx(1.0 - F) + std::numbers::ln2;
}

/// E_q^T(W_F) = [1 - (1/4)^{1-q} F^q - (3/4)^{1-q} (1-F)^q] / (1 - q).
///
/// Follows from W_F having spectrum {F, (1-F)/3 x3} and reduced product I/4.
/// x^0 = 1 (the M^0 = I convention), so q = 0 gives 0 for every F.
inline double werner_tsallis_closed(double F, double q) {
  detail::require_fidelity(F);
  if (!(q >= 0.0 && q < 1.0)) throw OutOfRange("q must lie in [0, 1)");
  auto pw = [q](double x) { return q == 0.0 ? 1.0 : (x > 0.0 ? std::pow(x, q) : 0.0); };
  const double a = std::pow(0.25, 1.0 - q) * pw(F);
  const double b = std::pow(0.75, 1.0 - q) * pw(1.0 - F);
  return (1.0 - a - b) / (1.0 - q);
}

/// E^M(W_F) = U(W_F | I/4) = ln 4 + F ln F + (1-F) ln((1-F)/3).
inline double werner_mutual_closed(double F) {
  detail::require_fidelity(F);
  const double rest = 1.0 - F;
  return 2.0 * std::numbers::ln2 + detail::xlogx(F) + (rest > 0.0 ? rest * std::log(rest / 3.0) : 0.0);
}

struct WernerSweepRow {
  double F = 0.0;
  double e_tsallis = 0.0;
  double e_rel = 0.0;
  double e_mutual = 0.0;
};

/// Sign change of E_q^T - E^R, bisected to width 1e-6.
struct WernerCrossing {
  double lo = 0.0;
  double hi = 0.0;
  double F = 0.0;
};

struct WernerSweep {
  double q = 0.0;
  std::vector<WernerSweepRow> rows;
  std::vector<WernerCrossing> crossings;
};

/// Grid F_start + i step (including F_end when the step divides the range).
inline std::vector<double> fidelity_grid(double F_start, double F_end, double step) {
  if (!(F_start >= 0.0 && F_end <= 1.0 && F_start < F_end)) {
    throw OutOfRange("sweep range must satisfy 0 <= F_start < F_end <= 1");
  }
  if (!(step > 0.0)) throw OutOfRange("sweep step must be positive");
  const double span = (F_end - F_start) / step;
  const auto n = static_cast<long>(std::floor(span + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) grid.push_back(std::min(F_start + static_cast<double>(i) * step, F_end));
  if (std::abs(grid.back() - F_end) < 1e-9 * std::max(1.0, step)) grid.back() = F_end;
  return grid;
}

inline WernerSweep werner_sweep(double F_start, double F_end, double step, double q) {
  if (!(q >= 0.0 && q < 1.0)) throw OutOfRange("q must lie in [0, 1)");
  WernerSweep out;
  out.q = q;
  for (double F : fidelity_grid(F_start, F_end, step)) {
    out.rows.push_back({F, werner_tsallis_closed(F, q), werner_er_closed(F), werner_mutual_closed(F)});
  }

  auto gap = [q](double F) { return werner_tsallis_closed(F, q) - werner_er_closed(F); };
  auto sign = [](double d) { return d > 1e-12 ? 1 : (d < -1e-12 ? -1 : 0); };

  // zero-gap points carry no sign; a crossing joins the nearest signed neighbours
  int last_sign = 0;
  double last_F = 0.0;
  for (const auto& row : out.rows) {
    const int s = sign(row.e_tsallis - row.e_rel);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      double lo = last_F, hi = row.F;
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const int sm = sign(gap(mid));
        if (sm == 0) {
          lo = hi = mid;
          break;
        }
        (sm == last_sign ? lo : hi) = mid;
      }
      out.crossings.push_back({lo, hi, 0.5 * (lo + hi)});
    }
    last_sign = s;
    last_F = row.F;
  }
  return out;
}

}  // namespace qent
