#pragma once

// Derivative-free Nelder-Mead simplex minimization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace qent {

struct NelderMeadOptions {
  int max_iterations = 20000;
  /// Stop once max |f_i - f_best| and max |x_i - x_best| both fall below these.
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-10;
  /// Initial simplex: x0 plus a step of rel_step * x0_i along each axis, or
  /// zero_step where x0_i == 0.
  double rel_step = 0.05;
  double zero_step = 0.00025;
  /// Dimension-dependent coefficients (Gao and Han); standard 1, 2, 0.5, 0.5
  /// when false.
  bool adaptive = true;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  long evaluations = 0;
  /// Best value after each iteration.
  std::vector<double> best_history;
};

template <class Objective>
NelderMeadResult nelder_mead(Objective&& f, const std::vector<double>& x0,
                             const NelderMeadOptions& opts = {}) {
  const std::size_t n = x0.size();
  const double dn = static_cast<double>(std::max<std::size_t>(n, 1));
  const double alpha = 1.0;
  const double gamma = opts.adaptive ? 1.0 + 2.0 / dn : 2.0;
  const double rho = opts.adaptive ? 0.75 - 1.0 / (2.0 * dn) : 0.5;
  const double sigma = opts.adaptive ? 1.0 - 1.0 / dn : 0.5;

  NelderMeadResult result;
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    double& xi = simplex[i + 1][i];
    xi = xi != 0.0 ? (1.0 + opts.rel_step) * xi : opts.zero_step;
  }
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);
  result.evaluations = static_cast<long>(n + 1);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s[i] = std::move(simplex[order[i]]);
      v[i] = fv[order[i]];
    }
    simplex = std::move(s);
    fv = std::move(v);
  };
  sort_simplex();

  std::vector<double> centroid(n), xr(n), xe(n), xc(n), vertex_sum(n);
  auto recompute_sum = [&] {
    std::fill(vertex_sum.begin(), vertex_sum.end(), 0.0);
    for (const auto& v : simplex)
      for (std::size_t j = 0; j < n; ++j) vertex_sum[j] += v[j];
  };
  // replaces the worst vertex, keeping vertex_sum current
  auto replace_worst = [&](const std::vector<double>& x, double fx) {
    for (std::size_t j = 0; j < n; ++j) vertex_sum[j] += x[j] - simplex[n][j];
    simplex[n] = x;
    fv[n] = fx;
  };
  auto blend = [&](std::vector<double>& out, double t) {
    // out = centroid + t (centroid - worst)
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (centroid[j] - simplex[n][j]);
  };

  while (result.iterations < opts.max_iterations) {
    if (std::abs(fv[n] - fv[0]) <= opts.f_tolerance) {
      double xspread = 0.0;
      for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          xspread = std::max(xspread, std::abs(simplex[i][j] - simplex[0][j]));
      if (xspread <= opts.x_tolerance) break;
    }

    ++result.iterations;
    if (result.iterations % static_cast<int>(n + 1) == 1) recompute_sum();
    for (std::size_t j = 0; j < n; ++j) centroid[j] = (vertex_sum[j] - simplex[n][j]) / dn;

    blend(xr, alpha);
    const double fr = f(xr);
    ++result.evaluations;
    bool shrink = false;

    if (fr < fv[0]) {
      blend(xe, alpha * gamma);
      const double fe = f(xe);
      ++result.evaluations;
      if (fe < fr) {
        replace_worst(xe, fe);
      } else {
        replace_worst(xr, fr);
      }
    } else if (fr < fv[n - 1]) {
      replace_worst(xr, fr);
    } else if (fr < fv[n]) {
      blend(xc, alpha * rho);
      const double fc = f(xc);
      ++result.evaluations;
      if (fc <= fr) {
        replace_worst(xc, fc);
      } else {
        shrink = true;
      }
    } else {
      blend(xc, -rho);
      const double fc = f(xc);
      ++result.evaluations;
      if (fc < fv[n]) {
        replace_worst(xc, fc);
      } else {
        shrink = true;
      }
    }

    if (shrink) {
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
          simplex[i][j] = simplex[0][j] + sigma * (simplex[i][j] - simplex[0][j]);
        fv[i] = f(simplex[i]);
      }
      result.evaluations += static_cast<long>(n);
      recompute_sum();
      sort_simplex();
    } else {
      for (std::size_t i = n; i > 0 && fv[i] < fv[i - 1]; --i) {
        std::swap(fv[i], fv[i - 1]);
        std::swap(simplex[i], simplex[i - 1]);
      }
    }
    result.best_history.push_back(fv[0]);
  }

  result.x = simplex[0];
  result.value = fv[0];
  return result;
}

}  // namespace qent
