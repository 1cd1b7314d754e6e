// Acceptance runner. `acceptance N` checks criterion N (1-7); without an
// argument every criterion runs. One PASS/FAIL line per criterion; the exit
// status is nonzero if any checked criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qent/entanglement.hpp"
#include "qent/verify.hpp"
#include "qent/werner.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome werner_endpoints() {
  const double lo = qent::werner_er_closed(0.5);
  const double hi = qent::werner_er_closed(1.0);
  const double err = std::max(std::abs(lo), std::abs(hi - std::numbers::ln2));
  return {err <= 1e-12, fmt("max endpoint error %.3e", err)};
}

Outcome figure_sweep() {
  const auto t0 = Clock::now();
  const auto sweep = qent::werner_sweep(0.5, 1.0, 0.005, 0.35);
  const double dt = seconds_since(t0);
  const auto& c = sweep.crossings;
  const bool located = c.size() == 2 && c[0].F > 0.85 && c[0].F < 0.95 && c[1].F > 0.96 && c[1].F < 1.0;
  std::string detail = std::to_string(c.size()) + " crossings at";
  for (const auto& x : c) detail += fmt(" %.6f", x.F);
  detail += fmt(", %.3f s", dt);
  return {located && dt < 1.0, detail};
}

Outcome closed_form_oracle() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double F = i / 20.0;
    const auto w = qent::werner_state(F);
    for (int k = 1; k <= 19; ++k) {
      const double q = k / 20.0;
      worst = std::max(worst, std::abs(qent::werner_tsallis_closed(F, q) - qent::tsallis_measure(w, q).value));
    }
  }
  const double dt = seconds_since(t0);
  return {worst < 1e-10 && dt < 5.0, fmt("max |closed - matrix| %.3e", worst) + fmt(" over 21x19 grid, %.3f s", dt)};
}

Outcome er_optimizer() {
  bool pass = true;
  std::string detail;
  double slowest = 0.0;
  for (int i = 5; i <= 10; ++i) {
    const double F = i / 10.0;
    const auto t0 = Clock::now();
    double value = NAN;
    try {
      value = qent::relative_entropy_of_entanglement(qent::werner_state(F)).value;
    } catch (const qent::Error& e) {
      detail += std::string(" F=") + fmt("%.1f", F) + " threw " + e.what() + ";";
      pass = false;
      continue;
    }
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    const double err = std::abs(value - qent::werner_er_closed(F));
    pass = pass && err < 2e-3 && dt < 180.0;
    detail += fmt(" F=%.1f", F) + fmt(" err=%.2e", err) + fmt(" (%.1f s);", dt);
  }
  return {pass, fmt("slowest point %.1f s:", slowest) + detail};
}

Outcome q_matching() {
  const auto t0 = Clock::now();
  const auto r = qent::match_q(qent::werner_state(0.9), qent::werner_er_closed(0.9), 1e-9);
  const double dt = seconds_since(t0);
  const bool pass = r.q_star >= 0.30 && r.q_star <= 0.40 && r.residual < 1e-6 && dt < 1.0;
  return {pass, fmt("q* = %.9f", r.q_star) + fmt(", residual %.2e", r.residual) + fmt(", %.3f s", dt)};
}

Outcome property_suites() {
  qent::VerifyConfig cfg;
  cfg.trials = 200;
  cfg.seed = 7;
  const auto t0 = Clock::now();
  const auto reports = qent::run_suites("all", cfg);
  const double dt = seconds_since(t0);
  std::size_t failures = 0;
  for (const auto& s : reports) {
    failures += s.failures.size();
    for (const auto& p : s.properties) {
      std::printf("    %-8s %-20s %-32s %6ld/%-6ld worst slack %.3e\n", p.passed == p.checks ? "ok" : "FAILED",
                  s.suite.c_str(), p.name.c_str(), p.passed, p.checks, p.worst_slack);
    }
  }
  return {failures == 0 && dt < 120.0,
          std::to_string(failures) + " failures in " + std::to_string(reports.size()) + " suites" +
              fmt(", %.1f s", dt)};
}

Outcome commuting_oracle() {
  qent::VerifyConfig cfg;
  cfg.trials = 100;
  cfg.seed = 7;
  const auto r = qent::run_suites("commuting-oracle", cfg).front();
  double worst = INFINITY;
  long checks = 0;
  for (const auto& p : r.properties) {
    worst = std::min(worst, p.worst_slack);
    checks += p.checks;
  }
  return {r.ok(), std::to_string(checks) + " checks" + fmt(", worst slack %.3e against 1e-12", worst)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"Werner E^R endpoints", werner_endpoints},
      {"Werner sweep crossings at q=0.35", figure_sweep},
      {"closed form vs matrix path", closed_form_oracle},
      {"E^R optimizer vs closed form", er_optimizer},
      {"q* matching on W_0.9", q_matching},
      {"property suites", property_suites},
      {"commuting-case oracle", commuting_oracle},
  };

  std::vector<int> selected;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
      return 2;
    }
    selected.push_back(n);
  } else {
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) selected.push_back(n);
  }

  bool all = true;
  for (int n : selected) {
    const auto& c = criteria[n - 1];
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s: %s [%.2f s]\n", n, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
