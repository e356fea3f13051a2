#include "pbit/gauss_hermite.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "pbit/errors.hpp"

namespace pbit {

namespace {

// Gauss-Hermite rules via Newton iteration on the orthonormal physicists'
// recurrence, all positive roots advanced in lockstep so the k-loop
// vectorizes. Raw polynomial values reach e^{x^2/2} near the extreme roots,
// so each root carries a power-of-two scale exponent; scaling by 2^-600 is
// exact and Newton uses only same-scale ratios. Rescaling zeroes the
// Christoffel accumulator, dropping terms ~2^-1200 below the dominant scale.
struct BatchEval {
  std::vector<double> p_n, p_nm1, christoffel;
  std::vector<long> scale_log2;
};

// With checks every 16 steps and per-step growth <= ~1025x (|x a_k| at the
// largest cap), |p| stays below 2^460 and p^2 below double range.
constexpr double kRescaleAt = 0x1.0p300;
constexpr double kDown = 0x1.0p-600;
constexpr int kRescaleEvery = 16;

void evaluate_batch(int n, const std::vector<double>& coef_a, const std::vector<double>& coef_b,
                    const std::vector<double>& x, BatchEval& ev, bool with_weights) {
  const std::size_t m = x.size();
  ev.p_n.assign(m, 0.75112554446494248286);  // pi^{-1/4}
  ev.p_nm1.assign(m, 0.0);
  ev.christoffel.assign(m, 0.0);
  ev.scale_log2.assign(m, 0);
  if (with_weights) {
    for (std::size_t i = 0; i < m; ++i) ev.christoffel[i] = ev.p_n[i] * ev.p_n[i];
  }

  double* __restrict__ p = ev.p_n.data();
  double* __restrict__ pm1 = ev.p_nm1.data();
  double* __restrict__ chris = ev.christoffel.data();
  const double* __restrict__ xs = x.data();

  for (int k = 0; k < n; ++k) {
    const double a = coef_a[static_cast<std::size_t>(k)];
    const double b = coef_b[static_cast<std::size_t>(k)];
    if (with_weights && k + 1 < n) {
      for (std::size_t i = 0; i < m; ++i) {
        const double next = xs[i] * a * p[i] - b * pm1[i];
        pm1[i] = p[i];
        p[i] = next;
        chris[i] += next * next;
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        const double next = xs[i] * a * p[i] - b * pm1[i];
        pm1[i] = p[i];
        p[i] = next;
      }
    }
    if ((k + 1) % kRescaleEvery == 0) {
      for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(p[i]) > kRescaleAt || std::abs(pm1[i]) > kRescaleAt) {
          p[i] *= kDown;
          pm1[i] *= kDown;
          chris[i] = 0.0;  // previous terms are 2^-1200 below the new scale
          ev.scale_log2[i] += 600;
        }
      }
    }
  }
}

GaussHermiteRule build_rule(int n) {
  if (n < 1) throw DataError("gauss_hermite_rule: need at least one node");

  GaussHermiteRule rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<double> coef_a(static_cast<std::size_t>(n)), coef_b(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    coef_a[static_cast<std::size_t>(k)] = std::sqrt(2.0 / (k + 1));
    coef_b[static_cast<std::size_t>(k)] = std::sqrt(static_cast<double>(k) / (k + 1));
  }

  // Initial guesses from the WKB phase condition
  //   theta - sin(2 theta)/2 = 2 pi (i + 3/4) / (2n+1),  x = sqrt(2n+1) cos(theta),
  // largest root first. The guesses are root-independent (no sequential
  // chaining), so the Newton polish runs in lockstep over all roots.
  const int m = n / 2;  // strictly positive roots; odd n adds the exact 0 root
  const double xsq = 2.0 * n + 1.0;
  const double edge = std::sqrt(xsq);
  std::vector<double> z(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double r = 2.0 * std::numbers::pi * (i + 0.75) / xsq;
    double theta = std::cbrt(1.5 * r);  // exact solution of the r -> 0 expansion
    theta = std::min(theta, std::numbers::pi / 2);
    for (int it = 0; it < 32; ++it) {
      const double f = theta - 0.5 * std::sin(2.0 * theta) - r;
      const double df = 1.0 - std::cos(2.0 * theta);
      if (df <= 1e-300) break;
      const double dt = f / df;
      theta -= dt;
      if (std::abs(dt) < 1e-13) break;
    }
    z[static_cast<std::size_t>(i)] = edge * std::cos(theta);
  }

  // Newton steps are clamped to a fraction of the local root gap so a guess
  // near an oscillation extremum cannot escape its basin.
  std::vector<double> max_step(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    double gap = i > 0 ? z[ui - 1] - z[ui] : edge - z[ui];
    if (i + 1 < m) gap = std::min(gap, z[ui] - z[ui + 1]);
    max_step[ui] = 0.45 * std::max(gap, 1e-8);
  }

  // Converged roots drop out of subsequent sweeps; most settle within three.
  const double dpn_factor = std::sqrt(2.0 * n);
  BatchEval ev;
  std::vector<int> active(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) active[static_cast<std::size_t>(i)] = i;
  std::vector<double> xa;
  for (int sweep = 0; sweep < 48 && !active.empty(); ++sweep) {
    xa.resize(active.size());
    for (std::size_t j = 0; j < active.size(); ++j) {
      xa[j] = z[static_cast<std::size_t>(active[j])];
    }
    evaluate_batch(n, coef_a, coef_b, xa, ev, false);
    std::vector<int> still;
    for (std::size_t j = 0; j < active.size(); ++j) {
      const std::size_t ui = static_cast<std::size_t>(active[j]);
      double dz = ev.p_n[j] / (dpn_factor * ev.p_nm1[j]);
      if (std::abs(dz) > max_step[ui]) dz = std::copysign(max_step[ui], dz);
      z[ui] -= dz;
      if (std::abs(dz) > 1e-14 * std::max(1.0, std::abs(z[ui]))) still.push_back(active[j]);
    }
    active.swap(still);
  }
  const bool converged = active.empty();
  if (!converged) {
    throw NumericalError("gauss_hermite_rule: Newton sweeps failed at n = " + std::to_string(n));
  }
  for (int i = 1; i < m; ++i) {
    if (!(z[static_cast<std::size_t>(i)] < z[static_cast<std::size_t>(i - 1)]) ||
        !(z[static_cast<std::size_t>(i)] > 0.0)) {
      throw NumericalError("gauss_hermite_rule: root ordering lost at n = " + std::to_string(n));
    }
  }

  if (m > 0) {
    evaluate_batch(n, coef_a, coef_b, z, ev, true);
    for (int i = 0; i < m; ++i) {
      const std::size_t ui = static_cast<std::size_t>(i);
      // w = 1 / Sum_{k<n} p_k(z)^2; underflows to 0 for extreme nodes, which
      // is harmless for bounded integrands
      const double log2_w = -2.0 * static_cast<double>(ev.scale_log2[ui]) -
                            std::log2(ev.christoffel[ui]);
      const double w = std::exp2(log2_w);
      rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z[ui];
      rule.nodes[ui] = -z[ui];
      rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
      rule.weights[ui] = w;
    }
  }
  if (n % 2 == 1) {
    const std::vector<double> zero{0.0};
    evaluate_batch(n, coef_a, coef_b, zero, ev, true);
    const std::size_t mid = static_cast<std::size_t>(n / 2);
    rule.nodes[mid] = 0.0;
    rule.weights[mid] =
        std::exp2(-2.0 * static_cast<double>(ev.scale_log2[0]) - std::log2(ev.christoffel[0]));
  }
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite_rule(int n) {
  static std::mutex mtx;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

}  // namespace pbit
