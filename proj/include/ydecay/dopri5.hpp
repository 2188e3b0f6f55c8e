#pragma once

// Adaptive Dormand-Prince 5(4) stepper for small fixed-size systems.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace ydecay::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Tolerance {
  Vec<N> atol;
  Vec<N> rtol;
};

struct StepLimits {
  double h_init = 1e-3;
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 200000;
};

enum class Outcome { reached_end, stopped, step_underflow, rhs_failure };

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {
// clang-format off
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b(5th) - b(4th)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// clang-format on
}  // namespace detail

/// Integrates y' = f(x, y) from x0 to x1 (x1 > x0).
///
/// `f(x, y, dy)` returns false when y is outside the domain of the right-hand
/// side; the step is then retried with a smaller h. `observe(x, y, dy)` is called
/// once at x0 and after every accepted step; returning false stops integration.
template <std::size_t N, class Rhs, class Observer>
Outcome integrate(Rhs&& f, double x0, double x1, Vec<N> y, const Tolerance<N>& tol,
                  const StepLimits& limits, Observer&& observe, Stats* stats = nullptr) {
  using namespace detail;
  Vec<N> k1, k2, k3, k4, k5, k6, k7, yt, ynew;
  double x = x0;
  if (!f(x, y, k1)) return Outcome::rhs_failure;
  if (!observe(x, y, k1)) return Outcome::stopped;

  double h = std::min({limits.h_init, limits.h_max, x1 - x0});
  bool last_rejected = false;
  bool rhs_failed = false;
  std::size_t steps = 0;

  while (x < x1) {
    if (++steps > limits.max_steps) return Outcome::step_underflow;
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    bool final_step = false;
    if (x + h >= x1 - h_min) {
      h = x1 - x;
      final_step = true;
    }
    if (h < h_min) return rhs_failed ? Outcome::rhs_failure : Outcome::step_underflow;

    auto stage = [&](auto&& combine) {
      for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * combine(i);
    };
    bool ok = true;
    stage([&](std::size_t i) { return a21 * k1[i]; });
    ok = ok && f(x + c2 * h, yt, k2);
    if (ok) {
      stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
      ok = f(x + c3 * h, yt, k3);
    }
    if (ok) {
      stage([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
      ok = f(x + c4 * h, yt, k4);
    }
    if (ok) {
      stage([&](std::size_t i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; });
      ok = f(x + c5 * h, yt, k5);
    }
    if (ok) {
      stage([&](std::size_t i) {
        return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
      });
      ok = f(x + h, yt, k6);
    }
    const double x_next = final_step ? x1 : x + h;
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      ok = f(x_next, ynew, k7);
    }
    rhs_failed = !ok;
    if (!ok) {
      if (stats) ++stats->rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = tol.atol[i] + tol.rtol[i] * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    if (!std::isfinite(err)) {
      if (stats) ++stats->rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    if (err <= 1.0) {
      x = x_next;
      y = ynew;
      k1 = k7;
      if (stats) ++stats->accepted;
      if (!observe(x, y, k1)) return Outcome::stopped;
      double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h = std::min(h * fac, limits.h_max);
      last_rejected = false;
    } else {
      if (stats) ++stats->rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      last_rejected = true;
    }
  }
  return Outcome::reached_end;
}

}  // namespace ydecay::ode
