#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "mcf/errors.hpp"

namespace mcf {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_init = 0.0;  // 0: choose from the interval length
  double h_max = 0.0;   // 0: unbounded
  long max_steps = 2'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  double max_defect = 0.0;  // sup over steps of |p'(x) - f(x, p(x))| at step midpoints
};

/// Dormand-Prince 5(4) with the standard fourth-order continuous extension.
/// Integration may run forwards or backwards (x_end < x0).
template <std::size_t N>
class DormandPrince45 {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<void(double, const State&, State&)>;
  // Called for each requested output abscissa, in order.
  using Observer = std::function<void(std::size_t, double, const State&)>;
  // Returns false to abort integration (after the current step).
  using Monitor = std::function<bool(double, const State&)>;

  explicit DormandPrince45(OdeOptions opt = {}) : opt_(opt) {}

  OdeStats integrate(const Rhs& f, double x0, State y, std::span<const double> outputs,
                     const Observer& observe, const Monitor& monitor = {}) const {
    OdeStats stats;
    if (outputs.empty()) return stats;
    const double x_end = outputs.back();
    const double dir = x_end >= x0 ? 1.0 : -1.0;
    double x = x0;
    std::size_t next = 0;
    while (next < outputs.size() && dir * (outputs[next] - x) <= 0) {
      observe(next, outputs[next], y);
      ++next;
    }
    double h = opt_.h_init > 0 ? opt_.h_init : std::abs(x_end - x0) * 1e-4;
    if (h == 0.0) return stats;
    const double hmax = opt_.h_max > 0 ? opt_.h_max : std::abs(x_end - x0);
    State k1, k2, k3, k4, k5, k6, k7, yt, ynew, err;
    f(x, y, k1);
    long steps = 0;
    while (next < outputs.size()) {
      if (++steps > opt_.max_steps) fail(ErrorCode::NonConvergence, "ODE step budget exhausted");
      h = std::min(h, hmax);
      if (dir * (x + dir * h - x_end) > 0) h = std::abs(x_end - x);
      const double hs = dir * h;
      for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a21 * k1[i]);
      f(x + c2 * hs, yt, k2);
      for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
      f(x + c3 * hs, yt, k3);
      for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      f(x + c4 * hs, yt, k4);
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      f(x + c5 * hs, yt, k5);
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      f(x + hs, yt, k6);
      for (std::size_t i = 0; i < N; ++i)
        ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      f(x + hs, ynew, k7);
      double e2 = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        e2 += (err[i] / sc) * (err[i] / sc);
      }
      const double enorm = std::sqrt(e2 / N);
      if (!std::isfinite(enorm)) {
        h *= 0.1;
        ++stats.rejected;
        if (h < 1e-300) fail(ErrorCode::NonConvergence, "ODE step size underflow");
        continue;
      }
      if (enorm > 1.0) {
        h *= std::max(0.2, 0.9 * std::pow(enorm, -0.2));
        ++stats.rejected;
        continue;
      }
      // Dense output coefficients for this step.
      Dense d;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = hs * k1[i] - ydiff;
        d.r1[i] = y[i];
        d.r2[i] = ydiff;
        d.r3[i] = bspl;
        d.r4[i] = ydiff - hs * k7[i] - bspl;
        d.r5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      d.x0 = x;
      d.h = hs;
      {
        State ym, dym, fm;
        d.eval(0.5, ym, dym);
        f(x + 0.5 * hs, ym, fm);
        for (std::size_t i = 0; i < N; ++i) {
          const double scale = 1.0 + std::abs(fm[i]);
          stats.max_defect = std::max(stats.max_defect, std::abs(dym[i] - fm[i]) / scale);
        }
      }
      const double x_new = x + hs;
      while (next < outputs.size() && dir * (outputs[next] - x_new) <= 0) {
        State yo, dyo;
        d.eval((outputs[next] - x) / hs, yo, dyo);
        observe(next, outputs[next], yo);
        ++next;
      }
      x = x_new;
      y = ynew;
      k1 = k7;
      ++stats.accepted;
      if (monitor && !monitor(x, y)) break;
      h *= std::min(5.0, 0.9 * std::pow(std::max(enorm, 1e-10), -0.2));
    }
    return stats;
  }

 private:
  struct Dense {
    State r1, r2, r3, r4, r5;
    double x0 = 0, h = 0;
    void eval(double th, State& y, State& dy) const {
      const double th1 = 1.0 - th;
      for (std::size_t i = 0; i < N; ++i) {
        const double A = r4[i] + th1 * r5[i];
        const double B = r3[i] + th * A;
        const double C = r2[i] + th1 * B;
        y[i] = r1[i] + th * C;
        const double dA = -r5[i];
        const double dB = A + th * dA;
        const double dC = -B + th1 * dB;
        dy[i] = (C + th * dC) / h;
      }
    }
  };

  OdeOptions opt_;

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                          d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                          d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

}  // namespace mcf
