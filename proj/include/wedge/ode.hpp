#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "wedge/errors.hpp"

namespace wedge {

// Adaptive Cash-Karp RK45 for small fixed-size systems.
template <std::size_t N>
class AdaptiveRK {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<void(double, const State&, State&)>;

  AdaptiveRK(Rhs f, double rtol, double atol) : f_(std::move(f)), rtol_(rtol), atol_(atol) {}

  // Advance (t, y) to t_end in place.
  void integrate_to(double& t, State& y, double t_end) {
    const double dir = (t_end >= t) ? 1.0 : -1.0;
    double h = dir * std::max(1e-8, 1e-3 * std::abs(t_end - t));
    std::size_t steps = 0;
    while (dir * (t_end - t) > 0.0) {
      if (dir * (t + h) > dir * t_end) h = t_end - t;
      State y5;
      double err = step(t, y, h, y5);
      if (err <= 1.0) {
        t += h;
        y = y5;
        h *= std::min(5.0, 0.9 * std::pow(err > 1e-14 ? err : 1e-14, -0.2));
      } else {
        h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
      }
      if (++steps > 50'000'000)
        throw SolverError("AdaptiveRK: step limit exceeded",
                          "t=" + std::to_string(t) + " h=" + std::to_string(h));
    }
  }

 private:
  // One Cash-Karp step; returns scaled error estimate.
  double step(double t, const State& y, double h, State& y5) const {
    static constexpr double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
    static constexpr double b21 = 0.2;
    static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    static constexpr double b41 = 0.3, b42 = -0.9, b43 = 1.2;
    static constexpr double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
    static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                            b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
    static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                            c6 = 512.0 / 1771.0;
    static constexpr double dc1 = c1 - 2825.0 / 27648.0, dc3 = c3 - 18575.0 / 48384.0,
                            dc4 = c4 - 13525.0 / 55296.0, dc5 = -277.0 / 14336.0,
                            dc6 = c6 - 0.25;
    State k1, k2, k3, k4, k5, k6, tmp;
    f_(t, y, k1);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * b21 * k1[i];
    f_(t + a2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (b31 * k1[i] + b32 * k2[i]);
    f_(t + a3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
    f_(t + a4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
    f_(t + a5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] + b64 * k4[i] + b65 * k5[i]);
    f_(t + a6 * h, tmp, k6);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      y5[i] = y[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
      const double e =
          h * (dc1 * k1[i] + dc3 * k3[i] + dc4 * k4[i] + dc5 * k5[i] + dc6 * k6[i]);
      const double scale = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    return err;
  }

  Rhs f_;
  double rtol_, atol_;
};

}  // namespace wedge
