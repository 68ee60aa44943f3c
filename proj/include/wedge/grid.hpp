#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "wedge/errors.hpp"

namespace wedge {

// Uniform 1-D grid description used by the cap and profile solvers.
struct GridSpec {
  std::size_t nodes = 1025;          // grid points including both endpoints
  std::string quadrature = "simpson";
  int refinement = 0;                // each level doubles the interval count

  std::size_t effective_nodes() const {
    std::size_t intervals = nodes - 1;
    for (int k = 0; k < refinement; ++k) intervals *= 2;
    return intervals + 1;
  }

  void validate() const {
    if (nodes < 16) throw DomainError("GridSpec: node count must be >= 16");
    if (refinement < 0) throw DomainError("GridSpec: refinement must be >= 0");
  }
};

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> x(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + h * static_cast<double>(i);
  x.back() = b;
  return x;
}

// Composite Simpson on uniform samples; falls back to a 3/8 patch when the
// interval count is odd.
inline double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  std::size_t m = n - 1;  // intervals
  double total = 0.0;
  std::size_t start = 0;
  if (m % 2 == 1) {
    // 3/8 rule on the first three intervals
    if (n >= 4) {
      total += 3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3]);
      start = 3;
    } else {
      return 0.5 * h * (f[0] + 2.0 * f[1] + f[2]);
    }
  }
  double s = f[start] + f[n - 1];
  for (std::size_t i = start + 1; i < n - 1; ++i)
    s += (((i - start) % 2 == 1) ? 4.0 : 2.0) * f[i];
  total += h / 3.0 * s;
  return total;
}

// Cumulative trapezoid, F[0] = 0.
inline std::vector<double> cumtrapz(const std::vector<double>& f, double h) {
  std::vector<double> F(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i)
    F[i] = F[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return F;
}

// Cubic Hermite interpolation on a uniform grid with stored values and
// derivatives.  Exact to O(h^4) for smooth data.
struct HermiteTable {
  double x0 = 0.0, h = 1.0;
  std::vector<double> v, d;

  double xmax() const { return x0 + h * static_cast<double>(v.size() - 1); }

  double eval(double x) const {
    const auto [i, u] = locate(x);
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * v[i] + (u3 - 2 * u2 + u) * h * d[i] +
           (-2 * u3 + 3 * u2) * v[i + 1] + (u3 - u2) * h * d[i + 1];
  }

  double slope(double x) const {
    const auto [i, u] = locate(x);
    const double u2 = u * u;
    return ((6 * u2 - 6 * u) * v[i] + (3 * u2 - 4 * u + 1) * h * d[i] +
            (-6 * u2 + 6 * u) * v[i + 1] + (3 * u2 - 2 * u) * h * d[i + 1]) / h;
  }

 private:
  std::pair<std::size_t, double> locate(double x) const {
    double s = (x - x0) / h;
    std::size_t i = 0;
    if (s >= static_cast<double>(v.size() - 1)) {
      i = v.size() - 2;
    } else if (s > 0.0) {
      i = static_cast<std::size_t>(s);
    }
    return {i, s - static_cast<double>(i)};
  }
};

}  // namespace wedge
