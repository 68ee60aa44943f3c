#pragma once

#include <functional>
#include <vector>

#include "wedge/grid.hpp"

namespace wedge {

enum class BcAtZero { Symmetry, Dirichlet };

// Axisymmetric spherical cap in S^{n-1}, parametrized by the half-angle beta.
struct CapSpec {
  int n = 3;
  double beta = 1.5707963267948966;
  BcAtZero bc_at_zero = BcAtZero::Symmetry;

  void validate() const;
};

// gamma is the positive root of gamma(gamma+n-2) = lambda; p* the matching
// critical exponent.
struct Exponents {
  double gamma;
  double p_star;
};

Exponents exponents(int n, double lambda);

inline double alpha_exponent(double p) { return 2.0 / (p - 1.0); }

// Linear coefficient of the cap profile equation, kappa = alpha(alpha+2-n);
// kappa(p*) = lambda and the spectral gap is eps = lambda - kappa(p).
double linear_shift(int n, double p);
double spectral_gap(int n, double lambda, double p);

// Inverse of p -> spectral_gap(n, lambda, p) on p > p*.
double p_for_gap(int n, double lambda, double eps);

// Surface measure of S^{n-2}, relating cap-surface integrals to the 1-D
// reduction.  C(2) = 1 by the arc-length convention.
double cap_surface_factor(int n);

struct SpectralData {
  CapSpec cap;
  GridSpec grid;
  double lambda = 0.0;
  double gamma = 0.0;
  double p_star = 0.0;
  double c_n = 0.0;
  std::vector<double> t;           // nodes on [0, beta]
  std::vector<double> phi1;        // normalized first eigenfunction
  std::vector<double> phi1_prime;

  double h() const { return t[1] - t[0]; }
  double phi1_at(double angle) const;
  double phi1_prime_at(double angle) const;
  double sup_phi1() const;
};

// First eigenpair of -sin^{2-n}t (sin^{n-2}t phi')' = lambda phi on (0, beta),
// by shooting with a series start at the coordinate singularity and bisection
// restricted to the zero-node branch.
SpectralData solve_cap_eigen(const CapSpec& cap, const GridSpec& grid);

// Sup-norm defect of the eigenfunction's double-integral representation.
double representation_residual(const SpectralData& spec);

struct MazyaBracket {
  double K;
  double lower;
  double upper;
};

// Best-constant bracket for the weighted 1-D Sobolev inequality:
// K = sup_r [int_0^r B]^{1/q} [int_r^s 1/A]^{1/2}, best constant in [K, upper].
MazyaBracket mazya_constant(const std::function<double(double)>& weightA,
                            const std::function<double(double)>& weightB, double q,
                            double s, std::size_t nodes = 8193);

// int_omega phi1^power dS via the 1-D reduction and composite quadrature.
double moment(const SpectralData& spec, double power);

}  // namespace wedge
