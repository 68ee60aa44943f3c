#pragma once

#include <vector>

#include "wedge/cap_spectrum.hpp"

namespace wedge {

// Positive cap profile: solves sin^{2-n}t (sin^{n-2}t phi')' + kappa phi
// + phi^p = 0 on (0, beta) with phi'(0) = 0, phi(beta) = 0, where
// kappa = alpha(alpha+2-n).  r^{-alpha} phi(t) then solves the cone problem.
struct ProfileFn {
  CapSpec cap;
  double p = 0.0;
  double kappa = 0.0;
  double amplitude = 0.0;  // phi(0)
  GridSpec grid;
  std::vector<double> t;
  std::vector<double> phi_p;
  std::vector<double> phi_p_prime;

  double h() const { return t[1] - t[0]; }
  double at(double angle) const;
  double slope_at(double angle) const;
  double sup() const;
};

// Amplitude shooting with overshoot/undershoot bisection.  p must exceed the
// critical exponent of `spec`; for n >= 4 also p < (n+1)/(n-3).
ProfileFn solve_profile(const SpectralData& spec, double p, const GridSpec& grid);

// Sup over the sampled angles of |r^{alpha+2} (Delta w + w^p)| for
// w = r^{-alpha} phi(t); independent of r by homogeneity (r only validated).
double cone_residual(const ProfileFn& profile, const std::vector<double>& t_samples,
                     double r = 1.0);

// Relative sup-distance between phi_p and its near-critical predictor
// (eps/c_p)^{1/(p-1)} phi_1 with c_p = moment(spec, p+1).
double near_critical_asymptote(const SpectralData& spec, double p,
                               const ProfileFn& profile);

}  // namespace wedge
