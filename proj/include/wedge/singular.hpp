#pragma once

#include <functional>
#include <vector>

#include "wedge/heteroclinic.hpp"
#include "wedge/profile.hpp"
#include "wedge/strip.hpp"

namespace wedge {

// u1(r, theta) = r^{-alpha} (a(-log r) phi1(theta) + psi(-log r, theta/beta)),
// positive in the cone, vanishing on theta = beta.
class SingularSolution {
 public:
  SingularSolution(SpectralData spec, Heteroclinic het, StripField psi, double p);

  // evaluation; r must satisfy -log r within the psi truncation window
  double operator()(double r, double theta) const;

  double alpha() const { return alpha_; }
  double p() const { return p_; }
  double T() const { return psi_.grid.T; }
  const SpectralData& spec() const { return spec_; }
  const Heteroclinic& het() const { return het_; }

 private:
  SpectralData spec_;
  Heteroclinic het_;
  StripField psi_;
  double p_ = 0.0, alpha_ = 0.0;
};

SingularSolution assemble_u1(const SpectralData& spec, const Heteroclinic& het,
                             const StripField& psi, double p);

struct AsymptoticsReport {
  std::vector<double> origin_mismatch;  // sup_theta |r^alpha u/phi_p - c0|
  double origin_c0 = 0.0;               // measured limit constant
  double infinity_slope = 0.0;          // regression of log(u/phi1) vs log r
  double pointwise_C = 0.0;             // sup r^alpha |u| / sup phi_p
};

AsymptoticsReport verify_asymptotics(const SingularSolution& u, const ProfileFn& profile,
                                     const std::vector<double>& r_origin = {1e-2, 1e-3,
                                                                            1e-4});

struct GradientReport {
  double C1 = 0.0;  // sup r^{alpha+1} |grad u|
  double C2 = 0.0;  // sup r^{alpha+2} |Hess u|
};

// centered finite differences in polar coordinates over the sampled radii
GradientReport gradient_estimates(const std::function<double(double, double)>& u,
                                  double alpha, double beta,
                                  const std::vector<double>& radii);

// Very-weak-solution pairing int (u Delta v + u^p v) over the annulus
// r0 < r < r1 with the in-code test function v = b(r) phi1(theta),
// b a C^1 bump vanishing at both radii.
double weak_residual(const std::function<double(double, double)>& u,
                     const SpectralData& spec, double p, double r0, double r1,
                     std::size_t nr = 2049, std::size_t ntheta = 513);

// caller-supplied radial profile (value, first, second derivative); must
// vanish at the annulus ends
double weak_residual(const std::function<double(double, double)>& u,
                     const SpectralData& spec, double p, double r0, double r1,
                     const std::function<double(double)>& b,
                     const std::function<double(double)>& db,
                     const std::function<double(double)>& d2b, std::size_t nr = 2049,
                     std::size_t ntheta = 513);

}  // namespace wedge
