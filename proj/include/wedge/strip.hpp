#pragma once

#include <memory>
#include <vector>

#include "wedge/cap_spectrum.hpp"
#include "wedge/heteroclinic.hpp"

namespace wedge {

// Truncated log-cylinder strip [-T, T] x [0, 1]; s is the angle scaled by beta.
struct StripGrid {
  double T = 0.0;
  std::size_t nt = 0;  // t-nodes including both ends
  std::size_t ns = 0;  // s-nodes including both ends
  std::vector<double> t, s;
  double ht = 0.0, hs = 0.0;

  static StripGrid make(double T, std::size_t nt, std::size_t ns);
  void validate() const;
  std::size_t index(std::size_t i, std::size_t j) const { return i * ns + j; }
};

// Smallest truncation half-length that keeps both tails below the defaults.
double default_T(const HeteroclinicParams& params);

struct StripField {
  StripGrid grid;
  std::vector<double> v;  // nt*ns values, row i = fixed t

  double& at(std::size_t i, std::size_t j) { return v[grid.index(i, j)]; }
  double at(std::size_t i, std::size_t j) const { return v[grid.index(i, j)]; }
  double sup() const;
  double interp(double t, double s) const;  // bilinear, clamped to the grid box

  static StripField zeros(const StripGrid& g);
};

// Weighted sup-norms of Prop-type estimates: d(s) = beta(1-s) is the boundary
// distance, the t-weight is a(t)^{p0}.
double weighted_norm_psi(const StripField& f, const Heteroclinic& het, double beta,
                         double p0);
double weighted_norm_g(const StripField& f, const Heteroclinic& het, double p0);

// Finite-difference handle for the linearized strip operator
//   L psi = psi_tt + A psi_t + (1/b^2) psi_ss + (n-2) cot(b s)/b psi_s
//           + (lambda - eps) psi + p phi0^{p-1} psi,   phi0 = a(t) phi1(b s),
// with zero Dirichlet data at t = +-T and s = 1 and the parity-regularized
// stencil at s = 0.
class StripOperator {
 public:
  StripOperator(const SpectralData& spec, const Heteroclinic& het,
                const StripGrid& grid, double p0);
  ~StripOperator();
  StripOperator(StripOperator&&) noexcept;

  const StripGrid& grid() const;
  double p0() const;
  double beta() const;
  const Heteroclinic& het() const;

  StripField apply(const StripField& f) const;         // OpenMP stencil sweep
  StripField apply_serial(const StripField& f) const;  // reference twin
  StripField solve(const StripField& g) const;         // banded LU, cached

  // The truncated grid retains a remnant of the translation mode that the
  // a^{-p0} weight excludes from the continuum problem; solves deflate it.
  double kernel_sigma() const;                     // its singular-value estimate
  StripField project_domain(const StripField&) const;  // remove right component
  StripField project_range(const StripField&) const;   // remove left component

  // fields the operator was built from, exposed for checks and assembly
  const std::vector<double>& a_of_t() const;
  const std::vector<double>& phi1_of_s() const;
  double mu() const;  // moment ratio on this grid's s-quadrature

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

StripOperator assemble_Lp(const SpectralData& spec, const Heteroclinic& het,
                          const StripGrid& grid, double p0);

struct GpResult {
  StripField psi;
  double norm_psi_weighted = 0.0;
  double norm_g_weighted = 0.0;
  double ratio = 0.0;
};

// psi with L psi = g plus the weighted norms of the a-priori estimate.
GpResult apply_Gp(const StripOperator& op, const StripField& g, double p0);

// M(phi0) = a^p (phi1^p - mu phi1); mu is the grid-discrete moment ratio so
// every t-row is discretely orthogonal to phi1.
StripField forcing_M(const StripOperator& op);

// Q(psi) = |phi0+psi|^p - phi0^p - p phi0^{p-1} psi, pointwise.
StripField nonlinearity_Q(const StripField& psi, const StripField& phi0, double p);

StripField phi0_field(const StripOperator& op);

struct FixedPointResult {
  StripField psi;
  int iterations = 0;
  double smallness_ratio = 0.0;  // sup|psi| / sup(a phi1)
  double contraction = 0.0;      // last ratio of successive sup-changes
  double residual = 0.0;         // sup |L psi + M + Q(psi)| on the interior
};

// Iterates psi <- -G_p(M + Q(psi)) from zero; include_M=false is the test hook
// with the forcing removed.
FixedPointResult fixed_point_psi(const StripOperator& op, int max_iter = 50,
                                 double tol = 1e-11, bool include_M = true);

// Positive cap barrier: Delta_S v + (lambda + delta(delta-n-2 gamma+2)) v = -1,
// v(beta) = 0, on the spectral grid; delta = 0 hits the eigenvalue and is
// solved on the discrete orthogonal complement of phi1.
struct CapBarrier {
  double delta = 0.0;
  double shift = 0.0;  // full zeroth-order coefficient
  std::vector<double> t;
  std::vector<double> v;
};

CapBarrier phi_star(const SpectralData& spec, double delta);

}  // namespace wedge
