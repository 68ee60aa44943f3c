#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wedge/heteroclinic.hpp"
#include "wedge/strip.hpp"

namespace wedge {

// Family of cone problems along an edge curve: per-tau cap omega(tau) given by
// the half-angle beta(tau), edge curve sigma(tau) in R^n, fixed exponent p.
struct EdgeFamilySpec {
  int n = 3;
  double p = 0.0;
  double eps_scale = 1.0;  // the epsilon of the scaled ansatz u_eps
  double tau1 = 0.0;
  double tau2 = 6.283185307179586;
  std::function<double(double)> beta_fn;                 // tau -> half-angle
  std::function<std::vector<double>(double)> sigma_fn;   // tau -> R^n; empty = 0
  double delta = 0.0;  // near-edge weight exponent; 0 selects -2/(p-1)
  double rho = 0.0;    // far-field weight exponent; 0 selects the range midpoint

  // discretization knobs for the per-tau solves
  std::size_t cap_nodes = 257;
  double strip_ht = 0.25;
  std::size_t strip_ns = 33;
  double T = 0.0;  // 0 -> max of the per-tau defaults

  void validate() const;
  std::vector<double> sigma(double tau) const;  // zero vector when unset
};

// Half-angle realizing a prescribed cap eigenvalue (monotone decreasing in
// beta), by bisection on the eigensolver.
double beta_for_lambda(int n, double lambda, BcAtZero bc = BcAtZero::Symmetry,
                       std::size_t nodes = 257);

// Node fields of phi = a(t) phi1 + psi and its strip derivatives; `lap` is the
// discrete phi_tt + A phi_t + kappa phi + Delta_S phi, so the cone Laplacian of
// r^{-alpha} phi(-log r, theta) is r^{-alpha-2} lap.
struct U1Fields {
  StripField phi, phi_t, phi_th, lap;
};

struct FamilyMember {
  double tau = 0.0;
  double beta = 0.0;
  SpectralData spec;
  HeteroclinicParams params;
  Heteroclinic het;
  StripField psi;
  U1Fields fields;
};

struct FamilyData {
  double p = 0.0;
  double eps_scale = 1.0;
  std::vector<double> tau;  // uniform nodes on [tau1, tau2]
  std::vector<FamilyMember> members;
  double lambda_star = 0.0;  // inf over the grid of lambda(tau)
  double gamma_star = 0.0;
  double sup_p_star = 0.0;
  double delta = 0.0, rho = 0.0;  // resolved weight exponents

  double htau() const { return tau[1] - tau[0]; }
};

// Per-tau solves (cap eigenpair, heteroclinic, corrector, derivative fields);
// the parallel builder fans the independent tau-jobs across OpenMP threads.
FamilyData build_family(const EdgeFamilySpec& spec, std::size_t tau_nodes);
FamilyData build_family_serial(const EdgeFamilySpec& spec, std::size_t tau_nodes);

// value / polar gradient / cone Laplacian of the member's solution
// u1 = r^{-alpha}(a phi1 + psi) at (r, theta)
struct ConeDerivs {
  double value = 0.0;
  double du_r = 0.0;
  double du_th = 0.0;  // angular derivative (not yet divided by r)
  double lap = 0.0;    // Delta_x u1
};

double u1_value(const FamilyMember& m, double p, double r, double theta);
ConeDerivs u1_derivs(const FamilyMember& m, double p, double r, double theta);

// sup over matched s-nodes and interior tau of |phi1| + |d_tau phi1| +
// |d^2_tau phi1| (centered differences across the family grid)
struct EigenTauReport {
  double sup_phi = 0.0;
  double sup_dtau = 0.0;
  double sup_d2tau = 0.0;
  double constant = 0.0;  // the sum, the smoothness constant of the family
};

EigenTauReport eigenfunction_tau_constant(const FamilyData& fd);

// tau-derivative bounds of the heteroclinic in the three t-regimes; ratios are
// against |t| e^{delta_minus t} (left), |t| e^{delta_tilde_plus t} (right)
struct HetTauReport {
  double left_ratio = 0.0;
  double right_ratio = 0.0;
  double middle_sup = 0.0;
  double left_ratio2 = 0.0;  // second-derivative analogues against t^2 e^{..t}
  double right_ratio2 = 0.0;
  double middle_sup2 = 0.0;
  bool right_skipped = false;  // focus regime: complex linearized rates
};

HetTauReport heteroclinic_tau_bounds(const FamilyData& fd);

// sup over sample radii/angles of |x|^alpha |d_tau u1| and |x|^alpha |d2_tau u1|
struct U1TauReport {
  double C_first = 0.0;
  double C_second = 0.0;
};

U1TauReport u1_tau_bounds(const FamilyData& fd);

struct WeightedSample {
  double r_sigma = 0.0;  // distance to the edge curve
  double x_norm = 0.0;   // |x|, the far-field radius
  double value = 0.0;
};

// sup of r_sigma^{-delta}|f| on r_sigma <= 1 and |x|^{-rho}|f| beyond
double weighted_norm(const std::vector<WeightedSample>& samples, double delta,
                     double rho);

struct ResidualGrid {
  std::size_t nr = 33;
  std::size_t ntheta = 17;
  std::size_t nazimuth = 2;
  double r_min = 0.02;
  double r_max = 0.95;
};

struct ResidualReport {
  double norm = 0.0;      // weighted norm of r_sigma^2 (Lap u_eps + u_eps^p)
  double sup_f = 0.0;     // unweighted sup of the residual samples
  std::size_t samples = 0;
};

// residual of the scaled ansatz u_eps = eta(|x|) eps^{-alpha} u1((x-sigma)/eps)
// under the edge Laplacian d^2_tau + Delta_x
ResidualReport wedge_residual(const EdgeFamilySpec& spec, const FamilyData& fd,
                              const ResidualGrid& grid);

struct BarrierReport {
  double identity_rel_error = 0.0;       // FD check of -Lap(|x|^d phi_d) = |x|^{d-2}
  double identity_rel_error_half = 0.0;  // at half the stencil step
  double min_margin = 0.0;               // starred supersolution inequality margin
  double curve_bound = 0.0;              // sampled sup(|sigma|+|sigma'|+|sigma''|)
};

// barrier identity on the envelope cap (beta* = sup beta) and the shifted
// supersolution inequality along the curve
BarrierReport barrier_checks(const EdgeFamilySpec& spec, double delta);

}  // namespace wedge
