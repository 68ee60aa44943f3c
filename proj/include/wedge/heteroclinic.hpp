#pragma once

#include <string>
#include <vector>

#include "wedge/grid.hpp"

namespace wedge {

// Closed-form data for the connecting orbit of a'' + A a' - eps a + mu a^p = 0
// between the rest points 0 and a_inf = (eps/mu)^{1/(p-1)}.
struct HeteroclinicParams {
  int n = 3;
  double p = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double alpha = 0.0;        // 2/(p-1)
  double A = 0.0;            // 2 alpha + 2 - n
  double eps = 0.0;          // lambda - alpha(alpha+2-n)
  double a_inf = 0.0;
  double delta_minus = 0.0;  // unstable rate at 0: (sqrt(A^2+4 eps)-A)/2
  bool delta_tilde_real = false;
  double delta_tilde_plus = 0.0;   // rates at a_inf when real; real part otherwise
  double delta_tilde_minus = 0.0;

  double a_bar() const;  // positive root of the potential, traps the orbit
};

HeteroclinicParams ode_params(int n, double lambda, double p, double mu);

struct Heteroclinic {
  HeteroclinicParams params;
  std::vector<double> t;   // uniform samples on [-L, L], t=0 at a = a_inf/2
  std::vector<double> a;
  std::vector<double> da;
  bool oscillation = false;  // focus regime: crossing of a_inf/2 not unique

  double h() const { return t[1] - t[0]; }
  double at(double time) const;
  double slope_at(double time) const;
};

// Launch on the unstable manifold of 0, adaptive integration, time shift so
// the first upward crossing of a_inf/2 sits at t = 0.  L <= 0 selects the
// default half-length from the decay rates.
Heteroclinic solve_heteroclinic(const HeteroclinicParams& params, double L = 0.0,
                                double tol = 1e-10);

struct TailReport {
  double left_slope = 0.0;    // regression of log a on the far-left tail
  double right_slope = 0.0;   // regression of log(a_inf - a) on the right tail
  bool sandwich_ok = false;   // 1/2 e^{d- t} <= a/a_inf <= e^{d- t} on the left
  std::string matched_root;   // which linearized rate the right tail realized
};

TailReport verify_tail_rates(const Heteroclinic& h);

}  // namespace wedge
