// Timing comparison of the OpenMP kernels against their serial reference
// twins: the strip stencil sweep and the per-tau family builder.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "wedge/cap_spectrum.hpp"
#include "wedge/family.hpp"
#include "wedge/heteroclinic.hpp"
#include "wedge/strip.hpp"

using namespace wedge;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main() {
  const double p = 2.2;
  const auto spec = solve_cap_eigen({3, 1.5707963267948966, BcAtZero::Symmetry},
                                    {1025});
  const auto params = ode_params(3, spec.lambda, p, moment(spec, p + 1.0));
  const double T = default_T(params);
  const auto het = solve_heteroclinic(params, T + 2.0);
  const auto grid = StripGrid::make(T, 961, 129);
  const auto op = assemble_Lp(spec, het, grid, 0.5 * (1.0 + p));

  StripField f = StripField::zeros(grid);
  for (std::size_t i = 0; i < grid.nt; ++i)
    for (std::size_t j = 0; j < grid.ns; ++j)
      f.at(i, j) = std::sin(0.37 * static_cast<double>(i)) *
                   std::cos(0.21 * static_cast<double>(j));

  const int reps = 50;
  auto t0 = clock_type::now();
  double sink = 0.0;
  for (int k = 0; k < reps; ++k) sink += op.apply(f).sup();
  const double t_par = seconds_since(t0) / reps;
  t0 = clock_type::now();
  for (int k = 0; k < reps; ++k) sink += op.apply_serial(f).sup();
  const double t_ser = seconds_since(t0) / reps;
  std::printf("strip stencil %zux%zu: parallel %.4f s/sweep, serial %.4f s/sweep, "
              "speedup %.2fx (checksum %.3e)\n",
              grid.nt, grid.ns, t_par, t_ser, t_ser / t_par, sink);

  EdgeFamilySpec s;
  s.n = 3;
  s.p = 2.22;
  s.beta_fn = [](double tau) {
    return beta_for_lambda(3, 2.0 + 0.1 * std::sin(tau));
  };
  t0 = clock_type::now();
  const auto fp2 = build_family(s, 9);
  const double fam_par = seconds_since(t0);
  t0 = clock_type::now();
  const auto fs2 = build_family_serial(s, 9);
  const double fam_ser = seconds_since(t0);
  std::printf("family build (9 tau nodes): parallel %.2f s, serial %.2f s, "
              "speedup %.2fx (sup p* %.6f == %.6f)\n",
              fam_par, fam_ser, fam_ser / fam_par, fp2.sup_p_star,
              fs2.sup_p_star);
  return 0;
}
