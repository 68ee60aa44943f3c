#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "wedge/errors.hpp"
#include "wedge/profile.hpp"
#include "wedge/singular.hpp"

using namespace wedge;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Setup {
  SpectralData spec;
  Heteroclinic het;
  StripField psi;
  ProfileFn profile;
  double p;
};

Setup build_setup(double p, std::size_t nt, std::size_t ns) {
  SpectralData spec = solve_cap_eigen({3, kPi / 2, BcAtZero::Symmetry}, {1025});
  const double mu = moment(spec, p + 1.0);
  const auto params = ode_params(3, spec.lambda, p, mu);
  Heteroclinic het = solve_heteroclinic(params);
  const double T = default_T(params);
  auto grid = StripGrid::make(T, nt, ns);
  StripOperator op = assemble_Lp(spec, het, grid, 0.5 * (1.0 + p));
  StripField psi = fixed_point_psi(op).psi;
  ProfileFn profile = solve_profile(spec, p, {4097});
  return {std::move(spec), std::move(het), std::move(psi), std::move(profile), p};
}

const Setup& setup22() {
  static Setup s = build_setup(2.2, 401, 49);
  return s;
}

// independent bilinear read of the corrector grid, used as the shift oracle
double psi_lookup(const StripField& f, double t, double s) {
  const auto& g = f.grid;
  const double x = (t + g.T) / g.ht;
  const double y = s / g.hs;
  std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, x)),
                                        g.nt - 2);
  std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, y)),
                                        g.ns - 2);
  const double fx = std::clamp(x - static_cast<double>(i), 0.0, 1.0);
  const double fy = std::clamp(y - static_cast<double>(j), 0.0, 1.0);
  return (1.0 - fx) * ((1.0 - fy) * f.at(i, j) + fy * f.at(i, j + 1)) +
         fx * ((1.0 - fy) * f.at(i + 1, j) + fy * f.at(i + 1, j + 1));
}

}  // namespace

TEST_CASE("assembled solution: positivity, trace, range checks") {
  const auto& su = setup22();
  auto u = assemble_u1(su.spec, su.het, su.psi, su.p);
  const double T = u.T();
  const double beta = su.spec.cap.beta;

  SUBCASE("boundary trace vanishes") {
    for (double t = -0.9 * T; t <= 0.9 * T; t += 0.37) {
      const double r = std::exp(-t);
      CHECK(std::abs(u(r, beta)) <= 1e-12 * std::pow(r, -u.alpha()));
    }
  }

  SUBCASE("positive on 1e4 interior samples") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dt(-0.9 * T, 0.9 * T);
    std::uniform_real_distribution<double> dth(0.0, 0.995 * beta);
    for (int k = 0; k < 10000; ++k) {
      const double r = std::exp(-dt(rng));
      CHECK(u(r, dth(rng)) > 0.0);
    }
  }

  SUBCASE("out-of-window evaluation rejected") {
    CHECK_THROWS_AS(u(std::exp(T + 1.0), 0.3), DomainError);
    CHECK_THROWS_AS(u(std::exp(-T - 1.0), 0.3), DomainError);
    CHECK_THROWS_AS(u(1.0, beta + 0.1), DomainError);
    CHECK_THROWS_AS(u(-1.0, 0.3), DomainError);
  }
}

TEST_CASE("scale covariance under r -> k r") {
  const auto& su = setup22();
  auto u = assemble_u1(su.spec, su.het, su.psi, su.p);
  const double k = 2.0, lk = std::log(2.0);
  const double beta = su.spec.cap.beta;
  for (double t = -10.0; t <= 10.0; t += 0.73) {
    const double r = std::exp(-t);
    for (double th = 0.0; th < beta; th += 0.21) {
      const double lhs = std::pow(k, u.alpha()) * u(k * r, th);
      const double shifted = std::pow(r, -u.alpha()) *
                             (su.het.at(t - lk) * su.spec.phi1_at(th) +
                              psi_lookup(su.psi, t - lk, th / beta));
      CHECK(lhs == doctest::Approx(shifted).epsilon(1e-12));
    }
  }
}

TEST_CASE("two-sided asymptotics and pointwise bound") {
  const auto& su = setup22();
  auto u = assemble_u1(su.spec, su.het, su.psi, su.p);
  auto rep = verify_asymptotics(u, su.profile);

  // far field decays like r^{2-gamma-n}: slope -2 on the hemisphere
  CHECK(rep.infinity_slope ==
        doctest::Approx(-(su.spec.cap.n + su.spec.gamma - 2.0)).epsilon(0.02));

  // origin ratio locks onto the cap profile with constant near 1
  CHECK(rep.origin_c0 == doctest::Approx(1.0).epsilon(0.05));
  REQUIRE(rep.origin_mismatch.size() == 3);
  CHECK(rep.origin_mismatch[1] < rep.origin_mismatch[0]);
  CHECK(rep.origin_mismatch[2] < rep.origin_mismatch[1]);

  CHECK(std::isfinite(rep.pointwise_C));
  CHECK(rep.pointwise_C > 0.0);

  SUBCASE("pointwise constant stable under corrector-grid refinement") {
    Setup fine = build_setup(2.2, 801, 97);
    auto uf = assemble_u1(fine.spec, fine.het, fine.psi, fine.p);
    auto repf = verify_asymptotics(uf, fine.profile);
    CHECK(repf.pointwise_C == doctest::Approx(rep.pointwise_C).epsilon(0.10));
  }

  SUBCASE("radius inside the truncation layer rejected") {
    CHECK_THROWS_AS(verify_asymptotics(u, su.profile, {std::exp(-0.95 * u.T())}),
                    DomainError);
  }
}

TEST_CASE("scaled gradient and Hessian bounds") {
  const auto& su = setup22();
  const double alpha = alpha_exponent(su.p);
  const double beta = su.spec.cap.beta;

  SUBCASE("separated profile part matches the analytic constant") {
    auto w = [&](double r, double th) {
      return std::pow(r, -alpha) * su.profile.at(th);
    };
    double exact = 0.0;
    for (double th = 0.0; th <= beta; th += beta / 512.0)
      exact = std::max(exact, std::hypot(alpha * su.profile.at(th),
                                         su.profile.slope_at(th)));
    auto rep = gradient_estimates(w, alpha, beta, {1.0, 2.0, 4.0, 8.0});
    CHECK(rep.C1 == doctest::Approx(exact).epsilon(0.02));
    CHECK(std::isfinite(rep.C2));

    // homogeneity: the constant cannot depend on the sampled decade
    auto rep2 = gradient_estimates(w, alpha, beta, {1e-3, 2e-3, 4e-3, 8e-3});
    CHECK(rep2.C1 == doctest::Approx(rep.C1).epsilon(1e-10));
    CHECK(rep2.C2 == doctest::Approx(rep.C2).epsilon(1e-10));
  }

  SUBCASE("assembled solution: finite and decade-stable near the origin") {
    auto u = assemble_u1(su.spec, su.het, su.psi, su.p);
    auto eval = [&u](double r, double th) { return u(r, th); };
    auto repa = gradient_estimates(eval, alpha, beta, {1e-3, 2e-3, 4e-3, 8e-3});
    auto repb = gradient_estimates(eval, alpha, beta, {1.25e-4, 2.5e-4, 5e-4, 1e-3});
    CHECK(std::isfinite(repa.C1));
    CHECK(std::isfinite(repa.C2));
    CHECK(repb.C1 == doctest::Approx(repa.C1).epsilon(0.10));
    CHECK(repb.C2 == doctest::Approx(repa.C2).epsilon(0.10));
  }

  SUBCASE("empty sample list rejected") {
    auto w = [&](double r, double th) { return std::pow(r, -alpha) * su.profile.at(th); };
    CHECK_THROWS_AS(gradient_estimates(w, alpha, beta, {}), DomainError);
  }
}

TEST_CASE("very-weak pairing against compactly supported test functions") {
  const auto& su = setup22();
  const double alpha = alpha_exponent(su.p);
  auto wp = [&](double r, double th) { return std::pow(r, -alpha) * su.profile.at(th); };

  SUBCASE("separated exact solution pairs to zero") {
    const double res = weak_residual(wp, su.spec, su.p, 0.5, 2.0);
    CHECK(std::abs(res) < 1e-5);
  }

  SUBCASE("zero test function pairs to zero exactly") {
    auto zero = [](double) { return 0.0; };
    CHECK(weak_residual(wp, su.spec, su.p, 0.5, 2.0, zero, zero, zero) == 0.0);
  }

  SUBCASE("scaled non-solution is bounded away from zero") {
    auto bad = [&](double r, double th) { return 1.1 * wp(r, th); };
    const double res_good = weak_residual(wp, su.spec, su.p, 0.5, 2.0);
    const double res_bad = weak_residual(bad, su.spec, su.p, 0.5, 2.0);
    CHECK(std::abs(res_bad) > 1e-2);
    CHECK(std::abs(res_bad) > 100.0 * std::abs(res_good));
  }

  SUBCASE("non-vanishing radial profile rejected") {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    CHECK_THROWS_AS(weak_residual(wp, su.spec, su.p, 0.5, 2.0, one, zero, zero),
                    DomainError);
  }

  SUBCASE("assembled solution: residual small and non-increasing with quadrature") {
    auto u = assemble_u1(su.spec, su.het, su.psi, su.p);
    auto eval = [&u](double r, double th) { return u(r, th); };
    const double coarse = weak_residual(eval, su.spec, su.p, 0.5, 2.0, 129, 65);
    const double fine = weak_residual(eval, su.spec, su.p, 0.5, 2.0, 2049, 513);
    CHECK(std::abs(fine) < 5e-3);
    CHECK(std::abs(fine) <= std::abs(coarse) * 1.05 + 1e-9);
  }
}
