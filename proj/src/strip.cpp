#include "wedge/strip.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "wedge/errors.hpp"

namespace wedge {

StripGrid StripGrid::make(double T, std::size_t nt, std::size_t ns) {
  StripGrid g;
  g.T = T;
  g.nt = nt;
  g.ns = ns;
  g.t = linspace(-T, T, nt);
  g.s = linspace(0.0, 1.0, ns);
  g.ht = g.t[1] - g.t[0];
  g.hs = g.s[1] - g.s[0];
  g.validate();
  return g;
}

void StripGrid::validate() const {
  if (!(T > 0.0)) throw DomainError("StripGrid: truncation length must be positive");
  if (nt < 32 || ns < 32) throw DomainError("StripGrid: node counts must be >= 32");
}

double default_T(const HeteroclinicParams& params) {
  return std::max(1.0 / params.eps, 10.0 / params.delta_minus);
}

StripField StripField::zeros(const StripGrid& g) {
  StripField f;
  f.grid = g;
  f.v.assign(g.nt * g.ns, 0.0);
  return f;
}

double StripField::sup() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double StripField::interp(double t, double s) const {
  const double x = (t + grid.T) / grid.ht;
  const double y = s / grid.hs;
  std::size_t i = static_cast<std::size_t>(std::max(0.0, std::floor(x)));
  std::size_t j = static_cast<std::size_t>(std::max(0.0, std::floor(y)));
  i = std::min(i, grid.nt - 2);
  j = std::min(j, grid.ns - 2);
  const double fx = std::clamp(x - static_cast<double>(i), 0.0, 1.0);
  const double fy = std::clamp(y - static_cast<double>(j), 0.0, 1.0);
  return (1.0 - fx) * ((1.0 - fy) * at(i, j) + fy * at(i, j + 1)) +
         fx * ((1.0 - fy) * at(i + 1, j) + fy * at(i + 1, j + 1));
}

double weighted_norm_psi(const StripField& f, const Heteroclinic& het, double beta,
                         double p0) {
  double m = 0.0;
  const auto& g = f.grid;
  for (std::size_t i = 0; i < g.nt; ++i) {
    const double aw = std::pow(het.at(g.t[i]), -p0);
    for (std::size_t j = 0; j + 1 < g.ns; ++j) {
      const double d = beta * (1.0 - g.s[j]);
      m = std::max(m, std::abs(f.at(i, j)) * aw / d);
    }
  }
  return m;
}

double weighted_norm_g(const StripField& f, const Heteroclinic& het, double p0) {
  double m = 0.0;
  const auto& g = f.grid;
  for (std::size_t i = 0; i < g.nt; ++i) {
    const double aw = std::pow(het.at(g.t[i]), -p0);
    for (std::size_t j = 0; j < g.ns; ++j)
      m = std::max(m, std::abs(f.at(i, j)) * aw);
  }
  return m;
}

struct StripOperator::Impl {
  StripGrid grid;
  Heteroclinic het;
  int n = 0;
  double beta = 0.0, p = 0.0, lambda = 0.0, eps = 0.0, A = 0.0, p0 = 0.0;
  double mu = 0.0;
  std::vector<double> a;     // a(t_i)
  std::vector<double> phi1;  // phi1(beta s_j)
  std::vector<double> pot;   // p phi0^{p-1} at (i,j)
  std::vector<double> qs;    // first-order s-coefficient at j >= 1

  // cached banded factorization (column-major LAPACK band storage)
  mutable std::vector<double> ab;
  mutable std::vector<lapack_int> ipiv;
  mutable bool factored = false;

  // discrete remnant of the translation mode d/dt(a phi1): excluded from the
  // continuum problem by the a^{-p0} weight, deflated here from the solves
  mutable std::vector<double> zvec, yvec;  // right/left near-null vectors
  mutable double sigma = 0.0;
  mutable bool deflate = false;

  std::size_t It() const { return grid.nt - 2; }
  std::size_t Js() const { return grid.ns - 1; }
  std::size_t unknowns() const { return It() * Js(); }

  // operator value at interior node (i, j) given the full field
  double stencil(const StripField& f, std::size_t i, std::size_t j) const {
    const double ht = grid.ht, hs = grid.hs;
    const double b2 = beta * beta;
    double r = (f.at(i - 1, j) - 2.0 * f.at(i, j) + f.at(i + 1, j)) / (ht * ht) +
               A * (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * ht);
    if (j == 0) {
      r += (n - 1) / b2 * 2.0 * (f.at(i, 1) - f.at(i, 0)) / (hs * hs);
    } else {
      r += (f.at(i, j - 1) - 2.0 * f.at(i, j) + f.at(i, j + 1)) / (b2 * hs * hs) +
           qs[j] * (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * hs);
    }
    r += (lambda - eps + pot[grid.index(i, j)]) * f.at(i, j);
    return r;
  }

  void factorize() const;
};

StripOperator::StripOperator(const SpectralData& spec, const Heteroclinic& het,
                             const StripGrid& grid, double p0)
    : impl_(std::make_unique<Impl>()) {
  grid.validate();
  const auto& q = het.params;
  if (grid.T < default_T(q) - 1e-9)
    throw DomainError("StripOperator: truncation shorter than the decay budget");
  if (grid.T > -het.t.front() + 1e-12)
    throw DomainError("StripOperator: heteroclinic window shorter than the strip");
  if (!(p0 > 1.0) || !(p0 < q.p))
    throw DomainError("StripOperator: weight exponent p0 must lie in (1, p)");

  auto& im = *impl_;
  im.grid = grid;
  im.het = het;
  im.n = spec.cap.n;
  im.beta = spec.cap.beta;
  im.p = q.p;
  im.lambda = spec.lambda;
  im.eps = q.eps;
  im.A = q.A;
  im.p0 = p0;

  im.a.resize(grid.nt);
  for (std::size_t i = 0; i < grid.nt; ++i) im.a[i] = het.at(grid.t[i]);
  im.phi1.resize(grid.ns);
  for (std::size_t j = 0; j < grid.ns; ++j)
    im.phi1[j] = spec.phi1_at(im.beta * grid.s[j]);
  im.phi1.back() = 0.0;

  im.pot.resize(grid.nt * grid.ns);
  for (std::size_t i = 0; i < grid.nt; ++i)
    for (std::size_t j = 0; j < grid.ns; ++j) {
      const double phi0 = im.a[i] * im.phi1[j];
      im.pot[grid.index(i, j)] = im.p * std::pow(std::max(phi0, 0.0), im.p - 1.0);
    }

  im.qs.assign(grid.ns, 0.0);
  for (std::size_t j = 1; j < grid.ns; ++j) {
    const double th = im.beta * grid.s[j];
    im.qs[j] = (im.n - 2) * std::cos(th) / (im.beta * std::sin(th));
  }

  // grid-discrete moment ratio: exact row orthogonality of the forcing
  std::vector<double> num(grid.ns), den(grid.ns);
  for (std::size_t j = 0; j < grid.ns; ++j) {
    const double w = std::pow(std::sin(im.beta * grid.s[j]), im.n - 2);
    num[j] = w * std::pow(im.phi1[j], im.p + 1.0);
    den[j] = w * im.phi1[j] * im.phi1[j];
  }
  im.mu = simpson(num, grid.hs) / simpson(den, grid.hs);
}

StripOperator::~StripOperator() = default;
StripOperator::StripOperator(StripOperator&&) noexcept = default;

const StripGrid& StripOperator::grid() const { return impl_->grid; }
double StripOperator::p0() const { return impl_->p0; }
double StripOperator::beta() const { return impl_->beta; }
const Heteroclinic& StripOperator::het() const { return impl_->het; }
const std::vector<double>& StripOperator::a_of_t() const { return impl_->a; }
const std::vector<double>& StripOperator::phi1_of_s() const { return impl_->phi1; }
double StripOperator::mu() const { return impl_->mu; }

StripField StripOperator::apply(const StripField& f) const {
  const auto& im = *impl_;
  StripField out = StripField::zeros(im.grid);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 1; i < im.grid.nt - 1; ++i)
    for (std::size_t j = 0; j + 1 < im.grid.ns; ++j)
      out.at(i, j) = im.stencil(f, i, j);
  return out;
}

StripField StripOperator::apply_serial(const StripField& f) const {
  const auto& im = *impl_;
  StripField out = StripField::zeros(im.grid);
  for (std::size_t i = 1; i < im.grid.nt - 1; ++i)
    for (std::size_t j = 0; j + 1 < im.grid.ns; ++j)
      out.at(i, j) = im.stencil(f, i, j);
  return out;
}

void StripOperator::Impl::factorize() const {
  const std::size_t N = unknowns();
  const lapack_int kl = static_cast<lapack_int>(Js());
  const lapack_int ku = kl;
  const lapack_int ldab = 2 * kl + ku + 1;
  ab.assign(static_cast<std::size_t>(ldab) * N, 0.0);
  ipiv.assign(N, 0);

  auto put = [&](std::size_t r, std::size_t c, double val) {
    ab[c * static_cast<std::size_t>(ldab) + static_cast<std::size_t>(kl + ku) + r - c] +=
        val;
  };

  const double ht = grid.ht, hs = grid.hs, b2 = beta * beta;
  const double ctm = 1.0 / (ht * ht) - A / (2.0 * ht);
  const double ctp = 1.0 / (ht * ht) + A / (2.0 * ht);
  for (std::size_t i = 1; i + 1 < grid.nt; ++i)
    for (std::size_t j = 0; j + 1 < grid.ns; ++j) {
      const std::size_t r = (i - 1) * Js() + j;
      double diag = -2.0 / (ht * ht) + lambda - eps + pot[grid.index(i, j)];
      if (i > 1) put(r, r - Js(), ctm);
      if (i + 2 < grid.nt) put(r, r + Js(), ctp);
      if (j == 0) {
        const double c = 2.0 * (n - 1) / (b2 * hs * hs);
        diag -= c;
        put(r, r + 1, c);
      } else {
        const double csm = 1.0 / (b2 * hs * hs) - qs[j] / (2.0 * hs);
        const double csp = 1.0 / (b2 * hs * hs) + qs[j] / (2.0 * hs);
        diag -= 2.0 / (b2 * hs * hs);
        put(r, r - 1, csm);
        if (j + 2 < grid.ns) put(r, r + 1, csp);
      }
      put(r, r, diag);
    }

  const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, static_cast<lapack_int>(N),
                                         static_cast<lapack_int>(N), kl, ku, ab.data(),
                                         ldab, ipiv.data());
  if (info != 0)
    throw SolverError("StripOperator: singular discrete operator",
                      "dgbtrf info=" + std::to_string(info) +
                          " (solvability lost; reduce eps or refine)");
  factored = true;

  auto back_sub = [&](std::vector<double>& b, char trans) {
    const lapack_int ib = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, trans,
                                         static_cast<lapack_int>(N), kl, ku, 1,
                                         ab.data(), ldab, ipiv.data(), b.data(),
                                         static_cast<lapack_int>(N));
    if (ib != 0)
      throw SolverError("StripOperator: banded back-substitution failed",
                        "dgbtrs info=" + std::to_string(ib));
  };
  auto normalize = [](std::vector<double>& v) {
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;
    return nrm;
  };

  // smallest singular pair by inverse iteration on A^T A (the operator is
  // far from normal, so eigen-based iteration would miss it); seeded with the
  // separated translation shape a'(t) phi1(s)
  zvec.assign(N, 0.0);
  for (std::size_t i = 1; i + 1 < grid.nt; ++i)
    for (std::size_t j = 0; j + 1 < grid.ns; ++j)
      zvec[(i - 1) * Js() + j] = het.slope_at(grid.t[i]) * phi1[j];
  normalize(zvec);
  for (int pass = 0; pass < 6; ++pass) {
    back_sub(zvec, 'T');
    back_sub(zvec, 'N');
    normalize(zvec);
  }
  // u = A v / sigma via the stencil
  {
    StripField zf = StripField::zeros(grid);
    for (std::size_t i = 1; i + 1 < grid.nt; ++i)
      for (std::size_t j = 0; j + 1 < grid.ns; ++j)
        zf.at(i, j) = zvec[(i - 1) * Js() + j];
    yvec.assign(N, 0.0);
    for (std::size_t i = 1; i + 1 < grid.nt; ++i)
      for (std::size_t j = 0; j + 1 < grid.ns; ++j)
        yvec[(i - 1) * Js() + j] = stencil(zf, i, j);
    sigma = normalize(yvec);
  }
  deflate = sigma < 1e-2;
}

StripField StripOperator::solve(const StripField& g) const {
  const auto& im = *impl_;
  if (!im.factored) im.factorize();
  const std::size_t N = im.unknowns();
  const lapack_int kl = static_cast<lapack_int>(im.Js());

  auto proj = [&](std::vector<double>& b, const std::vector<double>& dir) {
    double dot = 0.0;
    for (std::size_t k = 0; k < N; ++k) dot += dir[k] * b[k];
    for (std::size_t k = 0; k < N; ++k) b[k] -= dot * dir[k];
  };
  auto raw_solve = [&](std::vector<double> b) {
    if (im.deflate) proj(b, im.yvec);
    const lapack_int info = LAPACKE_dgbtrs(
        LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(N), kl, kl, 1, im.ab.data(),
        2 * kl + kl + 1, im.ipiv.data(), b.data(), static_cast<lapack_int>(N));
    if (info != 0)
      throw SolverError("StripOperator: banded back-substitution failed",
                        "dgbtrs info=" + std::to_string(info));
    if (im.deflate) proj(b, im.zvec);
    return b;
  };

  std::vector<double> b0(N);
  for (std::size_t i = 1; i + 1 < im.grid.nt; ++i)
    for (std::size_t j = 0; j + 1 < im.grid.ns; ++j)
      b0[(i - 1) * im.Js() + j] = g.at(i, j);
  if (im.deflate) proj(b0, im.yvec);

  std::vector<double> x = raw_solve(b0);

  // iterative refinement: the near-null remnant costs ~eps/sigma digits in the
  // raw back-substitution; residual correction restores them because the
  // residual itself is computed at working precision
  const int passes = im.deflate ? 2 : 1;
  StripField xf = StripField::zeros(im.grid);
  for (int pass = 0; pass < passes; ++pass) {
    for (std::size_t i = 1; i + 1 < im.grid.nt; ++i)
      for (std::size_t j = 0; j + 1 < im.grid.ns; ++j)
        xf.at(i, j) = x[(i - 1) * im.Js() + j];
    std::vector<double> r(N);
    for (std::size_t i = 1; i + 1 < im.grid.nt; ++i)
      for (std::size_t j = 0; j + 1 < im.grid.ns; ++j) {
        const std::size_t k = (i - 1) * im.Js() + j;
        r[k] = b0[k] - im.stencil(xf, i, j);
      }
    const std::vector<double> c = raw_solve(r);
    for (std::size_t k = 0; k < N; ++k) x[k] += c[k];
    if (im.deflate) proj(x, im.zvec);
  }

  StripField psi = StripField::zeros(im.grid);
  for (std::size_t i = 1; i + 1 < im.grid.nt; ++i)
    for (std::size_t j = 0; j + 1 < im.grid.ns; ++j)
      psi.at(i, j) = x[(i - 1) * im.Js() + j];
  return psi;
}

double StripOperator::kernel_sigma() const {
  if (!impl_->factored) impl_->factorize();
  return impl_->sigma;
}

namespace {

StripField project_interior(const StripField& f, const std::vector<double>& dir,
                            const StripGrid& g, std::size_t Js, bool active) {
  if (!active) return f;
  StripField out = f;
  double dot = 0.0;
  for (std::size_t i = 1; i + 1 < g.nt; ++i)
    for (std::size_t j = 0; j + 1 < g.ns; ++j)
      dot += dir[(i - 1) * Js + j] * f.at(i, j);
  for (std::size_t i = 1; i + 1 < g.nt; ++i)
    for (std::size_t j = 0; j + 1 < g.ns; ++j)
      out.at(i, j) -= dot * dir[(i - 1) * Js + j];
  return out;
}

}  // namespace

StripField StripOperator::project_domain(const StripField& f) const {
  if (!impl_->factored) impl_->factorize();
  return project_interior(f, impl_->zvec, impl_->grid, impl_->Js(), impl_->deflate);
}

StripField StripOperator::project_range(const StripField& f) const {
  if (!impl_->factored) impl_->factorize();
  return project_interior(f, impl_->yvec, impl_->grid, impl_->Js(), impl_->deflate);
}

StripOperator assemble_Lp(const SpectralData& spec, const Heteroclinic& het,
                          const StripGrid& grid, double p0) {
  return StripOperator(spec, het, grid, p0);
}

GpResult apply_Gp(const StripOperator& op, const StripField& g, double p0) {
  GpResult r;
  r.psi = op.solve(g);
  r.norm_psi_weighted = weighted_norm_psi(r.psi, op.het(), op.beta(), p0);
  r.norm_g_weighted = weighted_norm_g(g, op.het(), p0);
  r.ratio = r.norm_g_weighted > 0.0 ? r.norm_psi_weighted / r.norm_g_weighted : 0.0;
  return r;
}

StripField forcing_M(const StripOperator& op) {
  const auto& g = op.grid();
  const double p = op.het().params.p;
  const double mu = op.mu();
  StripField f = StripField::zeros(g);
  for (std::size_t i = 0; i < g.nt; ++i) {
    const double ap = std::pow(op.a_of_t()[i], p);
    for (std::size_t j = 0; j < g.ns; ++j) {
      const double ph = op.phi1_of_s()[j];
      f.at(i, j) = ap * (std::pow(ph, p) - mu * ph);
    }
  }
  return f;
}

StripField phi0_field(const StripOperator& op) {
  const auto& g = op.grid();
  StripField f = StripField::zeros(g);
  for (std::size_t i = 0; i < g.nt; ++i)
    for (std::size_t j = 0; j < g.ns; ++j)
      f.at(i, j) = op.a_of_t()[i] * op.phi1_of_s()[j];
  return f;
}

StripField nonlinearity_Q(const StripField& psi, const StripField& phi0, double p) {
  if (psi.v.size() != phi0.v.size())
    throw DomainError("nonlinearity_Q: incompatible grids");
  StripField q = StripField::zeros(psi.grid);
  for (std::size_t k = 0; k < q.v.size(); ++k) {
    const double f0 = phi0.v[k];
    q.v[k] = std::pow(std::abs(f0 + psi.v[k]), p) - std::pow(f0, p) -
             p * std::pow(f0, p - 1.0) * psi.v[k];
  }
  return q;
}

FixedPointResult fixed_point_psi(const StripOperator& op, int max_iter, double tol,
                                 bool include_M) {
  const auto& g = op.grid();
  const double p = op.het().params.p;
  const StripField M = forcing_M(op);
  const StripField phi0 = phi0_field(op);

  FixedPointResult res;
  res.psi = StripField::zeros(g);
  // roundoff left by the deflated solve scales like eps/sigma of the
  // near-null translation remnant
  const double solver_noise =
      2.2e-16 / std::max(op.kernel_sigma(), 2.2e-16);
  double prev_change = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    StripField rhs = nonlinearity_Q(res.psi, phi0, p);
    if (include_M)
      for (std::size_t k = 0; k < rhs.v.size(); ++k) rhs.v[k] += M.v[k];
    for (double& x : rhs.v) x = -x;
    StripField next = op.solve(rhs);

    double change = 0.0;
    for (std::size_t k = 0; k < next.v.size(); ++k)
      change = std::max(change, std::abs(next.v[k] - res.psi.v[k]));
    res.psi = std::move(next);
    res.iterations = it;
    const double floor = std::max(1e-6 * std::max(1.0, res.psi.sup()),
                                  20.0 * solver_noise * rhs.sup());
    if (prev_change > 0.0 && change > floor) {
      res.contraction = change / prev_change;
      if (res.contraction >= 1.0 && it > 2)
        throw SolverError("fixed_point_psi: iteration is not contracting",
                          "factor=" + std::to_string(res.contraction) +
                              "; decrease p - p*");
    }
    const bool stagnated = prev_change > 0.0 && change >= prev_change && change <= floor;
    prev_change = change;
    if (change < tol * std::max(1.0, res.psi.sup()) || stagnated) break;
  }

  res.smallness_ratio = res.psi.sup() / phi0.sup();
  StripField Lpsi = op.apply(res.psi);
  StripField Q = nonlinearity_Q(res.psi, phi0, p);
  StripField r = StripField::zeros(g);
  for (std::size_t i = 1; i + 1 < g.nt; ++i)
    for (std::size_t j = 0; j + 1 < g.ns; ++j) {
      r.at(i, j) = Lpsi.at(i, j) + Q.at(i, j);
      if (include_M) r.at(i, j) += M.at(i, j);
    }
  // the defining equation is solved on the deflated subspace
  res.residual = op.project_range(r).sup();
  return res;
}

CapBarrier phi_star(const SpectralData& spec, double delta) {
  const int n = spec.cap.n;
  const double gamma = spec.gamma;
  const double extra = delta * (delta - (n + 2.0 * gamma - 2.0));
  if (extra > 1e-12)
    throw DomainError("phi_star: shift is not coercive for this delta");
  const double shift = spec.lambda + extra;

  const std::size_t m = spec.t.size();
  const double h = spec.h();
  const std::size_t N = m - 1;  // unknowns j = 0..m-2, Dirichlet at beta

  std::vector<double> dl(N - 1, 0.0), d(N, 0.0), du(N - 1, 0.0), rhs(N, -1.0);
  for (std::size_t j = 0; j < N; ++j) {
    if (j == 0) {
      const double c = 2.0 * (n - 1) / (h * h);
      d[0] = -c + shift;
      du[0] = c;
      continue;
    }
    const double cot = (n > 2) ? std::cos(spec.t[j]) / std::sin(spec.t[j]) : 0.0;
    const double cm = 1.0 / (h * h) - (n - 2) * cot / (2.0 * h);
    const double cp = 1.0 / (h * h) + (n - 2) * cot / (2.0 * h);
    dl[j - 1] = cm;
    d[j] = -2.0 / (h * h) + shift;
    if (j + 1 < N) du[j] = cp;
  }

  CapBarrier out;
  out.delta = delta;
  out.shift = shift;
  out.t = spec.t;
  out.v.assign(m, 0.0);

  if (std::abs(extra) > 1e-12) {
    auto dlc = dl;
    auto dc = d;
    auto duc = du;
    const lapack_int info =
        LAPACKE_dgtsv(LAPACK_COL_MAJOR, static_cast<lapack_int>(N), 1, dlc.data(),
                      dc.data(), duc.data(), rhs.data(), static_cast<lapack_int>(N));
    if (info != 0)
      throw SolverError("phi_star: tridiagonal solve failed",
                        "dgtsv info=" + std::to_string(info));
    for (std::size_t j = 0; j < N; ++j) out.v[j] = rhs[j];
    return out;
  }

  // delta = 0: the shift hits the eigenvalue; solve on the discrete
  // orthogonal complement of the null mode via a bordered dense system
  std::vector<double> z(N);
  for (std::size_t j = 0; j < N; ++j) z[j] = spec.phi1[j];
  for (int pass = 0; pass < 3; ++pass) {  // inverse iteration sharpens phi1_h
    auto dlc = dl;
    auto dc = d;
    auto duc = du;
    for (std::size_t j = 0; j < N; ++j) dc[j] += 1e-8;
    std::vector<double> b = z;
    const lapack_int info =
        LAPACKE_dgtsv(LAPACK_COL_MAJOR, static_cast<lapack_int>(N), 1, dlc.data(),
                      dc.data(), duc.data(), b.data(), static_cast<lapack_int>(N));
    if (info != 0)
      throw SolverError("phi_star: inverse iteration failed",
                        "dgtsv info=" + std::to_string(info));
    double nrm = 0.0;
    for (double x : b) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (std::size_t j = 0; j < N; ++j) z[j] = b[j] / nrm;
  }

  const std::size_t Nb = N + 1;
  std::vector<double> Adense(Nb * Nb, 0.0);  // column-major
  auto put = [&](std::size_t r, std::size_t c, double val) {
    Adense[c * Nb + r] = val;
  };
  for (std::size_t j = 0; j < N; ++j) {
    put(j, j, d[j]);
    if (j + 1 < N) {
      put(j + 1, j, dl[j]);
      put(j, j + 1, du[j]);
    }
    put(j, N, z[j]);  // range supplement
    put(N, j, z[j]);  // orthogonality constraint
  }
  std::vector<double> b(Nb, 0.0);
  for (std::size_t j = 0; j < N; ++j) b[j] = -1.0;
  std::vector<lapack_int> ipiv(Nb);
  const lapack_int info =
      LAPACKE_dgesv(LAPACK_COL_MAJOR, static_cast<lapack_int>(Nb), 1, Adense.data(),
                    static_cast<lapack_int>(Nb), ipiv.data(), b.data(),
                    static_cast<lapack_int>(Nb));
  if (info != 0)
    throw SolverError("phi_star: bordered solve failed",
                      "dgesv info=" + std::to_string(info));
  // the complement representative changes sign by construction; restore
  // positivity with a kernel multiple (still solves the deflated equation)
  double c = 0.0;
  for (std::size_t j = 0; j < N; ++j)
    if (z[j] > 1e-12) c = std::max(c, -b[j] / z[j]);
  c *= 1.05;
  for (std::size_t j = 0; j < N; ++j) out.v[j] = b[j] + c * z[j];
  return out;
}

}  // namespace wedge
