#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "shearwave/rayleigh.hpp"

using namespace shearwave;

namespace {

ProfilePtr couette() {
  ProfileSpec s;
  s.kind = ProfileKind::couette;
  s.h = 1.0;
  return build_profile(s);
}

ProfilePtr tanh_shear() {
  ProfileSpec s;
  s.kind = ProfileKind::tanh_shear;
  s.h = 1.0;
  s.params["steepness"] = 2.0;
  s.params["center"] = -0.5;
  return build_profile(s);
}

ProfilePtr convex_cubic() {
  ProfileSpec s;
  s.kind = ProfileKind::polynomial;
  s.h = 1.0;
  s.params["c0"] = 0.0;
  s.params["c1"] = 1.0;
  s.params["c2"] = 0.3;
  return build_profile(s);
}

WaveContext make_ctx(ProfilePtr p, double k, double g = 1.0, double sigma = 1.0) {
  WaveContext ctx;
  ctx.profile = std::move(p);
  ctx.k = k;
  ctx.g = g;
  ctx.sigma = sigma;
  ctx.numerics.grid_n = 257;
  return ctx;
}

cplx couette_y_minus(double k, double h, double x2) {
  if (k == 0.0) return x2 + h;
  return std::sinh(k * (x2 + h)) / k;
}

}  // namespace

TEST_CASE("couette y_minus equals sinh(k(x+h))/k") {
  auto ctx = make_ctx(couette(), 2.0);
  auto grid = ctx.grid();
  for (cplx c : {cplx(3.0, 0.0), cplx(0.4, 0.7), cplx(-2.0, 0.1)}) {
    auto tr = solve_y_minus(ctx, c, grid);
    for (size_t i = 0; i < grid.size(); ++i) {
      cplx exact = couette_y_minus(ctx.k, 1.0, grid[i]);
      CHECK(std::abs(tr.value(i) - exact) <= 1e-8 * (std::abs(exact) + 1.0));
    }
  }
}

TEST_CASE("couette y_plus closed form and Wronskian") {
  auto ctx = make_ctx(couette(), 1.5);
  auto grid = ctx.grid();
  cplx c(2.5, 0.0);
  auto tp = solve_y_plus(ctx, c, grid);
  double k = ctx.k;
  cplx y0 = (0.0 - c) * (0.0 - c) / ctx.gsk();
  cplx dy0 = 1.0 + 1.0 * (0.0 - c) / ctx.gsk();
  for (size_t i = 0; i < grid.size(); ++i) {
    cplx exact = y0 * std::cosh(k * grid[i]) + dy0 * std::sinh(k * grid[i]) / k;
    CHECK(std::abs(tp.value(i) - exact) <= 1e-8 * (std::abs(exact) + 1.0));
  }
  auto tm = solve_y_minus(ctx, c, grid);
  auto rep = wronskian_drift(ctx, tm, tp);
  CHECK(rep.max_rel_drift <= 1e-8);
  // W = y_+(-h)
  CHECK(std::abs(rep.value_at_0 - tp.value(0)) <=
        1e-8 * (std::abs(tp.value(0)) + 1e-30));
}

TEST_CASE("Wronskian drift stays small for complex c") {
  auto ctx = make_ctx(tanh_shear(), 1.0);
  auto grid = ctx.grid();
  cplx c(0.3, 0.5);
  auto tm = solve_y_minus(ctx, c, grid);
  auto tp = solve_y_plus(ctx, c, grid);
  auto rep = wronskian_drift(ctx, tm, tp);
  CHECK(rep.max_rel_drift <= 1e-8);
}

TEST_CASE("wronskian sentinel for mismatched wave speeds") {
  auto ctx = make_ctx(couette(), 1.0);
  auto grid = ctx.grid();
  auto tm = solve_y_minus(ctx, cplx(3.0, 0.0), grid);
  auto tp = solve_y_plus(ctx, cplx(2.0, 0.0), grid);
  auto rep = wronskian_drift(ctx, tm, tp);
  CHECK(std::isinf(rep.max_rel_drift));
}

TEST_CASE("k=0 closed form for y_minus") {
  auto ctx = make_ctx(couette(), 0.0);
  auto grid = ctx.grid();
  cplx c(-2.0, 0.0);
  auto tr = solve_y_minus(ctx, c, grid);
  for (size_t i = 0; i < grid.size(); i += 16) {
    // (U - c) int_{-h}^{x} (U(-h)-c)/(U-c)^2, couette: closed antiderivative
    double x = grid[i];
    cplx val = (x - c) * (-1.0 - c) * (1.0 / (-1.0 - c) - 1.0 / (x - c));
    CHECK(std::abs(tr.value(i) - val) <= 1e-8 * (std::abs(val) + 1.0));
  }
}

TEST_CASE("bottom-value solution at k=0") {
  for (auto p : {couette(), tanh_shear()}) {
    auto ctx = make_ctx(p, 0.0);
    auto grid = ctx.grid();
    double c = p->u_min();
    auto tr = solve_fundamental(ctx, cplx(c, 0.0), grid, FundamentalSide::minus);
    double up = p->eval(-p->h(), 1);
    for (size_t i = 0; i < grid.size(); i += 16) {
      double exact = (p->eval(grid[i], 0) - c) / up;
      CHECK(std::abs(tr.value(i) - exact) <= 1e-7 * (std::abs(exact) + 1.0));
    }
  }
}

TEST_CASE("conjugacy: trace at conj(c) is the conjugate") {
  auto ctx = make_ctx(convex_cubic(), 1.3);
  auto grid = ctx.grid();
  cplx c(0.2, 0.35);
  auto tr = solve_y_minus(ctx, c, grid);
  auto tc = solve_y_minus(ctx, std::conj(c), grid);
  for (size_t i = 0; i < grid.size(); i += 8) {
    CHECK(std::abs(tc.value(i) - std::conj(tr.value(i))) <=
          1e-10 * (std::abs(tr.value(i)) + 1.0));
  }
}

TEST_CASE("evenness in k") {
  auto ctx = make_ctx(tanh_shear(), 2.7);
  auto ctx2 = ctx;
  ctx2.k = -2.7;
  auto grid = ctx.grid();
  cplx c(0.1, 0.4);
  auto a = solve_y_minus(ctx, c, grid);
  auto b = solve_y_minus(ctx2, c, grid);
  for (size_t i = 0; i < grid.size(); i += 8)
    CHECK(std::abs(a.value(i) - b.value(i)) <= 1e-12 * (std::abs(a.value(i)) + 1.0));
}

TEST_CASE("positivity of y_minus off the critical range") {
  auto p = tanh_shear();
  auto ctx = make_ctx(p, 1.0);
  auto grid = ctx.grid();
  for (double c : {p->u_min() - 0.3, p->u_max() + 0.5}) {
    auto tr = solve_fundamental(ctx, cplx(c, 0.0), grid, FundamentalSide::minus);
    for (size_t i = 1; i < grid.size(); ++i) {
      CHECK(tr.value(i).real() > 0.0);
      CHECK(std::abs(tr.value(i).imag()) <= ctx.numerics.ode_tol * 100);
    }
  }
}

TEST_CASE("limit trace: couette has no jump") {
  auto ctx = make_ctx(couette(), 1.0);
  auto grid = ctx.grid();
  double c = -0.4;  // inside U((-h,0))
  auto tr = limit_real(ctx, c, grid, FundamentalSide::minus);
  CHECK(tr.critical.has_value());
  CHECK(!tr.critical->jump_applied);
  for (size_t i = 0; i < grid.size(); ++i) {
    cplx exact = couette_y_minus(ctx.k, 1.0, grid[i]);
    CHECK(std::abs(tr.value(i) - exact) <= 1e-7 * (std::abs(exact) + 1.0));
    CHECK(std::abs(tr.value(i).imag()) <= 1e-9);
  }
}

TEST_CASE("limit trace at an inflection value has no imaginary part") {
  auto p = tanh_shear();
  auto ctx = make_ctx(p, 1.0);
  auto grid = ctx.grid();
  double c = p->eval(-0.5, 0);  // inflection value, U'' = 0 there
  auto tr = limit_real(ctx, c, grid, FundamentalSide::minus);
  for (size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(tr.value(i).imag()) <= 1e-7 * (std::abs(tr.value(i)) + 1.0));
}

TEST_CASE("limit trace: real below the layer, jump sign above") {
  auto p = convex_cubic();  // U'' = 0.6 > 0 everywhere
  auto ctx = make_ctx(p, 1.0);
  auto grid = ctx.grid();
  double x2c = -0.45;
  double c = p->eval(x2c, 0);
  auto tr = limit_real(ctx, c, grid, FundamentalSide::minus);
  REQUIRE(tr.critical.has_value());
  CHECK(tr.critical->jump_applied);
  CHECK(tr.critical->x2c == doctest::Approx(x2c).epsilon(1e-9));
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < x2c - 1e-3)
      CHECK(std::abs(tr.value(i).imag()) <= 1e-8);
  }
  // predicted sign: Im y'(x2c+) = pi U''/U' y(x2c) > 0, and it stays positive
  CHECK(tr.value(grid.size() - 1).imag() > 0.0);
}

TEST_CASE("limit trace agrees with the regularized continuation") {
  // independent oracle: solve at c + i*eps and extrapolate eps -> 0+
  for (auto prof : {convex_cubic(), tanh_shear()}) {
    auto ctx = make_ctx(prof, 1.2);
    ctx.numerics.ode_tol = 1e-8;
    ctx.numerics.eps_seq = {4e-6, 2e-6, 1e-6};
    auto grid = ctx.grid();
    double x2c = -0.37;
    double c = prof->eval(x2c, 0);
    auto tr = limit_real(ctx, c, grid, FundamentalSide::minus);
    std::vector<std::vector<cplx>> vals;
    for (double e : ctx.numerics.eps_seq) {
      auto te = solve_y_minus(ctx, cplx(c, e), grid);
      std::vector<cplx> v(grid.size());
      for (size_t i = 0; i < grid.size(); ++i) v[i] = te.value(i);
      vals.push_back(v);
    }
    double delta = ctx.layer_halfwidth();
    double worst = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(grid[i] - x2c) <= 2 * delta) continue;
      std::vector<cplx> stack = {vals[0][i], vals[1][i], vals[2][i]};
      cplx lim = extrapolate_to_real_axis(ctx.numerics.eps_seq, stack);
      worst = std::max(worst, std::abs(lim - tr.value(i)));
    }
    CHECK(worst <= 10 * ctx.numerics.ode_tol);
  }
}

TEST_CASE("near-singular direct solve is rejected") {
  auto ctx = make_ctx(couette(), 1.0);
  auto grid = ctx.grid();
  double thr = 1e-3 * ctx.mu() * ctx.numerics.delta_cl;
  CHECK_THROWS_AS((void)solve_y_minus(ctx, cplx(-0.5, thr * 0.5), grid), Error);
}

TEST_CASE("large-k robustness at k=200") {
  auto ctx = make_ctx(couette(), 200.0);
  auto grid = ctx.grid();
  cplx c(3.0, 0.0);
  auto tr = solve_y_minus(ctx, c, grid);
  // compare shape ratios to sinh; offsets cancel in ratios
  size_t top = grid.size() - 1;
  for (size_t i = 1; i < grid.size(); i += 16) {
    double expect =
        std::sinh(ctx.k * (grid[i] + 1.0)) / std::sinh(ctx.k * (grid[top] + 1.0));
    if (!std::isfinite(expect)) continue;
    cplx got = tr.ratio(i, top);
    CHECK(std::abs(got - expect) <= 1e-6 * (std::abs(expect) + 1e-12));
  }
}

TEST_CASE("nonhomogeneous: zero forcing gives the zero solution") {
  auto ctx = make_ctx(couette(), 1.0);
  auto grid = ctx.grid();
  std::vector<cplx> psi(grid.size(), 0.0);
  auto tr = solve_nonhomogeneous(ctx, cplx(2.5, 0.0), psi, grid);
  for (size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(tr.value(i)) <= 1e-12);
}

TEST_CASE("nonhomogeneous: couette constant forcing closed form") {
  auto ctx = make_ctx(couette(), 1.0);
  auto grid = ctx.grid();
  cplx c(2.5, 0.0);
  double k = ctx.k, h = 1.0;
  std::vector<cplx> psi(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) psi[i] = grid[i] - c;  // psi = U - c
  auto tr = solve_nonhomogeneous(ctx, c, psi, grid);
  // -y'' + k^2 y = 1, y(-h) = 0, c^2 y'(0) = (g + sigma k^2 - c) y(0)
  cplx part = 1.0 / (k * k);
  cplx a = -part;
  cplx gsk = ctx.gsk();
  cplx lhs = c * c * k * std::cosh(k * h) - (gsk - c) * std::sinh(k * h);
  cplx rhs = (gsk - c) * (a * std::cosh(k * h) + part) - c * c * k * a * std::sinh(k * h);
  cplx b = rhs / lhs;
  for (size_t i = 0; i < grid.size(); i += 16) {
    cplx exact =
        a * std::cosh(k * (grid[i] + h)) + b * std::sinh(k * (grid[i] + h)) + part;
    CHECK(std::abs(tr.value(i) - exact) <= 1e-8 * (std::abs(exact) + 1.0));
  }
}

TEST_CASE("nonhomogeneous real-c limit matches regularized continuation") {
  auto prof = convex_cubic();
  auto ctx = make_ctx(prof, 1.0);
  ctx.numerics.ode_tol = 1e-8;
  ctx.numerics.eps_seq = {4e-6, 2e-6, 1e-6};
  auto grid = ctx.grid();
  std::vector<cplx> psi(grid.size());
  for (size_t i = 0; i < grid.size(); ++i)
    psi[i] = std::exp(-10.0 * (grid[i] + 0.5) * (grid[i] + 0.5));
  double c = prof->eval(-0.43, 0);
  auto tr = solve_nonhomogeneous(ctx, cplx(c, 0.0), psi, grid);
  std::vector<std::vector<cplx>> vals;
  for (double e : ctx.numerics.eps_seq) {
    auto te = solve_nonhomogeneous(ctx, cplx(c, e), psi, grid);
    std::vector<cplx> v(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) v[i] = te.value(i);
    vals.push_back(v);
  }
  double delta = ctx.layer_halfwidth();
  double x2c = prof->inverse_u(c);
  double err2 = 0.0, norm2 = 0.0;
  int used = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid[i] - x2c) <= 2 * delta) continue;
    std::vector<cplx> stack = {vals[0][i], vals[1][i], vals[2][i]};
    cplx lim = extrapolate_to_real_axis(ctx.numerics.eps_seq, stack);
    err2 += std::norm(lim - tr.value(i));
    norm2 += std::norm(lim);
    ++used;
  }
  CHECK(std::sqrt(err2 / used) <=
        10 * ctx.numerics.ode_tol * std::sqrt(norm2 / used + 1.0));
}

TEST_CASE("BVP: zero data gives zero solution") {
  auto ctx = make_ctx(couette(), 1.0);
  auto grid = ctx.grid();
  std::vector<cplx> omega0(grid.size(), 0.0);
  auto sol = solve_bvp_V2(ctx, cplx(2.5, 0.3), omega0, 0.0, 0.0, grid);
  for (size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(sol.v2.y[i]) <= 1e-12);
}

TEST_CASE("BVP: couette with zero vorticity is proportional to sinh") {
  auto ctx = make_ctx(couette(), 1.0);
  auto grid = ctx.grid();
  std::vector<cplx> omega0(grid.size(), 0.0);
  auto sol = solve_bvp_V2(ctx, cplx(1.7, 0.25), omega0, cplx(0.5, -0.2), 0.0, grid);
  size_t mid = grid.size() / 2, top = grid.size() - 1;
  cplx ratio = sol.v2.y[mid] / sol.v2.y[top];
  double expect =
      std::sinh(ctx.k * (grid[mid] + 1.0)) / std::sinh(ctx.k * (grid[top] + 1.0));
  CHECK(std::abs(ratio - expect) <= 1e-8);
}

TEST_CASE("BVP: eigen-data gives the resolvent pole structure") {
  // with eigenfunction data at a dispersion root c*, V2 = y_-(c*, x)/(ik(c*-c))
  auto ctx = make_ctx(couette(), 1.0);
  auto grid = ctx.grid();
  double k = ctx.k, h = 1.0;
  double cothkh = std::cosh(k * h) / std::sinh(k * h);
  double A = k * cothkh, B = 1.0, C = -(ctx.gsk());
  double cstar = (-B + std::sqrt(B * B - 4 * A * C)) / (2 * A);
  std::vector<cplx> omega0(grid.size(), 0.0);  // these modes carry no vorticity
  cplx y_top = couette_y_minus(k, h, 0.0);
  cplx eta0 = y_top / (cplx(0, 1) * k * (0.0 - cstar));
  cplx dv20_top = std::cosh(k * h);  // y_-'(0)
  for (cplx c : {cstar + cplx(0.3, 0.2), cstar + cplx(-0.1, 0.5)}) {
    auto sol = solve_bvp_V2(ctx, c, omega0, eta0, dv20_top, grid);
    for (size_t i = 16; i < grid.size(); i += 32) {
      cplx expect = couette_y_minus(k, h, grid[i]) / (cplx(0, 1) * k * (cstar - c));
      CHECK(std::abs(sol.v2.y[i] - expect) <= 1e-6 * (std::abs(expect) + 1.0));
    }
    cplx eta_expect = eta0 / (cplx(0, 1) * k * (cstar - c));
    CHECK(std::abs(sol.eta_tilde - eta_expect) <= 1e-6 * std::abs(eta_expect));
  }
}

TEST_CASE("channel boundary data for y_plus") {
  auto ctx = make_ctx(couette(), 1.0);
  ctx.bc_kind = BoundaryKind::channel;
  auto grid = ctx.grid();
  cplx c(2.0, 0.0);
  auto tp = solve_y_plus(ctx, c, grid);
  size_t top = grid.size() - 1;
  CHECK(std::abs(tp.value(top)) <= 1e-10);
  CHECK(std::abs(tp.deriv(top) - 1.0) <= 1e-8);
  // closed form sinh(kx)/k
  size_t mid = grid.size() / 2;
  double exact = std::sinh(ctx.k * grid[mid]) / ctx.k;
  CHECK(std::abs(tp.value(mid) - exact) <= 1e-8);
}
