#include "shearwave/oracles.hpp"

#include <cmath>

#include "shearwave/banded.hpp"

namespace shearwave {
namespace oracles {

namespace {
// 2-point Gauss-Legendre on [a, b]
template <class F>
auto gl2(F&& f, double a, double b) -> decltype(f(a)) {
  double m = 0.5 * (a + b), r = 0.5 * (b - a);
  double t = r / std::sqrt(3.0);
  return r * (f(m - t) + f(m + t));
}
}  // namespace

CouetteModes couette_modes(double k, double h, double g, double sigma) {
  if (k == 0.0) fail(ErrorCode::ZeroWavenumber, "closed-form modes need k != 0");
  CouetteModes m;
  m.k = k;
  m.h = h;
  m.g = g;
  m.sigma = sigma;
  double gsk = g + sigma * k * k;
  double A = k / std::tanh(k * h);
  double disc = 1.0 + 4.0 * A * gsk;
  double q = -0.5 * (1.0 + std::sqrt(disc));  // -(B + sign(B) sqrt(D))/2, B = 1
  m.c_minus = q / A;
  m.c_plus = -gsk / q;  // Vieta: c+ c- = -gsk/A
  return m;
}

CouetteModes::EigenFields CouetteModes::fields(
    bool plus_branch, const std::vector<double>& grid) const {
  double c = plus_branch ? c_plus : c_minus;
  double amp = std::pow(1.0 + k * k, 0.25) * std::exp(-std::abs(k) * h);
  double gsk = g + sigma * k * k;
  EigenFields f;
  f.v1.resize(grid.size());
  f.v2.resize(grid.size());
  f.p.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    double x2 = grid[i];
    f.v1[i] = cplx(0.0, amp * std::cosh(k * (x2 + h)));
    f.v2[i] = amp * std::sinh(k * (x2 + h));
    f.p[i] = cplx(0.0, amp) *
             (gsk * std::sinh(k * h) / (k * c) - (x2 - c) * std::cosh(k * (x2 + h)) -
              c * std::cosh(k * h) +
              (std::sinh(k * (x2 + h)) - std::sinh(k * h)) / k);
  }
  f.eta = cplx(0.0, amp) * std::sinh(k * h) / (k * c);
  return f;
}

std::pair<double, double> irrotational_speed(double k, double h, double g,
                                             double sigma) {
  if (k == 0.0) {
    double c = std::sqrt(g * h);
    return {c, -c};
  }
  double c = std::sqrt((g + sigma * k * k) * std::tanh(k * h) / k);
  return {c, -c};
}

std::vector<cplx> closed_form_yminus(const ShearProfile& profile,
                                     ClosedFormCase which, double c,
                                     const std::vector<double>& grid) {
  std::vector<cplx> out(grid.size());
  double h = profile.h();
  if (which == ClosedFormCase::at_bottom_value) {
    double um = profile.u_min();
    double up = profile.eval(-h, 1);
    for (size_t i = 0; i < grid.size(); ++i)
      out[i] = (profile.eval(grid[i], 0) - um) / up;
    return out;
  }
  if (c >= profile.u_min() && c <= profile.u_max())
    fail(ErrorCode::OutOfRange, "k=0 closed form needs c outside U([-h,0])");
  auto f = [&](double x) {
    double d = profile.eval(x, 0) - c;
    return (profile.u_min() - c) / (d * d);
  };
  double acc = 0.0;
  double xprev = -h;
  for (size_t i = 0; i < grid.size(); ++i) {
    double xi = grid[i];
    int panels = 8;
    for (int p = 0; p < panels; ++p) {
      double a = xprev + (xi - xprev) * p / panels;
      double b = xprev + (xi - xprev) * (p + 1) / panels;
      acc += gl2(f, a, b);
    }
    out[i] = (profile.eval(xi, 0) - c) * acc;
    xprev = xi;
  }
  return out;
}

ScaledDet fd_determinant(const WaveContext& ctx, cplx c, int n) {
  if (n > 2000) fail(ErrorCode::ConfigError, "fd_determinant limited to n <= 2000");
  const auto& U = *ctx.profile;
  double h = U.h();
  double dx = h / (n + 1);
  double k2 = ctx.k * ctx.k;
  // unknowns V_1..V_{n+1} (interior plus surface); Dirichlet bottom eliminated
  int m = n + 1;
  BandedLU<cplx> lu(m, 3, 1);
  for (int i = 1; i <= n; ++i) {
    double x = -h + i * dx;
    cplx umc = U.eval(x, 0) - c;
    double upp = U.eval(x, 2);
    int r = i - 1;
    if (i > 1) lu.at(r, r - 1) = -umc / (dx * dx);
    lu.at(r, r) = umc * (2.0 / (dx * dx) + k2) + upp;
    lu.at(r, r + 1) = -umc / (dx * dx);
  }
  // surface row: (U(0)-c)^2 D+ V - (U'(0)(U(0)-c) + g + sigma k^2) V(0) = 0,
  // one-sided third-order difference for D+
  {
    cplx umc = U.u_max() - c;
    cplx lead = umc * umc / (6.0 * dx);
    int r = m - 1;
    lu.at(r, r) = lead * 11.0 - (U.eval(0.0, 1) * umc + ctx.gsk());
    lu.at(r, r - 1) = lead * (-18.0);
    lu.at(r, r - 2) = lead * 9.0;
    lu.at(r, r - 3) = lead * (-2.0);
  }
  lu.factor();
  ScaledDet d;
  d.phase = lu.phase();
  d.log_mag = lu.log_mag();
  return d;
}

cplx fd_determinant_root(const WaveContext& ctx, cplx c0, int n, int max_iter) {
  double ref = fd_determinant(ctx, c0, n).log_mag;
  auto f = [&](cplx c) { return fd_determinant(ctx, c, n).scaled(ref); };
  cplx a = c0, b = c0 + 1e-4 * (std::abs(c0) + 1.0);
  cplx fa = f(a), fb = f(b);
  for (int it = 0; it < max_iter; ++it) {
    cplx denom = fb - fa;
    if (std::abs(denom) == 0.0) break;
    cplx next = b - fb * (b - a) / denom;
    a = b;
    fa = fb;
    b = next;
    fb = f(b);
    if (std::abs(b - a) < 1e-12 * (std::abs(b) + 1.0)) break;
  }
  return b;
}

}  // namespace oracles
}  // namespace shearwave
