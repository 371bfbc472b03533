#include "shearwave/rayleigh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace shearwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// complex cubic spline (natural), for sampling the forcing between grid nodes
// ---------------------------------------------------------------------------
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(const std::vector<double>& x, const std::vector<cplx>& f)
      : x_(x), a_(f) {
    int n = int(x.size());
    b_.assign(n, 0.0);
    c_.assign(n, 0.0);
    d_.assign(n, 0.0);
    if (n < 3) {
      if (n == 2) b_[0] = (a_[1] - a_[0]) / (x_[1] - x_[0]);
      return;
    }
    std::vector<double> hl(n - 1);
    for (int i = 0; i < n - 1; ++i) hl[i] = x_[i + 1] - x_[i];
    std::vector<cplx> alpha(n, 0.0), l(n, 1.0), mu(n, 0.0), z(n, 0.0);
    for (int i = 1; i < n - 1; ++i)
      alpha[i] = 3.0 * ((a_[i + 1] - a_[i]) / hl[i] - (a_[i] - a_[i - 1]) / hl[i - 1]);
    for (int i = 1; i < n - 1; ++i) {
      l[i] = 2.0 * (x_[i + 1] - x_[i - 1]) - hl[i - 1] * mu[i - 1];
      mu[i] = hl[i] / l[i];
      z[i] = (alpha[i] - hl[i - 1] * z[i - 1]) / l[i];
    }
    for (int i = n - 2; i >= 0; --i) {
      c_[i] = z[i] - mu[i] * c_[i + 1];
      b_[i] = (a_[i + 1] - a_[i]) / hl[i] - hl[i] * (c_[i + 1] + 2.0 * c_[i]) / 3.0;
      d_[i] = (c_[i + 1] - c_[i]) / (3.0 * hl[i]);
    }
  }

  cplx operator()(double x) const {
    int i = seg(x);
    double s = x - x_[i];
    return a_[i] + s * (b_[i] + s * (c_[i] + s * d_[i]));
  }
  cplx deriv(double x) const {
    int i = seg(x);
    double s = x - x_[i];
    return b_[i] + s * (2.0 * c_[i] + 3.0 * s * d_[i]);
  }

 private:
  int seg(double x) const {
    int n = int(x_.size());
    int lo = 0, hi = n - 1;
    if (x <= x_[0]) return 0;
    if (x >= x_[n - 1]) return n - 2;
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      if (x < x_[mid]) hi = mid; else lo = mid;
    }
    return lo;
  }
  std::vector<double> x_;
  std::vector<cplx> a_, c_, d_;
  std::vector<cplx> b_;
};

// ---------------------------------------------------------------------------
// Rayleigh right-hand sides. Two charts: (y, y') for moderate k, and the
// characteristic variables z_pm = y' +- |k| y for |k| > 8, where exponential
// growth appears explicitly and running renormalization keeps magnitudes sane.
// ---------------------------------------------------------------------------
struct RayleighOde {
  const ShearProfile* U;
  cplx c;
  double k_abs;
  double k2;
  bool z_chart;
  const CubicSpline* psi = nullptr;  // accumulate I' = y psi / (U - c) if set

  int dim() const { return psi ? 3 : 2; }

  void rhs(double x, const cplx* w, cplx* dw) const {
    double u = U->eval(x, 0);
    double upp = U->eval(x, 2);
    cplx den = u - c;
    if (z_chart) {
      cplx beta = upp / (k_abs * den);
      cplx zp = w[0], zm = w[1];
      dw[0] = k_abs * zp + 0.5 * beta * (zp - zm);
      dw[1] = -k_abs * zm + 0.5 * beta * (zp - zm);
      if (psi) dw[2] = ((zp - zm) / (2.0 * k_abs)) * (*psi)(x) / den;
    } else {
      dw[0] = w[1];
      dw[1] = (k2 + upp / den) * w[0];
      if (psi) dw[2] = w[0] * (*psi)(x) / den;
    }
  }

  void to_chart(cplx y, cplx dy, cplx* w) const {
    if (z_chart) { w[0] = dy + k_abs * y; w[1] = dy - k_abs * y; }
    else { w[0] = y; w[1] = dy; }
  }
  void from_chart(const cplx* w, cplx& y, cplx& dy) const {
    if (z_chart) { y = (w[0] - w[1]) / (2.0 * k_abs); dy = 0.5 * (w[0] + w[1]); }
    else { y = w[0]; dy = w[1]; }
  }
};

// Dormand-Prince 5(4) pair.
struct Dp45 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

struct OdeState {
  std::array<cplx, 3> w{};
  double log_offset = 0.0;
};

// Advance `st` from x_from to x_to (either direction), renormalizing when the
// state grows past 1e100. Step size is capped near the critical layer.
void integrate_segment(const RayleighOde& ode, double tol, double x_from,
                       double x_to, OdeState& st, double x2c, double layer_cap) {
  if (x_from == x_to) return;
  const int n = ode.dim();
  const double dir = (x_to > x_from) ? 1.0 : -1.0;
  const double span = std::abs(x_to - x_from);
  double x = x_from;
  double h = dir * std::min(span, 1e-2);
  std::array<cplx, 3> k1, k2, k3, k4, k5, k6, k7, wt, w5;
  ode.rhs(x, st.w.data(), k1.data());
  int accepted_since_renorm = 0;
  while (dir * (x_to - x) > 0) {
    if (dir * (x + h - x_to) > 0) h = x_to - x;
    if (std::isfinite(x2c)) {
      double dist = std::abs(x - x2c);
      if (dist < 4.0 * layer_cap * 16.0) {
        double cap = std::max(layer_cap, dist / 8.0);
        if (std::abs(h) > cap) h = dir * cap;
      }
    }
    // stages
    auto stage = [&](std::array<cplx, 3>& out, double frac,
                     std::initializer_list<std::pair<const std::array<cplx, 3>*, double>> terms) {
      for (int i = 0; i < n; ++i) {
        cplx acc = st.w[i];
        for (auto& t : terms) acc += h * t.second * (*t.first)[i];
        wt[i] = acc;
      }
      ode.rhs(x + frac * h, wt.data(), out.data());
    };
    stage(k2, Dp45::c2, {{&k1, Dp45::a21}});
    stage(k3, Dp45::c3, {{&k1, Dp45::a31}, {&k2, Dp45::a32}});
    stage(k4, Dp45::c4, {{&k1, Dp45::a41}, {&k2, Dp45::a42}, {&k3, Dp45::a43}});
    stage(k5, Dp45::c5,
          {{&k1, Dp45::a51}, {&k2, Dp45::a52}, {&k3, Dp45::a53}, {&k4, Dp45::a54}});
    stage(k6, 1.0, {{&k1, Dp45::a61}, {&k2, Dp45::a62}, {&k3, Dp45::a63},
                    {&k4, Dp45::a64}, {&k5, Dp45::a65}});
    double err = 0.0, scl = 0.0;
    for (int i = 0; i < n; ++i) {
      w5[i] = st.w[i] + h * (Dp45::b1 * k1[i] + Dp45::b3 * k3[i] + Dp45::b4 * k4[i] +
                             Dp45::b5 * k5[i] + Dp45::b6 * k6[i]);
      scl = std::max({scl, std::abs(st.w[i]), std::abs(w5[i])});
    }
    ode.rhs(x + h, w5.data(), k7.data());
    for (int i = 0; i < n; ++i) {
      cplx e = h * (Dp45::e1 * k1[i] + Dp45::e3 * k3[i] + Dp45::e4 * k4[i] +
                    Dp45::e5 * k5[i] + Dp45::e6 * k6[i] + Dp45::e7 * k7[i]);
      err = std::max(err, std::abs(e));
    }
    double sc = tol * (scl + 1.0);
    if (err <= sc || std::abs(h) <= 1e-14 * span) {
      x += h;
      st.w = w5;
      k1 = k7;
      if (++accepted_since_renorm >= 4) {
        accepted_since_renorm = 0;
        double m = 0.0;
        for (int i = 0; i < n; ++i) m = std::max(m, std::abs(st.w[i]));
        if (m > 1e100) {
          for (int i = 0; i < n; ++i) { st.w[i] /= m; k1[i] /= m; }
          st.log_offset += std::log(m);
        }
      }
    }
    double fac = (err > 0.0) ? 0.9 * std::pow(sc / err, 0.2) : 5.0;
    fac = std::clamp(fac, 0.1, 5.0);
    h *= fac;
    if (std::abs(h) < 1e-15 * span)
      fail(ErrorCode::StepFailure, "adaptive step size underflow in Rayleigh solve");
  }
}

// ---------------------------------------------------------------------------
// Local Frobenius/log model of the homogeneous equation around x2c. Any limit
// solution is A*phiA + B*chi with phiA analytic (phiA ~ s) and
// chi = psi + a*phiA*(log|s| + i pi 1_{s>0}), the branch of the c_I -> 0+
// limit. The series are truncated past cubic order.
// ---------------------------------------------------------------------------
struct LayerBasis {
  double x2c = 0.0;
  double up0 = 1.0;   // U'(x2c)
  double a = 0.0;     // U''/U' at x2c, coefficient of the log
  double r1 = 0.0;    // U''/(2U')
  double al2 = 0.0, al3 = 0.0, al4 = 0.0;
  double be2 = 0.0, be3 = 0.0;

  LayerBasis() = default;
  LayerBasis(const ShearProfile& U, double x2c_, double k2) : x2c(x2c_) {
    up0 = U.eval(x2c, 1);
    if (up0 < 1e-8)
      fail(ErrorCode::DegenerateLayer, "U' vanishes at the critical layer");
    double u2 = U.eval(x2c, 2), u3 = U.eval(x2c, 3), u4 = U.eval(x2c, 4);
    a = u2 / up0;
    r1 = u2 / (2.0 * up0);
    double r2 = u3 / (6.0 * up0);
    double b = u3 / up0 - u2 * r1 / up0;
    double c1 = (0.5 * u4 - u3 * r1 + u2 * (r1 * r1 - r2)) / up0;
    double q0 = b + k2, q1 = c1;
    al2 = 0.5 * a;
    al3 = (a * al2 + q0) / 6.0;
    al4 = (a * al3 + q0 * al2 + q1) / 12.0;
    be2 = 0.5 * (q0 - 3.0 * a * al2);
    be3 = (a * be2 + q1 - 5.0 * a * al3) / 6.0;
  }

  static cplx ell(double s) {
    return cplx(std::log(std::abs(s)), s > 0.0 ? kPi : 0.0);
  }
  double phiA(double s) const { return s * (1.0 + s * (al2 + s * (al3 + s * al4))); }
  double dphiA(double s) const {
    return 1.0 + s * (2.0 * al2 + s * (3.0 * al3 + s * 4.0 * al4));
  }
  double psi_reg(double s) const { return 1.0 + s * s * (be2 + s * be3); }
  double dpsi_reg(double s) const { return s * (2.0 * be2 + 3.0 * s * be3); }

  cplx chi(double s) const { return psi_reg(s) + a * phiA(s) * ell(s); }
  cplx dchi(double s) const {
    return dpsi_reg(s) + a * (dphiA(s) * ell(s) + phiA(s) / s);
  }

  void fit(double s, cplx y, cplx dy, cplx& A, cplx& B) const {
    if (std::abs(s) < 1e-300) {
      B = y;
      A = dy;  // finite part; valid when paired with eval at s=0 conventions
      return;
    }
    cplx p = phiA(s), dp = dphiA(s), x = chi(s), dx = dchi(s);
    cplx det = p * dx - dp * x;
    A = (y * dx - dy * x) / det;
    B = (p * dy - dp * y) / det;
  }
  cplx eval_y(double s, cplx A, cplx B) const {
    if (std::abs(s) < 1e-300) return B;
    return A * phiA(s) + B * chi(s);
  }
  // at s=0 the log part is dropped: the finite part of the derivative
  cplx eval_dy(double s, cplx A, cplx B) const {
    if (std::abs(s) < 1e-300) return A + a * B;
    return A * dphiA(s) + B * dchi(s);
  }

  // int_{-delta}^{delta} y(s) psi(s) / (U - (c_R + i0)) ds for y = A phiA + B chi:
  // principal value plus the i pi mass, with the log integrated analytically.
  cplx layer_integral(double delta, cplx A, cplx B, cplx psi0, cplx dpsi0) const {
    cplx f0 = B * psi0;
    cplx val = cplx(0.0, kPi) * f0 / up0;
    val += 2.0 * delta * (A * psi0 + B * dpsi0 - B * psi0 * r1) / up0;
    cplx int_ell(2.0 * delta * (std::log(delta) - 1.0), kPi * delta);
    val += a * B * psi0 * int_ell / up0;
    return val;
  }
};

struct Station {
  double x;
  cplx y, dy, I;
  double off;
};

// integrate across [x_from, x_to] recording stations at the requested nodes
// (nodes must lie within the segment, sorted in travel order)
void run_segment(const RayleighOde& ode, double tol, double x_from, double x_to,
                 OdeState& st, const std::vector<double>& nodes,
                 std::vector<Station>& out, double x2c, double layer_cap) {
  double x = x_from;
  for (double nx : nodes) {
    integrate_segment(ode, tol, x, nx, st, x2c, layer_cap);
    x = nx;
    Station s;
    s.x = nx;
    ode.from_chart(st.w.data(), s.y, s.dy);
    s.I = st.w[2];
    s.off = st.log_offset;
    out.push_back(s);
  }
  integrate_segment(ode, tol, x, x_to, st, x2c, layer_cap);
}

struct InitialData {
  double x0;
  cplx y, dy;
};

InitialData minus_data(const WaveContext& ctx) {
  return {-ctx.profile->h(), cplx(0.0), cplx(1.0)};
}

InitialData plus_data(const WaveContext& ctx, cplx c) {
  if (ctx.bc_kind == BoundaryKind::channel) return {0.0, cplx(0.0), cplx(1.0)};
  double u0 = ctx.profile->u_max(), up0 = ctx.profile->eval(0.0, 1);
  cplx gm = u0 - c;
  return {0.0, gm * gm / ctx.gsk(), 1.0 + up0 * gm / ctx.gsk()};
}

void rebase_offsets(std::vector<Station>& st, double final_off) {
  for (auto& s : st) {
    double f = std::exp(s.off - final_off);
    s.y *= f;
    s.dy *= f;
    s.I *= f;
    s.off = final_off;
  }
}

// Direct integration of a fundamental solution for c off the critical range
// (c_I != 0, or real c outside U([-h,0])). Optionally accumulates the
// quadrature against psi.
struct DirectResult {
  std::vector<Station> stations;  // along the travel direction
  double log_offset = 0.0;
};

DirectResult direct_solve(const WaveContext& ctx, cplx c,
                          const std::vector<double>& grid, FundamentalSide side,
                          const CubicSpline* psi) {
  const auto& U = *ctx.profile;
  double h = U.h();
  if (c.imag() != 0.0) {
    double ci = std::abs(c.imag());
    if (c.real() >= U.u_min() && c.real() <= U.u_max() &&
        ci < 1e-3 * ctx.mu() * ctx.numerics.delta_cl)
      fail(ErrorCode::NearSingular,
           "wave speed too close to the critical range; use the limit solver");
  }
  RayleighOde ode{ctx.profile.get(), c, std::abs(ctx.k), ctx.k * ctx.k,
                  std::abs(ctx.k) > 8.0, psi};
  double x2c = std::numeric_limits<double>::quiet_NaN();
  if (c.imag() != 0.0 && c.real() > U.eval(-h - U.h0(), 0) &&
      c.real() < U.eval(U.h0(), 0))
    x2c = U.inverse_u(c.real());
  double cap = ctx.layer_halfwidth() / 16.0;

  InitialData id = (side == FundamentalSide::minus) ? minus_data(ctx)
                                                    : plus_data(ctx, c);
  OdeState st;
  ode.to_chart(id.y, id.dy, st.w.data());
  st.w[2] = 0.0;
  DirectResult res;
  std::vector<double> nodes = grid;
  double x_from = id.x0, x_to;
  if (side == FundamentalSide::minus) {
    x_to = 0.0;
  } else {
    x_to = -h;
    std::reverse(nodes.begin(), nodes.end());
  }
  run_segment(ode, ctx.numerics.ode_tol, x_from, x_to, st, nodes, res.stations,
              x2c, cap);
  res.log_offset = st.log_offset;
  rebase_offsets(res.stations, st.log_offset);
  return res;
}

// The c_I -> 0+ limit solve for real c inside [u_min, u_max]; crosses the
// layer with the local model and (if psi) applies the principal-value and
// residue corrections to the accumulated integral.
DirectResult limit_solve(const WaveContext& ctx, double c_R,
                         const std::vector<double>& grid, FundamentalSide side,
                         const CubicSpline* psi, LayerBasis* basis_out,
                         cplx* layerA = nullptr, cplx* layerB = nullptr) {
  const auto& U = *ctx.profile;
  double h = U.h();
  double x2c = U.inverse_u(c_R);
  double delta = ctx.layer_halfwidth();
  LayerBasis basis(U, x2c, ctx.k * ctx.k);
  if (basis_out) *basis_out = basis;

  RayleighOde ode{ctx.profile.get(), cplx(c_R, 0.0), std::abs(ctx.k),
                  ctx.k * ctx.k, std::abs(ctx.k) > 8.0, psi};
  double cap = delta / 16.0;

  InitialData id = (side == FundamentalSide::minus) ? minus_data(ctx)
                                                    : plus_data(ctx, c_R);
  const double dir = (side == FundamentalSide::minus) ? 1.0 : -1.0;
  double x_end = (side == FundamentalSide::minus) ? 0.0 : -h;

  double s_of_start = id.x0 - x2c;
  double near_edge = x2c + (-dir) * delta;  // layer edge on the data side
  double far_edge = x2c + dir * delta;      // layer edge past the singularity

  auto in_layer = [&](double x) { return std::abs(x - x2c) <= delta; };

  std::vector<double> nodes = grid;
  if (side == FundamentalSide::plus) std::reverse(nodes.begin(), nodes.end());

  std::vector<Station> stations;
  OdeState st;
  ode.to_chart(id.y, id.dy, st.w.data());
  st.w[2] = 0.0;

  cplx A, B;
  bool full_crossing = false;
  cplx I_at_cross = 0.0;
  double off_at_cross = 0.0;

  // Case: data point already inside the layer (x2c within delta of the data end),
  // including the exact endpoint cases c = U(-h), c = U(0).
  if (std::abs(s_of_start) <= delta ||
      dir * (near_edge - id.x0) < 0.0) {  // no room before the layer
    basis.fit(s_of_start, id.y, id.dy, A, B);
  } else {
    full_crossing = true;
    // integrate the regular side up to the near edge
    std::vector<double> pre;
    for (double nx : nodes)
      if (dir * (nx - near_edge) < 0.0 && dir * (nx - id.x0) >= 0.0) pre.push_back(nx);
    run_segment(ode, ctx.numerics.ode_tol, id.x0, near_edge, st, pre, stations,
                std::numeric_limits<double>::quiet_NaN(), cap);
    cplx y_e, dy_e;
    ode.from_chart(st.w.data(), y_e, dy_e);
    basis.fit(near_edge - x2c, y_e, dy_e, A, B);
    I_at_cross = st.w[2];
    off_at_cross = st.log_offset;
  }

  // fill nodes inside the layer from the local model; nodes at the far edge
  // belong to the continuation segment
  for (double nx : nodes) {
    if (!in_layer(nx)) continue;
    if (dir * (nx - far_edge) >= 0.0) continue;
    if (dir > 0 ? (nx < id.x0) : (nx > id.x0)) continue;
    Station s;
    s.x = nx;
    s.y = basis.eval_y(nx - x2c, A, B);
    s.dy = basis.eval_dy(nx - x2c, A, B);
    s.I = I_at_cross;  // layer-interior quadrature reported on the near side
    s.off = off_at_cross;
    stations.push_back(s);
  }

  if (layerA) *layerA = A * std::exp(off_at_cross);
  if (layerB) *layerB = B * std::exp(off_at_cross);

  // continue past the layer if there is room
  if (dir * (x_end - far_edge) > 0.0) {
    cplx y_f = basis.eval_y(far_edge - x2c, A, B);
    cplx dy_f = basis.eval_dy(far_edge - x2c, A, B);
    OdeState st2;
    ode.to_chart(y_f, dy_f, st2.w.data());
    st2.log_offset = off_at_cross;
    st2.w[2] = I_at_cross;
    if (psi && full_crossing) {
      cplx psi0 = (*psi)(x2c), dpsi0 = psi->deriv(x2c);
      cplx corr = basis.layer_integral(delta, A, B, psi0, dpsi0);
      st2.w[2] += dir * corr;  // orientation of the travel direction
    }
    std::vector<double> post;
    for (double nx : nodes)
      if (dir * (nx - far_edge) >= 0.0) post.push_back(nx);
    run_segment(ode, ctx.numerics.ode_tol, far_edge, x_end, st2, post, stations,
                std::numeric_limits<double>::quiet_NaN(), cap);
    DirectResult res;
    res.stations = std::move(stations);
    res.log_offset = st2.log_offset;
    rebase_offsets(res.stations, res.log_offset);
    return res;
  }

  DirectResult res;
  res.stations = std::move(stations);
  res.log_offset = off_at_cross;
  rebase_offsets(res.stations, res.log_offset);
  return res;
}

RayleighTrace assemble_trace(const WaveContext& ctx, cplx c,
                             const std::vector<double>& grid,
                             const DirectResult& res, TraceSide side,
                             FundamentalSide which,
                             std::optional<CriticalLayerInfo> crit) {
  RayleighTrace tr;
  tr.c = c;
  tr.grid = grid;
  tr.side = side;
  tr.critical = crit;
  tr.log_offset = res.log_offset;
  tr.y.resize(grid.size());
  tr.dy.resize(grid.size());
  // stations are in travel order; map back onto the ascending grid
  std::vector<Station> st = res.stations;
  if (which == FundamentalSide::plus) std::reverse(st.begin(), st.end());
  if (st.size() != grid.size())
    fail(ErrorCode::StepFailure, "internal: station/grid mismatch");
  for (size_t i = 0; i < grid.size(); ++i) {
    tr.y[i] = st[i].y;
    tr.dy[i] = st[i].dy;
  }
  return tr;
}

bool grids_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

std::vector<double> WaveContext::grid() const {
  int n = numerics.grid_n;
  std::vector<double> g(n);
  double h = profile->h();
  for (int i = 0; i < n; ++i) g[i] = -h + h * double(i) / double(n - 1);
  return g;
}

void WaveContext::validate() const {
  if (!profile) fail(ErrorCode::ConfigError, "context has no profile");
  if (bc_kind == BoundaryKind::free_surface && !(g > 0.0 && sigma > 0.0))
    fail(ErrorCode::ConfigError, "free surface needs g > 0 and sigma > 0");
  if (numerics.grid_n < 64) fail(ErrorCode::ConfigError, "grid_n must be >= 64");
  if (!(numerics.delta_cl > 0.0))
    fail(ErrorCode::ConfigError, "delta_cl must be positive");
}

RayleighTrace solve_y_minus(const WaveContext& ctx, cplx c,
                            const std::vector<double>& grid) {
  return solve_fundamental(ctx, c, grid, FundamentalSide::minus);
}

RayleighTrace solve_y_plus(const WaveContext& ctx, cplx c,
                           const std::vector<double>& grid) {
  return solve_fundamental(ctx, c, grid, FundamentalSide::plus);
}

RayleighTrace limit_real(const WaveContext& ctx, double c_R,
                         const std::vector<double>& grid, FundamentalSide which) {
  const auto& U = *ctx.profile;
  if (c_R < U.u_min() || c_R > U.u_max())
    fail(ErrorCode::OutOfRange, "limit_real needs c in U([-h, 0])");
  LayerBasis basis;
  DirectResult res = limit_solve(ctx, c_R, grid, which, nullptr, &basis);
  CriticalLayerInfo info{basis.x2c, basis.a != 0.0};
  return assemble_trace(ctx, cplx(c_R, 0.0), grid, res, TraceSide::limit_plus,
                        which, info);
}

RayleighTrace solve_fundamental(const WaveContext& ctx, cplx c,
                                const std::vector<double>& grid,
                                FundamentalSide which) {
  const auto& U = *ctx.profile;
  if (c.imag() < 0.0) {
    RayleighTrace t = solve_fundamental(ctx, std::conj(c), grid, which);
    for (auto& v : t.y) v = std::conj(v);
    for (auto& v : t.dy) v = std::conj(v);
    t.c = c;
    return t;
  }
  if (c.imag() == 0.0 && c.real() >= U.u_min() && c.real() <= U.u_max())
    return limit_real(ctx, c.real(), grid, which);
  DirectResult res = direct_solve(ctx, c, grid, which, nullptr);
  TraceSide side = (c.imag() > 0.0) ? TraceSide::upper : TraceSide::real_regular;
  return assemble_trace(ctx, c, grid, res, side, which, std::nullopt);
}

WronskianReport wronskian_drift(const WaveContext& ctx,
                                const RayleighTrace& tm,
                                const RayleighTrace& tp) {
  WronskianReport rep;
  if (tm.c != tp.c || !grids_equal(tm.grid, tp.grid)) {
    rep.value_at_0 = cplx(0.0);
    rep.max_rel_drift = std::numeric_limits<double>::infinity();
    return rep;
  }
  size_t n = tm.grid.size();
  std::vector<cplx> w(n);
  for (size_t i = 0; i < n; ++i)
    w[i] = tp.y[i] * tm.dy[i] - tp.dy[i] * tm.y[i];
  double scale = std::exp(tm.log_offset + tp.log_offset);
  cplx w0 = w[n - 1];
  rep.value_at_0 = w0 * scale;
  double drift = 0.0;
  for (size_t i = 0; i < n; ++i)
    drift = std::max(drift, std::abs(w[i] - w0) / std::max(std::abs(w0), 1e-300));
  rep.max_rel_drift = drift;
  return rep;
}

namespace detail {

AccumulatedPair solve_pair_with_quadrature(const WaveContext& ctx, cplx c,
                                           const std::vector<cplx>& psi,
                                           const std::vector<double>& grid) {
  const auto& U = *ctx.profile;
  CubicSpline spline(grid, psi);
  AccumulatedPair out;

  auto run = [&](FundamentalSide side) {
    DirectResult res;
    std::optional<CriticalLayerInfo> crit;
    TraceSide ts;
    if (c.imag() == 0.0 && c.real() >= U.u_min() && c.real() <= U.u_max()) {
      LayerBasis basis;
      res = limit_solve(ctx, c.real(), grid, side, &spline, &basis);
      crit = CriticalLayerInfo{basis.x2c, basis.a != 0.0};
      ts = TraceSide::limit_plus;
    } else {
      res = direct_solve(ctx, c, grid, side, &spline);
      ts = (c.imag() > 0.0) ? TraceSide::upper : TraceSide::real_regular;
    }
    std::vector<Station> st = res.stations;
    if (side == FundamentalSide::plus) std::reverse(st.begin(), st.end());
    RayleighTrace tr = assemble_trace(ctx, c, grid, res, ts, side, crit);
    std::vector<cplx> I(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) I[i] = st[i].I;
    // downward accumulation gives int_0^x; flip to int_x^0 for the plus side
    if (side == FundamentalSide::plus)
      for (auto& v : I) v = -v;
    return std::make_pair(tr, I);
  };

  if (c.imag() < 0.0) {
    std::vector<cplx> psi_conj(psi.size());
    for (size_t i = 0; i < psi.size(); ++i) psi_conj[i] = std::conj(psi[i]);
    AccumulatedPair up = solve_pair_with_quadrature(ctx, std::conj(c), psi_conj, grid);
    auto conj_trace = [](RayleighTrace& t, cplx c2) {
      for (auto& v : t.y) v = std::conj(v);
      for (auto& v : t.dy) v = std::conj(v);
      t.c = c2;
    };
    conj_trace(up.minus, c);
    conj_trace(up.plus, c);
    for (auto& v : up.i_minus) v = std::conj(v);
    for (auto& v : up.i_plus) v = std::conj(v);
    return up;
  }

  auto [tm, im] = run(FundamentalSide::minus);
  auto [tp, ip] = run(FundamentalSide::plus);
  out.minus = std::move(tm);
  out.plus = std::move(tp);
  out.i_minus = std::move(im);
  out.i_plus = std::move(ip);
  return out;
}

}  // namespace detail

RayleighTrace solve_nonhomogeneous(const WaveContext& ctx, cplx c,
                                   const std::vector<cplx>& psi,
                                   const std::vector<double>& grid) {
  auto pair = detail::solve_pair_with_quadrature(ctx, c, psi, grid);
  const auto& tm = pair.minus;
  const auto& tp = pair.plus;
  size_t n = grid.size();
  cplx yp_bottom = tp.y[0];  // scaled by exp(-off_plus)
  double yp_scale = std::exp(tp.log_offset);
  if (std::abs(yp_bottom) * yp_scale <
      1e-10 * std::exp(tp.log_offset) * (std::abs(tp.y[n - 1]) + 1.0))
    fail(ErrorCode::ResonantC, "wave speed is an eigenvalue; BVP not solvable");

  RayleighTrace out;
  out.c = c;
  out.grid = grid;
  out.side = tm.side;
  out.critical = tm.critical;
  out.log_offset = tm.log_offset;
  out.y.resize(n);
  out.dy.resize(n);
  for (size_t i = 0; i < n; ++i) {
    cplx t1 = tp.y[i] * pair.i_minus[i] / yp_bottom;
    cplx t1d = tp.dy[i] * pair.i_minus[i] / yp_bottom;
    cplx t2 = tm.y[i] * pair.i_plus[i] / yp_bottom;
    cplx t2d = tm.dy[i] * pair.i_plus[i] / yp_bottom;
    out.y[i] = t1 + t2;
    out.dy[i] = t1d + t2d;
  }
  return out;
}

BvpSolution solve_bvp_V2(const WaveContext& ctx, cplx c,
                         const std::vector<cplx>& omega0, cplx eta0,
                         cplx dv20_top, const std::vector<double>& grid) {
  if (ctx.k == 0.0) fail(ErrorCode::ZeroWavenumber, "BVP needs k != 0");
  size_t n = grid.size();
  std::vector<cplx> psi(n);
  for (size_t i = 0; i < n; ++i) psi[i] = -omega0[i];
  auto pair = detail::solve_pair_with_quadrature(ctx, c, psi, grid);
  const auto& tm = pair.minus;
  const auto& tp = pair.plus;

  cplx bigF = ctx.gsk() * tp.y[0] * std::exp(tp.log_offset) *
              std::exp(tm.log_offset);  // see below: work in the joint scale
  // Guard against resonance using the unscaled Wronskian value.
  cplx w_val = tp.y[0];
  if (std::abs(w_val) < 1e-12 * (std::abs(tp.y[n - 1]) + std::abs(tp.dy[n - 1])))
    fail(ErrorCode::ResonantC, "wave speed is an eigenvalue of the mode");
  (void)bigF;

  double u0 = ctx.profile->u_max();
  cplx zeta_plus = ctx.gsk() * eta0 -
                   cplx(0.0, 1.0) / ctx.k * (u0 - c) * dv20_top;
  // coefficient of y_-: zeta_plus / bigF with bigF = gsk * y_+(-h)
  // handled in the scaled frames: y_+(-h) true value = tp.y[0] * e^{off_p}
  cplx coef = zeta_plus / (ctx.gsk() * tp.y[0]);  // times e^{-off_p}

  BvpSolution sol;
  RayleighTrace v2;
  v2.c = c;
  v2.grid = grid;
  v2.side = tm.side;
  v2.critical = tm.critical;
  v2.log_offset = 0.0;
  v2.y.resize(n);
  v2.dy.resize(n);
  double off_m = tm.log_offset, off_p = tp.log_offset;
  for (size_t i = 0; i < n; ++i) {
    // homogeneous part: coef * y_-(x) with true value tm.y[i] e^{off_m},
    // coefficient carries e^{-off_p}: net e^{off_m - off_p}. The nonhomogeneous
    // part carries e^{off_m} from I integrals against 1/y_+(-h) e^{-off_p}...
    cplx hom, homd, nh, nhd;
    if (ctx.bc_kind == BoundaryKind::free_surface) {
      hom = coef * tm.y[i] * std::exp(off_m - off_p);
      homd = coef * tm.dy[i] * std::exp(off_m - off_p);
    } else {
      hom = homd = 0.0;
    }
    nh = (tp.y[i] * pair.i_minus[i] + tm.y[i] * pair.i_plus[i]) / tp.y[0] *
         std::exp(off_m);
    nhd = (tp.dy[i] * pair.i_minus[i] + tm.dy[i] * pair.i_plus[i]) / tp.y[0] *
          std::exp(off_m);
    v2.y[i] = hom + nh;
    v2.dy[i] = homd + nhd;
  }
  sol.v2 = std::move(v2);
  if (ctx.bc_kind == BoundaryKind::free_surface) {
    cplx v2_top = sol.v2.y[n - 1];
    sol.eta_tilde = (v2_top + eta0) / (cplx(0.0, 1.0) * ctx.k * (u0 - c));
  } else {
    sol.eta_tilde = 0.0;
  }
  return sol;
}

cplx extrapolate_to_real_axis(const std::vector<double>& eps_seq,
                              const std::vector<cplx>& values) {
  size_t n = eps_seq.size();
  if (n != values.size() || n < 3)
    fail(ErrorCode::ConfigError, "need >= 3 regularization values");
  // least squares for f0 + a*eps*log(eps) + b*eps via normal equations
  double m[3][3] = {};
  cplx r[3] = {};
  for (size_t i = 0; i < n; ++i) {
    double e = eps_seq[i];
    double basis[3] = {1.0, e * std::log(e), e};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) m[a][b] += basis[a] * basis[b];
      r[a] += basis[a] * values[i];
    }
  }
  // gaussian elimination 3x3
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int p = col;
    for (int i2 = col + 1; i2 < 3; ++i2)
      if (std::abs(m[idx[i2]][col]) > std::abs(m[idx[p]][col])) p = i2;
    std::swap(idx[col], idx[p]);
    for (int i2 = col + 1; i2 < 3; ++i2) {
      double f = m[idx[i2]][col] / m[idx[col]][col];
      for (int j = col; j < 3; ++j) m[idx[i2]][j] -= f * m[idx[col]][j];
      r[idx[i2]] -= f * r[idx[col]];
    }
  }
  cplx sol[3];
  for (int i2 = 2; i2 >= 0; --i2) {
    cplx s = r[idx[i2]];
    for (int j = i2 + 1; j < 3; ++j) s -= m[idx[i2]][j] * sol[j];
    sol[i2] = s / m[idx[i2]][i2];
  }
  return sol[0];
}

std::vector<cplx> bvp_V2_real_axis(const WaveContext& ctx, double c_R,
                                   const std::vector<cplx>& omega0, cplx eta0,
                                   cplx dv20_top, const std::vector<double>& grid) {
  const auto& eps = ctx.numerics.eps_seq;
  std::vector<std::vector<cplx>> vals;
  vals.reserve(eps.size());
  for (double e : eps) {
    auto sol = solve_bvp_V2(ctx, cplx(c_R, e), omega0, eta0, dv20_top, grid);
    vals.push_back(sol.v2.y);  // log_offset is zero for BVP output
  }
  size_t n = grid.size();
  std::vector<cplx> out(n);
  std::vector<cplx> stack(eps.size());
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < eps.size(); ++j) stack[j] = vals[j][i];
    out[i] = extrapolate_to_real_axis(eps, stack);
  }
  return out;
}

}  // namespace shearwave
