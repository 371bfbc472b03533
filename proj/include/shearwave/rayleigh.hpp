#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "shearwave/profile.hpp"

namespace shearwave {

using cplx = std::complex<double>;

enum class BoundaryKind { free_surface, channel };

struct Numerics {
  int grid_n = 1024;          // grid points including endpoints
  double ode_tol = 1e-10;     // mixed abs/rel integrator tolerance
  double delta_cl = 1e-4;     // critical-layer half-width, in units of mu
  std::vector<double> eps_seq = {1e-3, 5e-4, 2.5e-4};  // regularization ladder
};

// One Fourier mode's parameters plus numerical settings.
struct WaveContext {
  ProfilePtr profile;
  double k = 1.0;
  double g = 1.0;
  double sigma = 1.0;
  BoundaryKind bc_kind = BoundaryKind::free_surface;
  Numerics numerics;

  double mu() const { return 1.0 / std::sqrt(1.0 + k * k); }
  double layer_halfwidth() const { return numerics.delta_cl * mu(); }
  double gsk() const { return g + sigma * k * k; }
  std::vector<double> grid() const;  // uniform grid on [-h, 0]

  void validate() const;
};

enum class TraceSide { upper, limit_plus, real_regular };

struct CriticalLayerInfo {
  double x2c = 0.0;
  bool jump_applied = false;
};

// A sampled solution (y, y') of the homogeneous or non-homogeneous Rayleigh
// equation on a grid. Stored values are y * exp(-log_offset): log_offset is
// nonzero only on the stiff large-k path where it prevents overflow.
struct RayleighTrace {
  cplx c;
  std::vector<double> grid;
  std::vector<cplx> y;
  std::vector<cplx> dy;
  TraceSide side = TraceSide::upper;
  std::optional<CriticalLayerInfo> critical;
  double log_offset = 0.0;

  cplx value(int i) const { return y[i] * std::exp(log_offset); }
  cplx deriv(int i) const { return dy[i] * std::exp(log_offset); }
  cplx ratio(int i, int j) const { return y[i] / y[j]; }  // offsets cancel
};

enum class FundamentalSide { minus, plus };

// y_-: y(-h)=0, y'(-h)=1, integrated upward.
RayleighTrace solve_y_minus(const WaveContext& ctx, cplx c,
                            const std::vector<double>& grid);

// y_+: free-surface data y(0)=(U(0)-c)^2/(g+sigma k^2),
// y'(0)=1+U'(0)(U(0)-c)/(g+sigma k^2); channel data y(0)=0, y'(0)=1.
// Integrated downward.
RayleighTrace solve_y_plus(const WaveContext& ctx, cplx c,
                           const std::vector<double>& grid);

// The c_I -> 0+ limit for real wave speed inside U([-h,0]); crosses the
// critical layer with the local log model. Endpoint values c=U(-h), c=U(0)
// are allowed (one-sided layers).
RayleighTrace limit_real(const WaveContext& ctx, double c_R,
                         const std::vector<double>& grid, FundamentalSide which);

// Dispatch: upper-half c or real c off the range -> direct integration;
// real c in the range -> limit_real; lower-half c -> conjugation.
RayleighTrace solve_fundamental(const WaveContext& ctx, cplx c,
                                const std::vector<double>& grid,
                                FundamentalSide which);

// Wronskian W = y_+ y_-' - y_+' y_- sampled along the grid.
struct WronskianReport {
  cplx value_at_0;
  double max_rel_drift = 0.0;
};
WronskianReport wronskian_drift(const WaveContext& ctx,
                                const RayleighTrace& trace_minus,
                                const RayleighTrace& trace_plus);

// Solution of -y'' + (k^2 + U''/(U-c)) y = psi/(U-c) with y(-h)=0 and the
// homogeneous surface condition; psi sampled on the grid.
RayleighTrace solve_nonhomogeneous(const WaveContext& ctx, cplx c,
                                   const std::vector<cplx>& psi,
                                   const std::vector<double>& grid);

// Resolvent-side boundary value solve: the Laplace-transformed vertical
// velocity for data (omega0, eta0, dv20_top), plus the transformed surface.
struct BvpSolution {
  RayleighTrace v2;
  cplx eta_tilde;
};
BvpSolution solve_bvp_V2(const WaveContext& ctx, cplx c,
                         const std::vector<cplx>& omega0, cplx eta0,
                         cplx dv20_top, const std::vector<double>& grid);

// Extrapolate f(c_R + i*eps) over ctx.numerics.eps_seq to eps -> 0+ assuming
// an error of the form a*eps*log(eps) + b*eps.
cplx extrapolate_to_real_axis(const std::vector<double>& eps_seq,
                              const std::vector<cplx>& values);

// The boundary-value solve evaluated on the real axis by eps-extrapolation.
std::vector<cplx> bvp_V2_real_axis(const WaveContext& ctx, double c_R,
                                   const std::vector<cplx>& omega0, cplx eta0,
                                   cplx dv20_top, const std::vector<double>& grid);

namespace detail {
// Integrals I_minus(x) = int_{-h}^x y_- psi / (U-c) and
// I_plus(x) = int_x^0 y_+ psi / (U-c), accumulated alongside the solves; used
// by solve_nonhomogeneous and the residue projections.
struct AccumulatedPair {
  RayleighTrace minus, plus;
  std::vector<cplx> i_minus, i_plus;  // scaled by exp(-log_offset) of own trace
};
AccumulatedPair solve_pair_with_quadrature(const WaveContext& ctx, cplx c,
                                           const std::vector<cplx>& psi,
                                           const std::vector<double>& grid);
}  // namespace detail

}  // namespace shearwave
