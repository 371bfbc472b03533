#pragma once

#include <vector>

#include "shearwave/dispersion.hpp"
#include "shearwave/rayleigh.hpp"

namespace shearwave {

// Evolution state of one Fourier mode: vorticity on the grid, surface
// elevation, and b = v2'(t, k, 0). Channel mode carries vorticity only.
struct ModeState {
  double t = 0.0;
  std::vector<cplx> omega;
  cplx eta = 0.0;
  cplx b = 0.0;
};

struct VelocityField {
  std::vector<cplx> v2, v1;
};

struct PointMode {
  cplx c_star;
  cplx dF_dc;
  std::vector<cplx> b_profile;  // residue coefficient profile on the grid
  cplx b_surface = 0.0;         // surface residue
  ModeState state;              // induced (omega, eta, b) state at t = 0
  bool degenerate = false;
};

struct SpectralSplit {
  std::vector<PointMode> point_part;
  ModeState continuous_state;
  bool degenerate_flagged = false;
};

struct DampingSeries {
  std::vector<double> t;
  std::vector<double> norm_v2c, norm_v1c, abs_etac;
  std::vector<double> scatter_err;       // ||omega^c e^{ikUt} - Omega^c||
  std::vector<double> split_crosscheck;  // relative mismatch of the two routes
};

struct DecayFit {
  double exponent = 0.0;
  double band = 0.0;  // +- 2 standard errors
};

struct AsymptoticProfiles {
  std::vector<cplx> omega_c;   // scattering limit of the vorticity
  std::vector<cplx> lambda_t;  // surface-generated profile
  std::vector<cplx> lambda_b;  // bottom-generated profile
  double omega_variant_diff = 0.0;  // L2 gap between the two sign conventions
  std::vector<double> grid;
};

// Prefactored elliptic recovery (d^2/dx2^2 - k^2) v2 = ik omega with
// v2(-h) = 0 and either v2'(0) = b (free surface) or v2(0) = 0 (channel).
class EllipticRecovery {
 public:
  EllipticRecovery(const WaveContext& ctx, const std::vector<double>& grid);
  void solve(const std::vector<cplx>& omega, cplx b, std::vector<cplx>& v2) const;
  const std::vector<double>& grid() const { return grid_; }

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  std::vector<double> grid_;
  double k_ = 0.0;
  bool channel_ = false;
};

VelocityField recover_velocity(const WaveContext& ctx,
                               const std::vector<cplx>& omega, cplx b,
                               const std::vector<double>& grid);

double cfl_bound(const WaveContext& ctx);

// One classic RK4 step of the coupled (omega, eta, b) system.
ModeState step(const WaveContext& ctx, const EllipticRecovery& solver,
               const ModeState& state, double dt);

SpectralSplit project_point_modes(const WaveContext& ctx,
                                  const ModeState& state0,
                                  const std::vector<Mode>& catalog,
                                  const std::vector<double>& grid);

struct EvolveOptions {
  double dt = 1e-3;
  double t_final = 200.0;
  std::vector<double> checkpoints;
  bool crosscheck = true;  // evolve the full state too and compare routes
  const AsymptoticProfiles* profiles = nullptr;  // for scatter_err
};

DampingSeries evolve(const WaveContext& ctx, const ModeState& state0,
                     const std::vector<Mode>& catalog,
                     const std::vector<double>& grid, const EvolveOptions& opt);

AsymptoticProfiles asymptotic_profiles(const WaveContext& ctx,
                                       const ModeState& state0,
                                       const std::vector<Mode>& catalog,
                                       const std::vector<double>& grid);

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& v,
                   double t1, double t2);

// Eigenfunction initial data generated by the bottom-normalized solution at a
// dispersion root (free surface).
ModeState eigenfunction_state(const WaveContext& ctx, cplx c_star,
                              const std::vector<double>& grid);

// min over the real segment of |bigF(k, U(x2))|, relative to its median; used
// as the no-singular-modes precondition scan.
struct SingularModeScan {
  double min_abs_bigF = 0.0;
  double median_abs_bigF = 0.0;
  double worst_c = 0.0;
  bool clear = true;
};
SingularModeScan scan_singular_modes(const WaveContext& ctx, int n_samples = 64);

double l2_norm(const std::vector<double>& grid, const std::vector<cplx>& f);

}  // namespace shearwave
