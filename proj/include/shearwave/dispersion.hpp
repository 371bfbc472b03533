#pragma once

#include <functional>
#include <vector>

#include "shearwave/rayleigh.hpp"

namespace shearwave {

enum class DcMethod { complex_step, central4 };

// One evaluation of the dispersion machinery at (k, c).
struct DispersionSample {
  double k = 0.0;
  cplx c;
  cplx bigF;        // (g + sigma k^2) y_+(-h), Wronskian form
  cplx bigF_bdry;   // boundary form, for cross-checking
  cplx F;           // bigF / y_-(0)
  cplx Y;           // y_-'(0) / y_-(0)
  cplx dF_dc;
  DcMethod dc_method = DcMethod::central4;
  bool y_minus_zero_at_top = false;
};

enum class BranchLabel { c_plus, c_minus, bifurcated, inflection_family };
enum class BranchEventKind { reached_U_minus_h, turned_complex, merged };

struct BranchEvent {
  BranchEventKind kind;
  double k_at;
};

struct BranchSample {
  double k;
  cplx c;
  cplx dF_dc;
};

// A continued family k -> c(k) of dispersion roots.
struct EigenBranch {
  BranchLabel label = BranchLabel::c_plus;
  std::vector<BranchSample> samples;  // strictly increasing in k
  std::vector<BranchEvent> events;
};

struct ThresholdReport {
  double sigma_threshold = 0.0;  // int (U - U(-h))^2 dx2
  double g_sharp = 0.0;
  bool has_k_sharp = false;
  double k_sharp = 0.0;            // g == g_sharp case (single touch)
  bool has_k_sharp_band = false;
  double k_sharp_minus = 0.0, k_sharp_plus = 0.0;
  double mono_condition_plus = 0.0, mono_condition_minus = 0.0;
  double c0_plus = 0.0, c0_minus = 0.0;  // roots of the k=0 dispersion relation
};

struct Rect {
  double re_lo, re_hi, im_lo, im_hi;
  double width() const { return re_hi - re_lo; }
  double height() const { return im_hi - im_lo; }
  double diameter() const { return std::hypot(width(), height()); }
  bool contains(cplx z) const {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo &&
           z.imag() <= im_hi;
  }
};

struct Mode {
  cplx c;
  int multiplicity = 1;
  cplx dF_dc;
  bool degenerate = false;
};

DispersionSample eval_dispersion(const WaveContext& ctx, cplx c);

// Im Y on the critical segment, from the closed formula with the limit trace.
double y_imag(const WaveContext& ctx, double c_R);

// Y reconstructed from its imaginary part by the Cauchy/Hilbert representation.
cplx y_hilbert(const WaveContext& ctx, cplx c);

int count_roots_rect(const WaveContext& ctx, const Rect& rect);

std::vector<Mode> find_modes(const WaveContext& ctx, const Rect& region,
                             int max_roots);

// Natural-parameter continuation over the given ascending k grid, seeded at
// (k0, c0) with k0 in the grid span.
EigenBranch continue_branch(const ShearProfile& profile, double g, double sigma,
                            const Numerics& numerics,
                            const std::vector<double>& k_grid, double k0,
                            cplx c0, BranchLabel label);

ThresholdReport thresholds(const ProfilePtr& profile, double g, double sigma,
                           double k_max, const Numerics& numerics = {});

struct InflectionMode {
  double x20 = 0.0;   // inflection depth
  double c0 = 0.0;    // inflection value U(x20)
  double k0 = 0.0;    // wavenumber of the neutral mode
  double dk_F = 0.0;  // dF/dk at (k0, c0)
  int unstable_side = 0;  // sign of (k - k0) on the unstable side, 0 if unknown
};

std::vector<InflectionMode> inflection_scan(const ProfilePtr& profile, double g,
                                            double sigma, double k_lo,
                                            double k_hi,
                                            const Numerics& numerics = {});

// Solve phi * c(phi) = k * c_ir(k) along a real strictly monotone branch.
std::vector<std::pair<double, double>> conjugate_wavenumber(
    const EigenBranch& branch, double g, double sigma, double h);

// Helper for tests and verification: closed semicircle membership margin,
// >= 0 inside. margin = r^2 - (c_R-m)^2 - c_I^2 normalized by r^2.
double semicircle_margin(const ShearProfile& profile, cplx c);

}  // namespace shearwave
