#pragma once

#include <vector>

#include "shearwave/rayleigh.hpp"

namespace shearwave {
namespace oracles {

// Exact dispersion roots of the linear shear U(x2) = x2, from the quadratic
// c^2 k coth(kh) + c - (g + sigma k^2) = 0, solved in a cancellation-safe form.
struct CouetteModes {
  double k, h, g, sigma;
  double c_plus, c_minus;

  // Eigenfunction fields at t = 0 for one branch: (v1, v2, eta, p) profiles.
  struct EigenFields {
    std::vector<cplx> v1, v2, p;
    cplx eta;
  };
  EigenFields fields(bool plus_branch, const std::vector<double>& grid) const;
};

CouetteModes couette_modes(double k, double h, double g, double sigma);

// Irrotational linear capillary-gravity wave speeds, k=0 limit sqrt(gh).
std::pair<double, double> irrotational_speed(double k, double h, double g,
                                             double sigma);

enum class ClosedFormCase { k0, at_bottom_value };

// Closed forms of the bottom-normalized solution: the k=0 quadrature formula
// (c outside the range) and the bottom-value solution (U - U(-h))/U'(-h).
std::vector<cplx> closed_form_yminus(const ShearProfile& profile,
                                     ClosedFormCase which, double c,
                                     const std::vector<double>& grid);

// Determinant of the second-order finite-difference discretization of the
// boundary value problem, as sign * exp(log magnitude).
struct ScaledDet {
  cplx phase;      // unit modulus
  double log_mag;  // natural log of |det|
  cplx scaled(double log_ref) const { return phase * std::exp(log_mag - log_ref); }
};

ScaledDet fd_determinant(const WaveContext& ctx, cplx c, int n);

// Secant iteration on the scaled determinant, seeded at c0.
cplx fd_determinant_root(const WaveContext& ctx, cplx c0, int n,
                         int max_iter = 60);

}  // namespace oracles
}  // namespace shearwave
