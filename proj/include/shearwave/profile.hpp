#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "shearwave/errors.hpp"

namespace shearwave {

enum class ProfileKind { couette, tanh_shear, polynomial, tabulated };

ProfileKind profile_kind_from_string(const std::string& s);
std::string to_string(ProfileKind k);

// Input description of the background flow U(x2) on [-h, 0].
struct ProfileSpec {
  ProfileKind kind = ProfileKind::couette;
  std::map<std::string, double> params;  // slope/offset, steepness/center/amplitude, c0..cn
  std::vector<double> table_x;           // tabulated only, strictly increasing in [-h, 0]
  std::vector<double> table_u;           // tabulated only, strictly increasing values
  double h = 1.0;
};

struct InflectionPoint {
  double x2 = 0.0;
  double u = 0.0;
};

struct InflectionReport {
  std::vector<InflectionPoint> points;      // sign changes of U'' refined to tolerance
  std::vector<double> degenerate;           // U'' touches zero without a sign change
  bool curvature_identically_zero = false;  // sup|U''| == 0 on [-h, 0]
};

// Monotone shear profile with derivatives through order 6, extended smoothly to
// [-h-h0, h0]. Immutable after construction; safe for concurrent reads.
class ShearProfile {
 public:
  static ShearProfile build(const ProfileSpec& spec);

  double h() const { return h_; }
  double h0() const { return h0_; }
  double u_min() const { return u_min_; }  // U(-h)
  double u_max() const { return u_max_; }  // U(0)
  double u_range() const { return u_max_ - u_min_; }
  double inf_uprime() const { return inf_up_; }   // over [-h, 0]
  double sup_ucurv() const { return sup_upp_; }   // sup|U''| over [-h, 0]

  // U^(order)(x2), order in 0..6, x2 in [-h-h0, h0].
  double eval(double x2, int order = 0) const;

  // x2 with U(x2) = c on the extended interval, |U(x2)-c| <= 1e-12*(u_max-u_min).
  double inverse_u(double c) const;

  InflectionReport inflection_points() const;

  bool reduced_accuracy_high_orders() const { return tabulated_; }

 private:
  ShearProfile() = default;

  double eval_base(double x2, int order) const;   // on [-h, 0], kind-specific
  double eval_ext_top(double x2, int order) const;
  double eval_ext_bottom(double x2, int order) const;
  void build_extension();
  bool extension_monotone() const;

  ProfileKind kind_ = ProfileKind::couette;
  double h_ = 1.0;
  double h0_ = 0.5;
  double u_min_ = 0.0, u_max_ = 0.0;
  double inf_up_ = 1.0, sup_upp_ = 0.0;

  // analytic parameters
  double slope_ = 1.0, offset_ = 0.0;                      // couette
  double steep_ = 2.0, center_ = -0.5, amp_ = 1.0;         // tanh_shear
  std::vector<double> coeffs_;                             // polynomial

  // tabulated: quintic B-spline on clamped knots
  bool tabulated_ = false;
  std::vector<double> knots_;
  std::vector<double> bcoef_;

  // extension polynomials, coefficients in the local offset from the seam
  std::vector<double> ext_top_;     // s = x2 - 0, s in [0, h0]
  std::vector<double> ext_bottom_;  // s = x2 + h, s in [-h0, 0]
};

using ProfilePtr = std::shared_ptr<const ShearProfile>;

ProfilePtr build_profile(const ProfileSpec& spec);

}  // namespace shearwave
