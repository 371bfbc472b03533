#include "shearwave/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "shearwave/banded.hpp"

namespace shearwave {

namespace {

constexpr int kMaxOrder = 6;

// d^n/du^n tanh(u) as a polynomial in t = tanh(u), via P_{n+1} = P_n'* (1-t^2).
const std::vector<std::vector<double>>& tanh_deriv_polys() {
  static const std::vector<std::vector<double>> polys = [] {
    std::vector<std::vector<double>> p;
    p.push_back({0.0, 1.0});  // tanh itself
    for (int n = 0; n < kMaxOrder; ++n) {
      const auto& cur = p.back();
      std::vector<double> d(cur.size() >= 1 ? cur.size() - 1 : 0, 0.0);
      for (size_t i = 1; i < cur.size(); ++i) d[i - 1] = cur[i] * double(i);
      // multiply by (1 - t^2)
      std::vector<double> nxt(d.size() + 2, 0.0);
      for (size_t i = 0; i < d.size(); ++i) {
        nxt[i] += d[i];
        nxt[i + 2] -= d[i];
      }
      p.push_back(std::move(nxt));
    }
    return p;
  }();
  return polys;
}

double poly_eval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  std::vector<double> d(c.size() > 1 ? c.size() - 1 : 0, 0.0);
  for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * double(i);
  return d;
}

double get_param(const std::map<std::string, double>& m, const std::string& key,
                 double dflt) {
  auto it = m.find(key);
  return it == m.end() ? dflt : it->second;
}

// --- quintic B-spline machinery (clamped, not-a-knot interior) --------------

int find_span(const std::vector<double>& t, int degree, int nbasis, double x) {
  if (x >= t[nbasis]) return nbasis - 1;
  if (x <= t[degree]) return degree;
  int lo = degree, hi = nbasis;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (x < t[mid]) hi = mid; else lo = mid;
  }
  return lo;
}

// Basis functions and derivatives at x (The NURBS Book, A2.3). ders[r][j] is
// the r-th derivative of basis function span-degree+j.
void ders_basis(const std::vector<double>& t, int degree, int span, double x,
                int nder, std::vector<std::array<double, 6>>& ders) {
  const int p = degree;
  std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
  std::vector<double> left(p + 1, 0.0), right(p + 1, 0.0);
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - t[span + 1 - j];
    right[j] = t[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  ders.assign(nder + 1, {});
  for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];
  std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= nder && k <= p; ++k) {
      double d = 0.0;
      int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      int j1 = (rk >= -1) ? 1 : -rk;
      int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double r = double(p);
  for (int k = 1; k <= nder && k <= p; ++k) {
    for (int j = 0; j <= p; ++j) ders[k][j] *= r;
    r *= double(p - k);
  }
}

}  // namespace

ProfileKind profile_kind_from_string(const std::string& s) {
  if (s == "couette") return ProfileKind::couette;
  if (s == "tanh_shear") return ProfileKind::tanh_shear;
  if (s == "polynomial") return ProfileKind::polynomial;
  if (s == "tabulated") return ProfileKind::tabulated;
  fail(ErrorCode::ConfigError, "unknown profile kind '" + s + "'");
}

std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::couette: return "couette";
    case ProfileKind::tanh_shear: return "tanh_shear";
    case ProfileKind::polynomial: return "polynomial";
    case ProfileKind::tabulated: return "tabulated";
  }
  return "?";
}

double ShearProfile::eval_base(double x2, int order) const {
  switch (kind_) {
    case ProfileKind::couette:
      if (order == 0) return slope_ * x2 + offset_;
      if (order == 1) return slope_;
      return 0.0;
    case ProfileKind::tanh_shear: {
      double t = std::tanh(steep_ * (x2 - center_));
      double v = poly_eval(tanh_deriv_polys()[order], t);
      double s = amp_ * std::pow(steep_, order);
      return s * v + (order == 0 ? offset_ : 0.0);
    }
    case ProfileKind::polynomial: {
      std::vector<double> c = coeffs_;
      for (int i = 0; i < order; ++i) c = poly_derivative(c);
      return poly_eval(c, x2);
    }
    case ProfileKind::tabulated: {
      const int degree = 5;
      if (order > degree) return 0.0;
      int nbasis = int(bcoef_.size());
      int span = find_span(knots_, degree, nbasis, x2);
      std::vector<std::array<double, 6>> ders;
      ders_basis(knots_, degree, span, x2, order, ders);
      double v = 0.0;
      for (int j = 0; j <= degree; ++j) v += ders[order][j] * bcoef_[span - degree + j];
      return v;
    }
  }
  return 0.0;
}

double ShearProfile::eval_ext_top(double x2, int order) const {
  std::vector<double> c = ext_top_;
  for (int i = 0; i < order; ++i) c = poly_derivative(c);
  return poly_eval(c, x2);
}

double ShearProfile::eval_ext_bottom(double x2, int order) const {
  std::vector<double> c = ext_bottom_;
  for (int i = 0; i < order; ++i) c = poly_derivative(c);
  return poly_eval(c, x2 + h_);
}

double ShearProfile::eval(double x2, int order) const {
  if (order < 0 || order > kMaxOrder)
    fail(ErrorCode::OutOfDomain, "derivative order must be in 0..6");
  const double tol = 1e-12 * (h_ + h0_);
  if (x2 < -h_ - h0_ - tol || x2 > h0_ + tol)
    fail(ErrorCode::OutOfDomain, "x2 outside [-h-h0, h0]");
  if (x2 > 0.0) return eval_ext_top(x2, order);
  if (x2 < -h_) return eval_ext_bottom(x2, order);
  return eval_base(x2, order);
}

double ShearProfile::inverse_u(double c) const {
  double lo = -h_ - h0_, hi = h0_;
  double ulo = eval(lo, 0), uhi = eval(hi, 0);
  const double tol = 1e-12 * (u_max_ - u_min_);
  if (c < ulo - tol || c > uhi + tol)
    fail(ErrorCode::OutOfRange, "wave speed outside the extended range of U");
  c = std::clamp(c, ulo, uhi);
  double x = std::clamp(-h_ + (c - u_min_) / std::max(inf_up_, 1e-300), lo, hi);
  for (int it = 0; it < 200; ++it) {
    double f = eval(x, 0) - c;
    if (std::abs(f) <= tol) return x;
    if (f > 0) hi = x; else lo = x;
    double up = eval(x, 1);
    double xn = x - f / up;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    x = xn;
  }
  return x;
}

InflectionReport ShearProfile::inflection_points() const {
  InflectionReport rep;
  const int n = 4096;
  double sup = 0.0;
  std::vector<double> xs(n + 1), upp(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = -h_ + h_ * double(i) / n;
    upp[i] = eval(xs[i], 2);
    sup = std::max(sup, std::abs(upp[i]));
  }
  if (sup == 0.0) {
    rep.curvature_identically_zero = true;
    return rep;
  }
  const double tol = 1e-10 * sup;
  for (int i = 0; i < n; ++i) {
    if (xs[i + 1] >= 0.0 || xs[i] <= -h_) {
      // endpoints excluded; interval interior to (-h, 0) only
    }
    if (upp[i] == 0.0) {
      if (i > 0 && upp[i - 1] * upp[i + 1] < 0.0 && xs[i] > -h_ && xs[i] < 0.0)
        rep.points.push_back({xs[i], eval(xs[i], 0)});
      continue;
    }
    if (upp[i] * upp[i + 1] < 0.0) {
      double a = xs[i], b = xs[i + 1], fa = upp[i];
      for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b), fm = eval(m, 2);
        if (std::abs(fm) <= tol) { a = b = m; break; }
        if (fa * fm < 0.0) b = m; else { a = m; fa = fm; }
      }
      double x0 = 0.5 * (a + b);
      if (x0 > -h_ && x0 < 0.0) rep.points.push_back({x0, eval(x0, 0)});
    } else if (i > 0 && std::abs(upp[i]) <= tol &&
               std::abs(upp[i]) < std::abs(upp[i - 1]) &&
               std::abs(upp[i]) < std::abs(upp[i + 1]) &&
               upp[i - 1] * upp[i + 1] > 0.0) {
      rep.degenerate.push_back(xs[i]);
    }
  }
  return rep;
}

void ShearProfile::build_extension() {
  // Blend the slope: E' = sbar + w * (T' - sbar) with T' the 4th-order Taylor
  // polynomial of U' at the seam, sbar = inf U'/2 the far-field slope, and a
  // weight with w-1 = O(xi^5) at the seam and w = O((1-xi)^5) at the far end.
  // Then E' >= min(sbar, min T'), and integrating keeps the seam C^5.
  const double sbar = 0.5 * inf_up_;
  auto make = [&](double x_at, double sgn) {
    std::vector<double> tp(5, 0.0);  // Taylor coefficients of U' at the seam
    double fact = 1.0;
    for (int j = 0; j <= 4; ++j) {
      if (j > 0) fact *= j;
      tp[j] = eval_base(x_at, j + 1) / fact;
    }
    // w(xi) = (1-xi)^5 (1+5xi+15xi^2+35xi^3+70xi^4)
    std::vector<double> lead = {1.0, 5.0, 15.0, 35.0, 70.0};
    std::vector<double> onemxi5 = {1.0};
    for (int i = 0; i < 5; ++i) {
      std::vector<double> nxt(onemxi5.size() + 1, 0.0);
      for (size_t j2 = 0; j2 < onemxi5.size(); ++j2) {
        nxt[j2] += onemxi5[j2];
        nxt[j2 + 1] -= onemxi5[j2];
      }
      onemxi5 = std::move(nxt);
    }
    std::vector<double> w(onemxi5.size() + lead.size() - 1, 0.0);
    for (size_t a = 0; a < onemxi5.size(); ++a)
      for (size_t b = 0; b < lead.size(); ++b) w[a + b] += onemxi5[a] * lead[b];
    // substitute xi = s/(sgn*h0)
    double scale = 1.0;
    for (size_t j = 0; j < w.size(); ++j) {
      w[j] *= scale;
      scale /= (sgn * h0_);
    }
    std::vector<double> diff = tp;
    diff[0] -= sbar;
    std::vector<double> de(w.size() + diff.size() - 1, 0.0);
    for (size_t a = 0; a < w.size(); ++a)
      for (size_t b = 0; b < diff.size(); ++b) de[a + b] += w[a] * diff[b];
    de[0] += sbar;
    // integrate, constant of integration = U at the seam
    std::vector<double> e(de.size() + 1, 0.0);
    e[0] = eval_base(x_at, 0);
    for (size_t j = 0; j < de.size(); ++j) e[j + 1] = de[j] / double(j + 1);
    return e;
  };
  ext_top_ = make(0.0, +1.0);
  ext_bottom_ = make(-h_, -1.0);
}

bool ShearProfile::extension_monotone() const {
  const int n = 40960;
  const double lo_bound = 0.5 * inf_up_ * (1.0 - 1e-9);
  for (int i = 0; i <= n; ++i) {
    double s = h0_ * double(i) / n;
    if (eval_ext_top(s, 1) < lo_bound) return false;
    if (eval_ext_bottom(-h_ - s, 1) < lo_bound) return false;
  }
  return true;
}

ShearProfile ShearProfile::build(const ProfileSpec& spec) {
  if (!(spec.h > 0.0)) fail(ErrorCode::ConfigError, "depth h must be positive");
  ShearProfile p;
  p.kind_ = spec.kind;
  p.h_ = spec.h;
  switch (spec.kind) {
    case ProfileKind::couette:
      p.slope_ = get_param(spec.params, "slope", 1.0);
      p.offset_ = get_param(spec.params, "offset", 0.0);
      break;
    case ProfileKind::tanh_shear:
      p.steep_ = get_param(spec.params, "steepness", 2.0);
      p.center_ = get_param(spec.params, "center", -0.5 * spec.h);
      p.amp_ = get_param(spec.params, "amplitude", 1.0);
      p.offset_ = get_param(spec.params, "offset", 0.0);
      break;
    case ProfileKind::polynomial: {
      for (int i = 0;; ++i) {
        auto it = spec.params.find("c" + std::to_string(i));
        if (it == spec.params.end()) break;
        p.coeffs_.push_back(it->second);
      }
      if (p.coeffs_.empty()) fail(ErrorCode::ConfigError, "polynomial needs c0..cn");
      break;
    }
    case ProfileKind::tabulated: {
      p.tabulated_ = true;
      const auto& xs = spec.table_x;
      const auto& us = spec.table_u;
      if (xs.size() != us.size())
        fail(ErrorCode::ConfigError, "table_x and table_u length mismatch");
      int n = int(xs.size());
      if (n < 12)
        fail(ErrorCode::InsufficientSmoothness,
             "tabulated profile needs at least 12 samples for 6 derivatives");
      for (int i = 0; i + 1 < n; ++i) {
        if (!(xs[i + 1] > xs[i]))
          fail(ErrorCode::ConfigError, "table_x must be strictly increasing");
        if (!(us[i + 1] > us[i]))
          fail(ErrorCode::NonMonotonic, "tabulated samples must increase in value");
      }
      const double cover = 1e-9 * (xs.back() - xs.front());
      if (xs.front() > -spec.h + cover || xs.back() < 0.0 - cover)
        fail(ErrorCode::ConfigError, "table must cover [-h, 0]");
      const int degree = 5;
      // clamped knots; interior knots skip 2 samples at each end (not-a-knot)
      std::vector<double> t;
      for (int i = 0; i <= degree; ++i) t.push_back(xs.front());
      for (int i = 3; i <= n - 4; ++i) t.push_back(xs[i]);
      for (int i = 0; i <= degree; ++i) t.push_back(xs.back());
      p.knots_ = t;
      BandedLU<double> lu(n, degree, degree);
      std::vector<double> rhs(us.begin(), us.end());
      for (int i = 0; i < n; ++i) {
        int span = find_span(t, degree, n, xs[i]);
        std::vector<std::array<double, 6>> ders;
        ders_basis(t, degree, span, xs[i], 0, ders);
        for (int j = 0; j <= degree; ++j)
          lu.at(i, span - degree + j) = ders[0][j];
      }
      lu.factor();
      if (lu.singular())
        fail(ErrorCode::InsufficientSmoothness, "spline collocation is singular");
      lu.solve(rhs);
      p.bcoef_ = rhs;
      break;
    }
  }

  // monotonicity and derivative bounds on [-h, 0]
  const int ns = 4096;
  double inf_up = 1e300, sup_upp = 0.0;
  for (int i = 0; i <= ns; ++i) {
    double x = -p.h_ + p.h_ * double(i) / ns;
    inf_up = std::min(inf_up, p.eval_base(x, 1));
    sup_upp = std::max(sup_upp, std::abs(p.eval_base(x, 2)));
  }
  if (!(inf_up > 0.0))
    fail(ErrorCode::NonMonotonic, "U' must be positive on [-h, 0]");
  p.inf_up_ = inf_up;
  p.sup_upp_ = sup_upp;
  p.u_min_ = p.eval_base(-p.h_, 0);
  p.u_max_ = p.eval_base(0.0, 0);

  p.h0_ = 0.5 * p.h_;
  if (sup_upp > 0.0) p.h0_ = std::min(p.h0_, 0.25 * inf_up / sup_upp);
  for (int attempt = 0; attempt < 60; ++attempt) {
    p.build_extension();
    if (p.extension_monotone()) return p;
    p.h0_ *= 0.5;
  }
  fail(ErrorCode::NonMonotonic, "could not build a monotone extension");
}

ProfilePtr build_profile(const ProfileSpec& spec) {
  return std::make_shared<const ShearProfile>(ShearProfile::build(spec));
}

}  // namespace shearwave
