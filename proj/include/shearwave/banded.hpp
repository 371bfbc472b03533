#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "shearwave/errors.hpp"

namespace shearwave {

// Banded LU with partial pivoting, LAPACK *gbtrf storage. Rows kl..2*kl+ku of
// `ab` hold the matrix; the first kl rows are fill for pivoting.
template <class T>
class BandedLU {
 public:
  BandedLU(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(ldab_ * n, T(0)),
        piv_(n, 0) {}

  T& at(int i, int j) { return ab_[(kl_ + ku_ + i - j) + ldab_ * j]; }

  void factor() {
    const int kv = kl_ + ku_;
    log_mag_ = 0.0;
    phase_ = T(1);
    for (int j = 0; j < n_; ++j) {
      int i_end = std::min(n_ - 1, j + kl_);
      int p = j;
      double best = std::abs(ab_[(kv + j - j) + ldab_ * j]);
      for (int i = j + 1; i <= i_end; ++i) {
        double v = std::abs(ab_[(kv + i - j) + ldab_ * j]);
        if (v > best) { best = v; p = i; }
      }
      piv_[j] = p;
      if (best == 0.0) { singular_ = true; log_mag_ = -1e308; continue; }
      if (p != j) {
        phase_ = -phase_;
        int j_hi = std::min(n_ - 1, j + kv);
        for (int jj = j; jj <= j_hi; ++jj) {
          if (kv + p - jj < 0 || kv + j - jj < 0) continue;
          std::swap(ab_[(kv + p - jj) + ldab_ * jj], ab_[(kv + j - jj) + ldab_ * jj]);
        }
      }
      T d = ab_[kv + ldab_ * j];
      log_mag_ += std::log(std::abs(d));
      phase_ *= d / std::abs(d);
      int j_hi = std::min(n_ - 1, j + kv);
      for (int i = j + 1; i <= i_end; ++i) {
        T m = ab_[(kv + i - j) + ldab_ * j] / d;
        ab_[(kv + i - j) + ldab_ * j] = m;
        for (int jj = j + 1; jj <= j_hi; ++jj)
          ab_[(kv + i - jj) + ldab_ * jj] -= m * ab_[(kv + j - jj) + ldab_ * jj];
      }
    }
  }

  bool singular() const { return singular_; }
  // det = phase() * exp(log_mag())
  double log_mag() const { return log_mag_; }
  T phase() const { return phase_; }

  template <class V>
  void solve(std::vector<V>& b) const {
    const int kv = kl_ + ku_;
    for (int j = 0; j < n_; ++j) {
      if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
      int i_end = std::min(n_ - 1, j + kl_);
      for (int i = j + 1; i <= i_end; ++i)
        b[i] -= ab_[(kv + i - j) + ldab_ * j] * b[j];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      int j_hi = std::min(n_ - 1, i + kv);
      V s = b[i];
      for (int j = i + 1; j <= j_hi; ++j)
        s -= ab_[(kv + i - j) + ldab_ * j] * b[j];
      b[i] = s / ab_[kv + ldab_ * i];
    }
  }

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<T> ab_;
  std::vector<int> piv_;
  double log_mag_ = 0.0;
  T phase_ = T(1);
  bool singular_ = false;
};

}  // namespace shearwave
