#include "flatconic/quadform.hpp"

#include <Eigen/Dense>

namespace flatconic {

Signature signature_exact(std::vector<std::vector<Rational>> a) {
  const int n = static_cast<int>(a.size());
  Signature s;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (sgn(a[i][i]) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) {
      // All remaining diagonal entries vanish: fold a nonzero off-diagonal entry onto the diagonal.
      int fi = -1, fj = -1;
      for (int i = k; i < n && fi < 0; ++i)
        for (int j = i + 1; j < n; ++j)
          if (sgn(a[i][j]) != 0) {
            fi = i;
            fj = j;
            break;
          }
      if (fi < 0) {
        s.zero += n - k;
        return s;
      }
      for (int c = 0; c < n; ++c) a[fi][c] += a[fj][c];
      for (int r = 0; r < n; ++r) a[r][fi] += a[r][fj];
      piv = fi;
    }
    if (piv != k) {
      std::swap(a[piv], a[k]);
      for (int r = 0; r < n; ++r) std::swap(a[r][piv], a[r][k]);
    }
    for (int r = k + 1; r < n; ++r) {
      if (sgn(a[r][k]) == 0) continue;
      Rational f = a[r][k] / a[k][k];
      for (int c = k; c < n; ++c) a[r][c] -= f * a[k][c];
      for (int c = k; c < n; ++c) a[c][r] = a[r][c];
    }
    (sgn(a[k][k]) > 0 ? s.pos : s.neg) += 1;
  }
  return s;
}

Signature signature_float(const std::vector<std::vector<double>>& a) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd m(n, n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m(i, j) = a[i][j];
      scale = std::max(scale, std::fabs(a[i][j]));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double tau = tolerance() * std::max(1.0, scale);
  Signature s;
  for (int i = 0; i < n; ++i) {
    double l = es.eigenvalues()(i);
    if (l > tau)
      ++s.pos;
    else if (l < -tau)
      ++s.neg;
    else
      ++s.zero;
    if (std::fabs(l) > tau && std::fabs(l) <= 10.0 * tau) s.near_degenerate = true;
  }
  return s;
}

}  // namespace flatconic
