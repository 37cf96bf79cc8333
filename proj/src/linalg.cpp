#include "extsum/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace extsum {

Mat matmul(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matmul shape mismatch");
  Mat z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      double v = x(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
    }
  }
  return z;
}

Mat transpose(const Mat& x) {
  Mat t(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) t(j, i) = x(i, j);
  }
  return t;
}

double frob_norm(const Mat& x) {
  double s = 0.0;
  for (double v : x.a) s += v * v;
  return std::sqrt(s);
}

void jacobi_eigh(const Mat& a, std::vector<double>& w, Mat& v) {
  if (a.rows != a.cols) throw std::invalid_argument("jacobi_eigh: not square");
  const int n = a.rows;
  Mat m = a;
  v = Mat(n, n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  auto offdiag = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) s += m(i, j) * m(i, j);
    }
    return s;
  };

  const int kMaxSweeps = 100;
  double base = 0.0;
  for (double x : m.a) base += x * x;
  const double tol = base * 1e-30 + 1e-300;
  for (int sweep = 0; sweep < kMaxSweeps && offdiag() > tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = m(p, q);
        if (apq == 0.0) continue;
        double app = m(p, p), aqq = m(q, q);
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  w.resize(n);
  for (int i = 0; i < n; ++i) w[i] = m(i, i);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return w[i] > w[j]; });
  std::vector<double> ws(n);
  Mat vs(n, n);
  for (int j = 0; j < n; ++j) {
    ws[j] = w[order[j]];
    for (int i = 0; i < n; ++i) vs(i, j) = v(i, order[j]);
  }
  w = std::move(ws);
  v = std::move(vs);
}

void orthonormalize_columns(Mat& q) {
  const int n = q.rows, b = q.cols;
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < b; ++j) {
      for (int k = 0; k < j; ++k) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += q(i, k) * q(i, j);
        for (int i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
      }
      double norm = 0.0;
      for (int i = 0; i < n; ++i) norm += q(i, j) * q(i, j);
      norm = std::sqrt(norm);
      if (norm > 1e-300) {
        for (int i = 0; i < n; ++i) q(i, j) /= norm;
      } else {
        for (int i = 0; i < n; ++i) q(i, j) = 0.0;
      }
    }
  }
}

}  // namespace extsum
