#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace extsum {

// Small dense row-major matrix. Sized for the Gram matrices and projection
// factors this toolkit works with; not a general BLAS replacement.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  double& operator()(int r, int c) {
    return a[static_cast<std::size_t>(r) * cols + c];
  }
  double operator()(int r, int c) const {
    return a[static_cast<std::size_t>(r) * cols + c];
  }
};

Mat matmul(const Mat& x, const Mat& y);
Mat transpose(const Mat& x);
double frob_norm(const Mat& x);

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Returns eigenvalues in descending order; V's columns are the matching
// eigenvectors (A = V diag(w) V^T).
void jacobi_eigh(const Mat& a, std::vector<double>& w, Mat& v);

// In-place modified Gram-Schmidt on the columns of q (two passes). Columns
// that collapse to zero norm are left as zero columns.
void orthonormalize_columns(Mat& q);

}  // namespace extsum
