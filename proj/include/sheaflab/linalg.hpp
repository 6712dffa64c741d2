#pragma once
//
// Dense numerical helpers shared by the sheaf machinery: SVD-based rank
// decisions with an explicit conditioning diagnostic, kernel and image
// bases, and scaled deviation norms.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <complex>
#include <limits>

#include "errors.hpp"

namespace sheaflab {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealMatrix = Matrix<double>;
using ComplexScalar = std::complex<double>;
using ComplexMatrix = Matrix<ComplexScalar>;

enum class ScalarField { real, complex_field };

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr ScalarField field = ScalarField::real;
  static constexpr const char* name = "real";
};

template <>
struct ScalarTraits<ComplexScalar> {
  static constexpr ScalarField field = ScalarField::complex_field;
  static constexpr const char* name = "complex";
};

// Rank decision policy.  The absolute cutoff is rel_tol * sigma_max with
// rel_tol defaulting to max(rows, cols) * machine epsilon.  A decision
// counts as trustworthy only when kept and dropped singular values are
// separated by at least gap_threshold.
struct RankOptions {
  double rel_tol = -1.0;  // < 0 selects the automatic value
  double gap_threshold = 1e3;
};

inline constexpr double kInfiniteGap = std::numeric_limits<double>::infinity();

template <class Scalar>
struct SvdAnalysis {
  Eigen::VectorXd singular_values;
  int rank = 0;
  double tol_used = 0.0;              // absolute singular-value cutoff
  double gap_ratio = kInfiniteGap;    // smallest kept over largest dropped
  bool well_conditioned = true;
  Matrix<Scalar> kernel;              // orthonormal null-space basis
  Matrix<Scalar> image;               // orthonormal column-space basis
};

template <class Scalar>
SvdAnalysis<Scalar> analyze(const Matrix<Scalar>& a, const RankOptions& opts = {}) {
  SvdAnalysis<Scalar> out;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  if (rows == 0 || cols == 0) {
    // Degenerate shapes carry no data: full kernel, empty image.
    out.kernel = Matrix<Scalar>::Identity(cols, cols);
    out.image = Matrix<Scalar>(rows, 0);
    return out;
  }
  Eigen::JacobiSVD<Matrix<Scalar>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double sigma_max = out.singular_values(0);
  const double rel = opts.rel_tol < 0
                         ? static_cast<double>(std::max(rows, cols)) *
                               std::numeric_limits<double>::epsilon()
                         : opts.rel_tol;
  out.tol_used = rel * sigma_max;
  const int nsv = static_cast<int>(out.singular_values.size());
  int r = 0;
  while (r < nsv && out.singular_values(r) > out.tol_used) ++r;
  out.rank = r;
  if (r < nsv && out.singular_values(r) > 0.0) {
    // Something was dropped; measure the separation.
    out.gap_ratio = (r == 0) ? 0.0 : out.singular_values(r - 1) / out.singular_values(r);
    out.well_conditioned = out.gap_ratio >= opts.gap_threshold;
  }
  out.kernel = svd.matrixV().rightCols(cols - r);
  out.image = svd.matrixU().leftCols(r);
  return out;
}

template <class Scalar>
int numerical_rank(const Matrix<Scalar>& a, const RankOptions& opts = {}) {
  return analyze(a, opts).rank;
}

template <class Scalar>
bool full_row_rank(const Matrix<Scalar>& a, const RankOptions& opts = {}) {
  if (a.rows() == 0) return true;  // surjectivity onto the zero space
  return analyze(a, opts).rank == a.rows();
}

// Largest entry magnitude; zero for empty matrices.
template <class Scalar>
double max_abs(const Matrix<Scalar>& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

// Entrywise deviation between two same-shape matrices, measured relative to
// the larger operand magnitude and floored at one (tiny operands are
// compared absolutely).
template <class Scalar>
double relative_deviation(const Matrix<Scalar>& x, const Matrix<Scalar>& y) {
  const double scale = std::max({1.0, max_abs(x), max_abs(y)});
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ShapeError("relative_deviation: shape mismatch");
  if (x.size() == 0) return 0.0;
  return (x - y).cwiseAbs().maxCoeff() / scale;
}

// Orthonormal basis of the part of span(kernel) orthogonal to span(image);
// both inputs must have orthonormal columns.  This is the quotient
// representative choice used for cohomology bases.
template <class Scalar>
Matrix<Scalar> complement_in_kernel(const Matrix<Scalar>& kernel, const Matrix<Scalar>& image,
                                    const RankOptions& opts = {}) {
  if (kernel.cols() == 0) return kernel;
  Matrix<Scalar> projected = kernel;
  if (image.cols() > 0) projected -= image * (image.adjoint() * kernel);
  return analyze(projected, opts).image;
}

}  // namespace sheaflab
