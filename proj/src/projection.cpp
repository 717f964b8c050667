#include "circtrade/projection.hpp"

#include "circtrade/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace circtrade {

DenseMatrix project_2d(const DenseMatrix& points) {
  const auto n = static_cast<Eigen::Index>(points.rows());
  const auto d = static_cast<Eigen::Index>(points.cols());
  if (d < 2) throw DegenerateDimension("2-D projection needs at least two embedding dimensions");
  DenseMatrix out(points.rows(), 2);
  if (n == 0) return out;

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> x(points.values().data(), n, d);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered;

  // Eigenvalues ascend; the last two columns are the leading components.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  Eigen::MatrixXd basis(d, 2);
  basis.col(0) = solver.eigenvectors().col(d - 1);
  basis.col(1) = solver.eigenvectors().col(d - 2);
  for (Eigen::Index c = 0; c < 2; ++c) {
    Eigen::Index arg = 0;
    basis.col(c).cwiseAbs().maxCoeff(&arg);
    if (basis(arg, c) < 0) basis.col(c) = -basis.col(c);
  }

  const Eigen::MatrixXd scores = centered * basis;
  for (Eigen::Index i = 0; i < n; ++i) {
    out(static_cast<std::size_t>(i), 0) = scores(i, 0);
    out(static_cast<std::size_t>(i), 1) = scores(i, 1);
  }
  return out;
}

}  // namespace circtrade
