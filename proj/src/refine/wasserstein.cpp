#include <cmath>

#include "artqr/error.hpp"
#include "artqr/refine/refine.hpp"

namespace artqr::refine {

namespace {

void require_symmetric(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NonSymmetricInput, std::string(what) + " is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorCode::NonSymmetricInput, std::string(what) + " is not symmetric");
  }
}

void require_compatible(const GaussianStats& a, const GaussianStats& b) {
  const auto c = a.mean.size();
  if (a.cov.rows() != c || b.mean.size() != c || b.cov.rows() != c || a.cov.cols() != c || b.cov.cols() != c) {
    throw Error(ErrorCode::DimensionMismatch, "gaussian_w2: channel counts differ");
  }
  require_symmetric(a.cov, "first covariance");
  require_symmetric(b.cov, "second covariance");
}

// Square root of a symmetric PSD matrix, negative eigenvalues clamped to 0.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

double trace_sqrt_product(const Eigen::MatrixXd& c1, const Eigen::MatrixXd& c2) {
  const Eigen::MatrixXd r = psd_sqrt(c1);
  const Eigen::MatrixXd inner = r * c2 * r;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (inner + inner.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

}  // namespace

double gaussian_w2(const GaussianStats& a, const GaussianStats& b) {
  require_compatible(a, b);
  if (a.mean == b.mean && a.cov == b.cov) return 0.0;
  const double dm = (a.mean - b.mean).squaredNorm();
  // Both orderings, so that the result is exactly symmetric in (a, b).
  const double cross = trace_sqrt_product(a.cov, b.cov) + trace_sqrt_product(b.cov, a.cov);
  const double sq = dm + (a.cov.trace() + b.cov.trace()) - cross;
  return std::sqrt(std::max(sq, 0.0));
}

W2Gradient gaussian_w2_gradient(const GaussianStats& a, const GaussianStats& b) {
  require_compatible(a, b);
  const auto c = a.mean.size();
  const Eigen::MatrixXd s = psd_sqrt(b.cov);
  const Eigen::MatrixXd m = s * a.cov * s;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  const Eigen::VectorXd mean_diff = a.mean - b.mean;
  const double sq = mean_diff.squaredNorm() + a.cov.trace() + b.cov.trace() - 2.0 * lam.cwiseSqrt().sum();

  W2Gradient g;
  g.value = std::sqrt(std::max(sq, 0.0));
  g.d_mean = Eigen::VectorXd::Zero(c);
  g.d_cov = Eigen::MatrixXd::Zero(c, c);
  if (g.value < 1e-12) return g;
  if (lam.minCoeff() <= 0.0) throw Error(ErrorCode::InvalidArgument, "gaussian_w2_gradient: singular covariance");

  const Eigen::MatrixXd m_inv_sqrt =
      es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  const Eigen::MatrixXd d_sq_cov = Eigen::MatrixXd::Identity(c, c) - s * m_inv_sqrt * s;
  g.d_mean = mean_diff / g.value;  // 2 (mu1 - mu2) / (2 W2)
  g.d_cov = 0.5 * (d_sq_cov + d_sq_cov.transpose()) / (2.0 * g.value);
  return g;
}

}  // namespace artqr::refine
