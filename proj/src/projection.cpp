#include "mosaic/projection.hpp"

#include <stdexcept>

#include "mosaic/parallel.hpp"
#include "mosaic/sampler.hpp"

namespace mosaic {

EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("symmetric_eigen: matrix must be square");
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = i + 1; j < A.cols(); ++j)
      if (A(i, j) != A(j, i))
        throw std::invalid_argument("symmetric_eigen: matrix not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eigen: eigensolver failed");

  const Eigen::Index p = A.rows();
  EigenDecomposition out;
  out.values.resize(p);
  out.vectors.resize(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    out.values(k) = solver.eigenvalues()(p - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(p - 1 - k);
  }
  return out;
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& A, double eps) {
  if (eps < 0.0) throw std::invalid_argument("project_psd: eps must be >= 0");
  const EigenDecomposition ed = symmetric_eigen(A);
  Eigen::VectorXd clamped = ed.values.cwiseMax(eps);
  Eigen::MatrixXd B =
      ed.vectors * clamped.asDiagonal() * ed.vectors.transpose();
  // Reassembly is symmetric only up to rounding; make it exact.
  B = 0.5 * (B + B.transpose()).eval();
  return B;
}

double correct_samples(MosaicSamples& samples, double eps, int workers) {
  samples.corrected_sigma.assign(samples.M, Eigen::MatrixXd());
  std::vector<int> already_pd(samples.M, 0);
  parallel_tasks(samples.M, workers, [&](std::size_t m) {
    const Eigen::MatrixXd sigma = samples.sigma_draw(static_cast<int>(m));
    const double floor =
        eps >= 0.0 ? eps : 1e-8 * sigma.diagonal().maxCoeff();
    const EigenDecomposition ed = symmetric_eigen(sigma);
    if (ed.values.minCoeff() >= floor) {
      samples.corrected_sigma[m] = sigma;  // untouched, mu passes through
      already_pd[m] = 1;
      return;
    }
    Eigen::VectorXd clamped = ed.values.cwiseMax(floor);
    Eigen::MatrixXd B =
        ed.vectors * clamped.asDiagonal() * ed.vectors.transpose();
    samples.corrected_sigma[m] = 0.5 * (B + B.transpose()).eval();
  });
  double frac = 0.0;
  for (int flag : already_pd) frac += flag;
  return samples.M > 0 ? frac / samples.M : 1.0;
}

}  // namespace mosaic
