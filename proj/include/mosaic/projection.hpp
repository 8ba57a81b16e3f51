#pragma once

#include <Eigen/Dense>

namespace mosaic {

struct EigenDecomposition {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // orthogonal, columns are eigenvectors
};

// Full spectral decomposition of an exactly symmetric matrix.
// Throws std::invalid_argument when the input is not symmetric by storage.
EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& A);

// Frobenius-nearest matrix with eigenvalues >= eps: clamp the spectrum and
// reassemble. eps = 0 gives the exact Euclidean projection onto the PSD cone.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& A, double eps = 0.0);

}  // namespace mosaic
