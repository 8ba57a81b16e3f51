#include "mosaic/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace mosaic {

QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1 || order > 200)
    throw std::invalid_argument("gauss_hermite_rule: order must be in 1..200");

  // Jacobi matrix for the orthonormal probabilists' Hermite recurrence:
  // zeros on the diagonal, sqrt(i) on the off-diagonals.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double b = std::sqrt(static_cast<double>(i));
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite_rule: eigensolver failed");

  QuadratureRule rule;
  rule.order = order;
  rule.nodes = solver.eigenvalues();  // ascending
  rule.weights.resize(order);
  for (int k = 0; k < order; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights(k) = v0 * v0;  // measure is the standard normal, mass one
  }

  // Enforce exact symmetry of the computed rule.
  for (int k = 0; k < order / 2; ++k) {
    const int r = order - 1 - k;
    const double z = 0.5 * (rule.nodes(r) - rule.nodes(k));
    rule.nodes(k) = -z;
    rule.nodes(r) = z;
    const double w = 0.5 * (rule.weights(k) + rule.weights(r));
    rule.weights(k) = w;
    rule.weights(r) = w;
  }
  if (order % 2 == 1) rule.nodes(order / 2) = 0.0;
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace mosaic
