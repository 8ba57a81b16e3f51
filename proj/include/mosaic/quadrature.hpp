#pragma once

#include <Eigen/Dense>

namespace mosaic {

// Probabilists' normalization: sum_k w_k g(m + s z_k) approximates E g(X)
// for X ~ Normal(m, s^2). Weights sum to one, nodes are symmetric about 0.
struct QuadratureRule {
  int order = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Nodes are the roots of the probabilists' Hermite polynomial of the given
// order (Golub-Welsch on the Jacobi matrix); exact for polynomials up to
// degree 2*order - 1 against the standard normal. Valid order: 1..200.
QuadratureRule gauss_hermite_rule(int order);

}  // namespace mosaic
