#pragma once

#include <Eigen/Dense>

namespace rmode::fit {

struct NnlsOptions {
  // A coordinate enters the solution only while its gradient exceeds
  // kkt_rel_tol * max|rhs|; keeps noise-level gradients from dragging
  // parameters off an exact zero.
  double kkt_rel_tol = 1e-12;
  // Restricted solutions within primal_rel_tol * max|z| of zero are clamped
  // to the bound instead of surviving as rounding dust.
  double primal_rel_tol = 1e-10;
};

struct NnlsResult {
  Eigen::VectorXd x;          // minimizer, all coefficients >= 0
  bool rank_deficient = false;  // a restricted system was singular; x is the
                                // minimum-norm choice among equivalent optima
  int iterations = 0;
};

// Solves min_{x >= 0} ||A x - y||_W^2 given the normal equations
// G = A^T W A and c = A^T W y (Lawson-Hanson active set on the normal
// equations; the problems here have a handful of unknowns, so forming G is
// cheap and loses nothing).  Restricted systems of one or two unknowns are
// solved in closed form so that exactly-representable inputs produce
// exactly-representable solutions.
NnlsResult nnls_normal(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs,
                       const NnlsOptions& opts = {});

}  // namespace rmode::fit
