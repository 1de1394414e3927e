#pragma once

#include <Eigen/Dense>
#include <string>

namespace paw1d {

struct EigResult {
  double lambda = 0.0;
  Eigen::VectorXcd vector;  // B-normalized, largest entry real positive
  double residual = 0.0;    // |A x - lambda B x| / |x|
  int iterations = 0;       // iterative path only
};

struct EigOptions {
  // Above this dimension the dense solve is replaced by a preconditioned
  // block iteration warm-started from a central subproblem.
  Eigen::Index dense_limit = 2100;
  int refinement_steps = 2;
  double tolerance = 1e-11;  // relative residual target of the iterative path
  int max_iterations = 500;
  std::string context;  // appended to error messages, e.g. "method=paw_trunc eta=0.1"
};

// Smallest eigenpair of A x = lambda B x with A Hermitian and B Hermitian
// positive definite. Throws NotPositiveDefinite with the failing pivot, or
// NoConvergence from the iterative path.
EigResult smallest_generalized(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                               const EigOptions& options = {});

// x^* A x / x^* B x
double rayleigh_quotient(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                         const Eigen::VectorXcd& x);

// Scale used by the residual contract: max|A| + |lambda| max|B|.
double residual_scale(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double lambda);

}  // namespace paw1d
