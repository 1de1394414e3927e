#pragma once

#include <vector>

#include "paw1d/function.hpp"

namespace paw1d {

// Periodic Schrodinger operator on the unit cell with attractive Dirac
// potentials of strength Z0 at x = 0 and Za at x = a:
//   H = -d^2/dx^2 - Z0 sum_k delta_k - Za sum_k delta_{k+a}.
struct ModelParams {
  double a = 0.4;
  double Z0 = 10.0;
  double Za = 10.0;

  // Throws ValidationError naming the violated constraint.
  void validate() const;
};

enum class Branch { negative, positive };

// Coefficients of psi = A1 u1 + B1 u2 on [0, a] and A2 u1 + B2 u2 on [a, 1],
// with (u1, u2) = (cosh, sinh)(omega x) on the negative branch and
// (cos, sin)(omega x) on the positive one.
struct PiecewiseCoefficients {
  double A1 = 0.0;
  double B1 = 0.0;
  double A2 = 0.0;
  double B2 = 0.0;
};

struct ExactEigenpair {
  double omega = 0.0;
  double energy = 0.0;  // -omega^2 or +omega^2 depending on the branch
  Branch branch = Branch::negative;
  PiecewiseCoefficients coeffs;  // unit L2 norm on the cell
};

// Even eigenmode of the single-site operator -d^2/dx^2 - Z sum_k delta_k.
// Mode 1 is cosh(omega (x - 1/2)), modes i >= 2 are cos(omega (x - 1/2)),
// both on [0, 1] and unnormalized.
struct AtomicEigenpair {
  double omega = 0.0;
  double energy = 0.0;
  int mode = 1;
  double Z = 0.0;
};

double characteristic_negative(const ModelParams& params, double omega);
double characteristic_positive(const ModelParams& params, double omega);

// |f(omega)| divided by the largest absolute term of f. Used to state root
// accuracy independently of the exponential growth of the negative branch.
double characteristic_relative_residual(const ModelParams& params, Branch branch, double omega);

// Negative eigenvalues in increasing order. There is always one; a second
// exists when Z0 + Za < Z0 Za a (1 - a).
std::vector<ExactEigenpair> bound_states(const ModelParams& params);

// The two negative eigenvalues, E0 < E1; RootCountMismatch otherwise.
std::vector<ExactEigenpair> negative_spectrum(const ModelParams& params);

// The first `count` positive eigenvalues in increasing order.
std::vector<ExactEigenpair> positive_spectrum(const ModelParams& params, int count);

// Lowest eigenvalue E0 of H.
double ground_state_energy(const ModelParams& params);

// The N lowest even eigenmodes of the single-site operator.
std::vector<AtomicEigenpair> atomic_spectrum(double Z, int N);

// Residual of the even-mode jump condition, scaled to O(1):
// 2 omega tanh(omega/2) - Z for the cosh mode and
// 2 omega sin(omega/2) + Z cos(omega/2) for cos modes.
double atomic_condition(const AtomicEigenpair& pair);

// k-th derivative of an atomic mode at distance y in (0, 1) from its site.
double atomic_derivative(const AtomicEigenpair& pair, double y, int order);

FunctionEvaluator eigenfunction_evaluator(const ModelParams& params, const ExactEigenpair& pair);
FunctionEvaluator eigenfunction_evaluator(const AtomicEigenpair& pair, double site = 0.0);

// Derivative jumps psi'(s+) - psi'(s-) + Z psi(s) at both sites; zero for an
// exact eigenfunction.
struct JumpResiduals {
  double at_origin;
  double at_a;
};
JumpResiduals jump_residuals(const ModelParams& params, const ExactEigenpair& pair);

}  // namespace paw1d
