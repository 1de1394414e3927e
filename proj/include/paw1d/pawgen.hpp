#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "paw1d/function.hpp"
#include "paw1d/model.hpp"

namespace paw1d {

enum class ProfileKind { projector_rho, pseudopotential_chi };

// Shape of the bump used for the cut-off rho and the pseudopotential chi.
//   bump:   exp(-1 / (1 - t^2))
//   narrow: exp(-4 / (1 - t^2))
// Both are smooth, positive on (-1, 1) and vanish with all derivatives at +-1.
enum class CutoffShape { bump, narrow };

// Bump profile on [-1, 1], zero outside. chi is normalized to unit mass,
// rho is left unnormalized (rho(0) = exp(-1) for the default shape).
FunctionEvaluator cutoff_profile(ProfileKind kind, CutoffShape shape = CutoffShape::bump);

// Integral of the unnormalized shape over [-1, 1].
double cutoff_mass(CutoffShape shape);

struct PawSetup {
  double eta = 0.1;      // cut-off radius
  int N = 2;             // PAW functions per site
  int d = 6;             // pseudo waves are C^{d-1} at +-eta
  double epsilon = 0.1;  // pseudopotential radius (eta in the public setup)
  CutoffShape rho_shape = CutoffShape::bump;
  CutoffShape chi_shape = CutoffShape::bump;
  int quadrature_nodes = 64;  // Gauss-Legendre nodes per panel for window integrals

  static PawSetup make(double eta, int N, int d) { return PawSetup{eta, N, d, eta}; }

  // Checks N >= 1, d >= max(N, 2), 0 < epsilon <= eta and that both site
  // windows fit in the cell without overlapping.
  void validate(const ModelParams& params) const;
};

// Even polynomial sum_k c_k P_k(y / eta), P_k(t) = (t^2 - 1)^k / (2^k k!),
// replacing an atomic mode inside the window |y| < eta.
struct PseudoWave {
  AtomicEigenpair atomic;
  double eta = 0.0;
  double site = 0.0;
  std::vector<double> poly;  // coefficients in the P_k basis, k = 0..d-1

  // Value and slope of the polynomial part at signed offset y from the site.
  ValueAndSlope inner(double y) const;
  // Pseudo wave everywhere: polynomial inside the window, atomic mode outside.
  ValueAndSlope operator()(double x) const;
  // Atomic mode at the same point, for building differences.
  ValueAndSlope outer(double x) const;
  FunctionEvaluator evaluator() const;
};

// P_k(t) and its derivative.
double legendre_like(int k, double t);
double legendre_like_derivative(int k, double t);
// m-th derivative of P_k at t = 1.
double legendre_like_derivative_at_one(int k, int m);

struct ProjectorSet {
  double site = 0.0;
  double eta = 0.0;
  CutoffShape shape = CutoffShape::bump;
  Eigen::MatrixXd gram;     // B_ij = <rho_eta pseudo_i, pseudo_j>
  Eigen::MatrixXd weights;  // B^{-1}
  std::vector<PseudoWave> pseudos;

  int size() const { return static_cast<int>(pseudos.size()); }
  // rho_eta(x - site), zero outside the window.
  double cutoff(double x) const;
  // Dual projector p~_k(x) = sum_j (B^{-1})_kj rho_eta pseudo_j.
  double value(int k, double x) const;
  FunctionEvaluator evaluator(int k) const;
};

struct OddSet {
  double site = 0.0;
  double eta = 0.0;
  CutoffShape shape = CutoffShape::bump;
  Eigen::MatrixXd gram;     // G_jk = int rho_eta sin(2 pi j t) sin(2 pi k t)
  Eigen::MatrixXd inverse;  // G^{-1}

  int size() const { return static_cast<int>(gram.rows()); }
  // theta_k(x) = sin(2 pi k (x - site)), k = 1..N.
  ValueAndSlope theta(int k, double x) const;
  // q_k(x) = rho_eta(x - site) sum_j (G^{-1})_jk theta_j(x), k = 1..N.
  double projector(int k, double x) const;
};

// Conditioning limit above which Gram or matching systems are rejected.
inline constexpr double kMaxCondition = 1e12;

std::vector<PseudoWave> build_pseudo_waves(const std::vector<AtomicEigenpair>& atomic,
                                           const PawSetup& setup, double site);

ProjectorSet build_projectors(const std::vector<PseudoWave>& pseudos, const PawSetup& setup);

OddSet build_odd_set(const PawSetup& setup, double site);

// Everything one site contributes to the PAW operators.
struct SiteData {
  double position = 0.0;
  double Z = 0.0;
  PawSetup setup;
  std::vector<AtomicEigenpair> atomic;
  ProjectorSet projectors;
  std::optional<OddSet> odd;

  const std::vector<PseudoWave>& pseudos() const { return projectors.pseudos; }
  // Atomic mode i (0-based) seen from this site.
  ValueAndSlope atomic_at(int i, double x) const;
};

SiteData build_site(double position, double Z, const PawSetup& setup, bool with_odd);

// Both sites of the model, at `origin` and `origin + a`.
struct PawAtoms {
  SiteData first;
  SiteData second;
};

PawAtoms build_atoms(const ModelParams& params, const PawSetup& setup, bool with_odd,
                     double origin = 0.0);

// Window around `site` split at the site and at +-epsilon offsets, the points
// where the integrands of the window forms are not smooth.
struct WindowGeometry {
  double lo;
  double hi;
  std::vector<double> kinks;
};
WindowGeometry window_geometry(double site, double eta, double epsilon);

// 2-norm condition number of a small symmetric matrix.
double condition_number(const Eigen::MatrixXd& m);

}  // namespace paw1d
