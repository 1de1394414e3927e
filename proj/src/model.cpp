#include "paw1d/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "paw1d/errors.hpp"
#include "paw1d/quad.hpp"
#include "paw1d/roots.hpp"

namespace paw1d {

namespace {

constexpr double kScanStep = 1e-3;
constexpr double kScanStart = 1e-6;

// f(omega) * 2 exp(-omega): same zeros as the negative characteristic function
// but finite for every omega.
double scaled_negative(const ModelParams& p, double w) {
  const double e2 = std::exp(-2.0 * w);
  const double cosh_s = 1.0 + e2;  // 2 e^{-w} cosh w
  const double sinh_s = 1.0 - e2;  // 2 e^{-w} sinh w
  const double prod_s =
      0.5 * (1.0 - std::exp(-2.0 * (1.0 - p.a) * w) - std::exp(-2.0 * p.a * w) + e2);
  return 2.0 * w * w * (2.0 * std::exp(-w) - cosh_s) + (p.Z0 + p.Za) * w * sinh_s -
         p.Z0 * p.Za * prod_s;
}

struct Basis {
  double u1, u2, du1, du2;
};

Basis basis_at(Branch branch, double w, double x) {
  if (branch == Branch::negative) {
    const double c = std::cosh(w * x), s = std::sinh(w * x);
    return {c, s, w * s, w * c};
  }
  const double c = std::cos(w * x), s = std::sin(w * x);
  return {c, s, -w * s, w * c};
}

ValueAndSlope evaluate_piece(Branch branch, double w, double A, double B, double x) {
  const Basis u = basis_at(branch, w, x);
  return {A * u.u1 + B * u.u2, A * u.du1 + B * u.du2};
}

ValueAndSlope evaluate_exact(const ModelParams& p, const ExactEigenpair& e, double x) {
  const auto& c = e.coeffs;
  const double y = reduce_periodic(x);
  if (y == 0.0) {
    const auto right = evaluate_piece(e.branch, e.omega, c.A1, c.B1, 0.0);
    const auto left = evaluate_piece(e.branch, e.omega, c.A2, c.B2, 1.0);
    return {0.5 * (right.value + left.value), 0.5 * (right.slope + left.slope)};
  }
  if (y == p.a) {
    const auto left = evaluate_piece(e.branch, e.omega, c.A1, c.B1, y);
    const auto right = evaluate_piece(e.branch, e.omega, c.A2, c.B2, y);
    return {0.5 * (right.value + left.value), 0.5 * (right.slope + left.slope)};
  }
  return y < p.a ? evaluate_piece(e.branch, e.omega, c.A1, c.B1, y)
                 : evaluate_piece(e.branch, e.omega, c.A2, c.B2, y);
}

// Continuity at a, periodic continuity at 1 and the jump at a fix the
// coefficients up to scale; the jump at 0 is then implied at a root.
PiecewiseCoefficients solve_coefficients(const ModelParams& p, Branch branch, double w) {
  const Basis at_a = basis_at(branch, w, p.a);
  const Basis at_1 = basis_at(branch, w, 1.0);
  Eigen::Matrix<double, 3, 4> rows;
  rows << at_a.u1, at_a.u2, -at_a.u1, -at_a.u2,  //
      1.0, 0.0, -at_1.u1, -at_1.u2,              //
      -at_a.du1 + p.Za * at_a.u1, -at_a.du2 + p.Za * at_a.u2, at_a.du1, at_a.du2;
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(rows, Eigen::ComputeFullV);
  Eigen::Vector4d v = svd.matrixV().col(3);
  Eigen::Index largest = 0;
  v.cwiseAbs().maxCoeff(&largest);
  if (v(largest) < 0.0) v = -v;

  PiecewiseCoefficients c{v(0), v(1), v(2), v(3)};
  ExactEigenpair probe{w, 0.0, branch, c};
  const quad::Partition cell(0.0, 1.0, {p.a});
  const double norm2 = quad::integrate(
      [&](double x) {
        const double f = evaluate_exact(p, probe, x).value;
        return f * f;
      },
      cell, 64, 4);
  const double scale = 1.0 / std::sqrt(norm2);
  return {c.A1 * scale, c.B1 * scale, c.A2 * scale, c.B2 * scale};
}

ExactEigenpair make_pair(const ModelParams& p, Branch branch, double w) {
  ExactEigenpair e;
  e.omega = w;
  e.branch = branch;
  e.energy = branch == Branch::negative ? -w * w : w * w;
  e.coeffs = solve_coefficients(p, branch, w);
  return e;
}

}  // namespace

void ModelParams::validate() const {
  if (!(a > 0.0 && a < 1.0)) throw ValidationError("a must lie in (0,1)");
  if (!(Z0 > 0.0)) throw ValidationError("Z0 must be positive");
  if (!(Za > 0.0)) throw ValidationError("Za must be positive");
}

double characteristic_negative(const ModelParams& p, double w) {
  return 2.0 * w * w * (1.0 - std::cosh(w)) + (p.Z0 + p.Za) * w * std::sinh(w) -
         p.Z0 * p.Za * std::sinh(p.a * w) * std::sinh((1.0 - p.a) * w);
}

double characteristic_positive(const ModelParams& p, double w) {
  // Continuation omega -> i omega of the negative branch; the product term
  // enters with a minus sign (the plus form has roots that are not eigenvalues).
  return 2.0 * w * w * (1.0 - std::cos(w)) + (p.Z0 + p.Za) * w * std::sin(w) -
         p.Z0 * p.Za * std::sin(p.a * w) * std::sin((1.0 - p.a) * w);
}

double characteristic_relative_residual(const ModelParams& p, Branch branch, double w) {
  if (branch == Branch::negative) {
    const double t1 = 2.0 * w * w * std::cosh(w);
    const double t2 = (p.Z0 + p.Za) * w * std::sinh(w);
    const double t3 = p.Z0 * p.Za * std::sinh(p.a * w) * std::sinh((1.0 - p.a) * w);
    return std::abs(characteristic_negative(p, w)) / std::max({t1, t2, t3});
  }
  const double t1 = 2.0 * w * w;
  const double t2 = (p.Z0 + p.Za) * w;
  const double t3 = p.Z0 * p.Za;
  return std::abs(characteristic_positive(p, w)) / std::max({t1, t2, t3});
}

std::vector<ExactEigenpair> bound_states(const ModelParams& p) {
  p.validate();
  const double omega_max = std::max(4.0 * (p.Z0 + p.Za), 50.0);
  auto f = [&](double w) { return scaled_negative(p, w); };
  std::vector<ExactEigenpair> out;
  for (const auto& b : roots::scan_sign_changes(f, kScanStart, omega_max, kScanStep))
    out.push_back(make_pair(p, Branch::negative, roots::brent(f, b.lo, b.hi)));
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.energy < y.energy; });
  return out;
}

std::vector<ExactEigenpair> negative_spectrum(const ModelParams& p) {
  auto out = bound_states(p);
  if (out.size() != 2)
    throw Error(ErrorCode::root_count_mismatch,
                "expected 2 negative eigenvalues, bracket scan found " +
                    std::to_string(out.size()));
  return out;
}

std::vector<ExactEigenpair> positive_spectrum(const ModelParams& p, int count) {
  p.validate();
  if (count < 1) throw ValidationError("count must be >= 1");
  // The attractive perturbation only lowers eigenvalues, so the k-th positive
  // eigenvalue sits below the (k+1)-th free one, (2 pi ceil((k+1)/2))^2.
  const double omega_max = std::numbers::pi * (count + 2) + 1e-2;
  auto f = [&](double w) { return characteristic_positive(p, w); };
  std::vector<ExactEigenpair> out;
  double lo = kScanStart;
  while (static_cast<int>(out.size()) < count && lo < omega_max) {
    const double hi = std::min(lo + 1.0, omega_max);
    for (const auto& b : roots::scan_sign_changes(f, lo, hi, kScanStep)) {
      if (static_cast<int>(out.size()) == count) break;
      out.push_back(make_pair(p, Branch::positive, roots::brent(f, b.lo, b.hi)));
    }
    lo = hi;
  }
  if (static_cast<int>(out.size()) != count)
    throw Error(ErrorCode::root_count_mismatch,
                "found " + std::to_string(out.size()) + " of " + std::to_string(count) +
                    " positive eigenvalues");
  return out;
}

double ground_state_energy(const ModelParams& params) {
  const auto states = bound_states(params);
  if (states.empty())
    throw Error(ErrorCode::root_count_mismatch, "no negative eigenvalue found");
  return states.front().energy;
}

double atomic_condition(const AtomicEigenpair& e) {
  const double w = e.omega;
  if (e.mode == 1) return 2.0 * w * std::tanh(0.5 * w) - e.Z;
  return 2.0 * w * std::sin(0.5 * w) + e.Z * std::cos(0.5 * w);
}

std::vector<AtomicEigenpair> atomic_spectrum(double Z, int N) {
  if (!(Z > 0.0)) throw ValidationError("Z must be positive");
  if (N < 1) throw ValidationError("N must be >= 1");
  std::vector<AtomicEigenpair> out;
  {
    // 2 w tanh(w/2) is increasing, ~w^2 near 0 and < 2w, so (0, Z + 1] brackets.
    auto g = [Z](double w) { return 2.0 * w * std::tanh(0.5 * w) - Z; };
    const double w = roots::brent(g, 0.0, Z + 1.0);
    out.push_back({w, -w * w, 1, Z});
  }
  for (int i = 2; i <= N; ++i) {
    // 2 w tan(w/2) = -Z has exactly one root in each ((2k+1) pi, (2k+2) pi).
    const int k = i - 2;
    auto g = [Z](double w) { return 2.0 * w * std::sin(0.5 * w) + Z * std::cos(0.5 * w); };
    const double lo = (2 * k + 1) * std::numbers::pi, hi = (2 * k + 2) * std::numbers::pi;
    if ((g(lo) > 0.0) == (g(hi) > 0.0))
      throw Error(ErrorCode::root_count_mismatch, "no sign change for atomic mode " + std::to_string(i));
    const double w = roots::brent(g, lo, hi);
    out.push_back({w, w * w, i, Z});
  }
  return out;
}

double atomic_derivative(const AtomicEigenpair& e, double y, int order) {
  const double u = e.omega * (y - 0.5);
  const double scale = std::pow(e.omega, order);
  if (e.mode == 1) return scale * (order % 2 == 0 ? std::cosh(u) : std::sinh(u));
  return scale * std::cos(u + 0.5 * order * std::numbers::pi);
}

FunctionEvaluator eigenfunction_evaluator(const ModelParams& params, const ExactEigenpair& pair) {
  return FunctionEvaluator([params, pair](double x) { return evaluate_exact(params, pair, x); },
                           {0.0, params.a});
}

FunctionEvaluator eigenfunction_evaluator(const AtomicEigenpair& pair, double site) {
  return FunctionEvaluator(
      [pair, site](double x) -> ValueAndSlope {
        const double y = reduce_periodic(x - site);
        if (y == 0.0) return {atomic_derivative(pair, 0.0, 0), 0.0};
        return {atomic_derivative(pair, y, 0), atomic_derivative(pair, y, 1)};
      },
      {reduce_periodic(site)});
}

JumpResiduals jump_residuals(const ModelParams& p, const ExactEigenpair& e) {
  const auto& c = e.coeffs;
  const auto right0 = evaluate_piece(e.branch, e.omega, c.A1, c.B1, 0.0);
  const auto left0 = evaluate_piece(e.branch, e.omega, c.A2, c.B2, 1.0);
  const auto lefta = evaluate_piece(e.branch, e.omega, c.A1, c.B1, p.a);
  const auto righta = evaluate_piece(e.branch, e.omega, c.A2, c.B2, p.a);
  return {right0.slope - left0.slope + p.Z0 * right0.value,
          righta.slope - lefta.slope + p.Za * righta.value};
}

}  // namespace paw1d
