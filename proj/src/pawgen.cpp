#include "paw1d/pawgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "paw1d/errors.hpp"
#include "paw1d/quad.hpp"

namespace paw1d {

namespace {

constexpr int kWindowPanels = 4;

double shape_exponent(CutoffShape shape) { return shape == CutoffShape::narrow ? 4.0 : 1.0; }

ValueAndSlope shape_at(CutoffShape shape, double t) {
  const double s = 1.0 - t * t;
  if (s <= 0.0) return {0.0, 0.0};
  const double c = shape_exponent(shape);
  const double v = std::exp(-c / s);
  return {v, v * (-2.0 * c * t / (s * s))};
}

quad::Partition window_partition(double site, double eta, double epsilon) {
  auto g = window_geometry(site, eta, epsilon);
  return quad::Partition(g.lo, g.hi, g.kinks);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double cutoff_mass(CutoffShape shape) {
  static const double bump = quad::integrate(
      [](double t) { return shape_at(CutoffShape::bump, t).value; }, quad::Partition(-1.0, 1.0),
      64, 8);
  static const double narrow = quad::integrate(
      [](double t) { return shape_at(CutoffShape::narrow, t).value; },
      quad::Partition(-1.0, 1.0), 64, 8);
  return shape == CutoffShape::narrow ? narrow : bump;
}

FunctionEvaluator cutoff_profile(ProfileKind kind, CutoffShape shape) {
  const double scale = kind == ProfileKind::pseudopotential_chi ? 1.0 / cutoff_mass(shape) : 1.0;
  return FunctionEvaluator(
      [shape, scale](double t) -> ValueAndSlope {
        const auto v = shape_at(shape, t);
        return {scale * v.value, scale * v.slope};
      },
      {-1.0, 1.0});
}

void PawSetup::validate(const ModelParams& params) const {
  params.validate();
  if (N < 1) throw ValidationError("N must be >= 1");
  if (d < std::max(N, 2)) throw ValidationError("d must be >= max(N, 2)");
  const double limit = std::min(params.a, 1.0 - params.a) / 2.0;
  // Windows of radius exactly `limit` touch in a single point and are accepted.
  if (!(eta > 0.0) || eta > limit * (1.0 + 1e-12))
    throw ValidationError("eta must lie in (0, min(a/2, (1-a)/2)]");
  if (!(epsilon > 0.0) || epsilon > eta * (1.0 + 1e-12))
    throw ValidationError("epsilon must lie in (0, eta]");
  if (quadrature_nodes < 2) throw ValidationError("quadrature node count must be >= 2");
}

WindowGeometry window_geometry(double site, double eta, double epsilon) {
  WindowGeometry g{site - eta, site + eta, {site}};
  if (epsilon < eta) {
    g.kinks.push_back(site - epsilon);
    g.kinks.push_back(site + epsilon);
  }
  std::sort(g.kinks.begin(), g.kinks.end());
  return g;
}

double condition_number(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  return smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();
}

double legendre_like(int k, double t) {
  return std::pow(t * t - 1.0, k) / (std::pow(2.0, k) * factorial(k));
}

double legendre_like_derivative(int k, double t) {
  // P_k' = t P_{k-1}
  return k == 0 ? 0.0 : t * legendre_like(k - 1, t);
}

double legendre_like_derivative_at_one(int k, int m) {
  // Leibniz on (t-1)^k (t+1)^k: only the term differentiating (t-1)^k
  // exactly k times survives at t = 1.
  if (m < k || m > 2 * k) return 0.0;
  double binom = 1.0;
  for (int j = 1; j <= k; ++j) binom = binom * (m - k + j) / j;
  return binom * factorial(k) / factorial(2 * k - m) * std::pow(2.0, k - m);
}

ValueAndSlope PseudoWave::inner(double y) const {
  const double t = y / eta;
  double v = 0.0, s = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    v += poly[k] * legendre_like(static_cast<int>(k), t);
    s += poly[k] * legendre_like_derivative(static_cast<int>(k), t);
  }
  return {v, s / eta};
}

ValueAndSlope PseudoWave::outer(double x) const {
  const double y = reduce_periodic(x - site);
  if (y == 0.0) return {atomic_derivative(atomic, 0.0, 0), 0.0};
  return {atomic_derivative(atomic, y, 0), atomic_derivative(atomic, y, 1)};
}

ValueAndSlope PseudoWave::operator()(double x) const {
  const double y = periodic_offset(x, site);
  if (std::abs(y) < eta) return inner(y);
  return outer(x);
}

FunctionEvaluator PseudoWave::evaluator() const {
  PseudoWave copy = *this;
  return FunctionEvaluator([copy](double x) { return copy(x); },
                           {reduce_periodic(site - eta), reduce_periodic(site + eta)});
}

std::vector<PseudoWave> build_pseudo_waves(const std::vector<AtomicEigenpair>& atomic,
                                           const PawSetup& setup, double site) {
  if (static_cast<int>(atomic.size()) < setup.N)
    throw ValidationError("fewer atomic modes than PAW functions");
  const int d = setup.d;
  if (d < 1) throw ValidationError("d must be >= 1");
  Eigen::MatrixXd matching(d, d);
  for (int m = 0; m < d; ++m)
    for (int k = 0; k < d; ++k) matching(m, k) = legendre_like_derivative_at_one(k, m);
  const double cond = condition_number(matching);
  if (cond > kMaxCondition)
    throw Error(ErrorCode::singular_matching,
                "matching system condition number too large for d = " + std::to_string(d));
  // Unit lower triangular: P_k^{(m)}(1) = 0 for m < k and 1 for m = k.
  const auto lower = matching.triangularView<Eigen::Lower>();

  std::vector<PseudoWave> out;
  for (int i = 0; i < setup.N; ++i) {
    Eigen::VectorXd rhs(d);
    for (int m = 0; m < d; ++m)
      rhs(m) = std::pow(setup.eta, m) * atomic_derivative(atomic[i], setup.eta, m);
    const Eigen::VectorXd c = lower.solve(rhs);
    PseudoWave w;
    w.atomic = atomic[i];
    w.eta = setup.eta;
    w.site = site;
    w.poly.assign(c.data(), c.data() + d);
    out.push_back(std::move(w));
  }
  return out;
}

double ProjectorSet::cutoff(double x) const {
  return shape_at(shape, periodic_offset(x, site) / eta).value;
}

double ProjectorSet::value(int k, double x) const {
  const double y = periodic_offset(x, site);
  if (std::abs(y) >= eta) return 0.0;
  const double rho = shape_at(shape, y / eta).value;
  double sum = 0.0;
  for (int j = 0; j < size(); ++j) sum += weights(k, j) * pseudos[j].inner(y).value;
  return rho * sum;
}

FunctionEvaluator ProjectorSet::evaluator(int k) const {
  ProjectorSet copy = *this;
  return FunctionEvaluator(
      [copy, k](double x) -> ValueAndSlope {
        const double y = periodic_offset(x, copy.site);
        if (std::abs(y) >= copy.eta) return {0.0, 0.0};
        const auto rho = shape_at(copy.shape, y / copy.eta);
        double v = 0.0, s = 0.0;
        for (int j = 0; j < copy.size(); ++j) {
          const auto p = copy.pseudos[j].inner(y);
          v += copy.weights(k, j) * p.value;
          s += copy.weights(k, j) * p.slope;
        }
        return {rho.value * v, rho.slope / copy.eta * v + rho.value * s};
      },
      {reduce_periodic(site - eta), reduce_periodic(site + eta)});
}

ProjectorSet build_projectors(const std::vector<PseudoWave>& pseudos, const PawSetup& setup) {
  if (pseudos.empty()) throw ValidationError("no pseudo waves to build projectors from");
  const double site = pseudos.front().site;
  const int n = static_cast<int>(pseudos.size());
  const auto rule = quad::composite_rule(window_partition(site, setup.eta, setup.epsilon),
                                         setup.quadrature_nodes, kWindowPanels);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double y = rule.nodes[q] - site;
    const double rho = shape_at(setup.rho_shape, y / setup.eta).value;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = pseudos[i].inner(y).value;
    gram.noalias() += rule.weights[q] * rho * v * v.transpose();
  }
  const double cond = condition_number(gram);
  if (cond > kMaxCondition)
    throw IllConditionedGram(cond, "projector Gram matrix at eta = " + std::to_string(setup.eta));

  ProjectorSet set;
  set.site = site;
  set.eta = setup.eta;
  set.shape = setup.rho_shape;
  set.gram = gram;
  set.weights = gram.fullPivLu().inverse();
  set.pseudos = pseudos;
  return set;
}

ValueAndSlope OddSet::theta(int k, double x) const {
  const double w = 2.0 * std::numbers::pi * k;
  const double y = x - site;
  return {std::sin(w * y), w * std::cos(w * y)};
}

double OddSet::projector(int k, double x) const {
  const double y = periodic_offset(x, site);
  if (std::abs(y) >= eta) return 0.0;
  const double rho = shape_at(shape, y / eta).value;
  double sum = 0.0;
  for (int j = 1; j <= size(); ++j) sum += inverse(j - 1, k - 1) * theta(j, site + y).value;
  return rho * sum;
}

OddSet build_odd_set(const PawSetup& setup, double site) {
  const int n = setup.N;
  const auto rule = quad::composite_rule(window_partition(0.0, setup.eta, setup.epsilon),
                                         setup.quadrature_nodes, kWindowPanels);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double t = rule.nodes[q];
    const double rho = shape_at(setup.rho_shape, t / setup.eta).value;
    Eigen::VectorXd v(n);
    for (int k = 1; k <= n; ++k) v(k - 1) = std::sin(2.0 * std::numbers::pi * k * t);
    gram.noalias() += rule.weights[q] * rho * v * v.transpose();
  }
  const double cond = condition_number(gram);
  if (cond > kMaxCondition)
    throw IllConditionedGram(cond, "odd Gram matrix at eta = " + std::to_string(setup.eta));
  OddSet set;
  set.site = site;
  set.eta = setup.eta;
  set.shape = setup.rho_shape;
  set.gram = gram;
  set.inverse = gram.fullPivLu().inverse();
  return set;
}

ValueAndSlope SiteData::atomic_at(int i, double x) const {
  return projectors.pseudos[i].outer(x);
}

SiteData build_site(double position, double Z, const PawSetup& setup, bool with_odd) {
  SiteData site;
  site.position = position;
  site.Z = Z;
  site.setup = setup;
  site.atomic = atomic_spectrum(Z, setup.N);
  site.projectors = build_projectors(build_pseudo_waves(site.atomic, setup, position), setup);
  if (with_odd) site.odd = build_odd_set(setup, position);
  return site;
}

PawAtoms build_atoms(const ModelParams& params, const PawSetup& setup, bool with_odd,
                     double origin) {
  setup.validate(params);
  return {build_site(origin, params.Z0, setup, with_odd),
          build_site(origin + params.a, params.Za, setup, with_odd)};
}

}  // namespace paw1d
