#include "paw1d/assemble.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "paw1d/errors.hpp"
#include "paw1d/quad.hpp"

namespace paw1d {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kWindowPanels = 4;

cd plane_wave(double n, double x) { return std::polar(1.0, kTwoPi * n * x); }

quad::Rule window_rule(const SiteData& site, int max_wavenumber = 0) {
  const auto g = window_geometry(site.position, site.setup.eta, site.setup.epsilon);
  const quad::Partition part(g.lo, g.hi, g.kinks);
  if (max_wavenumber > 0)
    return quad::oscillatory_rule(part, site.setup.quadrature_nodes, max_wavenumber);
  return quad::composite_rule(part, site.setup.quadrature_nodes, kWindowPanels);
}

// Atomic and pseudo waves with their slopes sampled on a window rule.
struct Samples {
  Eigen::VectorXd w;
  Eigen::VectorXd y;
  Eigen::MatrixXd phi, dphi, pt, dpt;  // N x nodes
};

Samples sample(const SiteData& site, const quad::Rule& rule) {
  const int n = static_cast<int>(rule.size());
  const int N = site.projectors.size();
  Samples s;
  s.w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), n);
  s.y.resize(n);
  s.phi.resize(N, n);
  s.dphi.resize(N, n);
  s.pt.resize(N, n);
  s.dpt.resize(N, n);
  for (int q = 0; q < n; ++q) {
    const double x = rule.nodes[q];
    s.y(q) = x - site.position;
    for (int i = 0; i < N; ++i) {
      const auto a = site.atomic_at(i, x);
      const auto p = site.pseudos()[i].inner(s.y(q));
      s.phi(i, q) = a.value;
      s.dphi(i, q) = a.slope;
      s.pt(i, q) = p.value;
      s.dpt(i, q) = p.slope;
    }
  }
  return s;
}

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& u, const Eigen::VectorXd& w,
                              const Eigen::MatrixXd& v) {
  return u * w.asDiagonal() * v.transpose();
}

Eigen::VectorXd values_at_site(const SiteData& site, bool pseudo) {
  const int N = site.projectors.size();
  Eigen::VectorXd v(N);
  for (int i = 0; i < N; ++i)
    v(i) = pseudo ? site.pseudos()[i].inner(0.0).value
                  : atomic_derivative(site.atomic[i], 0.0, 0);
  return v;
}

// h_eta(phi_i, phi_j) = int phi_i' phi_j' - Z phi_i(s) phi_j(s)
Eigen::MatrixXd atomic_window_form(const SiteData& site, const Samples& s) {
  const Eigen::VectorXd v = values_at_site(site, false);
  return weighted_gram(s.dphi, s.w, s.dphi) - site.Z * v * v.transpose();
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m, double* asymmetry) {
  if (asymmetry) *asymmetry = (m - m.transpose()).cwiseAbs().maxCoeff();
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXcd fourier_of_projectors(const SiteData& site, int M) {
  std::vector<FunctionEvaluator> ev;
  for (int k = 0; k < site.projectors.size(); ++k) ev.push_back(site.projectors.evaluator(k));
  return projector_fourier(ev, window_geometry(site.position, site.setup.eta, site.setup.epsilon),
                           M, site.setup.quadrature_nodes);
}

void hermitize(Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  m = std::move(h);
}

double second_derivative_legendre_like(int k, double t) {
  // (t P_{k-1})' = P_{k-1} + t^2 P_{k-2}
  if (k == 0) return 0.0;
  double v = legendre_like(k - 1, t);
  if (k >= 2) v += t * t * legendre_like(k - 2, t);
  return v;
}

void check_setup(const SiteData& site) {
  if (site.projectors.size() == 0) throw ValidationError("site has no projectors");
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::direct: return "direct";
    case Method::paw_trunc: return "paw_trunc";
    case Method::paw_pseudo: return "paw_pseudo";
    case Method::paw_pseudo_odd: return "paw_pseudo_odd";
    case Method::vpaw: return "vpaw";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::direct, Method::paw_trunc, Method::paw_pseudo, Method::paw_pseudo_odd,
                   Method::vpaw})
    if (to_string(m) == name) return m;
  throw ValidationError("unknown method '" + std::string(name) +
                        "' (expected direct, paw_trunc, paw_pseudo, paw_pseudo_odd or vpaw)");
}

PlaneWaveBasis::PlaneWaveBasis(int half_bandwidth) : M(half_bandwidth) {
  if (M < 1) throw ValidationError("M must be >= 1");
}

double GalerkinSystem::hermitian_defect() const {
  return std::max((A - A.adjoint()).cwiseAbs().maxCoeff(),
                  (B - B.adjoint()).cwiseAbs().maxCoeff());
}

Eigen::MatrixXcd projector_fourier(const std::vector<FunctionEvaluator>& projectors,
                                   const WindowGeometry& window, int M, int nodes) {
  const PlaneWaveBasis basis(M);
  const auto rule = quad::oscillatory_rule(quad::Partition(window.lo, window.hi, window.kinks),
                                           nodes, M);
  const int nq = static_cast<int>(rule.size());
  const int np = static_cast<int>(projectors.size());
  Eigen::MatrixXd F(np, nq);
  for (int q = 0; q < nq; ++q)
    for (int k = 0; k < np; ++k) F(k, q) = rule.weights[q] * projectors[k].value(rule.nodes[q]);
  Eigen::MatrixXcd E(nq, basis.dimension());
  for (int q = 0; q < nq; ++q)
    for (int j = 0; j < basis.dimension(); ++j) E(q, j) = plane_wave(basis.wavenumber(j), rule.nodes[q]);
  return F.cast<cd>() * E;
}

GalerkinSystem assemble_H(const ModelParams& params, int M, double origin) {
  params.validate();
  const PlaneWaveBasis basis(M);
  const int dim = basis.dimension();
  GalerkinSystem sys;
  sys.params = params;
  sys.M = M;
  sys.A.resize(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) {
      const double dn = basis.wavenumber(c) - basis.wavenumber(r);
      cd v = -params.Z0 * plane_wave(dn, origin) - params.Za * plane_wave(dn, origin + params.a);
      if (r == c) v += std::pow(kTwoPi * basis.wavenumber(c), 2);
      sys.A(r, c) = v;
    }
  }
  sys.B = Eigen::MatrixXcd::Identity(dim, dim);
  return sys;
}

Eigen::VectorXd pseudopotential_fourier(const PawSetup& setup, int kmax) {
  const double eps = setup.epsilon;
  const auto chi = cutoff_profile(ProfileKind::pseudopotential_chi, setup.chi_shape);
  const auto rule = quad::oscillatory_rule(quad::Partition(-eps, eps, {0.0}),
                                           setup.quadrature_nodes, std::max(kmax, 1));
  Eigen::VectorXd c = Eigen::VectorXd::Zero(kmax + 1);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double y = rule.nodes[q];
    const double wv = rule.weights[q] * chi.value(y / eps) / eps;
    for (int k = 0; k <= kmax; ++k) c(k) += wv * std::cos(kTwoPi * k * y);
  }
  return c;
}

GalerkinSystem assemble_H_pseudo(const ModelParams& params, int M, const PawSetup& setup,
                                 double origin) {
  params.validate();
  const PlaneWaveBasis basis(M);
  const int dim = basis.dimension();
  const Eigen::VectorXd c = pseudopotential_fourier(setup, 2 * M);
  GalerkinSystem sys;
  sys.params = params;
  sys.M = M;
  sys.A.resize(dim, dim);
  for (int col = 0; col < dim; ++col) {
    for (int r = 0; r < dim; ++r) {
      const int dn = basis.wavenumber(col) - basis.wavenumber(r);
      cd v = -c(std::abs(dn)) *
             (params.Z0 * plane_wave(dn, origin) + params.Za * plane_wave(dn, origin + params.a));
      if (r == col) v += std::pow(kTwoPi * basis.wavenumber(col), 2);
      sys.A(r, col) = v;
    }
  }
  sys.B = Eigen::MatrixXcd::Identity(dim, dim);
  return sys;
}

SiteCorrection site_correction_trunc(const SiteData& site, int M) {
  check_setup(site);
  const Samples s = sample(site, window_rule(site));
  const Eigen::VectorXd pt0 = values_at_site(site, true);
  const Eigen::MatrixXd hpt = weighted_gram(s.dpt, s.w, s.dpt) - site.Z * pt0 * pt0.transpose();
  SiteCorrection out;
  out.site = site.position;
  out.P = fourier_of_projectors(site, M);
  out.DH = symmetrize(atomic_window_form(site, s) - hpt, &out.asymmetry);
  out.DS = symmetrize(weighted_gram(s.phi, s.w, s.phi) - weighted_gram(s.pt, s.w, s.pt), nullptr);
  return out;
}

SiteCorrection site_correction_pseudo(const SiteData& site, int M) {
  check_setup(site);
  const Samples s = sample(site, window_rule(site));
  const double eps = site.setup.epsilon;
  const auto chi = cutoff_profile(ProfileKind::pseudopotential_chi, site.setup.chi_shape);
  Eigen::VectorXd wchi(s.w.size());
  for (int q = 0; q < s.w.size(); ++q) wchi(q) = s.w(q) * chi.value(s.y(q) / eps) / eps;
  const Eigen::MatrixXd hps =
      weighted_gram(s.dpt, s.w, s.dpt) - site.Z * weighted_gram(s.pt, wchi, s.pt);
  SiteCorrection out;
  out.site = site.position;
  out.P = fourier_of_projectors(site, M);
  out.DH = symmetrize(atomic_window_form(site, s) - hps, &out.asymmetry);
  out.DS = symmetrize(weighted_gram(s.phi, s.w, s.phi) - weighted_gram(s.pt, s.w, s.pt), nullptr);
  return out;
}

SiteCorrection site_correction_odd(const SiteData& site, int M) {
  if (!site.odd) throw ValidationError("site was built without odd projectors");
  const OddSet& odd = *site.odd;
  const int N = odd.size();
  const auto rule = window_rule(site);
  const auto chi = cutoff_profile(ProfileKind::pseudopotential_chi, site.setup.chi_shape);
  const double eta = site.setup.eta;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double x = rule.nodes[q];
    const double wv = rule.weights[q] * chi.value((x - site.position) / eta) / eta;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        D(i, j) += wv * odd.theta(i + 1, x).value * odd.theta(j + 1, x).value;
  }
  std::vector<FunctionEvaluator> ev;
  for (int k = 1; k <= N; ++k)
    ev.emplace_back([odd, k](double x) { return ValueAndSlope{odd.projector(k, x), 0.0}; },
                    std::vector<double>{});
  SiteCorrection out;
  out.site = site.position;
  out.P = projector_fourier(ev, window_geometry(site.position, eta, site.setup.epsilon), M,
                            site.setup.quadrature_nodes);
  out.DH = symmetrize(site.Z * D, &out.asymmetry);
  out.DS = Eigen::MatrixXd::Zero(N, N);
  return out;
}

VpawCorrection site_correction_vpaw(const SiteData& site, int M) {
  check_setup(site);
  const PlaneWaveBasis basis(M);
  const int dim = basis.dimension();
  const int N = site.projectors.size();
  VpawCorrection out;
  out.site = site.position;

  {
    const Samples s = sample(site, window_rule(site));
    Eigen::VectorXd wrho(s.w.size());
    for (int q = 0; q < s.w.size(); ++q)
      wrho(q) = s.w(q) * site.projectors.cutoff(site.position + s.y(q));
    out.duality = site.projectors.weights * weighted_gram(s.pt, wrho, s.phi);
    const double cond = condition_number(out.duality);
    if (cond > kMaxCondition)
      throw Error(ErrorCode::assumption_violated,
                  "projector/atomic duality matrix is numerically singular (cond " +
                      std::to_string(cond) + ") at eta = " + std::to_string(site.setup.eta));
    const Eigen::MatrixXd g = s.phi - s.pt, dg = s.dphi - s.dpt;
    const Eigen::VectorXd g0 = values_at_site(site, false) - values_at_site(site, true);
    out.Hgg = symmetrize(weighted_gram(dg, s.w, dg) - site.Z * g0 * g0.transpose(), nullptr);
    out.Sgg = symmetrize(weighted_gram(g, s.w, g), nullptr);
  }

  const Samples s = sample(site, window_rule(site, M));
  const int nq = static_cast<int>(s.w.size());
  const Eigen::MatrixXd wg = (s.phi - s.pt) * s.w.asDiagonal();
  const Eigen::MatrixXd wdg = (s.dphi - s.dpt) * s.w.asDiagonal();
  const Eigen::VectorXd g0 = values_at_site(site, false) - values_at_site(site, true);
  Eigen::MatrixXcd Econj(dim, nq);
  for (int j = 0; j < dim; ++j)
    for (int q = 0; q < nq; ++q)
      Econj(j, q) = plane_wave(-basis.wavenumber(j), site.position + s.y(q));
  out.S = Econj * wg.transpose().cast<cd>();
  const Eigen::MatrixXcd dS = Econj * wdg.transpose().cast<cd>();
  out.C.resize(dim, N);
  for (int j = 0; j < dim; ++j) {
    const double n = basis.wavenumber(j);
    const cd at_site = plane_wave(-n, site.position);
    for (int i = 0; i < N; ++i)
      out.C(j, i) = cd(0.0, -kTwoPi * n) * dS(j, i) - site.Z * at_site * g0(i);
  }
  out.P = fourier_of_projectors(site, M);
  return out;
}

Eigen::MatrixXd trunc_dh_eigen_identity(const SiteData& site) {
  check_setup(site);
  const Samples s = sample(site, window_rule(site));
  const int N = site.projectors.size();
  const double eta = site.setup.eta;
  Eigen::MatrixXd d2pt(N, s.w.size());
  for (int i = 0; i < N; ++i) {
    const auto& poly = site.pseudos()[i].poly;
    for (int q = 0; q < s.w.size(); ++q) {
      double v = 0.0;
      for (std::size_t k = 0; k < poly.size(); ++k)
        v += poly[k] * second_derivative_legendre_like(static_cast<int>(k), s.y(q) / eta);
      d2pt(i, q) = v / (eta * eta);
    }
  }
  const Eigen::MatrixXd overlap = weighted_gram(s.phi, s.w, s.phi);
  Eigen::MatrixXd atomic(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) atomic(i, j) = site.atomic[j].energy * overlap(i, j);
  const Eigen::VectorXd pt0 = values_at_site(site, true);
  const Eigen::MatrixXd pseudo =
      -weighted_gram(s.pt, s.w, d2pt) - site.Z * pt0 * pt0.transpose();
  return atomic - pseudo;
}

void add_correction(GalerkinSystem& system, const SiteCorrection& c) {
  const Eigen::MatrixXcd DP = c.DH.cast<cd>() * c.P;
  system.A.noalias() += c.P.adjoint() * DP;
  if (c.DS.cwiseAbs().maxCoeff() > 0.0) {
    const Eigen::MatrixXcd SP = c.DS.cast<cd>() * c.P;
    system.B.noalias() += c.P.adjoint() * SP;
  }
  hermitize(system.A);
  hermitize(system.B);
}

void add_correction(GalerkinSystem& system, const VpawCorrection& c) {
  if (c.P.rows() == 0) return;
  const Eigen::MatrixXcd CP = c.C * c.P;
  const Eigen::MatrixXcd SP = c.S * c.P;
  system.A += CP + CP.adjoint();
  system.A.noalias() += c.P.adjoint() * (c.Hgg.cast<cd>() * c.P);
  system.B += SP + SP.adjoint();
  system.B.noalias() += c.P.adjoint() * (c.Sgg.cast<cd>() * c.P);
  hermitize(system.A);
  hermitize(system.B);
}

namespace {

void tag(GalerkinSystem& sys, Method method, const PawAtoms& atoms) {
  sys.method = method;
  sys.eta = atoms.first.setup.eta;
  sys.N = atoms.first.setup.N;
  sys.d = atoms.first.setup.d;
}

}  // namespace

GalerkinSystem assemble_paw_trunc(const ModelParams& params, const PawAtoms& atoms, int M) {
  auto sys = assemble_H(params, M, atoms.first.position);
  for (const SiteData* s : {&atoms.first, &atoms.second})
    add_correction(sys, site_correction_trunc(*s, M));
  tag(sys, Method::paw_trunc, atoms);
  return sys;
}

GalerkinSystem assemble_paw_pseudo(const ModelParams& params, const PawAtoms& atoms, int M) {
  auto sys = assemble_H_pseudo(params, M, atoms.first.setup, atoms.first.position);
  for (const SiteData* s : {&atoms.first, &atoms.second})
    add_correction(sys, site_correction_pseudo(*s, M));
  tag(sys, Method::paw_pseudo, atoms);
  return sys;
}

GalerkinSystem assemble_paw_pseudo_odd(const ModelParams& params, const PawAtoms& atoms, int M) {
  auto sys = assemble_paw_pseudo(params, atoms, M);
  for (const SiteData* s : {&atoms.first, &atoms.second})
    add_correction(sys, site_correction_odd(*s, M));
  tag(sys, Method::paw_pseudo_odd, atoms);
  return sys;
}

GalerkinSystem assemble_vpaw(const ModelParams& params, const PawAtoms& atoms, int M) {
  auto sys = assemble_H(params, M, atoms.first.position);
  for (const SiteData* s : {&atoms.first, &atoms.second})
    add_correction(sys, site_correction_vpaw(*s, M));
  tag(sys, Method::vpaw, atoms);
  return sys;
}

GalerkinSystem assemble(Method method, const ModelParams& params, const PawSetup& setup, int M,
                        double origin) {
  if (method == Method::direct) return assemble_H(params, M, origin);
  if (method == Method::paw_pseudo || method == Method::paw_pseudo_odd) {
    // The pseudopotential radius equals the cut-off radius for these methods.
    if (std::abs(setup.epsilon - setup.eta) > 1e-15 * setup.eta)
      throw ValidationError("pseudopotential methods require epsilon = eta");
  }
  const PawAtoms atoms = build_atoms(params, setup, method == Method::paw_pseudo_odd, origin);
  switch (method) {
    case Method::paw_trunc: return assemble_paw_trunc(params, atoms, M);
    case Method::paw_pseudo: return assemble_paw_pseudo(params, atoms, M);
    case Method::paw_pseudo_odd: return assemble_paw_pseudo_odd(params, atoms, M);
    case Method::vpaw: return assemble_vpaw(params, atoms, M);
    default: break;
  }
  throw ValidationError("unsupported method");
}

void write_text_dump(std::ostream& out, const GalerkinSystem& sys) {
  std::ostringstream head;
  head.precision(17);
  head << "# method=" << to_string(sys.method) << " M=" << sys.M << " eta=" << sys.eta
       << " N=" << sys.N << " d=" << sys.d << " dimension=" << sys.A.rows() << '\n';
  out << head.str();
  const auto prev = out.precision(17);
  for (const auto* mat : {&sys.A, &sys.B}) {
    out << (mat == &sys.A ? "A\n" : "B\n");
    for (Eigen::Index r = 0; r < mat->rows(); ++r) {
      for (Eigen::Index c = 0; c < mat->cols(); ++c) {
        if (c) out << ' ';
        out << (*mat)(r, c).real() << ' ' << (*mat)(r, c).imag();
      }
      out << '\n';
    }
  }
  out.precision(prev);
}

namespace {

constexpr std::array<char, 8> kMagic{'P', 'A', 'W', '1', 'D', 'M', 'A', 'T'};

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw ValidationError("truncated matrix dump");
  return v;
}

}  // namespace

void write_binary_dump(std::ostream& out, const GalerkinSystem& sys) {
  out.write(kMagic.data(), kMagic.size());
  put<std::int32_t>(out, static_cast<std::int32_t>(sys.method));
  put<std::int32_t>(out, sys.M);
  put<std::int32_t>(out, sys.N);
  put<std::int32_t>(out, sys.d);
  put<double>(out, sys.eta);
  put<std::int64_t>(out, sys.A.rows());
  for (const auto* mat : {&sys.A, &sys.B})
    for (Eigen::Index r = 0; r < mat->rows(); ++r)
      for (Eigen::Index c = 0; c < mat->cols(); ++c) {
        put<double>(out, (*mat)(r, c).real());
        put<double>(out, (*mat)(r, c).imag());
      }
}

GalerkinSystem read_binary_dump(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ValidationError("not a matrix dump");
  GalerkinSystem sys;
  const auto method = get<std::int32_t>(in);
  if (method < 0 || method > static_cast<std::int32_t>(Method::vpaw))
    throw ValidationError("bad method tag in matrix dump");
  sys.method = static_cast<Method>(method);
  sys.M = get<std::int32_t>(in);
  sys.N = get<std::int32_t>(in);
  sys.d = get<std::int32_t>(in);
  sys.eta = get<double>(in);
  const auto dim = get<std::int64_t>(in);
  if (dim < 0 || dim > (1 << 16)) throw ValidationError("bad dimension in matrix dump");
  for (auto* mat : {&sys.A, &sys.B}) {
    mat->resize(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c) {
        const double re = get<double>(in);
        (*mat)(r, c) = cd(re, get<double>(in));
      }
  }
  return sys;
}

}  // namespace paw1d
