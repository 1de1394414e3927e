#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "paw1d/assemble.hpp"
#include "paw1d/eig.hpp"
#include "paw1d/errors.hpp"
#include "paw1d/quad.hpp"

using namespace paw1d;
using cd = std::complex<double>;

namespace {

double lowest(const GalerkinSystem& s) { return smallest_generalized(s.A, s.B).lambda; }

double window_integral(const SiteData& site, auto f) {
  const double eta = site.setup.eta;
  return quad::integrate(f, quad::Partition(site.position - eta, site.position + eta, {site.position}),
                         40, 10);
}

}  // namespace

TEST_CASE("direct matrix entries") {
  const ModelParams p;
  const int M = 8;
  const auto sys = assemble_H(p, M);
  CHECK(sys.B.isIdentity(0.0));
  for (int r = 0; r < 2 * M + 1; ++r)
    for (int c = 0; c < 2 * M + 1; ++c) {
      const int m = r - M, n = c - M;
      const auto e = [](int k, double x) { return std::polar(1.0, 2 * std::numbers::pi * k * x); };
      cd ref = -p.Z0 * std::conj(e(m, 0.0)) * e(n, 0.0) - p.Za * std::conj(e(m, p.a)) * e(n, p.a);
      if (m == n) ref += std::pow(2 * std::numbers::pi * n, 2);
      CHECK(std::abs(sys.A(r, c) - ref) < 1e-12);
    }
  const ModelParams weak{0.4, 1e-14, 1e-14};
  const auto free_sys = assemble_H(weak, 4);
  for (int r = 0; r < 9; ++r)
    CHECK(free_sys.A(r, r).real() == doctest::Approx(std::pow(2 * std::numbers::pi * (r - 4), 2)));
  CHECK_THROWS_AS(assemble_H(p, 0), ValidationError);
}

TEST_CASE("all systems are Hermitian with positive definite overlap") {
  const ModelParams p;
  for (Method m : {Method::direct, Method::paw_trunc, Method::paw_pseudo, Method::paw_pseudo_odd,
                   Method::vpaw}) {
    const auto sys = assemble(m, p, PawSetup::make(0.1, 2, 6), 64);
    CHECK(sys.hermitian_defect() < 1e-10);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(sys.B).eigenvalues().minCoeff() > 0.0);
    CHECK(sys.method == m);
  }
}

TEST_CASE("site corrections: symmetry, overlap entry and the eigenvalue identity") {
  const SiteData site = build_site(0.0, 10.0, PawSetup::make(0.1, 2, 6), true);
  const auto c = site_correction_trunc(site, 32);
  CHECK(c.DH.isApprox(c.DH.transpose(), 1e-15));
  const double ds11 = window_integral(site, [&](double x) {
    const double phi = site.atomic_at(0, x).value, pt = site.pseudos()[0](x).value;
    return phi * phi - pt * pt;
  });
  CHECK(c.DS(0, 0) == doctest::Approx(ds11).epsilon(1e-12));

  const Eigen::MatrixXd alt = trunc_dh_eigen_identity(site);
  CHECK((alt - alt.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
  const Eigen::MatrixXd sym = 0.5 * (alt + alt.transpose());
  CHECK((sym - c.DH).cwiseAbs().maxCoeff() <= 1e-6 * c.DH.cwiseAbs().maxCoeff());

  const auto odd = site_correction_odd(site, 32);
  CHECK(odd.DH.isApprox(odd.DH.transpose(), 1e-12));
  CHECK(odd.DS.isZero(0.0));
  // D_odd is linear in the site strength.
  const SiteData weaker = build_site(0.0, 5.0, PawSetup::make(0.1, 2, 6), true);
  CHECK(site_correction_odd(weaker, 32).DH.isApprox(0.5 * odd.DH, 1e-14));
}

TEST_CASE("zeroing the corrections recovers the base system") {
  const ModelParams p;
  const auto atoms = build_atoms(p, PawSetup::make(0.1, 2, 6), false);
  auto base = assemble_H(p, 32);
  auto sys = base;
  auto c = site_correction_trunc(atoms.first, 32);
  c.DH.setZero();
  c.DS.setZero();
  add_correction(sys, c);
  CHECK((sys.A - base.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((sys.B - base.B).cwiseAbs().maxCoeff() == 0.0);

  VpawCorrection empty;
  empty.P.resize(0, 65);
  add_correction(sys, empty);
  CHECK((sys.A - base.A).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("projector Fourier coefficients") {
  const SiteData site = build_site(0.4, 10.0, PawSetup::make(0.1, 2, 6), false);
  const int M = 40;
  const auto g = window_geometry(site.position, 0.1, 0.1);
  const std::vector<FunctionEvaluator> ev{site.projectors.evaluator(0), site.projectors.evaluator(1)};
  const auto P = projector_fourier(ev, g, M, 64);
  const auto P2 = projector_fourier(ev, g, M, 128);
  CHECK((P - P2).cwiseAbs().maxCoeff() < 1e-12);
  for (int n = 1; n <= M; ++n) {
    // Real and even about the site: c(-n) = conj(c(n)) and c(n) exp(-2 pi i n s) is real.
    CHECK(std::abs(P(0, M - n) - std::conj(P(0, M + n))) < 1e-13);
    CHECK(std::abs((P(0, M + n) * std::polar(1.0, -2 * std::numbers::pi * n * 0.4)).imag()) < 1e-13);
  }
  const double full = quad::integrate(
      [&](double x) { return site.projectors.value(1, x) * std::cos(2 * std::numbers::pi * 3 * x); },
      quad::Partition(0.0, 1.0, {0.3, 0.4, 0.5}), 64, 8);
  CHECK(P(1, M + 3).real() == doctest::Approx(full).epsilon(1e-12));
}

TEST_CASE("pseudopotential base matrix is stable under node doubling") {
  const ModelParams p;
  PawSetup s = PawSetup::make(0.1, 2, 6);
  const auto a = assemble_H_pseudo(p, 64, s);
  s.quadrature_nodes = 128;
  const auto b = assemble_H_pseudo(p, 64, s);
  CHECK((a.A - b.A).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXd c = pseudopotential_fourier(s, 3);
  CHECK(c(0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("translating both sites leaves the lowest eigenvalue unchanged") {
  const ModelParams p;
  for (Method m : {Method::direct, Method::paw_trunc, Method::paw_pseudo_odd, Method::vpaw}) {
    const double a = lowest(assemble(m, p, PawSetup::make(0.1, 2, 6), 48, 0.0));
    const double b = lowest(assemble(m, p, PawSetup::make(0.1, 2, 6), 48, 0.237));
    CHECK(a == doctest::Approx(b).epsilon(1e-9 / 32.0));
  }
}

TEST_CASE("truncated PAW with a small cut-off radius") {
  const ModelParams p;
  const double E0 = ground_state_energy(p);
  const double lam = lowest(assemble(Method::paw_trunc, p, PawSetup::make(0.01, 2, 6), 512));
  CHECK(lam <= E0);
  CHECK(std::abs(lam - E0) < 1e-3);
}

TEST_CASE("pseudopotential against Dirac column shrinks with eta") {
  const ModelParams p;
  double prev = 1e300;
  for (double eta : {0.2, 0.1, 0.05, 0.025}) {
    const auto setup = PawSetup::make(eta, 2, 6);
    const double diff = std::abs(lowest(assemble(Method::paw_pseudo, p, setup, 256)) -
                                 lowest(assemble(Method::paw_trunc, p, setup, 256)));
    CHECK(diff < prev);
    prev = diff;
  }
}

TEST_CASE("vpaw is variational and beats the direct method at M=200") {
  const ModelParams p;
  const double E0 = ground_state_energy(p);
  const double v = lowest(assemble(Method::vpaw, p, PawSetup::make(0.1, 2, 6), 200));
  const double d = lowest(assemble_H(p, 200));
  CHECK(v >= E0);
  CHECK(v - E0 < d - E0);
}

TEST_CASE("pseudopotential methods need epsilon equal to eta") {
  PawSetup s = PawSetup::make(0.1, 2, 6);
  s.epsilon = 0.05;
  CHECK_THROWS_AS(assemble(Method::paw_pseudo, ModelParams{}, s, 16), ValidationError);
  CHECK_NOTHROW(assemble(Method::paw_trunc, ModelParams{}, s, 16));
}

TEST_CASE("matrix dumps") {
  const auto sys = assemble(Method::paw_trunc, ModelParams{}, PawSetup::make(0.1, 2, 6), 4);
  std::stringstream bin;
  write_binary_dump(bin, sys);
  const auto back = read_binary_dump(bin);
  CHECK(back.method == Method::paw_trunc);
  CHECK(back.M == 4);
  CHECK(back.N == 2);
  CHECK(back.d == 6);
  CHECK(back.eta == 0.1);
  CHECK(back.A == sys.A);
  CHECK(back.B == sys.B);

  std::stringstream txt;
  write_text_dump(txt, sys);
  std::string head;
  std::getline(txt, head);
  CHECK(head == "# method=paw_trunc M=4 eta=0.10000000000000001 N=2 d=6 dimension=9");
  std::stringstream junk("not a dump");
  CHECK_THROWS_AS(read_binary_dump(junk), ValidationError);
}

TEST_CASE("method names") {
  for (Method m : {Method::direct, Method::paw_trunc, Method::paw_pseudo, Method::paw_pseudo_odd,
                   Method::vpaw})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("paw"), ValidationError);
}
