// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here and not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "paw1d/assemble.hpp"
#include "paw1d/eig.hpp"
#include "paw1d/errors.hpp"
#include "paw1d/quad.hpp"
#include "paw1d/study.hpp"

using namespace paw1d;

namespace {

constexpr double kRelTolDirect = 1e-3;
constexpr double kDualityTol = 1e-10;
constexpr double kTruncUpper = 1e-9;
constexpr double kTruncMinSlope = 0.9;
constexpr double kPseudoSlopeLo = 0.8, kPseudoSlopeHi = 1.5;
constexpr double kOddSlopeLo = 3.5, kOddSlopeHi = 4.5;
constexpr double kHermitianTol = 1e-10;
constexpr double kAsymmetryTol = 1e-8;
constexpr double kDoublingTol = 1e-10;
constexpr double kResidualTol = 1e-8;
constexpr double kCrossCheckTol = 1e-6;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string list(const std::vector<SweepRecord>& recs) {
  std::string s;
  for (const auto& r : recs) {
    if (!s.empty()) s += ' ';
    s += r.ok() ? fmt("%.3e", r.error) : r.error_code;
  }
  return s;
}

std::string fit_text(const SlopeFit& f) {
  return "slope=" + fmt("%.3f", f.slope) + " R2=" + fmt("%.4f", f.r_squared) + " window=[" +
         fmt("%g", f.window.back()) + ", " + fmt("%g", f.window.front()) + "]";
}

double window_integral(const SiteData& site, const std::function<double(double)>& f) {
  const double eta = site.setup.eta;
  return quad::integrate(f, quad::Partition(site.position - eta, site.position + eta, {site.position}),
                         48, 6);
}

Outcome criterion1() {
  const ModelParams p;
  const double E0 = ground_state_energy(p);
  const auto sys = assemble_H(p, 4096);
  const auto r = smallest_generalized(sys.A, sys.B);
  const double rel = std::abs(r.lambda - E0) / std::abs(E0);
  return {rel <= kRelTolDirect, "M=4096 lambda=" + fmt("%.12f", r.lambda) + " E0=" +
                                    fmt("%.12f", E0) + " rel_error=" + fmt("%.3e", rel) +
                                    " (tol " + fmt("%.0e", kRelTolDirect) + ")"};
}

Outcome criterion2() {
  double worst_p = 0.0, worst_q = 0.0;
  int cases = 0;
  std::string rejected, over;
  for (int N : {1, 2, 3})
    for (int d : {std::max(N, 2), 6})
      for (double eta : default_eta_grid()) {
        ++cases;
        const std::string tag = "(N=" + std::to_string(N) + ",d=" + std::to_string(d) +
                                ",eta=" + fmt("%g", eta) + ")";
        double p_err = 0.0, q_err = 0.0;
        try {
          const SiteData site = build_site(0.0, 10.0, PawSetup::make(eta, N, d), true);
          for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
              const double pp = window_integral(site, [&](double x) {
                return site.projectors.value(i, x) * site.pseudos()[j](x).value;
              });
              const double qq = window_integral(site, [&](double x) {
                return site.odd->projector(i + 1, x) * site.odd->theta(j + 1, x).value;
              });
              p_err = std::max(p_err, std::abs(pp - (i == j)));
              q_err = std::max(q_err, std::abs(qq - (i == j)));
            }
        } catch (const Error& e) {
          rejected += " " + tag + ":" + std::string(to_string(e.code()));
          continue;
        }
        worst_p = std::max(worst_p, p_err);
        worst_q = std::max(worst_q, q_err);
        if (std::max(p_err, q_err) > kDualityTol) over += " " + tag + ":" + fmt("%.1e", std::max(p_err, q_err));
      }
  return {rejected.empty() && over.empty(),
          std::to_string(cases) + " setups (d=max(N,2) stands in for d=N) max|<p,pt>-I|=" +
              fmt("%.2e", worst_p) + " max|<q,theta>-I|=" + fmt("%.2e", worst_q) + " (tol " +
              fmt("%.0e", kDualityTol) + ")" + (over.empty() ? "" : " over tol:" + over) +
              (rejected.empty() ? "" : " rejected:" + rejected)};
}

Outcome slope_criterion(Method method, int M, int N, double lo, double hi, bool upper_bound) {
  const auto recs = eta_sweep(method, ModelParams{}, PawSetup::make(0.1, N, 6), M, default_eta_grid());
  bool below = true;
  for (const auto& r : recs) below = below && r.ok() && r.error <= kTruncUpper;
  const auto fit = fit_slope(recs, Abscissa::eta, default_fit_window(recs, Abscissa::eta));
  const bool slope_ok = fit.slope >= lo && fit.slope <= hi;
  std::string d = "M=" + std::to_string(M) + " N=" + std::to_string(N) + " d=6 errors={" +
                  list(recs) + "} " + fit_text(fit);
  if (upper_bound) d += std::string(" lambda<=E0+1e-9:") + (below ? "yes" : "no");
  d += " (slope range [" + fmt("%g", lo) + ", " + (std::isinf(hi) ? "inf" : fmt("%g", hi)) + "])";
  return {slope_ok && (!upper_bound || below), d};
}

Outcome criterion6() {
  const ModelParams p;
  const std::vector<int> Ms{50, 100, 200, 400, 800};
  const auto v = m_sweep(Method::vpaw, p, PawSetup::make(0.1, 2, 6), Ms);
  const auto d = m_sweep(Method::direct, p, PawSetup::make(0.1, 2, 6), Ms);
  bool positive = true, monotone = true, faster = true;
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    positive = positive && v[i].ok() && v[i].error > 0.0;
    if (i) monotone = monotone && v[i].error < v[i - 1].error;
    faster = faster && d[i].ok() && v[i].abs_error < d[i].abs_error;
  }
  return {positive && monotone && faster,
          "vpaw errors={" + list(v) + "} direct errors={" + list(d) + "} positive:" +
              (positive ? "yes" : "no") + " decreasing:" + (monotone ? "yes" : "no") +
              " below direct:" + (faster ? "yes" : "no")};
}

Outcome criterion7() {
  const ModelParams p;
  const int M = 64;
  double herm = 0.0, asym = 0.0, doubling = 0.0, residual = 0.0;
  bool definite = true;
  int cases = 0;
  for (double eta : {0.2, 0.1, 0.05})
    for (int N : {1, 2, 3})
      for (Method m : {Method::paw_trunc, Method::vpaw}) {
        PawSetup s = PawSetup::make(eta, N, 6);
        const auto sys = assemble(m, p, s, M);
        herm = std::max(herm, sys.hermitian_defect());
        definite = definite && Eigen::LLT<Eigen::MatrixXcd>(sys.B).info() == Eigen::Success;
        const auto r = smallest_generalized(sys.A, sys.B);
        residual = std::max(residual, r.residual / residual_scale(sys.A, sys.B, r.lambda));
        s.quadrature_nodes = 128;
        const auto fine = assemble(m, p, s, M);
        const double lf = smallest_generalized(fine.A, fine.B).lambda;
        doubling = std::max(doubling, std::abs(lf - r.lambda) / std::max(1.0, std::abs(r.lambda)));
        const auto atoms = build_atoms(p, PawSetup::make(eta, N, 6), false);
        for (const SiteData* site : {&atoms.first, &atoms.second}) {
          const Eigen::MatrixXd alt = trunc_dh_eigen_identity(*site);
          asym = std::max(asym, (alt - alt.transpose()).cwiseAbs().maxCoeff());
        }
        ++cases;
      }
  const bool ok = herm <= kHermitianTol && definite && asym <= kAsymmetryTol &&
                  doubling <= kDoublingTol && residual <= kResidualTol;
  return {ok, std::to_string(cases) + " systems (eta x N x {paw_trunc, vpaw}, M=64): hermitian=" +
                  fmt("%.1e", herm) + " B_definite=" + (definite ? "yes" : "no") +
                  " D_H_asymmetry=" + fmt("%.1e", asym) + " node_doubling=" + fmt("%.1e", doubling) +
                  " scaled_residual=" + fmt("%.1e", residual)};
}

Outcome criterion8() {
  const auto atoms = build_atoms(ModelParams{}, PawSetup::make(0.1, 2, 6), false);
  double worst = 0.0;
  for (const SiteData* site : {&atoms.first, &atoms.second}) {
    const auto c = site_correction_trunc(*site, 8);
    const Eigen::MatrixXd alt = trunc_dh_eigen_identity(*site);
    const Eigen::MatrixXd sym = 0.5 * (alt + alt.transpose());
    worst = std::max(worst, (sym - c.DH).cwiseAbs().maxCoeff() / c.DH.cwiseAbs().maxCoeff());
  }
  return {worst <= kCrossCheckTol, "eta=0.1 N=2 relative difference=" + fmt("%.2e", worst) +
                                       " (tol " + fmt("%.0e", kCrossCheckTol) + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact vs direct Galerkin", criterion1},
      {"projector duality", criterion2},
      {"truncated PAW eta sweep",
       [] { return slope_criterion(Method::paw_trunc, 512, 2, kTruncMinSlope, INFINITY, true); }},
      {"PAW with pseudopotential eta sweep",
       [] { return slope_criterion(Method::paw_pseudo, 1000, 2, kPseudoSlopeLo, kPseudoSlopeHi, false); }},
      {"odd-augmented PAW eta sweep",
       [] { return slope_criterion(Method::paw_pseudo_odd, 1000, 2, kOddSlopeLo, kOddSlopeHi, false); }},
      {"VPAW variational and faster than direct", criterion6},
      {"structural suite", criterion7},
      {"window form cross-check", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("criterion %zu [%s]: %s  %s  time=%.1fs\n", i + 1, criteria[i].first.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed ? 1 : 0;
}
