#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paw1d/model.hpp"
#include "paw1d/pawgen.hpp"

namespace paw1d {

enum class Method { direct, paw_trunc, paw_pseudo, paw_pseudo_odd, vpaw };

std::string_view to_string(Method method);
// Accepts the names printed by to_string; throws ValidationError otherwise.
Method parse_method(std::string_view name);

// Plane waves e_n(x) = exp(2 pi i n x), n = -M..M. Index k of a vector
// corresponds to n = k - M.
struct PlaneWaveBasis {
  int M = 0;
  explicit PlaneWaveBasis(int half_bandwidth);
  int dimension() const { return 2 * M + 1; }
  int wavenumber(int index) const { return index - M; }
};

struct GalerkinSystem {
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;
  Method method = Method::direct;
  ModelParams params;
  int M = 0;
  double eta = 0.0;  // 0 for the direct method
  int N = 0;
  int d = 0;

  // max |X - X^*| over both matrices.
  double hermitian_defect() const;
};

// Low-rank term P^* D_H P (and P^* D_S P) contributed by one site.
struct SiteCorrection {
  Eigen::MatrixXcd P;  // rows: projectors, columns: n = -M..M
  Eigen::MatrixXd DH;
  Eigen::MatrixXd DS;
  double asymmetry = 0.0;  // max |D_H - D_H^T| before symmetrization
  double site = 0.0;
};

// Ingredients of (Id + T)^* H (Id + T) for one site, with g_i = phi_i - pt_i.
struct VpawCorrection {
  Eigen::MatrixXcd P;    // <p_i, e_n>
  Eigen::MatrixXcd C;    // C(m, i) = h(e_m, g_i)
  Eigen::MatrixXcd S;    // S(m, i) = <e_m, g_i>
  Eigen::MatrixXd Hgg;   // h(g_i, g_j)
  Eigen::MatrixXd Sgg;   // <g_i, g_j>
  Eigen::MatrixXd duality;  // <p_i, phi_j>
  double site = 0.0;
};

// Fourier coefficients <f, e_n> = int f(x) exp(2 pi i n x) dx of a function
// supported in the window around `site`.
Eigen::MatrixXcd projector_fourier(const std::vector<FunctionEvaluator>& projectors,
                                   const WindowGeometry& window, int M, int nodes);

// Direct Galerkin matrix of H; sites at origin and origin + a.
GalerkinSystem assemble_H(const ModelParams& params, int M, double origin = 0.0);

// Kinetic part plus the smeared potential -Z0 chi_eps(x - s0) - Za chi_eps(x - sa).
GalerkinSystem assemble_H_pseudo(const ModelParams& params, int M, const PawSetup& setup,
                                 double origin = 0.0);

// int chi_eps(y) cos(2 pi k y) dy for k = 0..kmax.
Eigen::VectorXd pseudopotential_fourier(const PawSetup& setup, int kmax);

SiteCorrection site_correction_trunc(const SiteData& site, int M);
SiteCorrection site_correction_pseudo(const SiteData& site, int M);
// Odd projectors q_i with D_odd(i, j) = Z int chi_eta theta_i theta_j; D_S = 0.
SiteCorrection site_correction_odd(const SiteData& site, int M);
VpawCorrection site_correction_vpaw(const SiteData& site, int M);

// D_H of the truncated method through eps_j <phi_i, phi_j> minus the
// second-derivative form of the pseudo waves, without symmetrization.
Eigen::MatrixXd trunc_dh_eigen_identity(const SiteData& site);

void add_correction(GalerkinSystem& system, const SiteCorrection& correction);
void add_correction(GalerkinSystem& system, const VpawCorrection& correction);

GalerkinSystem assemble_paw_trunc(const ModelParams& params, const PawAtoms& atoms, int M);
GalerkinSystem assemble_paw_pseudo(const ModelParams& params, const PawAtoms& atoms, int M);
GalerkinSystem assemble_paw_pseudo_odd(const ModelParams& params, const PawAtoms& atoms, int M);
GalerkinSystem assemble_vpaw(const ModelParams& params, const PawAtoms& atoms, int M);

// Builds the sites the method needs and assembles its system. `setup` is
// ignored for the direct method.
GalerkinSystem assemble(Method method, const ModelParams& params, const PawSetup& setup, int M,
                        double origin = 0.0);

// Row-major dumps. Text: a '#' header line with method, M, eta, N, d, then
// "A" and "B" blocks with one row per line as "re im" pairs. Binary: the
// 8-byte tag "PAW1DMAT", int32 method, M, N, d, float64 eta, int64 dimension,
// then A and B as interleaved float64 (re, im).
void write_text_dump(std::ostream& out, const GalerkinSystem& system);
void write_binary_dump(std::ostream& out, const GalerkinSystem& system);
GalerkinSystem read_binary_dump(std::istream& in);

}  // namespace paw1d
