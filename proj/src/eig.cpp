#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "paw1d/eig.hpp"
#include "paw1d/errors.hpp"

namespace paw1d {

namespace {

using cd = std::complex<double>;

void fix_phase_and_normalize(const Eigen::MatrixXcd& B, Eigen::VectorXcd& x) {
  Eigen::Index k = 0;
  x.cwiseAbs().maxCoeff(&k);
  if (std::abs(x(k)) > 0.0) x *= std::conj(x(k)) / std::abs(x(k));
  const double norm = std::sqrt(std::real(x.dot(B * x)));
  if (norm > 0.0) x /= norm;
  x(k) = cd(x(k).real(), 0.0);
}

double residual_of(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                   const Eigen::VectorXcd& x, double lambda) {
  return (A * x - lambda * (B * x)).norm() / x.norm();
}

bool is_identity(const Eigen::MatrixXcd& B) { return B.isIdentity(0.0); }

EigResult dense_solve(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                      const EigOptions& opt) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::MatrixXcd a = A, b = B;
  Eigen::VectorXd w(n);
  Eigen::VectorXcd z(n);
  std::vector<lapack_int> ifail(n);
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_zhegvx(LAPACK_COL_MAJOR, 1, 'V', 'I', 'U', n, a.data(), n, b.data(), n, 0.0, 0.0, 1,
                     1, 0.0, &found, w.data(), z.data(), n, ifail.data());
  if (info > n) throw NotPositiveDefinite(static_cast<long>(info - n - 1), opt.context);
  if (info != 0 || found != 1)
    throw Error(ErrorCode::no_convergence,
                "dense generalized eigensolver failed (info " + std::to_string(info) + ")" +
                    (opt.context.empty() ? "" : ", " + opt.context));
  EigResult r;
  r.vector = z;
  r.lambda = rayleigh_quotient(A, B, z);

  // The reduction to standard form loses accuracy when B is far from the
  // identity; a few steps of inverse iteration restore it.
  if (opt.refinement_steps > 0) {
    const Eigen::MatrixXcd shifted = A - cd(w(0)) * B;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    Eigen::VectorXcd x = z;
    for (int s = 0; s < opt.refinement_steps; ++s) {
      Eigen::VectorXcd y = lu.solve(B * x);
      if (!y.allFinite() || y.norm() == 0.0) break;
      x = y / y.norm();
    }
    if (x.allFinite()) {
      const double q = rayleigh_quotient(A, B, x);
      if (std::isfinite(q) && q < r.lambda) {
        r.lambda = q;
        r.vector = x;
      }
    }
  }
  fix_phase_and_normalize(B, r.vector);
  r.residual = residual_of(A, B, r.vector, r.lambda);
  return r;
}

// Orthonormalizes the columns of S against B (S^* B S = I), dropping
// directions that are numerically dependent.
Eigen::MatrixXcd b_orthonormal(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& BS) {
  const Eigen::MatrixXcd G = S.adjoint() * BS;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (G + G.adjoint()));
  const auto& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-13 * top) keep.push_back(i);
  Eigen::MatrixXcd T(G.rows(), keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j)
    T.col(j) = es.eigenvectors().col(keep[j]) / std::sqrt(ev(keep[j]));
  return T;
}

EigResult iterative_solve(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                          const EigOptions& opt) {
  const Eigen::Index n = A.rows();
  const bool unit_b = is_identity(B);
  if (!unit_b) {
    Eigen::LLT<Eigen::MatrixXcd> llt(B);
    if (llt.info() != Eigen::Success) {
      // Locate the first failing leading minor for the error report.
      Eigen::Index lo = 1, hi = n;
      while (lo < hi) {
        const Eigen::Index mid = (lo + hi) / 2;
        Eigen::LLT<Eigen::MatrixXcd> part(B.topLeftCorner(mid, mid));
        if (part.info() == Eigen::Success) lo = mid + 1; else hi = mid;
      }
      throw NotPositiveDefinite(static_cast<long>(lo - 1), opt.context);
    }
  }
  auto applyB = [&](const Eigen::MatrixXcd& X) -> Eigen::MatrixXcd {
    return unit_b ? X : Eigen::MatrixXcd(B * X);
  };

  // Warm start: lowest mode of the central block of the basis.
  const Eigen::Index m = std::min<Eigen::Index>(n, 1025);
  const Eigen::Index off = (n - m) / 2;
  EigOptions sub = opt;
  sub.refinement_steps = 0;
  const EigResult start = dense_solve(A.block(off, off, m, m), B.block(off, off, m, m), sub);
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
  x.segment(off, m) = start.vector;

  const Eigen::VectorXd da = A.diagonal().real();
  const Eigen::VectorXd db = B.diagonal().real();
  const double scale = A.cwiseAbs().maxCoeff();

  Eigen::VectorXcd Ax = A * x, Bx = applyB(x);
  double lambda = std::real(x.dot(Ax)) / std::real(x.dot(Bx));
  Eigen::VectorXcd p, Ap, Bp;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const Eigen::VectorXcd r = Ax - lambda * Bx;
    const double res = r.norm() / x.norm();
    if (res <= opt.tolerance * (scale + std::abs(lambda) * B.cwiseAbs().maxCoeff())) {
      EigResult out;
      out.vector = x;
      out.lambda = rayleigh_quotient(A, B, x);
      out.iterations = it;
      fix_phase_and_normalize(B, out.vector);
      out.residual = residual_of(A, B, out.vector, out.lambda);
      return out;
    }
    Eigen::VectorXcd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = std::max(std::abs(da(i) - lambda * db(i)), 1e-3 * (1.0 + std::abs(lambda)));
      w(i) = r(i) / d;
    }
    const Eigen::VectorXcd Aw = A * w, Bw = applyB(w);
    const int k = p.size() ? 3 : 2;
    Eigen::MatrixXcd S(n, k), AS(n, k), BS(n, k);
    S.col(0) = x; S.col(1) = w;
    AS.col(0) = Ax; AS.col(1) = Aw;
    BS.col(0) = Bx; BS.col(1) = Bw;
    if (k == 3) { S.col(2) = p; AS.col(2) = Ap; BS.col(2) = Bp; }
    const Eigen::MatrixXcd T = b_orthonormal(S, BS);
    const Eigen::MatrixXcd H = T.adjoint() * (S.adjoint() * AS) * T;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (H + H.adjoint()));
    const Eigen::VectorXcd c = T * es.eigenvectors().col(0);
    // New search direction: the part of the update outside x.
    Eigen::VectorXcd cp = c;
    cp(0) = 0.0;
    p = S * cp; Ap = AS * cp; Bp = BS * cp;
    x = S * c; Ax = AS * c; Bx = BS * c;
    const double nx = x.norm();
    x /= nx; Ax /= nx; Bx /= nx;
    lambda = std::real(x.dot(Ax)) / std::real(x.dot(Bx));
  }
  throw Error(ErrorCode::no_convergence,
              "iterative eigensolver did not converge in " + std::to_string(opt.max_iterations) +
                  " iterations" + (opt.context.empty() ? "" : ", " + opt.context));
}

}  // namespace

double rayleigh_quotient(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                         const Eigen::VectorXcd& x) {
  return std::real(x.dot(A * x)) / std::real(x.dot(B * x));
}

double residual_scale(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double lambda) {
  return A.cwiseAbs().maxCoeff() + std::abs(lambda) * B.cwiseAbs().maxCoeff();
}

EigResult smallest_generalized(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                               const EigOptions& options) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows() || A.rows() == 0)
    throw ValidationError("A and B must be square matrices of equal, nonzero size");
  if (A.rows() > options.dense_limit) return iterative_solve(A, B, options);
  return dense_solve(A, B, options);
}

}  // namespace paw1d
