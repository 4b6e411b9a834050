#include "decstab/matrix_analysis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace decstab {
namespace {

void require_square(const Matrix& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(op) + ": matrix must be square, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  if (a.size() > 0 && !a.allFinite()) {
    throw DomainError(std::string(op) + ": matrix has non-finite entries");
  }
}

}  // namespace

double strict_tol(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return kStrictTol * a.cwiseAbs().maxCoeff();
}

Matrix comparison_matrix(const Matrix& a) {
  require_square(a, "comparison_matrix");
  Matrix m = -a.cwiseAbs();
  m.diagonal() = a.diagonal().cwiseAbs();
  return m;
}

SpectralReport spectral_report(const Matrix& a) {
  require_square(a, "spectral_report");
  SpectralReport rep;
  if (a.rows() == 0) {
    rep.spectral_abscissa = -std::numeric_limits<double>::infinity();
    rep.is_hurwitz = true;
    return rep;
  }
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("spectral_report: eigensolver failed to converge on " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " matrix");
  }
  rep.eigenvalues = solver.eigenvalues();
  rep.spectral_abscissa = rep.eigenvalues.real().maxCoeff();
  rep.is_hurwitz = rep.spectral_abscissa < -strict_tol(a);
  return rep;
}

bool is_m_matrix(const Matrix& a) {
  require_square(a, "is_m_matrix");
  const Index n = a.rows();
  const double tol = strict_tol(a);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && a(i, j) > tol) return false;
    }
  }
  const SpectralReport rep = spectral_report(a);
  return rep.eigenvalues.real().minCoeff() > tol;
}

HMatrixCertificate h_matrix_certificate(const Matrix& a) {
  require_square(a, "h_matrix_certificate");
  HMatrixCertificate cert;
  const Index n = a.rows();
  if (n == 0) {
    cert.diagnostic = "empty matrix";
    return cert;
  }

  const Matrix comp = comparison_matrix(a);
  Eigen::FullPivLU<Matrix> lu(comp.transpose());
  if (!lu.isInvertible()) {
    cert.diagnostic = "comparison matrix is singular; not an M-matrix";
    return cert;
  }
  const Vector d = lu.solve(Vector::Ones(n));

  const double d_max = d.maxCoeff();
  if (!(d.minCoeff() > kStrictTol * std::max(d_max, 0.0))) {
    cert.diagnostic = "scaling solve produced non-positive weights";
    return cert;
  }

  // Re-evaluate the column dominance slack from A itself rather than trusting
  // the solve; by construction every column slack equals 1 up to roundoff.
  double margin = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < n; ++j) {
    double off = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (i != j) off += std::abs(a(i, j)) * d(i);
    }
    margin = std::min(margin, std::abs(a(j, j)) * d(j) - off);
  }
  if (!(margin > strict_tol(a) * d_max)) {
    cert.diagnostic = "dominance margin not positive at tolerance";
    return cert;
  }

  cert.verdict = true;
  cert.scaling_d = d;
  cert.margin = margin;
  return cert;
}

bool is_hurwitz_h_matrix(const Matrix& a) {
  require_square(a, "is_hurwitz_h_matrix");
  const HMatrixCertificate cert = h_matrix_certificate(a);
  if (!cert.verdict) return false;
  if ((a.diagonal().array() >= 0.0).any()) return false;

  // Gershgorin applied to the certified scaling puts the spectrum strictly in
  // the left half plane; a disagreement with the eigensolver is a numerical
  // fault, not a property of the input.
  if (!spectral_report(a).is_hurwitz) {
    throw NumericalError(
        "is_hurwitz_h_matrix: certificate and spectrum disagree within "
        "tolerance");
  }
  return true;
}

bool generalized_dominance_check(const Matrix& a, const Vector& x,
                                 Dominance mode) {
  require_square(a, "generalized_dominance_check");
  if (x.size() != a.rows()) {
    throw DimensionError("generalized_dominance_check: weight length " +
                         std::to_string(x.size()) + " does not match order " +
                         std::to_string(a.rows()));
  }
  if (x.size() > 0 && !(x.minCoeff() > 0.0)) {
    throw DomainError(
        "generalized_dominance_check: weights must be strictly positive");
  }
  const Index n = a.rows();
  const double tol =
      n > 0 ? strict_tol(a) * x.cwiseAbs().maxCoeff() : 0.0;
  for (Index k = 0; k < n; ++k) {
    double off = 0.0;
    for (Index l = 0; l < n; ++l) {
      if (l == k) continue;
      // row mode walks row k; column mode walks column k.
      off += (mode == Dominance::kRow ? std::abs(a(k, l)) * x(l)
                                      : std::abs(a(l, k)) * x(l));
    }
    if (!(std::abs(a(k, k)) * x(k) > off + tol)) return false;
  }
  return true;
}

double matrix_measure_1(const Matrix& a) {
  require_square(a, "matrix_measure_1");
  if (a.rows() == 0) return 0.0;
  double mu = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < a.cols(); ++j) {
    double s = a(j, j);
    for (Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += std::abs(a(i, j));
    }
    mu = std::max(mu, s);
  }
  return mu;
}

double induced_norm_1(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace decstab
