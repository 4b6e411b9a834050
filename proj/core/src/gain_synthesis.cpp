#include "decstab/gain_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

namespace decstab {
namespace {

double envelope_sup(const Matrix& a11, double beta,
                    const std::vector<double>& grid) {
  double sup = 0.0;
  for (double t : grid) {
    const Matrix e = (a11 * t).exp();
    sup = std::max(sup, induced_norm_1(e) * std::exp(beta * t));
  }
  return sup;
}

// Paper-form left side of the per-column gain inequality:
//   k b_jj + a_jj + k sum_{i!=j}|b_ij| + sum_{i!=j}|a_ij|
double column_bound(const Matrix& a, const Matrix& b, double k, Index j) {
  double s = k * b(j, j) + a(j, j);
  for (Index i = 0; i < a.rows(); ++i) {
    if (i == j) continue;
    s += std::abs(a(i, j)) + k * std::abs(b(i, j));
  }
  return s;
}

}  // namespace

ExpBound exp_bound(const Matrix& a11) {
  if (a11.rows() != a11.cols()) {
    throw DimensionError("exp_bound: matrix must be square");
  }
  if (a11.rows() == 0) {
    throw DomainError("exp_bound: empty zero-dynamics block has no envelope");
  }
  const SpectralReport rep = spectral_report(a11);
  if (!rep.is_hurwitz) {
    throw DomainError("exp_bound: block is not Hurwitz (abscissa " +
                      std::to_string(rep.spectral_abscissa) + ")");
  }
  const double alpha = std::abs(rep.spectral_abscissa);

  ExpBound eb;
  eb.beta11 = 0.9 * alpha;

  double horizon = std::max<double>(10.0 * a11.rows(), 20.0) / alpha;
  for (int attempt = 0; attempt < 8; ++attempt) {
    // Geometric grid resolves the early transient, uniform grid the bulk.
    std::vector<double> grid{0.0};
    const int geo = 512, uni = 2048;
    for (int i = 0; i <= geo; ++i) {
      grid.push_back(horizon * std::pow(1e-6, 1.0 - double(i) / geo));
    }
    for (int i = 1; i <= uni; ++i) {
      grid.push_back(horizon * double(i) / uni);
    }
    eb.M11 = 1.1 * envelope_sup(a11, eb.beta11, grid);

    // Verify on a finer, offset grid. The tail is covered by the semigroup
    // bound once the envelope value at the horizon has dropped below 1.
    std::vector<double> check;
    const int fine = 4096;
    for (int i = 0; i <= fine; ++i) {
      check.push_back(horizon * (double(i) + 0.5) / (fine + 1));
    }
    const double worst = envelope_sup(a11, eb.beta11, check);
    const double tail =
        induced_norm_1(Matrix((a11 * horizon).exp())) *
        std::exp(eb.beta11 * horizon);
    if (worst <= eb.M11 && tail < 1.0) return eb;
    horizon *= 2.0;
  }
  throw NumericalError("exp_bound: envelope verification failed to settle");
}

double coupling_gamma(const ExpBound& eb, const Matrix& a21t,
                      const Matrix& a12t) {
  return eb.M11 * induced_norm_1(a21t) * induced_norm_1(a12t) / eb.beta11;
}

Vector gain_lower_bounds(const Matrix& a22t, const Matrix& cb_scaled,
                         double gamma) {
  const Index m = a22t.rows();
  if (a22t.cols() != m || cb_scaled.rows() != m || cb_scaled.cols() != m) {
    throw DimensionError("gain_lower_bounds: blocks must be m x m");
  }
  Vector k_tilde(m);
  for (Index j = 0; j < m; ++j) {
    double b_col = cb_scaled(j, j);
    double a_col = a22t(j, j) + gamma;
    for (Index i = 0; i < m; ++i) {
      if (i == j) continue;
      b_col += std::abs(cb_scaled(i, j));
      a_col += std::abs(a22t(i, j));
    }
    if (!(b_col < -strict_tol(cb_scaled))) {
      throw CertificateError(
          "gain_lower_bounds: column " + std::to_string(j) +
          " of the scaled CB is not strictly dominant with negative diagonal");
    }
    k_tilde(j) = std::max(a_col / -b_col, kGainFloor);
  }

  // The closed form guarantees the inequality just above the bound; a failure
  // here indicates numerical trouble, not an infeasible plant.
  for (Index j = 0; j < m; ++j) {
    if (!(column_bound(a22t, cb_scaled, k_tilde(j) * (1.0 + 1e-3), j) <
          -gamma)) {
      throw NumericalError(
          "gain_lower_bounds: column inequality failed just above the bound");
    }
  }
  return k_tilde;
}

bool verify_key_condition(const Matrix& a22t, const Matrix& cb_scaled,
                          const Vector& k, double gamma) {
  const Index m = a22t.rows();
  if (cb_scaled.rows() != m || cb_scaled.cols() != m || a22t.cols() != m ||
      k.size() != m) {
    throw DimensionError("verify_key_condition: inconsistent block sizes");
  }
  double explicit_max = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < m; ++j) {
    explicit_max = std::max(explicit_max, column_bound(a22t, cb_scaled, k(j), j));
  }

  const Matrix closed = a22t + cb_scaled * k.asDiagonal();
  const double mu = matrix_measure_1(closed);
  const double scale =
      1.0 + std::max(std::abs(explicit_max), induced_norm_1(closed));
  if (mu > explicit_max + 1e-12 * scale) {
    throw NumericalError(
        "verify_key_condition: measure exceeded its column bound");
  }

  const double eps = kStrictTol * (std::abs(gamma) + scale);
  return explicit_max < -gamma - eps;
}

}  // namespace decstab
