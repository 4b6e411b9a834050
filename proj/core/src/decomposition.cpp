#include "decstab/decomposition.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

namespace decstab {
namespace {

Index svd_rank(const Matrix& a, const char* label) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = kRankTol * sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  (void)label;
  return rank;
}

Matrix solve_right(const Matrix& lhs, const Matrix& rhs, const char* what) {
  // lhs * X = rhs with a sanity check on the residual.
  Eigen::PartialPivLU<Matrix> lu(lhs);
  Matrix x = lu.solve(rhs);
  const double scale = 1.0 + rhs.norm();
  if (!x.allFinite() || (lhs * x - rhs).norm() > 1e-6 * scale * lhs.rows()) {
    throw NumericalError(std::string("build_decomposition: solving with ") +
                         what + " failed (ill-conditioned)");
  }
  return x;
}

}  // namespace

Plant validate_plant(const Matrix& a, const Matrix& b, const Matrix& c,
                     std::string name) {
  if (a.rows() != a.cols()) {
    throw DimensionError("validate_plant: A must be square");
  }
  const Index n = a.rows();
  const Index m = b.cols();
  if (b.rows() != n) {
    throw DimensionError("validate_plant: B must have n rows");
  }
  if (c.rows() != m || c.cols() != n) {
    throw DimensionError("validate_plant: C must be m x n with m = cols(B)");
  }
  if (m < 1 || m > n) {
    throw DimensionError("validate_plant: need 1 <= m <= n");
  }
  if (!a.allFinite() || !b.allFinite() || !c.allFinite()) {
    throw DomainError("validate_plant: matrices must be finite");
  }
  if (svd_rank(b, "B") != m) {
    throw AssumptionError("validate_plant: rank(B) < m (B not full column rank)");
  }
  if (svd_rank(c, "C") != m) {
    throw AssumptionError("validate_plant: rank(C) < m (C not full row rank)");
  }
  if (svd_rank(c * b, "CB") != m) {
    throw AssumptionError(
        "validate_plant: CB is singular (relative degree one fails)");
  }
  return Plant{a, b, c, n, m, std::move(name)};
}

Decomposition build_decomposition(const Plant& p) {
  Decomposition d;
  d.CB = p.C * p.B;
  d.square_case = (p.m == p.n);
  const Index n = p.n;
  const Index m = p.m;
  const Index k = n - m;  // zero-dynamics dimension

  if (d.square_case) {
    d.T = p.C;
    d.T_inv = solve_right(p.C, Matrix::Identity(n, n), "C");
    d.M = Matrix(n, 0);
    d.N = Matrix(0, n);
    d.A11 = Matrix(0, 0);
    d.A12 = Matrix(0, m);
    d.A21 = Matrix(m, 0);
    d.A22 = d.T * p.A * d.T_inv;
    return d;
  }

  // Orthonormal basis of the null space of C: the right singular vectors for
  // the m .. n-1 singular values. Makes M^T M = I, so N reduces to
  // M^T (I - B (CB)^-1 C).
  Eigen::JacobiSVD<Matrix> svd(p.C, Eigen::ComputeFullV);
  d.M = svd.matrixV().rightCols(k);

  const Matrix cb_inv_c = solve_right(d.CB, p.C, "CB");       // (CB)^-1 C
  const Matrix b_cb_inv =
      solve_right(d.CB.transpose(), p.B.transpose(), "CB^T").transpose();

  d.N = d.M.transpose() * (Matrix::Identity(n, n) - p.B * cb_inv_c);

  d.T.resize(n, n);
  d.T.topRows(k) = d.N;
  d.T.bottomRows(m) = p.C;
  d.T_inv.resize(n, n);
  d.T_inv.leftCols(k) = d.M;
  d.T_inv.rightCols(m) = b_cb_inv;

  d.A11 = d.N * p.A * d.M;
  d.A12 = d.N * p.A * b_cb_inv;
  d.A21 = p.C * p.A * d.M;
  d.A22 = p.C * p.A * b_cb_inv;

  const double scale = 1.0 + p.A.norm();
  if ((d.T * d.T_inv - Matrix::Identity(n, n)).norm() > kRankTol * scale ||
      (d.N * p.B).norm() > kRankTol * scale ||
      (p.C * d.M).norm() > kRankTol * scale ||
      (d.N * d.M - Matrix::Identity(k, k)).norm() > kRankTol * scale) {
    throw NumericalError(
        "build_decomposition: construction identities exceed residual "
        "tolerance");
  }
  return d;
}

MinimumPhaseReport minimum_phase_report(const Decomposition& d) {
  MinimumPhaseReport rep;
  rep.has_zeros = !d.square_case;
  if (!rep.has_zeros) {
    rep.minimum_phase = true;
    return rep;
  }
  rep.zero_spectrum = spectral_report(d.A11);
  rep.minimum_phase = rep.zero_spectrum->is_hurwitz;
  return rep;
}

ScaledBlocks apply_scaling(const Decomposition& dec, const Vector& diag_d) {
  if (diag_d.size() != dec.A22.rows()) {
    throw DimensionError("apply_scaling: diagonal length must equal m");
  }
  if (diag_d.size() > 0 && !(diag_d.minCoeff() > 0.0)) {
    throw DomainError("apply_scaling: diagonal must be strictly positive");
  }
  ScaledBlocks s;
  s.d = diag_d;
  const auto dm = diag_d.asDiagonal();
  const Vector inv = diag_d.cwiseInverse();
  s.A12t = dec.A12 * inv.asDiagonal();
  s.A21t = dm * dec.A21;
  s.A22t = dm * dec.A22 * inv.asDiagonal();
  s.CB_scaled = dm * dec.CB * inv.asDiagonal();
  return s;
}

}  // namespace decstab
