#pragma once

#include <optional>
#include <string>

#include "decstab/types.hpp"

namespace decstab {

/// Relative tolerance used to decide the strict inequalities in the matrix
/// definitions (Hurwitz, M-matrix, diagonal dominance). Thresholds scale with
/// the largest absolute entry of the matrix under test.
inline constexpr double kStrictTol = 1e-9;

/// kStrictTol scaled to the matrix at hand: kStrictTol * max_ij |a_ij|.
double strict_tol(const Matrix& a);

struct SpectralReport {
  ComplexVector eigenvalues;
  double spectral_abscissa = 0.0;  // max_i Re(lambda_i)
  bool is_hurwitz = false;
};

/// Witness (or refutation) that a matrix is an H-matrix: a positive vector d
/// making diag(d) * A * diag(d)^-1 strictly column-diagonal dominant.
struct HMatrixCertificate {
  bool verdict = false;
  std::optional<Vector> scaling_d;  // present iff verdict
  double margin = 0.0;  // min_j (|a_jj| d_j - sum_{i!=j} |a_ij| d_i)
  std::string diagnostic;
};

enum class Dominance { kRow, kColumn };

/// Comparison matrix: |a_ij| on the diagonal, -|a_ij| off it.
Matrix comparison_matrix(const Matrix& a);

/// Dense nonsymmetric eigendecomposition summary.
SpectralReport spectral_report(const Matrix& a);

/// Non-positive off-diagonal entries and spectrum in the open right half plane.
bool is_m_matrix(const Matrix& a);

/// Decides the H-matrix property by solving M_A^T d = 1. For a nonsingular
/// M-matrix the solution is strictly positive, so a nonsingular solve with a
/// positive result and positive dominance margin is a complete decision
/// procedure up to the documented tolerance.
HMatrixCertificate h_matrix_certificate(const Matrix& a);

/// H-matrix with all-negative diagonal; cross-checks that the spectrum agrees
/// (Gershgorin guarantees it) and throws NumericalError on disagreement.
bool is_hurwitz_h_matrix(const Matrix& a);

/// Weighted strict diagonal dominance with positive weights x.
/// row:    |a_ii| x_i > sum_{j!=i} |a_ij| x_j for all i
/// column: |a_jj| x_j > sum_{i!=j} |a_ij| x_i for all j
bool generalized_dominance_check(const Matrix& a, const Vector& x,
                                 Dominance mode);

/// Matrix measure induced by the vector 1-norm:
/// max_j (a_jj + sum_{i!=j} |a_ij|).
double matrix_measure_1(const Matrix& a);

/// Induced 1-norm (maximum absolute column sum); 0 for empty matrices.
double induced_norm_1(const Matrix& a);

}  // namespace decstab
