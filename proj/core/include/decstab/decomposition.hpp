#pragma once

#include <optional>
#include <string>

#include "decstab/matrix_analysis.hpp"
#include "decstab/types.hpp"

namespace decstab {

/// Relative threshold for the rank and residual checks of this module.
inline constexpr double kRankTol = 1e-8;

/// Square MIMO plant (A, B, C) with m decentralized channels.
struct Plant {
  Matrix A;  // n x n
  Matrix B;  // n x m
  Matrix C;  // m x n
  Index n = 0;
  Index m = 0;
  std::string name;
};

/// Checks shapes and the standing assumptions rank(B) = rank(C) = rank(CB) = m
/// (singular-value test at kRankTol). Throws AssumptionError naming the failed
/// condition, DimensionError on inconsistent shapes.
Plant validate_plant(const Matrix& a, const Matrix& b, const Matrix& c,
                     std::string name = {});

/// Coordinate transform splitting the state into zero dynamics (size n-m) and
/// output coordinates (size m):
///   NB = 0, CM = 0, NM = I, T = [N; C], T^-1 = [M, B(CB)^-1]
/// with blocks A11 = NAM, A12 = NAB(CB)^-1, A21 = CAM, A22 = CAB(CB)^-1.
/// When m = n the plant has no zeros, T = C, and the zero-dynamics blocks are
/// empty.
struct Decomposition {
  Matrix M;      // n x (n-m)
  Matrix N;      // (n-m) x n
  Matrix T;      // n x n
  Matrix T_inv;  // n x n
  Matrix A11;    // (n-m) x (n-m)
  Matrix A12;    // (n-m) x m
  Matrix A21;    // m x (n-m)
  Matrix A22;    // m x m
  Matrix CB;     // m x m
  bool square_case = false;
};

Decomposition build_decomposition(const Plant& p);

struct MinimumPhaseReport {
  bool has_zeros = false;  // false iff m = n
  std::optional<SpectralReport> zero_spectrum;  // spectrum of A11 when present
  bool minimum_phase = false;
};

MinimumPhaseReport minimum_phase_report(const Decomposition& d);

/// Blocks after conjugation with blk-diag(I, D), D = diag(d) > 0:
///   A12t = A12 D^-1, A21t = D A21, A22t = D A22 D^-1, CB_scaled = D CB D^-1.
/// D and any diagonal gain K(t) commute, so the scaled input block acts as
/// CB_scaled * K(t).
struct ScaledBlocks {
  Vector d;
  Matrix A12t;
  Matrix A21t;
  Matrix A22t;
  Matrix CB_scaled;
};

ScaledBlocks apply_scaling(const Decomposition& dec, const Vector& diag_d);

}  // namespace decstab
