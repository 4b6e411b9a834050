#pragma once

#include <cstdint>
#include <random>

#include "decstab/decomposition.hpp"

namespace decstab {

/// Deterministic uniform draw in [lo, hi) from a 64-bit engine; avoids the
/// implementation-defined std distributions so fixtures replay bit-exactly.
double uniform(std::mt19937_64& rng, double lo, double hi);

/// Strictly column-diagonal dominant matrix with negative diagonal,
/// optionally hidden behind a random positive diagonal similarity. Always a
/// Hurwitz H-matrix.
Matrix random_hurwitz_h_matrix(std::mt19937_64& rng, Index m,
                               bool hide_scaling = true);

/// Hurwitz matrix with spectral abscissa at most -margin.
Matrix random_hurwitz_matrix(std::mt19937_64& rng, Index n, double margin);

struct GeneratorOptions {
  Index n = 4;
  Index m = 2;
  double coupling = 1.0;     // magnitude of the cross blocks
  bool conjugate = true;     // hide block structure by orthogonal similarity
  bool hide_cb_scaling = true;
};

/// Reverse-constructed plant satisfying the stabilizability hypotheses:
/// Hurwitz zero-dynamics block, random coupling blocks, and CB drawn from the
/// Hurwitz H-matrices with negative diagonals. The assembled (A, B, C) is
/// conjugated by a random orthogonal similarity so the block structure is not
/// visible in the returned data.
Plant random_certified_plant(std::uint64_t seed,
                             const GeneratorOptions& opt = {});

/// Smooth random periodic matrix function A(t) = A0 + sin(w1 t) A1
/// + cos(w2 t) A2 for exercising the LTV integrator and envelope checks.
MatrixFn random_ltv_system(std::uint64_t seed, Index n, double scale = 1.0);

}  // namespace decstab
