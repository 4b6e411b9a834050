#pragma once

#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

#include "decstab/matrix_analysis.hpp"
#include "decstab/generator.hpp"

namespace decstab::testing {

inline Matrix make_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const Index r = rows.size();
  const Index c = rows.begin()->size();
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Vector make_vector(std::initializer_list<double> vals) {
  Vector v(vals.size());
  Index i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

inline Matrix random_box_matrix(std::mt19937_64& rng, Index n, double lo,
                                double hi) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = uniform(rng, lo, hi);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Independent oracles for the H-matrix equivalence. Both stay clear of the
// LU solve the library certificate uses.
// ---------------------------------------------------------------------------

/// Exhaustive search for a dominance witness on a multiplicative grid with
/// the first component pinned to 1 (the dominance cone is scale invariant).
/// levels grid points per free component, spread over [10^-span, 10^span].
/// Returns true iff some grid point is a strict witness.
inline bool grid_search_dominance(const Matrix& a, Dominance mode,
                                  int levels = 13, double span = 1.5) {
  const Index n = a.rows();
  std::vector<double> scale(levels);
  for (int l = 0; l < levels; ++l) {
    scale[l] = std::pow(10.0, -span + 2.0 * span * l / (levels - 1));
  }
  const auto dominant = [&](const Vector& x) {
    for (Index k = 0; k < n; ++k) {
      double off = 0.0;
      for (Index l = 0; l < n; ++l) {
        if (l == k) continue;
        off += (mode == Dominance::kRow ? std::abs(a(k, l)) * x(l)
                                        : std::abs(a(l, k)) * x(l));
      }
      if (!(std::abs(a(k, k)) * x(k) > off)) return false;
    }
    return true;
  };

  Vector x = Vector::Ones(n);
  std::vector<int> idx(n - 1, 0);
  while (true) {
    for (Index i = 1; i < n; ++i) x(i) = scale[idx[i - 1]];
    if (dominant(x)) return true;
    Index pos = 0;
    while (pos < static_cast<Index>(idx.size())) {
      if (++idx[pos] < levels) break;
      idx[pos++] = 0;
    }
    if (n == 1 || pos == static_cast<Index>(idx.size())) {
      return n == 1 ? dominant(Vector::Ones(1)) : false;
    }
  }
}

/// Ky Fan test: a Z-matrix is a nonsingular M-matrix iff all leading
/// principal minors are positive. Determinants by recursive cofactor
/// expansion, independent of any factorization code.
inline double cofactor_det(const Matrix& m) {
  const Index n = m.rows();
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);
  double det = 0.0;
  double sign = 1.0;
  for (Index j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1);
    for (Index r = 1; r < n; ++r) {
      Index cc = 0;
      for (Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    det += sign * m(0, j) * cofactor_det(minor);
    sign = -sign;
  }
  return det;
}

/// H-matrix decision through the comparison matrix's leading minors.
/// boundary is set when some minor sits inside the relative band where the
/// sign is numerically undecidable.
struct MinorsVerdict {
  bool is_h_matrix = false;
  bool boundary = false;
};

inline MinorsVerdict minors_h_matrix_oracle(const Matrix& a,
                                            double band = 1e-9) {
  const Matrix comp = comparison_matrix(a);
  const double scale = std::max(1.0, comp.cwiseAbs().maxCoeff());
  MinorsVerdict v;
  v.is_h_matrix = true;
  double pow_scale = 1.0;
  for (Index k = 1; k <= a.rows(); ++k) {
    pow_scale *= scale;
    const double det = cofactor_det(comp.topLeftCorner(k, k));
    if (std::abs(det) < band * pow_scale) v.boundary = true;
    if (det <= 0.0) {
      v.is_h_matrix = false;
      return v;
    }
  }
  return v;
}

/// Strict (tolerance-free) weighted dominance test.
inline bool strict_dominance(const Matrix& a, const Vector& x,
                             Dominance mode) {
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    double off = 0.0;
    for (Index l = 0; l < n; ++l) {
      if (l == k) continue;
      off += (mode == Dominance::kRow ? std::abs(a(k, l)) * x(l)
                                      : std::abs(a(l, k)) * x(l));
    }
    if (!(std::abs(a(k, k)) * x(k) > off)) return false;
  }
  return true;
}

/// Rounds a witness onto the search grid (first component pinned to 1,
/// log-spaced levels, clamped to the span). When the snapped vector is still
/// a strict witness the grid search is guaranteed to succeed; when it is not,
/// the instance's margin is below the grid resolution and a miss is a
/// documented boundary case rather than a disagreement.
inline bool snapped_witness_survives(const Matrix& a, Dominance mode,
                                     const Vector& witness, int levels,
                                     double span) {
  const Index n = a.rows();
  const double step = levels > 1 ? 2.0 * span / (levels - 1) : 1.0;
  Vector w(n);
  w(0) = 1.0;
  for (Index i = 1; i < n; ++i) {
    const double l = std::log10(witness(i) / witness(0));
    const double snapped =
        std::clamp(std::round((l + span) / step) * step - span, -span, span);
    w(i) = std::pow(10.0, snapped);
  }
  return strict_dominance(a, w, mode);
}

/// Perron radius of the Jacobi iteration matrix of the comparison matrix
/// (power iteration on a nonnegative matrix). Below 1 exactly when the matrix
/// is an H-matrix, which makes it a third independent oracle route.
inline double jacobi_perron_radius(const Matrix& a, int iters = 300) {
  const Index n = a.rows();
  Matrix jac = a.cwiseAbs();
  for (Index j = 0; j < n; ++j) {
    const double d = std::abs(a(j, j));
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      jac(i, j) = i == j ? 0.0 : jac(i, j) / d;
    }
  }
  // Shift by I so the iteration matrix is aperiodic; the nonnegative Perron
  // root shifts by exactly 1. Transposing leaves the radius unchanged.
  const Matrix shifted = jac.transpose() + Matrix::Identity(n, n);
  Vector x = Vector::Ones(n);
  double lambda = 1.0;
  for (int it = 0; it < iters; ++it) {
    Vector y = shifted * x;
    lambda = y.maxCoeff();
    x = y / lambda;
  }
  return lambda - 1.0;
}

}  // namespace decstab::testing
