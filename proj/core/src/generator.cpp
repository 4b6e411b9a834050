#include "decstab/generator.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace decstab {
namespace {

Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, double lo,
                     double hi) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = uniform(rng, lo, hi);
    }
  }
  return m;
}

Matrix random_orthogonal(std::mt19937_64& rng, Index n) {
  const Matrix g = random_matrix(rng, n, n, -1.0, 1.0);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the sign convention so the draw is deterministic in the seed only.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = (rng() >> 11) * 0x1.0p-53;  // [0, 1) with 53 random bits
  return lo + u * (hi - lo);
}

Matrix random_hurwitz_h_matrix(std::mt19937_64& rng, Index m,
                               bool hide_scaling) {
  Matrix b = random_matrix(rng, m, m, -1.0, 1.0);
  for (Index j = 0; j < m; ++j) {
    double off = 0.0;
    for (Index i = 0; i < m; ++i) {
      if (i != j) off += std::abs(b(i, j));
    }
    b(j, j) = -(off + uniform(rng, 0.2, 1.2));
  }
  if (hide_scaling) {
    Vector d(m);
    for (Index i = 0; i < m; ++i) d(i) = std::exp(uniform(rng, -0.8, 0.8));
    // diag(d)^-1 * b * diag(d) keeps the diagonal and the H-property but
    // breaks plain column dominance.
    b = d.cwiseInverse().asDiagonal() * b * d.asDiagonal();
  }
  return b;
}

Matrix random_hurwitz_matrix(std::mt19937_64& rng, Index n, double margin) {
  Matrix a = random_matrix(rng, n, n, -1.0, 1.0);
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  const double abscissa = solver.eigenvalues().real().maxCoeff();
  a -= (abscissa + margin) * Matrix::Identity(n, n);
  return a;
}

Plant random_certified_plant(std::uint64_t seed, const GeneratorOptions& opt) {
  if (opt.m < 1 || opt.m > opt.n) {
    throw DomainError("random_certified_plant: need 1 <= m <= n");
  }
  std::mt19937_64 rng(seed);
  const Index n = opt.n, m = opt.m, k = n - m;

  const Matrix cb = random_hurwitz_h_matrix(rng, m, opt.hide_cb_scaling);

  // Assemble A in coordinates where C picks the last m states and the first
  // k states span the zero dynamics; the blocks then coincide with the
  // transform blocks of the analysis.
  Matrix a(n, n);
  if (k > 0) {
    a.topLeftCorner(k, k) =
        random_hurwitz_matrix(rng, k, uniform(rng, 0.3, 1.0));
    a.topRightCorner(k, m) =
        random_matrix(rng, k, m, -opt.coupling, opt.coupling);
    a.bottomLeftCorner(m, k) =
        random_matrix(rng, m, k, -opt.coupling, opt.coupling);
  }
  a.bottomRightCorner(m, m) = random_matrix(rng, m, m, -1.0, 1.0);

  Matrix b = Matrix::Zero(n, m);
  b.bottomRows(m) = cb;
  Matrix c = Matrix::Zero(m, n);
  c.rightCols(m) = Matrix::Identity(m, m);

  if (opt.conjugate) {
    const Matrix s = random_orthogonal(rng, n);
    a = s * a * s.transpose();
    b = s * b;
    c = c * s.transpose();
  }
  return validate_plant(a, b, c, "seed_" + std::to_string(seed));
}

MatrixFn random_ltv_system(std::uint64_t seed, Index n, double scale) {
  std::mt19937_64 rng(seed);
  const Matrix a0 = random_matrix(rng, n, n, -scale, scale);
  const Matrix a1 = random_matrix(rng, n, n, -scale, scale);
  const Matrix a2 = random_matrix(rng, n, n, -scale, scale);
  const double w1 = uniform(rng, 0.5, 3.0);
  const double w2 = uniform(rng, 0.5, 3.0);
  return [a0, a1, a2, w1, w2](double t) -> Matrix {
    return a0 + std::sin(w1 * t) * a1 + std::cos(w2 * t) * a2;
  };
}

}  // namespace decstab
