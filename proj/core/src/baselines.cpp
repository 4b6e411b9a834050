#include "decstab/baselines.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "decstab/rk4.hpp"

namespace decstab {

GainSchedule moreau_gain(const PeriodicGain& pg) {
  if (!(pg.omega > 0.0)) {
    throw DomainError("moreau_gain: omega must be positive");
  }
  double amplitude;
  switch (pg.order) {
    case 2:
      amplitude = pg.k2 * pg.omega;
      break;
    case 3:
      amplitude = pg.k2 * pg.omega * pg.omega;
      break;
    default:
      throw DomainError("moreau_gain: order must be 2 or 3, got " +
                        std::to_string(pg.order));
  }
  return GainSchedule::sinusoid(pg.k1, amplitude, pg.omega);
}

FloquetReport floquet_report(const MatrixFn& a_of_t, double period,
                             double dt) {
  if (!(period > 0.0) || !(dt > 0.0)) {
    throw DomainError("floquet_report: period and dt must be positive");
  }
  const int steps = std::max(1, static_cast<int>(std::round(period / dt)));
  const double h = period / steps;

  const Index n = a_of_t(0.0).rows();
  const auto rhs = [&](double t, const Matrix& x) -> Matrix {
    return a_of_t(t) * x;
  };

  Matrix x = Matrix::Identity(n, n);
  for (int i = 0; i < steps; ++i) {
    x = rk4_step(rhs, i * h, h, x);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e300) {
      throw DivergenceError("floquet_report: transition matrix overflow",
                            (i + 1) * h);
    }
  }

  FloquetReport rep;
  rep.monodromy = x;
  Eigen::EigenSolver<Matrix> solver(x, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("floquet_report: eigensolver failed on monodromy");
  }
  rep.multipliers = solver.eigenvalues();
  rep.stable = (rep.multipliers.array().abs() < 1.0 - kFloquetTol).all();
  return rep;
}

MatrixFn trivial_unstructured_gain(const Plant& p, const MatrixFn& q_of_t) {
  if (p.m != p.n) {
    throw AssumptionError(
        "trivial_unstructured_gain: B and C must be square (m = n)");
  }
  Eigen::PartialPivLU<Matrix> lu_b(p.B);
  Eigen::PartialPivLU<Matrix> lu_ct(Matrix(p.C.transpose()));
  const Matrix id = Matrix::Identity(p.n, p.n);
  if ((p.B * lu_b.solve(id) - id).norm() > 1e-8 * (1.0 + p.B.norm()) ||
      (p.C.transpose() * lu_ct.solve(id) - id).norm() >
          1e-8 * (1.0 + p.C.norm())) {
    throw AssumptionError(
        "trivial_unstructured_gain: B or C is not invertible");
  }
  const Matrix a = p.A;
  return [lu_b, lu_ct, a, q_of_t](double t) -> Matrix {
    // B^-1 (Q - A) C^-1; the right inverse goes through C^T factors.
    const Matrix lhs = lu_b.solve(q_of_t(t) - a);
    return lu_ct.solve(lhs.transpose()).transpose();
  };
}

double off_diagonal_mass(const Matrix& k) {
  double mass = 0.0;
  for (Index i = 0; i < k.rows(); ++i) {
    for (Index j = 0; j < k.cols(); ++j) {
      if (i != j) mass += std::abs(k(i, j));
    }
  }
  return mass;
}

}  // namespace decstab
