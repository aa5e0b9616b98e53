#include "algstab/frechet.hpp"

#include <cmath>
#include <limits>

#include "algstab/errors.hpp"

namespace algstab {

namespace {

using Powers = std::vector<std::vector<Matrix>>;

void check_inputs(const PolynomialFilter& p, std::span<const Matrix> shifts, int i,
                  const Matrix& xi) {
  if (static_cast<int>(shifts.size()) != p.num_generators()) {
    throw ArgumentError("filter arity does not match the number of shifts");
  }
  if (i < 0 || i >= p.num_generators()) throw ArgumentError("generator index out of range");
  const auto n = shifts.front().rows();
  if (xi.rows() != n || xi.cols() != n) throw ArgumentError("direction has the wrong dimension");
}

Powers all_powers(const PolynomialFilter& p, std::span<const Matrix> shifts, bool adjoint) {
  Powers out;
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    const Matrix base = adjoint ? Matrix(shifts[j].adjoint()) : shifts[j];
    out.push_back(matrix_powers(base, p.degree_in(static_cast<int>(j))));
  }
  return out;
}

// sum_l S^l Y S^{k-1-l}
Matrix symmetrized(const std::vector<Matrix>& powers, const Matrix& y, int k) {
  Matrix out = Matrix::Zero(y.rows(), y.cols());
  for (int l = 0; l < k; ++l) {
    out += powers[static_cast<std::size_t>(l)] * y * powers[static_cast<std::size_t>(k - 1 - l)];
  }
  return out;
}

Matrix product_range(const Powers& powers, const MultiIndex& k, std::size_t from, std::size_t to,
                     std::size_t skip, Eigen::Index n) {
  Matrix out = Matrix::Identity(n, n);
  for (std::size_t j = from; j < to; ++j) {
    if (j == skip || k[j] == 0) continue;
    out = out * powers[j][static_cast<std::size_t>(k[j])];
  }
  return out;
}

std::vector<Matrix> with_slot(std::span<const Matrix> shifts, int i, const Matrix& delta) {
  std::vector<Matrix> out(shifts.begin(), shifts.end());
  out[static_cast<std::size_t>(i)] += delta;
  return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    sx += x[a];
    sy += y[a];
    sxx += x[a] * x[a];
    sxy += x[a] * y[a];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

Matrix frechet_apply(const PolynomialFilter& p, std::span<const Matrix> shifts, int i,
                     const Matrix& xi, FactorPlacement placement) {
  check_inputs(p, shifts, i, xi);
  const auto n = xi.rows();
  const auto ui = static_cast<std::size_t>(i);
  const Powers powers = all_powers(p, shifts, false);
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [k, h] : p.coefficients()) {
    if (k[ui] == 0) continue;
    const Matrix mid = symmetrized(powers[ui], xi, k[ui]);
    if (placement == FactorPlacement::ordered) {
      const Matrix left = product_range(powers, k, 0, ui, ui, n);
      const Matrix right = product_range(powers, k, ui + 1, k.size(), ui, n);
      out += h * (left * mid * right);
    } else {
      out += h * (mid * product_range(powers, k, 0, k.size(), ui, n));
    }
  }
  return out;
}

Matrix frechet_apply(const PolynomialFilter& p, const ShiftFamily& shifts, int i, const Matrix& xi,
                     FactorPlacement placement) {
  return frechet_apply(p, std::span<const Matrix>(shifts.shifts()), i, xi, placement);
}

Matrix frechet_adjoint(const PolynomialFilter& p, std::span<const Matrix> shifts, int i,
                       const Matrix& eta) {
  check_inputs(p, shifts, i, eta);
  const auto n = eta.rows();
  const auto ui = static_cast<std::size_t>(i);
  const Powers powers = all_powers(p, shifts, false);
  const Powers adj = all_powers(p, shifts, true);
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [k, h] : p.coefficients()) {
    if (k[ui] == 0) continue;
    const Matrix left = product_range(powers, k, 0, ui, ui, n);
    const Matrix right = product_range(powers, k, ui + 1, k.size(), ui, n);
    out += h * symmetrized(adj[ui], left.adjoint() * eta * right.adjoint(), k[ui]);
  }
  return out;
}

Matrix central_difference(const PolynomialFilter& p, std::span<const Matrix> shifts, int i,
                          const Matrix& xi, double eps) {
  check_inputs(p, shifts, i, xi);
  const auto plus = with_slot(shifts, i, eps * xi);
  const auto minus = with_slot(shifts, i, -eps * xi);
  return (eval_ordered(p, plus) - eval_ordered(p, minus)) / (2.0 * eps);
}

FiniteDifferenceEstimate frechet_fd_oracle(const PolynomialFilter& p,
                                           std::span<const Matrix> shifts, int i,
                                           const Matrix& xi,
                                           const std::vector<double>& epsilons) {
  check_inputs(p, shifts, i, xi);
  if (epsilons.size() < 3) throw ArgumentError("finite-difference oracle needs at least 3 steps");
  for (std::size_t a = 0; a < epsilons.size(); ++a) {
    if (!(epsilons[a] > 0.0) || (a > 0 && !(epsilons[a] < epsilons[a - 1]))) {
      throw ArgumentError("finite-difference steps must be positive and strictly decreasing");
    }
  }
  FiniteDifferenceEstimate out;
  out.epsilons = epsilons;
  const double e1 = epsilons[epsilons.size() - 2];
  const double e2 = epsilons.back();
  const Matrix d1 = central_difference(p, shifts, i, xi, e1);
  const Matrix d2 = central_difference(p, shifts, i, xi, e2);
  const double ratio = (e1 / e2) * (e1 / e2);
  out.estimate = d2 + (d2 - d1) / (ratio - 1.0);

  const Matrix base = eval_ordered(p, shifts);
  const double scale = std::max(1.0, base.norm());
  std::vector<double> log_eps;
  std::vector<double> log_rem;
  for (double eps : epsilons) {
    const Matrix moved = eval_ordered(p, with_slot(shifts, i, eps * xi));
    const double rem = (moved - base - eps * out.estimate).norm();
    out.remainders.push_back(rem);
    if (rem > 1e-13 * scale) {
      log_eps.push_back(std::log(eps));
      log_rem.push_back(std::log(rem));
    }
  }
  out.slope = log_eps.size() >= 2 ? least_squares_slope(log_eps, log_rem)
                                  : std::numeric_limits<double>::quiet_NaN();
  return out;
}

NormEstimate power_norm(const OperatorMap& apply, const OperatorMap& adjoint, int n,
                        const NormOptions& options) {
  NormEstimate out;
  if (n <= options.dense_limit) {
    // Small enough to lift explicitly; the top eigenvalue of L* L is exact
    // where power iteration can stall on a small spectral gap.
    const Matrix l = lifted_matrix(n, apply);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(l.adjoint() * l, Eigen::EigenvaluesOnly);
    out.value = std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
    out.converged = true;
    return out;
  }
  Matrix x = random_matrix(n, n, options.seed, false);
  x /= x.norm();
  double previous = -1.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Matrix y = adjoint(apply(x));
    const double y_norm = y.norm();
    out.iterations = it;
    if (y_norm == 0.0) {
      out.value = 0.0;
      out.residual = 0.0;
      out.converged = true;
      return out;
    }
    const double sigma2 = frobenius_inner(x, y).real();
    out.value = std::sqrt(std::max(sigma2, 0.0));
    out.residual = (y - sigma2 * x).norm() / y_norm;
    x = y / y_norm;
    if (previous >= 0.0 && std::abs(sigma2 - previous) <= options.tolerance * sigma2) {
      out.converged = true;
      return out;
    }
    previous = sigma2;
  }
  return out;
}

NormEstimate frechet_norm(const PolynomialFilter& p, std::span<const Matrix> shifts, int i,
                          const NormOptions& options) {
  const auto n = static_cast<int>(shifts.front().rows());
  check_inputs(p, shifts, i, Matrix::Zero(n, n));
  return power_norm([&](const Matrix& xi) { return frechet_apply(p, shifts, i, xi); },
                    [&](const Matrix& eta) { return frechet_adjoint(p, shifts, i, eta); }, n,
                    options);
}

NormEstimate frechet_norm(const PolynomialFilter& p, const ShiftFamily& shifts, int i,
                          const NormOptions& options) {
  return frechet_norm(p, std::span<const Matrix>(shifts.shifts()), i, options);
}

}  // namespace algstab
