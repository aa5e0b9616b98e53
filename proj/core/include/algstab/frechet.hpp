#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "algstab/linalg.hpp"
#include "algstab/polynomials.hpp"
#include "algstab/shift_family.hpp"

namespace algstab {

/// Where the other generators' powers sit relative to the symmetrized
/// product pi(xi, (k_i - 1) S_i).
///   ordered:  S_1^{k_1} ... pi(...) ... S_m^{k_m}, the exact derivative of
///             the ordered realization for any family
///   trailing: pi(...) * prod_{j != i} S_j^{k_j}, which agrees with ordered
///             only when xi commutes with the other generators
enum class FactorPlacement { ordered, trailing };

/// Partial Frechet derivative of S -> p(S) in generator i (0-based),
/// applied to xi.
Matrix frechet_apply(const PolynomialFilter& p, std::span<const Matrix> shifts, int i,
                     const Matrix& xi, FactorPlacement placement = FactorPlacement::ordered);
Matrix frechet_apply(const PolynomialFilter& p, const ShiftFamily& shifts, int i, const Matrix& xi,
                     FactorPlacement placement = FactorPlacement::ordered);

/// Adjoint of the ordered partial derivative under the Frobenius inner
/// product.
Matrix frechet_adjoint(const PolynomialFilter& p, std::span<const Matrix> shifts, int i,
                       const Matrix& eta);

/// [p(S + eps xi e_i) - p(S - eps xi e_i)] / (2 eps).
Matrix central_difference(const PolynomialFilter& p, std::span<const Matrix> shifts, int i,
                          const Matrix& xi, double eps);

struct FiniteDifferenceEstimate {
  Matrix estimate;                 // Richardson limit of the central differences
  std::vector<double> epsilons;
  std::vector<double> remainders;  // ||p(S + eps xi) - p(S) - eps * estimate||
  double slope = 0.0;              // log-log fit of remainders; NaN when all vanish
};

/// Independent derivative estimate from finite differences. epsilons must
/// be strictly decreasing with at least 3 entries.
FiniteDifferenceEstimate frechet_fd_oracle(const PolynomialFilter& p,
                                           std::span<const Matrix> shifts, int i,
                                           const Matrix& xi,
                                           const std::vector<double>& epsilons);

struct NormOptions {
  double tolerance = 1e-8;
  int max_iterations = 500;
  std::uint64_t seed = 0x6e6f726d;
  /// Dimensions n <= dense_limit use the explicit n^2 x n^2 lifted matrix.
  int dense_limit = 16;
};

struct NormEstimate {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

using OperatorMap = std::function<Matrix(const Matrix&)>;

/// Norm of a linear map on n x n operators (Frobenius norm on both sides):
/// exact through the lifted matrix for small n, otherwise power iteration
/// on adjoint(apply(.)).
NormEstimate power_norm(const OperatorMap& apply, const OperatorMap& adjoint, int n,
                        const NormOptions& options = {});

/// Norm of the lifted map xi -> frechet_apply(p, S, i, xi) with the
/// Frobenius norm on both sides, by power iteration on L* L.
NormEstimate frechet_norm(const PolynomialFilter& p, std::span<const Matrix> shifts, int i,
                          const NormOptions& options = {});
NormEstimate frechet_norm(const PolynomialFilter& p, const ShiftFamily& shifts, int i,
                          const NormOptions& options = {});

/// Explicit n^2 x n^2 matrix of an operator map acting on column-major
/// vec(xi).
template <typename Map>
Matrix lifted_matrix(int n, Map&& map) {
  Matrix out(n * n, n * n);
  for (int c = 0; c < n * n; ++c) {
    Matrix e = Matrix::Zero(n, n);
    e(c % n, c / n) = 1.0;
    const Matrix image = map(e);
    out.col(c) = Eigen::Map<const Vector>(image.data(), n * n);
  }
  return out;
}

}  // namespace algstab
