#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "algstab/linalg.hpp"
#include "algstab/polynomials.hpp"
#include "algstab/shift_family.hpp"

namespace algstab {

/// Joint eigendecomposition of a commuting normal family. Row i of
/// eigenvalues holds the joint eigenvalue (lambda_i^(1), ..., lambda_i^(m))
/// belonging to column i of eigenvectors.
struct SpectralDecomposition {
  Matrix eigenvalues;   // n x m
  Matrix eigenvectors;  // n x n, unitary
  std::string model_ref;

  int dimension() const { return static_cast<int>(eigenvectors.rows()); }
  int num_generators() const { return static_cast<int>(eigenvalues.cols()); }
  std::vector<Complex> joint_eigenvalue(int i) const;
};

/// Eigen-decomposes a normal commuting family. Eigenpairs are sorted
/// lexicographically by (Re, Im) of each generator's eigenvalue, rounded to
/// 1e-9. For m > 1 a random real combination of the shifts is diagonalized
/// and eigenvalues are recovered as Rayleigh quotients; a combination whose
/// basis fails to diagonalize every shift is redrawn, up to 5 attempts.
SpectralDecomposition decompose(const ShiftFamily& shifts, std::uint64_t seed = 0x5eed);

/// x_hat_i = <u_i, x>.
Vector fourier(const SpectralDecomposition& decomp, const Vector& x);

/// x = sum_i x_hat_i u_i.
Vector inverse_fourier(const SpectralDecomposition& decomp, const Vector& x_hat);

/// sum_i p(lambda_i) x_hat_i u_i.
Vector spectral_apply(const SpectralDecomposition& decomp, const PolynomialFilter& p,
                      const Vector& x);

/// p(lambda_i) for every joint eigenvalue.
Vector spectral_response(const SpectralDecomposition& decomp, const PolynomialFilter& p);

}  // namespace algstab
