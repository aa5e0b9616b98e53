#pragma once

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algstab/frechet.hpp"
#include "algstab/linalg.hpp"
#include "algstab/perturbation.hpp"
#include "algstab/polynomials.hpp"
#include "algstab/shift_family.hpp"

namespace algstab {

enum class TrialStatus { pass, violated, inapplicable };

std::string_view to_string(TrialStatus status);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Both sides of one stability inequality for one concrete trial.
struct StabilityTrial {
  std::string check;  // theorem1, theorem2, corollary, layer, network
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double slope = kNaN;  // fitted remainder order, NaN when the remainder vanishes
  double delta = kNaN;
  double l0 = kNaN;
  double l1 = kNaN;
  double remainder = 0.0;               // fitted quadratic-remainder constant term
  std::vector<double> per_generator;    // per-generator lhs where meaningful
  TrialStatus status = TrialStatus::pass;
  std::string note;
};

struct StabilityOptions {
  int grid_resolution = 32;
  double radius_factor = 1.05;
  /// Relative slack: a trial passes when margin >= -margin_tolerance * rhs
  /// (plus a rounding floor proportional to the problem scale).
  double margin_tolerance = 1e-8;
  /// Scalings of T used to bound the quadratic remainder; the first is 1.
  std::vector<double> remainder_epsilons{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
  /// Subset used for the log-log slope fit.
  std::vector<double> slope_epsilons{1e-1, 1e-2, 1e-3, 1e-4};
  Pairing pairing = Pairing::by_magnitude;
};

/// Declared membership p in A_{L0} and A_{L1}; unset entries fall back to
/// the estimate.
struct DeclaredBounds {
  std::optional<double> l0;
  std::optional<double> l1;
};

struct FilterCertificate {
  LipschitzEstimate estimate;
  double l0 = 0.0;  // constants used by the bounds
  double l1 = 0.0;
  bool certified = false;
  std::string reason;
};

/// Estimates L0 and L1 on the disk of radius radius_factor * max(||S||, ||S~||)
/// and compares them with any declared bounds. A filter whose estimate
/// exceeds its declared bound is not certified.
FilterCertificate certify_filter(const PolynomialFilter& p, const ShiftFamily& shifts,
                                 const ShiftFamily& perturbed, const DeclaredBounds& declared = {},
                                 const StabilityOptions& options = {});

struct RemainderFit {
  double constant = 0.0;  // max over eps of ||R(eps)|| / eps^2
  double slope = kNaN;
  std::vector<double> norms;  // ||R(eps)|| for remainder_epsilons
};

/// R(eps) = p(S + eps T(S)) - p(S) - eps * sum_i D_i{T(S_i)}.
RemainderFit fit_remainder(const PolynomialFilter& p, const ShiftFamily& shifts,
                           const PerturbationModel& model, const StabilityOptions& options = {});

/// ||(p(S) - p(S~)) x|| against ||x|| (sum_i ||D_i{T(S_i)}|| + remainder).
/// Without x the operator-norm form is checked.
StabilityTrial check_theorem1(const PolynomialFilter& p, const ShiftFamily& shifts,
                              const PerturbationModel& model,
                              const std::optional<Vector>& x = std::nullopt,
                              const StabilityOptions& options = {});

/// max_i ||D_i{T(S_i)}|| against (1 + delta)(L0 max_i ||T(S_i)|| + L1 max_i ||T1_i||).
StabilityTrial check_theorem2(const PolynomialFilter& p, const ShiftFamily& shifts,
                              const PerturbationModel& model, const FilterCertificate& certificate,
                              const StabilityOptions& options = {});

/// ||(p(S) - p(S~)) x|| against
/// [m (1 + delta)(L0 sup ||T(S)|| + L1 sup ||T1||) + remainder] ||x||.
StabilityTrial check_corollary(const PolynomialFilter& p, const ShiftFamily& shifts,
                               const PerturbationModel& model, const FilterCertificate& certificate,
                               const std::optional<Vector>& x = std::nullopt,
                               const StabilityOptions& options = {});

struct ClaimCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool passed = false;
  /// Reported-only claims do not count towards all_asserted_pass.
  bool asserted = true;
};

struct ProofDecompositionReport {
  std::vector<ClaimCheck> claims;
  double modified_norm = 0.0;     // ||D~||, power iteration
  double max_zeta = 0.0;          // max |zeta_pq|
  std::vector<Complex> zeta;      // row-major over (p, q)

  bool all_asserted_pass() const;
  const ClaimCheck& claim(std::string_view name) const;
};

/// Recomputes the pieces of the single-generator derivative bound term by
/// term: coefficient identities, the four term bounds, the reorganized
/// expansion (asserted only for nonsingular S) and the eigenvalues of
/// xi -> D{xi S} (asserted only for diagonal S).
ProofDecompositionReport proof_decomposition_check(const PolynomialFilter& p,
                                                   const ShiftFamily& shifts,
                                                   const PerturbationModel& model,
                                                   const FilterCertificate& certificate,
                                                   const StabilityOptions& options = {});

/// Divided-difference eigenvalue of xi -> D{xi S} on u_p u_q*.
Complex modified_zeta(const PolynomialFilter& p, Complex lambda_p, Complex lambda_q);

}  // namespace algstab
