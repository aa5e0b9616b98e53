#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "algstab/linalg.hpp"
#include "algstab/shift_family.hpp"

namespace algstab {

enum class PerturbationMode { commuting, generic, scalar };
enum class Pairing { by_magnitude, by_index };

std::string_view to_string(PerturbationMode mode);
PerturbationMode perturbation_mode_from_string(std::string_view name);
std::string_view to_string(Pairing pairing);
Pairing pairing_from_string(std::string_view name);

/// T(S_i) = absolute + relative * S_i.
struct GeneratorPerturbation {
  Matrix absolute;  // T0_i
  Matrix relative;  // T1_i
};

/// How a random model was drawn; absent for hand-built models.
struct PerturbationProvenance {
  double norm0 = 0.0;
  double norm1 = 0.0;
  PerturbationMode mode = PerturbationMode::generic;
  std::uint64_t seed = 0;
};

/// Per-generator pairs (T0_i, T1_i) of normal operators with norm < 1.
class PerturbationModel {
 public:
  explicit PerturbationModel(std::vector<GeneratorPerturbation> per_generator,
                             std::optional<PerturbationProvenance> provenance = std::nullopt);

  static PerturbationModel zero(int dimension, int num_generators);

  int num_generators() const { return static_cast<int>(per_generator_.size()); }
  int dimension() const { return static_cast<int>(per_generator_.front().absolute.rows()); }
  const GeneratorPerturbation& generator(int i) const {
    return per_generator_.at(static_cast<std::size_t>(i));
  }
  const std::vector<GeneratorPerturbation>& per_generator() const { return per_generator_; }
  const std::optional<PerturbationProvenance>& provenance() const { return provenance_; }

  /// T_r of generator i (r = 0 absolute, r = 1 relative).
  const Matrix& component(int i, int r) const;
  /// T(S_i) = T0_i + T1_i S_i.
  Matrix displacement(int i, const Matrix& s) const;
  /// Same operators multiplied by factor (|factor| <= 1).
  PerturbationModel scaled(double factor) const;

  /// max_i ||T0_i|| and max_i ||T1_i||.
  double max_absolute_norm() const;
  double max_relative_norm() const;

 private:
  std::vector<GeneratorPerturbation> per_generator_;
  std::optional<PerturbationProvenance> provenance_;
};

/// S~_i = S_i + T0_i + T1_i S_i, tagged custom.
ShiftFamily perturb(const ShiftFamily& shifts, const PerturbationModel& model);

/// Random admissible model with ||T_r|| = norm_r exactly.
///   commuting: T_r = sum mu_j u_j u_j* in the shifts' eigenbasis with
///              random real mu, aligned with the pairing rule so delta = 0
///   generic:   random real symmetric matrix
///   scalar:    norm_r * I
PerturbationModel random_perturbation(const ShiftFamily& shifts, double norm0, double norm1,
                                      PerturbationMode mode, std::uint64_t seed);

struct CommutationTerm {
  int generator = 0;
  int r = 0;
  Matrix t_cr;
  Matrix p_r;
  double t_norm = 0.0;
  double t_cr_norm = 0.0;
  double p_norm = 0.0;
  double residual = 0.0;    // ||S T_r - T_cr S - S P_r||
  double commutator = 0.0;  // ||S T_cr - T_cr S||
};

struct CommutationAnalysis {
  std::vector<CommutationTerm> terms;
  double delta = 0.0;
  double delta_bound = 0.0;
  bool singular_shift = false;
  double max_residual = 0.0;

  const CommutationTerm& term(int generator, int r) const;
};

/// Splits S T_r = T_cr S + S P_r for every generator and r in {0, 1}.
/// T_cr carries the eigenvalues of T_r on the eigenvectors of S, matched by
/// the pairing rule; P_r is the minimum-norm least-squares solution, and a
/// singular S is flagged rather than rejected.
CommutationAnalysis commutation_analysis(const ShiftFamily& shifts, const PerturbationModel& model,
                                         Pairing pairing = Pairing::by_magnitude);

/// max_r sum_{i,j} |lambda_i / lambda_max| ||T_{u_i} T_{v_j} - T_{u_i} T_{u_j}||
/// where v_j is the eigenvector of T_r whose eigenvalue is paired with u_j.
double delta_upper_bound(const ShiftFamily& shifts, const PerturbationModel& model,
                         Pairing pairing = Pairing::by_magnitude);

}  // namespace algstab
