#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "algstab/linalg.hpp"

namespace algstab {

enum class ModelTag { cyclic, graph, graphon, abelian_group, grid2d, custom };

std::string_view to_string(ModelTag tag);
ModelTag model_tag_from_string(std::string_view name);

/// One or more dense n x n operators realizing the generators of an algebra
/// on a finite-dimensional signal space. Immutable; normality and pairwise
/// commutator defects are measured once at construction.
class ShiftFamily {
 public:
  ShiftFamily(ModelTag tag, std::vector<Matrix> shifts);

  int dimension() const { return dimension_; }
  int num_generators() const { return static_cast<int>(shifts_.size()); }
  const Matrix& shift(int i) const { return shifts_.at(static_cast<std::size_t>(i)); }
  const std::vector<Matrix>& shifts() const { return shifts_; }
  ModelTag tag() const { return tag_; }

  /// max_i ||S_i S_i* - S_i* S_i||.
  double normality_defect() const { return normality_defect_; }
  /// max_{i<j} ||S_i S_j - S_j S_i|| / (||S_i|| ||S_j||).
  double commutator_defect() const { return commutator_defect_; }
  /// max_i ||S_i||.
  double max_norm() const { return max_norm_; }

  bool is_commuting() const { return commutator_defect_ <= kCommutatorTolerance; }
  /// Normality test used by the spectral path; the defect is compared
  /// against kNormalityTolerance * max(1, ||S||^2).
  bool is_normal() const;
  bool is_real() const;

 private:
  ModelTag tag_;
  std::vector<Matrix> shifts_;
  int dimension_ = 0;
  double normality_defect_ = 0.0;
  double commutator_defect_ = 0.0;
  double max_norm_ = 0.0;
};

}  // namespace algstab
