#include "algstab/shift_family.hpp"

#include <algorithm>
#include <array>

#include "algstab/errors.hpp"

namespace algstab {

namespace {

constexpr std::array<std::pair<ModelTag, std::string_view>, 6> kTagNames{{
    {ModelTag::cyclic, "cyclic"},
    {ModelTag::graph, "graph"},
    {ModelTag::graphon, "graphon"},
    {ModelTag::abelian_group, "abelian_group"},
    {ModelTag::grid2d, "grid2d"},
    {ModelTag::custom, "custom"},
}};

}  // namespace

std::string_view to_string(ModelTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "custom";
}

ModelTag model_tag_from_string(std::string_view name) {
  for (const auto& [t, n] : kTagNames) {
    if (n == name) return t;
  }
  throw ArgumentError("unknown model tag '" + std::string(name) + "'");
}

ShiftFamily::ShiftFamily(ModelTag tag, std::vector<Matrix> shifts)
    : tag_(tag), shifts_(std::move(shifts)) {
  if (shifts_.empty()) throw ArgumentError("shift family needs at least one operator");
  dimension_ = static_cast<int>(shifts_.front().rows());
  if (dimension_ == 0) throw ArgumentError("shift operators must be non-empty");
  for (const auto& s : shifts_) {
    if (s.rows() != dimension_ || s.cols() != dimension_) {
      throw ArgumentError("shift operators must be square with a common dimension");
    }
  }
  for (std::size_t i = 0; i < shifts_.size(); ++i) {
    normality_defect_ = std::max(normality_defect_, algstab::normality_defect(shifts_[i]));
    max_norm_ = std::max(max_norm_, op_norm(shifts_[i]));
    for (std::size_t j = i + 1; j < shifts_.size(); ++j) {
      commutator_defect_ =
          std::max(commutator_defect_, relative_commutator(shifts_[i], shifts_[j]));
    }
  }
}

bool ShiftFamily::is_normal() const {
  return normality_defect_ <= kNormalityTolerance * std::max(1.0, max_norm_ * max_norm_);
}

bool ShiftFamily::is_real() const {
  return std::all_of(shifts_.begin(), shifts_.end(),
                     [](const Matrix& s) { return is_effectively_real(s); });
}

}  // namespace algstab
