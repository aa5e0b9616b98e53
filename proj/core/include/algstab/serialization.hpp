#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "algstab/algnn.hpp"
#include "algstab/perturbation.hpp"
#include "algstab/polynomials.hpp"
#include "algstab/shift_family.hpp"
#include "algstab/spectral.hpp"

namespace algstab {

using Json = nlohmann::json;

/// Complex matrices are nested row lists of [re, im] pairs.
Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);

/// {"m": int, "terms": [{"k": [...], "h": float}, ...]}. Also accepts the
/// univariate shorthand {"taps": [h_0, h_1, ...]}.
Json filter_to_json(const PolynomialFilter& p);
PolynomialFilter filter_from_json(const Json& j);

/// {"model": tag, "n": int, "shifts": [matrix, ...]}.
Json family_to_json(const ShiftFamily& s);
ShiftFamily family_from_json(const Json& j);

/// Builds a family from a model description: {"kind": "cyclic", "n": 16},
/// graph (edges / edges_file / random), graphon, abelian_group, grid2d,
/// file, or an explicit family object. Relative paths resolve against
/// base_dir.
ShiftFamily family_from_spec(const Json& spec, const std::filesystem::path& base_dir = {});

/// Matrices per generator plus optional provenance fields.
Json perturbation_to_json(const PerturbationModel& model);
PerturbationModel perturbation_from_json(const Json& j);

/// {"lambda": [[[re, im] per generator] per eigenpair], "U": matrix, "model_ref": str}.
Json decomposition_to_json(const SpectralDecomposition& d);

/// {"input_features": int, "layers": [{"model", "filters", "eta", "pooling"}]}.
AlgNN network_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json network_to_json(const AlgNN& net);

Features features_from_json(const Json& j);
Json features_to_json(const Features& x);

}  // namespace algstab
