#include "algstab/algnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "algstab/errors.hpp"
#include "algstab/signal_models.hpp"
#include "algstab/spectral.hpp"

namespace algstab {

namespace {

std::vector<int> mode_order(const SpectralDecomposition& decomp, bool keep_largest) {
  std::vector<int> order(static_cast<std::size_t>(decomp.dimension()));
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int i) { return std::round(decomp.eigenvalues.row(i).norm() * 1e9); };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return keep_largest ? key(a) > key(b) : key(a) < key(b);
  });
  return order;
}

RealMatrix build_pooling(const AlgNNLayer& layer, const AlgNNLayer* next) {
  const int n = layer.shifts.dimension();
  const PoolingSpec& spec = layer.pooling;
  RealMatrix p;
  switch (spec.kind) {
    case PoolingKind::identity:
      p = RealMatrix::Identity(n, n);
      break;
    case PoolingKind::decimation: {
      if (spec.k < 1 || n % spec.k != 0) {
        throw ArgumentError("decimation factor must divide the layer dimension");
      }
      p = RealMatrix::Zero(n / spec.k, n);
      for (int r = 0; r < n / spec.k; ++r) p(r, r * spec.k) = 1.0;
      break;
    }
    case PoolingKind::spectral: {
      if (next == nullptr) throw ArgumentError("spectral pooling needs a following layer");
      const int n_next = next->shifts.dimension();
      if (spec.k < 1 || spec.k > std::min(n, n_next)) {
        throw ArgumentError("spectral pooling size out of range");
      }
      const SpectralDecomposition cur = decompose(layer.shifts);
      const SpectralDecomposition nxt = decompose(next->shifts);
      const auto ci = mode_order(cur, spec.keep_largest);
      const auto nj = mode_order(nxt, spec.keep_largest);
      Matrix acc = Matrix::Zero(n_next, n);
      for (int a = 0; a < spec.k; ++a) {
        acc += nxt.eigenvectors.col(nj[static_cast<std::size_t>(a)]) *
               cur.eigenvectors.col(ci[static_cast<std::size_t>(a)]).adjoint();
      }
      p = acc.real();
      break;
    }
  }
  if (next != nullptr && p.rows() != next->shifts.dimension()) {
    throw ArgumentError("pooling output dimension does not match the next layer");
  }
  return p;
}

std::vector<std::vector<RealMatrix>> realize_bank(const AlgNNLayer& layer,
                                                  std::span<const Matrix> shifts) {
  std::vector<std::vector<RealMatrix>> out;
  for (const auto& row : layer.filters) {
    std::vector<RealMatrix> r;
    for (const auto& p : row) {
      const Matrix h = eval_ordered(p, shifts);
      if (!is_effectively_real(h, 1e-10)) {
        throw ArgumentError("network layers need real-valued filter operators");
      }
      r.push_back(h.real());
    }
    out.push_back(std::move(r));
  }
  return out;
}

Features subtract(const Features& a, const Features& b) {
  Features out;
  for (std::size_t f = 0; f < a.size(); ++f) out.push_back(a[f] - b[f]);
  return out;
}

std::vector<std::vector<Matrix>> unperturbed_shifts(const AlgNN& net) {
  std::vector<std::vector<Matrix>> out;
  for (const auto& layer : net.layers()) out.push_back(layer.shifts.shifts());
  return out;
}

}  // namespace

std::string_view to_string(Nonlinearity eta) {
  switch (eta) {
    case Nonlinearity::relu: return "relu";
    case Nonlinearity::abs: return "abs";
    case Nonlinearity::tanh: return "tanh";
    case Nonlinearity::identity: return "identity";
  }
  return "identity";
}

Nonlinearity nonlinearity_from_string(std::string_view name) {
  if (name == "relu") return Nonlinearity::relu;
  if (name == "abs") return Nonlinearity::abs;
  if (name == "tanh") return Nonlinearity::tanh;
  if (name == "identity") return Nonlinearity::identity;
  throw ArgumentError("unknown nonlinearity '" + std::string(name) + "'");
}

std::string_view to_string(PoolingKind kind) {
  switch (kind) {
    case PoolingKind::identity: return "identity";
    case PoolingKind::decimation: return "decimation";
    case PoolingKind::spectral: return "spectral";
  }
  return "identity";
}

PoolingKind pooling_kind_from_string(std::string_view name) {
  if (name == "identity") return PoolingKind::identity;
  if (name == "decimation") return PoolingKind::decimation;
  if (name == "spectral") return PoolingKind::spectral;
  throw ArgumentError("unknown pooling kind '" + std::string(name) + "'");
}

double apply_nonlinearity(Nonlinearity eta, double v) {
  switch (eta) {
    case Nonlinearity::relu: return v > 0.0 ? v : 0.0;
    case Nonlinearity::abs: return std::abs(v);
    case Nonlinearity::tanh: return std::tanh(v);
    case Nonlinearity::identity: return v;
  }
  return v;
}

AlgNN::AlgNN(std::vector<AlgNNLayer> layers, int input_features) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ArgumentError("a network needs at least one layer");
  if (input_features < 1) throw ArgumentError("input feature count must be positive");
  features_.push_back(input_features);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (static_cast<int>(layer.filters.size()) != features_.back()) {
      throw ArgumentError("layer " + std::to_string(l) + " filter bank has " +
                          std::to_string(layer.filters.size()) + " input rows, expected " +
                          std::to_string(features_.back()));
    }
    const std::size_t out_features = layer.filters.front().size();
    if (out_features == 0) throw ArgumentError("layer needs at least one output feature");
    for (const auto& row : layer.filters) {
      if (row.size() != out_features) throw ArgumentError("ragged filter bank");
      for (const auto& p : row) {
        if (p.num_generators() != layer.shifts.num_generators()) {
          throw ArgumentError("filter arity does not match the layer's shifts");
        }
      }
    }
    features_.push_back(static_cast<int>(out_features));
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const AlgNNLayer* next = l + 1 < layers_.size() ? &layers_[l + 1] : nullptr;
    pooling_.push_back(build_pooling(layers_[l], next));
  }
}

Features layer_map(const AlgNN& net, int l, const Features& x, std::span<const Matrix> shifts) {
  const AlgNNLayer& layer = net.layer(l);
  const int n = layer.shifts.dimension();
  if (static_cast<int>(x.size()) != net.feature_counts()[static_cast<std::size_t>(l)]) {
    throw ArgumentError("layer " + std::to_string(l) + " received the wrong number of features");
  }
  for (const auto& v : x) {
    if (v.size() != n) throw ArgumentError("layer " + std::to_string(l) + " input has the wrong dimension");
  }
  const auto bank = realize_bank(layer, shifts);
  const auto out_features = static_cast<std::size_t>(net.feature_counts()[static_cast<std::size_t>(l) + 1]);
  Features out;
  for (std::size_t f = 0; f < out_features; ++f) {
    RealVector z = RealVector::Zero(n);
    for (std::size_t g = 0; g < x.size(); ++g) z += bank[g][f] * x[g];
    for (Eigen::Index a = 0; a < z.size(); ++a) z(a) = apply_nonlinearity(layer.eta, z(a));
    out.push_back(net.pooling_matrix(l) * z);
  }
  return out;
}

Features forward_with_shifts(const AlgNN& net, const Features& x,
                             const std::vector<std::vector<Matrix>>& layer_shifts) {
  if (static_cast<int>(layer_shifts.size()) != net.num_layers()) {
    throw ArgumentError("need one shift set per layer");
  }
  Features cur = x;
  for (int l = 0; l < net.num_layers(); ++l) {
    cur = layer_map(net, l, cur, layer_shifts[static_cast<std::size_t>(l)]);
  }
  return cur;
}

Features forward(const AlgNN& net, const Features& x) {
  return forward_with_shifts(net, x, unperturbed_shifts(net));
}

double feature_norm(const Features& x) {
  double s = 0.0;
  for (const auto& v : x) s += v.squaredNorm();
  return std::sqrt(s);
}

double feature_sum_norm(const Features& x) {
  double s = 0.0;
  for (const auto& v : x) s += v.norm();
  return s;
}

LayerConstants layer_constants(const AlgNN& net, int l, const PerturbationModel& model,
                               const StabilityOptions& options) {
  const AlgNNLayer& layer = net.layer(l);
  const ShiftFamily& shifts = layer.shifts;
  const ShiftFamily perturbed = perturb(shifts, model);
  LayerConstants out;
  out.c = op_norm(net.pooling_matrix(l).cast<Complex>());
  if (!shifts.is_commuting() || !shifts.is_normal()) {
    out.certified = false;
    out.note = "layer shifts are not a normal commuting family";
    return out;
  }
  const SpectralDecomposition decomp = decompose(shifts);
  out.delta = commutation_analysis(shifts, model, options.pairing).delta;
  for (const auto& row : layer.filters) {
    for (const auto& p : row) {
      const FilterCertificate cert = certify_filter(p, shifts, perturbed, {}, options);
      if (!cert.certified) {
        out.certified = false;
        out.note = cert.reason;
      }
      out.l0 = std::max(out.l0, cert.l0);
      out.l1 = std::max(out.l1, cert.l1);
      out.remainder = std::max(out.remainder, fit_remainder(p, shifts, model, options).constant);
      const double spectral_max = spectral_response(decomp, p).cwiseAbs().maxCoeff();
      const double perturbed_norm = op_norm(eval_ordered(p, perturbed.shifts()));
      out.b = std::max({out.b, spectral_max, perturbed_norm});
    }
  }
  for (int i = 0; i < shifts.num_generators(); ++i) {
    out.sup_t = std::max(out.sup_t, op_norm(model.displacement(i, shifts.shift(i))));
  }
  out.sup_t1 = model.max_relative_norm();
  const double m = shifts.num_generators();
  out.delta_l = m * (1.0 + out.delta) * (out.l0 * out.sup_t + out.l1 * out.sup_t1) + out.remainder;
  return out;
}

StabilityTrial layer_stability_check(const AlgNN& net, int l, const PerturbationModel& model,
                                     const Features& x, const StabilityOptions& options) {
  const LayerConstants k = layer_constants(net, l, model, options);
  StabilityTrial t;
  t.check = "layer";
  t.delta = k.delta;
  t.l0 = k.l0;
  t.l1 = k.l1;
  t.remainder = k.remainder;
  if (!k.certified) {
    t.status = TrialStatus::inapplicable;
    t.lhs = t.rhs = t.margin = kNaN;
    t.note = k.note;
    return t;
  }
  const ShiftFamily perturbed = perturb(net.layer(l).shifts, model);
  const Features clean = layer_map(net, l, x, net.layer(l).shifts.shifts());
  const Features moved = layer_map(net, l, x, perturbed.shifts());
  t.lhs = feature_norm(subtract(clean, moved));
  const double f_out = net.feature_counts()[static_cast<std::size_t>(l) + 1];
  t.rhs = std::sqrt(f_out) * k.c * k.delta_l * feature_sum_norm(x);
  t.margin = t.rhs - t.lhs;
  const double slack = options.margin_tolerance * t.rhs + 1e-14 * std::max(t.lhs, t.rhs);
  t.status = t.margin >= -slack ? TrialStatus::pass : TrialStatus::violated;
  return t;
}

double network_bound_term(const AlgNN& net, const std::vector<LayerConstants>& constants, int l,
                          double input_norm) {
  // 1-based layer index ell = l + 1; C_r, B_r live at constants[r - 1], F_r at feature_counts[r].
  const int big_l = net.num_layers();
  const int ell = l + 1;
  const auto& fc = net.feature_counts();
  auto c = [&](int r) { return constants[static_cast<std::size_t>(r - 1)].c; };
  auto b = [&](int r) { return constants[static_cast<std::size_t>(r - 1)].b; };
  auto f = [&](int r) { return static_cast<double>(fc[static_cast<std::size_t>(r)]); };
  double term = constants[static_cast<std::size_t>(l)].delta_l;
  for (int r = ell; r <= big_l; ++r) term *= c(r);
  for (int r = ell + 1; r <= big_l; ++r) term *= b(r);
  for (int r = ell; r <= big_l - 1; ++r) term *= f(r);
  for (int r = 1; r <= ell - 1; ++r) term *= c(r) * f(r) * b(r);
  return term * input_norm;
}

NetworkStabilityTrial network_stability_check(const AlgNN& net,
                                              const LayerPerturbations& perturbations,
                                              const Features& x, const StabilityOptions& options) {
  if (static_cast<int>(perturbations.size()) != net.num_layers()) {
    throw ArgumentError("need one perturbation model per layer");
  }
  NetworkStabilityTrial out;
  out.trial.check = "network";
  out.trial.delta = 0.0;
  out.trial.l0 = 0.0;
  out.trial.l1 = 0.0;
  std::vector<std::vector<Matrix>> moved_shifts;
  bool certified = true;
  for (int l = 0; l < net.num_layers(); ++l) {
    const auto& model = perturbations[static_cast<std::size_t>(l)];
    out.constants.push_back(layer_constants(net, l, model, options));
    if (!out.constants.back().certified) {
      certified = false;
      out.trial.note = "layer " + std::to_string(l) + ": " + out.constants.back().note;
    }
    moved_shifts.push_back(perturb(net.layer(l).shifts, model).shifts());
    out.trial.delta = std::max(out.trial.delta, out.constants.back().delta);
    out.trial.l0 = std::max(out.trial.l0, out.constants.back().l0);
    out.trial.l1 = std::max(out.trial.l1, out.constants.back().l1);
  }
  if (!certified) {
    out.trial.status = TrialStatus::inapplicable;
    out.trial.lhs = out.trial.rhs = out.trial.margin = kNaN;
    return out;
  }
  const Features clean = forward(net, x);
  const Features moved = forward_with_shifts(net, x, moved_shifts);
  out.trial.lhs = feature_norm(subtract(clean, moved));

  const double n0 = feature_sum_norm(x);
  const double root_fl = std::sqrt(static_cast<double>(net.feature_counts().back()));
  double rhs = 0.0;
  for (int l = 0; l < net.num_layers(); ++l) {
    out.terms.push_back(root_fl * network_bound_term(net, out.constants, l, n0));
    rhs += out.terms.back();
  }
  // Statement form: Delta_l (prod_{r>=l} C_r)(prod_{r>l} B_r)(prod_{r<l} C_r B_r) ||x||.
  const double x_norm = feature_norm(x);
  for (int l = 0; l < net.num_layers(); ++l) {
    double term = out.constants[static_cast<std::size_t>(l)].delta_l;
    for (int r = l; r < net.num_layers(); ++r) term *= out.constants[static_cast<std::size_t>(r)].c;
    for (int r = l + 1; r < net.num_layers(); ++r) term *= out.constants[static_cast<std::size_t>(r)].b;
    for (int r = 0; r < l; ++r) {
      term *= out.constants[static_cast<std::size_t>(r)].c * out.constants[static_cast<std::size_t>(r)].b;
    }
    out.statement_rhs += term * x_norm;
  }
  out.trial.rhs = rhs;
  out.trial.margin = rhs - out.trial.lhs;
  const double slack = options.margin_tolerance * rhs + 1e-14 * std::max(out.trial.lhs, rhs);
  out.trial.status = out.trial.margin >= -slack ? TrialStatus::pass : TrialStatus::violated;
  return out;
}

AlgNN demo_network(std::uint64_t seed, double lipschitz_target) {
  const std::vector<int> dims{16, 8, 4};
  const std::vector<int> features{1, 2, 2, 1};
  std::vector<AlgNNLayer> layers;
  std::uint64_t counter = 0;
  for (std::size_t l = 0; l < dims.size(); ++l) {
    ShiftFamily shifts = cyclic_shift(dims[l]);
    std::vector<std::vector<PolynomialFilter>> bank;
    for (int g = 0; g < features[l]; ++g) {
      std::vector<PolynomialFilter> row;
      for (int f = 0; f < features[l + 1]; ++f) {
        PolynomialFilter p = random_filter(1, 3, seed * 1000 + counter++);
        const double l0 = estimate_lipschitz(p, 1.05 * shifts.max_norm(), 32).l0;
        row.push_back(l0 > 0.0 ? p.scaled(lipschitz_target / l0) : p);
      }
      bank.push_back(std::move(row));
    }
    PoolingSpec pooling;
    if (l + 1 < dims.size()) pooling = {PoolingKind::spectral, dims[l + 1], false};
    layers.push_back({std::move(shifts), std::move(bank), Nonlinearity::relu, pooling});
  }
  return AlgNN(std::move(layers), features.front());
}

}  // namespace algstab
