#include "algstab/perturbation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "algstab/errors.hpp"
#include "algstab/spectral.hpp"

namespace algstab {

namespace {

constexpr double kPerturbationNormalTolerance = 1e-10;
// Eigenvalues below this fraction of max |lambda| count as zero.
constexpr double kSingularTolerance = 1e-12;

std::vector<int> descending_magnitude(const Vector& values, Pairing pairing) {
  std::vector<int> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), 0);
  if (pairing == Pairing::by_magnitude) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::round(std::abs(values(a)) * 1e9) > std::round(std::abs(values(b)) * 1e9);
    });
  }
  return order;
}

// u-index -> (mu, eigenvector of T_r) under the pairing rule.
struct PairedSpectrum {
  Vector mu;
  Matrix v;
};

PairedSpectrum pair_spectrum(const SpectralDecomposition& decomp, int generator, const Matrix& t,
                             Pairing pairing) {
  const Vector lambda = decomp.eigenvalues.col(generator);
  const NormalEigen te = normal_eigen(t);
  const auto s_order = descending_magnitude(lambda, pairing);
  const auto t_order = descending_magnitude(te.values, pairing);
  PairedSpectrum out{Vector(lambda.size()), Matrix(t.rows(), t.cols())};
  for (std::size_t k = 0; k < s_order.size(); ++k) {
    out.mu(s_order[k]) = te.values(t_order[k]);
    out.v.col(s_order[k]) = te.vectors.col(t_order[k]);
  }
  // Inside a repeated eigenvalue of T any orthonormal basis of the
  // eigenspace is admissible. Rotate it to the one closest to the paired
  // u_j (orthogonal Procrustes), so e.g. T = eps I gives v_j = u_j.
  const Matrix& u = decomp.eigenvectors;
  const double tol = 1e-9 * std::max(1.0, te.values.cwiseAbs().maxCoeff());
  const auto n = static_cast<std::size_t>(lambda.size());
  std::vector<bool> done(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    if (done[a]) continue;
    std::vector<Eigen::Index> cluster;
    for (std::size_t b = a; b < n; ++b) {
      if (!done[b] && std::abs(out.mu(static_cast<Eigen::Index>(b)) - out.mu(static_cast<Eigen::Index>(a))) <= tol) {
        cluster.push_back(static_cast<Eigen::Index>(b));
        done[b] = true;
      }
    }
    if (cluster.size() < 2) continue;
    const auto d = static_cast<Eigen::Index>(cluster.size());
    Matrix q(u.rows(), d);
    Matrix uj(u.rows(), d);
    for (Eigen::Index c = 0; c < d; ++c) {
      q.col(c) = out.v.col(cluster[static_cast<std::size_t>(c)]);
      uj.col(c) = u.col(cluster[static_cast<std::size_t>(c)]);
    }
    Eigen::JacobiSVD<Matrix> svd(q.adjoint() * uj, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix rotated = q * (svd.matrixU() * svd.matrixV().adjoint());
    for (Eigen::Index c = 0; c < d; ++c) out.v.col(cluster[static_cast<std::size_t>(c)]) = rotated.col(c);
  }
  return out;
}

Matrix symmetric_gaussian(int n, std::uint64_t seed) {
  const Matrix g = random_matrix(n, n, seed, true);
  return (g + g.transpose()) * 0.5;
}

std::uint64_t component_seed(std::uint64_t seed, int generator, int r) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(generator), static_cast<std::uint32_t>(r)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

std::string_view to_string(PerturbationMode mode) {
  switch (mode) {
    case PerturbationMode::commuting: return "commuting";
    case PerturbationMode::generic: return "generic";
    case PerturbationMode::scalar: return "scalar";
  }
  return "generic";
}

PerturbationMode perturbation_mode_from_string(std::string_view name) {
  if (name == "commuting") return PerturbationMode::commuting;
  if (name == "generic") return PerturbationMode::generic;
  if (name == "scalar") return PerturbationMode::scalar;
  throw ArgumentError("unknown perturbation mode '" + std::string(name) + "'");
}

std::string_view to_string(Pairing pairing) {
  return pairing == Pairing::by_magnitude ? "by_magnitude" : "by_index";
}

Pairing pairing_from_string(std::string_view name) {
  if (name == "by_magnitude") return Pairing::by_magnitude;
  if (name == "by_index") return Pairing::by_index;
  throw ArgumentError("unknown pairing '" + std::string(name) + "'");
}

PerturbationModel::PerturbationModel(std::vector<GeneratorPerturbation> per_generator,
                                     std::optional<PerturbationProvenance> provenance)
    : per_generator_(std::move(per_generator)), provenance_(provenance) {
  if (per_generator_.empty()) throw ArgumentError("perturbation model needs at least one generator");
  const auto n = per_generator_.front().absolute.rows();
  for (const auto& g : per_generator_) {
    for (const Matrix* t : {&g.absolute, &g.relative}) {
      if (t->rows() != n || t->cols() != n) {
        throw ArgumentError("perturbation operators must be square with a common dimension");
      }
      if (!t->allFinite()) throw ArgumentError("perturbation operators must be finite");
      if (op_norm(*t) >= 1.0) throw ArgumentError("perturbation operators need ||T_r|| < 1");
      if (normality_defect(*t) > kPerturbationNormalTolerance) {
        throw ArgumentError("perturbation operators must be normal");
      }
    }
  }
}

PerturbationModel PerturbationModel::zero(int dimension, int num_generators) {
  std::vector<GeneratorPerturbation> g(static_cast<std::size_t>(num_generators),
                                       {Matrix::Zero(dimension, dimension),
                                        Matrix::Zero(dimension, dimension)});
  return PerturbationModel(std::move(g));
}

const Matrix& PerturbationModel::component(int i, int r) const {
  const auto& g = generator(i);
  return r == 0 ? g.absolute : g.relative;
}

Matrix PerturbationModel::displacement(int i, const Matrix& s) const {
  const auto& g = generator(i);
  return g.absolute + g.relative * s;
}

PerturbationModel PerturbationModel::scaled(double factor) const {
  if (!(std::abs(factor) <= 1.0)) throw ArgumentError("scaling factor must satisfy |factor| <= 1");
  auto g = per_generator_;
  for (auto& t : g) {
    t.absolute *= factor;
    t.relative *= factor;
  }
  return PerturbationModel(std::move(g), provenance_);
}

double PerturbationModel::max_absolute_norm() const {
  double out = 0.0;
  for (const auto& g : per_generator_) out = std::max(out, op_norm(g.absolute));
  return out;
}

double PerturbationModel::max_relative_norm() const {
  double out = 0.0;
  for (const auto& g : per_generator_) out = std::max(out, op_norm(g.relative));
  return out;
}

ShiftFamily perturb(const ShiftFamily& shifts, const PerturbationModel& model) {
  if (model.num_generators() != shifts.num_generators() ||
      model.dimension() != shifts.dimension()) {
    throw ArgumentError("perturbation model does not match the shift family");
  }
  std::vector<Matrix> out;
  for (int i = 0; i < shifts.num_generators(); ++i) {
    out.push_back(shifts.shift(i) + model.displacement(i, shifts.shift(i)));
  }
  return ShiftFamily(ModelTag::custom, std::move(out));
}

PerturbationModel random_perturbation(const ShiftFamily& shifts, double norm0, double norm1,
                                      PerturbationMode mode, std::uint64_t seed) {
  for (double v : {norm0, norm1}) {
    if (!(v >= 0.0 && v < 1.0)) throw ArgumentError("perturbation norms must lie in [0, 1)");
  }
  const int n = shifts.dimension();
  const int m = shifts.num_generators();
  std::optional<SpectralDecomposition> decomp;
  if (mode == PerturbationMode::commuting) decomp = decompose(shifts);

  std::vector<GeneratorPerturbation> out;
  for (int i = 0; i < m; ++i) {
    std::array<Matrix, 2> t;
    for (int r = 0; r < 2; ++r) {
      const double norm = r == 0 ? norm0 : norm1;
      const auto ur = static_cast<std::size_t>(r);
      if (norm == 0.0) {
        t[ur] = Matrix::Zero(n, n);
        continue;
      }
      const std::uint64_t s = component_seed(seed, i, r);
      switch (mode) {
        case PerturbationMode::scalar:
          t[ur] = norm * Matrix::Identity(n, n);
          break;
        case PerturbationMode::generic: {
          Matrix g = symmetric_gaussian(n, s);
          t[ur] = g * (norm / op_norm(g));
          break;
        }
        case PerturbationMode::commuting: {
          std::mt19937_64 rng(s);
          std::normal_distribution<double> gauss(0.0, 1.0);
          std::vector<double> mu(static_cast<std::size_t>(n));
          for (auto& v : mu) v = gauss(rng);
          std::sort(mu.begin(), mu.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
          const double top = std::abs(mu.front());
          const auto order = descending_magnitude(decomp->eigenvalues.col(i), Pairing::by_magnitude);
          Vector diag(n);
          for (std::size_t k = 0; k < order.size(); ++k) diag(order[k]) = mu[k] * (norm / top);
          const Matrix& u = decomp->eigenvectors;
          t[ur] = u * diag.asDiagonal() * u.adjoint();
          break;
        }
      }
    }
    out.push_back({t[0], t[1]});
  }
  return PerturbationModel(std::move(out), PerturbationProvenance{norm0, norm1, mode, seed});
}

const CommutationTerm& CommutationAnalysis::term(int generator, int r) const {
  for (const auto& t : terms) {
    if (t.generator == generator && t.r == r) return t;
  }
  throw ArgumentError("no commutation term for the requested generator");
}

CommutationAnalysis commutation_analysis(const ShiftFamily& shifts, const PerturbationModel& model,
                                         Pairing pairing) {
  if (model.num_generators() != shifts.num_generators() ||
      model.dimension() != shifts.dimension()) {
    throw ArgumentError("perturbation model does not match the shift family");
  }
  const SpectralDecomposition decomp = decompose(shifts);
  const Matrix& u = decomp.eigenvectors;
  CommutationAnalysis out;
  for (int i = 0; i < shifts.num_generators(); ++i) {
    const Matrix& s = shifts.shift(i);
    // Projector onto range(S). Because T_cr commutes with S, the
    // minimum-norm solution of S P = S T - T_cr S is P = Pi (T - T_cr);
    // this avoids amplifying rounding by 1 / sigma_min on ill-conditioned S.
    const Vector lambda = decomp.eigenvalues.col(i);
    const double cutoff = kSingularTolerance * lambda.cwiseAbs().maxCoeff();
    Vector keep(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      keep(k) = std::abs(lambda(k)) > cutoff ? 1.0 : 0.0;
      out.singular_shift = out.singular_shift || std::abs(lambda(k)) <= cutoff;
    }
    const Matrix range = u * keep.asDiagonal() * u.adjoint();
    for (int r = 0; r < 2; ++r) {
      const Matrix& t = model.component(i, r);
      CommutationTerm term;
      term.generator = i;
      term.r = r;
      const PairedSpectrum paired = pair_spectrum(decomp, i, t, pairing);
      term.t_cr = u * paired.mu.asDiagonal() * u.adjoint();
      const Matrix rhs = s * t - term.t_cr * s;
      term.p_r = range * (t - term.t_cr);
      term.t_norm = op_norm(t);
      term.t_cr_norm = op_norm(term.t_cr);
      term.p_norm = op_norm(term.p_r);
      term.residual = op_norm(rhs - s * term.p_r);
      term.commutator = op_norm(s * term.t_cr - term.t_cr * s);
      out.max_residual = std::max(out.max_residual, term.residual);
      if (term.t_norm > 0.0) out.delta = std::max(out.delta, term.p_norm / term.t_norm);
      out.terms.push_back(std::move(term));
    }
  }
  out.delta_bound = delta_upper_bound(shifts, model, pairing);
  return out;
}

double delta_upper_bound(const ShiftFamily& shifts, const PerturbationModel& model,
                         Pairing pairing) {
  if (model.num_generators() != shifts.num_generators() ||
      model.dimension() != shifts.dimension()) {
    throw ArgumentError("perturbation model does not match the shift family");
  }
  const SpectralDecomposition decomp = decompose(shifts);
  const Matrix& u = decomp.eigenvectors;
  const int n = shifts.dimension();
  double bound = 0.0;
  for (int g = 0; g < shifts.num_generators(); ++g) {
    const Vector lambda = decomp.eigenvalues.col(g);
    const double lambda_max = lambda.cwiseAbs().maxCoeff();
    if (lambda_max == 0.0) throw ArgumentError("commutation bound undefined for a zero shift");
    for (int r = 0; r < 2; ++r) {
      const Matrix& t = model.component(g, r);
      if (op_norm(t) == 0.0) continue;
      const PairedSpectrum paired = pair_spectrum(decomp, g, t, pairing);
      // ||u_i (u_i* v_j) v_j* - [i = j] u_i u_i*|| = ||conj(u_i* v_j) v_j - [i = j] u_i||.
      const Matrix overlap = u.adjoint() * paired.v;
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double weight = std::abs(lambda(i)) / lambda_max;
        if (weight == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          Vector diff = std::conj(overlap(i, j)) * paired.v.col(j);
          if (i == j) diff -= u.col(i);
          sum += weight * diff.norm();
        }
      }
      bound = std::max(bound, sum);
    }
  }
  return bound;
}

}  // namespace algstab
