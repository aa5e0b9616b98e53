#include "algstab/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "algstab/errors.hpp"

namespace algstab {

namespace {

int total_degree(const MultiIndex& k) {
  int d = 0;
  for (int e : k) d += e;
  return d;
}

void check_arity(const PolynomialFilter& p, std::size_t n) {
  if (static_cast<int>(n) != p.num_generators()) {
    throw ArgumentError("expected " + std::to_string(p.num_generators()) +
                        " spectral coordinates, got " + std::to_string(n));
  }
}

Matrix realize(const PolynomialFilter& p, std::span<const Matrix> shifts) {
  check_arity(p, shifts.size());
  const auto n = shifts.front().rows();
  std::vector<std::vector<Matrix>> powers;
  powers.reserve(shifts.size());
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    powers.push_back(matrix_powers(shifts[i], p.degree_in(static_cast<int>(i))));
  }
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [k, h] : p.coefficients()) {
    Matrix term = Matrix::Identity(n, n);
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] > 0) term = term * powers[i][static_cast<std::size_t>(k[i])];
    }
    out += h * term;
  }
  return out;
}

using RealPoly = std::vector<double>;  // ascending coefficients in r

double horner(const RealPoly& q, double r) {
  double acc = 0.0;
  for (auto it = q.rbegin(); it != q.rend(); ++it) acc = acc * r + *it;
  return acc;
}

RealPoly derivative(const RealPoly& q) {
  RealPoly d;
  for (std::size_t i = 1; i < q.size(); ++i) d.push_back(static_cast<double>(i) * q[i]);
  return d;
}

// |c(r)|^2 for a complex-coefficient polynomial c, as a real polynomial in r.
void accumulate_abs2(const std::vector<Complex>& c, std::size_t shift, RealPoly& q) {
  const std::size_t need = 2 * (c.size() + shift);
  if (q.size() < need) q.resize(need, 0.0);
  for (std::size_t a = 0; a < c.size(); ++a) {
    if (c[a] == Complex{}) continue;
    for (std::size_t b = 0; b < c.size(); ++b) {
      q[a + b + 2 * shift] += std::real(c[a] * std::conj(c[b]));
    }
  }
}

// Exact maximum of q over [0, radius] via its critical points.
double max_on_interval(RealPoly q, double radius) {
  double scale = 0.0;
  for (double v : q) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  while (!q.empty() && std::abs(q.back()) <= 1e-14 * scale) q.pop_back();
  double best = std::max(horner(q, 0.0), horner(q, radius));
  const RealPoly dq = derivative(q);
  if (dq.size() < 2) return best;
  const auto deg = static_cast<Eigen::Index>(dq.size() - 1);
  RealMatrix companion = RealMatrix::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) {
    companion(i, deg - 1) = -dq[static_cast<std::size_t>(i)] / dq.back();
  }
  Eigen::EigenSolver<RealMatrix> solver(companion, false);
  const RealPoly ddq = derivative(dq);
  for (Eigen::Index i = 0; i < deg; ++i) {
    double r = solver.eigenvalues()(i).real();
    if (r < 0.0 || r > radius) continue;
    for (int it = 0; it < 3; ++it) {
      const double slope = horner(ddq, r);
      if (slope == 0.0) break;
      r = std::clamp(r - horner(dq, r) / slope, 0.0, radius);
    }
    best = std::max(best, horner(q, r));
  }
  return best;
}

}  // namespace

PolynomialFilter::PolynomialFilter(int num_generators, std::map<MultiIndex, double> coefficients)
    : num_generators_(num_generators) {
  if (num_generators < 1) throw ArgumentError("a filter needs at least one generator");
  for (auto& [k, h] : coefficients) {
    if (static_cast<int>(k.size()) != num_generators) {
      throw ArgumentError("multi-index arity does not match the number of generators");
    }
    if (std::any_of(k.begin(), k.end(), [](int e) { return e < 0; })) {
      throw ArgumentError("multi-index exponents must be non-negative");
    }
    if (!std::isfinite(h)) throw ArgumentError("filter coefficients must be finite");
    if (h != 0.0) coefficients_.emplace(k, h);
  }
}

PolynomialFilter PolynomialFilter::univariate(const std::vector<double>& taps) {
  std::map<MultiIndex, double> c;
  for (std::size_t k = 0; k < taps.size(); ++k) c[{static_cast<int>(k)}] = taps[k];
  return PolynomialFilter(1, std::move(c));
}

PolynomialFilter PolynomialFilter::generator(int num_generators, int i) {
  if (i < 0 || i >= num_generators) throw ArgumentError("generator index out of range");
  MultiIndex k(static_cast<std::size_t>(num_generators), 0);
  k[static_cast<std::size_t>(i)] = 1;
  return PolynomialFilter(num_generators, {{k, 1.0}});
}

double PolynomialFilter::coefficient(const MultiIndex& k) const {
  auto it = coefficients_.find(k);
  return it == coefficients_.end() ? 0.0 : it->second;
}

int PolynomialFilter::degree() const {
  int d = 0;
  for (const auto& [k, h] : coefficients_) d = std::max(d, total_degree(k));
  return d;
}

int PolynomialFilter::degree_in(int i) const {
  int d = 0;
  for (const auto& [k, h] : coefficients_) d = std::max(d, k.at(static_cast<std::size_t>(i)));
  return d;
}

PolynomialFilter PolynomialFilter::operator+(const PolynomialFilter& other) const {
  if (other.num_generators_ != num_generators_) {
    throw ArgumentError("cannot add filters over different numbers of generators");
  }
  auto c = coefficients_;
  for (const auto& [k, h] : other.coefficients_) c[k] += h;
  return PolynomialFilter(num_generators_, std::move(c));
}

PolynomialFilter PolynomialFilter::operator*(const PolynomialFilter& other) const {
  if (other.num_generators_ != num_generators_) {
    throw ArgumentError("cannot multiply filters over different numbers of generators");
  }
  std::map<MultiIndex, double> c;
  for (const auto& [ka, ha] : coefficients_) {
    for (const auto& [kb, hb] : other.coefficients_) {
      MultiIndex k(ka.size());
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      c[k] += ha * hb;
    }
  }
  return PolynomialFilter(num_generators_, std::move(c));
}

PolynomialFilter PolynomialFilter::scaled(double factor) const {
  auto c = coefficients_;
  for (auto& [k, h] : c) h *= factor;
  return PolynomialFilter(num_generators_, std::move(c));
}

Complex eval_scalar(const PolynomialFilter& p, std::span<const Complex> lambda) {
  check_arity(p, lambda.size());
  Complex acc{};
  for (const auto& [k, h] : p.coefficients()) {
    Complex term = h;
    for (std::size_t i = 0; i < k.size(); ++i) term *= std::pow(lambda[i], k[i]);
    acc += term;
  }
  return acc;
}

std::vector<Complex> scalar_gradient(const PolynomialFilter& p, std::span<const Complex> lambda) {
  check_arity(p, lambda.size());
  std::vector<Complex> grad(lambda.size());
  for (const auto& [k, h] : p.coefficients()) {
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == 0) continue;
      Complex term = h * static_cast<double>(k[i]);
      for (std::size_t j = 0; j < k.size(); ++j) {
        term *= std::pow(lambda[j], j == i ? k[j] - 1 : k[j]);
      }
      grad[i] += term;
    }
  }
  return grad;
}

Matrix eval_operator(const PolynomialFilter& p, const ShiftFamily& shifts) {
  check_arity(p, static_cast<std::size_t>(shifts.num_generators()));
  if (!shifts.is_commuting()) {
    throw ModelError("shift family does not commute (relative commutator " +
                     std::to_string(shifts.commutator_defect()) + ")");
  }
  return realize(p, shifts.shifts());
}

Matrix eval_ordered(const PolynomialFilter& p, std::span<const Matrix> shifts) {
  if (shifts.empty()) throw ArgumentError("no shift operators given");
  return realize(p, shifts);
}

LipschitzEstimate estimate_lipschitz(const PolynomialFilter& p, double domain_radius,
                                     int grid_resolution) {
  if (!(domain_radius > 0.0) || !std::isfinite(domain_radius)) {
    throw ArgumentError("domain_radius must be positive and finite");
  }
  if (grid_resolution < 8) throw ArgumentError("grid_resolution must be at least 8");

  LipschitzEstimate out;
  out.domain_radius = domain_radius;
  out.grid_resolution = grid_resolution;
  const int m = p.num_generators();
  const int deg = p.degree();
  if (deg == 0) return out;

  // Holomorphic moduli peak on the torus |lambda_i| = R, so unit-modulus
  // directions suffice; the critical-point search along each ray keeps the
  // result monotone in the radius.
  std::vector<Complex> roots(static_cast<std::size_t>(grid_resolution));
  for (int a = 0; a < grid_resolution; ++a) {
    roots[static_cast<std::size_t>(a)] = std::polar(1.0, 2.0 * M_PI * a / grid_resolution);
  }
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  std::vector<Complex> v(static_cast<std::size_t>(m));
  double best0 = 0.0;
  double best1 = 0.0;
  while (true) {
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = roots[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    // c_i[d]: coefficient of r^d in dp/dlambda_i(r v).
    std::vector<std::vector<Complex>> c(static_cast<std::size_t>(m),
                                        std::vector<Complex>(static_cast<std::size_t>(deg)));
    for (const auto& [k, h] : p.coefficients()) {
      const int d = total_degree(k);
      for (int i = 0; i < m; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (k[ui] == 0) continue;
        Complex term = h * static_cast<double>(k[ui]);
        for (int j = 0; j < m; ++j) {
          const auto uj = static_cast<std::size_t>(j);
          term *= std::pow(v[uj], j == i ? k[uj] - 1 : k[uj]);
        }
        c[ui][static_cast<std::size_t>(d - 1)] += term;
      }
    }
    RealPoly q0;
    for (int i = 0; i < m; ++i) {
      accumulate_abs2(c[static_cast<std::size_t>(i)], 0, q0);
      RealPoly q1;
      // |r v_i c_i(r)|^2 = r^2 |c_i(r)|^2 since |v_i| = 1.
      accumulate_abs2(c[static_cast<std::size_t>(i)], 1, q1);
      best1 = std::max(best1, max_on_interval(std::move(q1), domain_radius));
    }
    best0 = std::max(best0, max_on_interval(std::move(q0), domain_radius));

    int axis = 0;
    while (axis < m && ++idx[static_cast<std::size_t>(axis)] == grid_resolution) {
      idx[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == m) break;
  }
  out.l0 = std::sqrt(std::max(best0, 0.0));
  out.l1 = std::sqrt(std::max(best1, 0.0));
  return out;
}

PolynomialFilter random_filter(int num_generators, int degree, std::uint64_t seed) {
  if (num_generators < 1 || degree < 0) throw ArgumentError("invalid random filter shape");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::map<MultiIndex, double> c;
  MultiIndex k(static_cast<std::size_t>(num_generators), 0);
  while (true) {
    if (total_degree(k) <= degree) c[k] = unif(rng);
    int axis = 0;
    while (axis < num_generators && ++k[static_cast<std::size_t>(axis)] > degree) {
      k[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == num_generators) break;
  }
  return PolynomialFilter(num_generators, std::move(c));
}

}  // namespace algstab
