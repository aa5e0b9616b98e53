#include "algstab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "algstab/errors.hpp"
#include "algstab/spectral.hpp"

namespace algstab {

namespace {

constexpr double kRoundingFloor = 1e-14;

std::vector<Matrix> perturbed_shifts(const ShiftFamily& shifts, const PerturbationModel& model,
                                     double factor = 1.0) {
  std::vector<Matrix> out;
  for (int i = 0; i < shifts.num_generators(); ++i) {
    out.push_back(shifts.shift(i) + factor * model.displacement(i, shifts.shift(i)));
  }
  return out;
}

void check_shapes(const PolynomialFilter& p, const ShiftFamily& shifts,
                  const PerturbationModel& model) {
  if (p.num_generators() != shifts.num_generators()) {
    throw ArgumentError("filter arity does not match the shift family");
  }
  if (model.num_generators() != shifts.num_generators() ||
      model.dimension() != shifts.dimension()) {
    throw ArgumentError("perturbation model does not match the shift family");
  }
}

std::vector<Matrix> partial_derivatives(const PolynomialFilter& p, const ShiftFamily& shifts,
                                        const PerturbationModel& model) {
  std::vector<Matrix> out;
  for (int i = 0; i < shifts.num_generators(); ++i) {
    out.push_back(frechet_apply(p, shifts, i, model.displacement(i, shifts.shift(i))));
  }
  return out;
}

void finalize(StabilityTrial& t, const StabilityOptions& options) {
  t.margin = t.rhs - t.lhs;
  if (t.status == TrialStatus::inapplicable) return;
  const double slack =
      options.margin_tolerance * std::abs(t.rhs) + kRoundingFloor * std::max(t.lhs, t.rhs);
  t.status = t.margin >= -slack ? TrialStatus::pass : TrialStatus::violated;
}

StabilityTrial inapplicable(std::string check, std::string note) {
  StabilityTrial t;
  t.check = std::move(check);
  t.status = TrialStatus::inapplicable;
  t.lhs = kNaN;
  t.rhs = kNaN;
  t.margin = kNaN;
  t.note = std::move(note);
  return t;
}

struct PerturbationSizes {
  double sup_t = 0.0;   // max_i ||T(S_i)||
  double sup_t1 = 0.0;  // max_i ||T1_i||
};

PerturbationSizes sizes(const ShiftFamily& shifts, const PerturbationModel& model) {
  PerturbationSizes out;
  for (int i = 0; i < shifts.num_generators(); ++i) {
    out.sup_t = std::max(out.sup_t, op_norm(model.displacement(i, shifts.shift(i))));
  }
  out.sup_t1 = model.max_relative_norm();
  return out;
}

std::optional<std::string> spectral_hypotheses(const ShiftFamily& shifts) {
  if (!shifts.is_commuting()) return "shift family does not commute";
  if (!shifts.is_normal()) return "shift family is not normal";
  return std::nullopt;
}

double vector_norm_or_one(const std::optional<Vector>& x, int n) {
  if (!x) return 1.0;
  if (x->size() != n) throw ArgumentError("signal length does not match the shift dimension");
  return x->norm();
}

double output_difference(const Matrix& diff, const std::optional<Vector>& x) {
  return x ? (diff * *x).norm() : op_norm(diff);
}

ClaimCheck make_claim(std::string name, double measured, double bound, bool asserted = true) {
  ClaimCheck c;
  c.name = std::move(name);
  c.measured = measured;
  c.bound = bound;
  c.passed = measured <= bound;
  c.asserted = asserted;
  return c;
}

}  // namespace

std::string_view to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::pass: return "pass";
    case TrialStatus::violated: return "violated";
    case TrialStatus::inapplicable: return "inapplicable";
  }
  return "inapplicable";
}

FilterCertificate certify_filter(const PolynomialFilter& p, const ShiftFamily& shifts,
                                 const ShiftFamily& perturbed, const DeclaredBounds& declared,
                                 const StabilityOptions& options) {
  const double radius = std::max(options.radius_factor *
                                     std::max(shifts.max_norm(), perturbed.max_norm()),
                                 1e-12);
  FilterCertificate out;
  out.estimate = estimate_lipschitz(p, radius, options.grid_resolution);
  out.l0 = declared.l0.value_or(out.estimate.l0);
  out.l1 = declared.l1.value_or(out.estimate.l1);
  out.certified = true;
  if (declared.l0 && out.estimate.l0 > *declared.l0) {
    out.certified = false;
    out.reason = "L0 estimate " + std::to_string(out.estimate.l0) + " exceeds declared " +
                 std::to_string(*declared.l0);
  }
  if (declared.l1 && out.estimate.l1 > *declared.l1) {
    if (!out.reason.empty()) out.reason += "; ";
    out.certified = false;
    out.reason += "L1 estimate " + std::to_string(out.estimate.l1) + " exceeds declared " +
                  std::to_string(*declared.l1);
  }
  return out;
}

RemainderFit fit_remainder(const PolynomialFilter& p, const ShiftFamily& shifts,
                           const PerturbationModel& model, const StabilityOptions& options) {
  check_shapes(p, shifts, model);
  const Matrix base = eval_ordered(p, shifts.shifts());
  Matrix first_order = Matrix::Zero(base.rows(), base.cols());
  for (const Matrix& d : partial_derivatives(p, shifts, model)) first_order += d;
  const double floor = 1e-13 * std::max(1.0, op_norm(base));
  auto remainder = [&](double eps) {
    const Matrix moved = eval_ordered(p, perturbed_shifts(shifts, model, eps));
    return op_norm(moved - base - eps * first_order);
  };

  RemainderFit out;
  for (double eps : options.remainder_epsilons) {
    const double r = remainder(eps);
    out.norms.push_back(r);
    // Below the rounding floor r / eps^2 only amplifies noise; eps = 1 is
    // the actual perturbation and always counts.
    if (eps == 1.0 || r > floor) out.constant = std::max(out.constant, r / (eps * eps));
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (double eps : options.slope_epsilons) {
    const double r = remainder(eps);
    if (r > floor) {
      lx.push_back(std::log(eps));
      ly.push_back(std::log(r));
    }
  }
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t a = 0; a < lx.size(); ++a) {
      sx += lx[a];
      sy += ly[a];
      sxx += lx[a] * lx[a];
      sxy += lx[a] * ly[a];
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return out;
}

StabilityTrial check_theorem1(const PolynomialFilter& p, const ShiftFamily& shifts,
                              const PerturbationModel& model, const std::optional<Vector>& x,
                              const StabilityOptions& options) {
  check_shapes(p, shifts, model);
  const double x_norm = vector_norm_or_one(x, shifts.dimension());
  if (!shifts.is_commuting()) return inapplicable("theorem1", "shift family does not commute");

  StabilityTrial t;
  t.check = "theorem1";
  const Matrix base = eval_operator(p, shifts);
  const Matrix moved = eval_ordered(p, perturbed_shifts(shifts, model));
  t.lhs = output_difference(base - moved, x);
  double derivative_sum = 0.0;
  for (const Matrix& d : partial_derivatives(p, shifts, model)) {
    t.per_generator.push_back(op_norm(d));
    derivative_sum += t.per_generator.back();
  }
  const RemainderFit fit = fit_remainder(p, shifts, model, options);
  t.remainder = fit.constant;
  t.slope = fit.slope;
  t.rhs = x_norm * (derivative_sum + fit.constant);
  finalize(t, options);
  return t;
}

StabilityTrial check_theorem2(const PolynomialFilter& p, const ShiftFamily& shifts,
                              const PerturbationModel& model, const FilterCertificate& certificate,
                              const StabilityOptions& options) {
  check_shapes(p, shifts, model);
  if (!certificate.certified) return inapplicable("theorem2", certificate.reason);
  if (auto why = spectral_hypotheses(shifts)) return inapplicable("theorem2", *why);

  StabilityTrial t;
  t.check = "theorem2";
  t.l0 = certificate.l0;
  t.l1 = certificate.l1;
  t.delta = commutation_analysis(shifts, model, options.pairing).delta;
  for (const Matrix& d : partial_derivatives(p, shifts, model)) {
    t.per_generator.push_back(op_norm(d));
  }
  t.lhs = *std::max_element(t.per_generator.begin(), t.per_generator.end());
  const PerturbationSizes s = sizes(shifts, model);
  t.rhs = (1.0 + t.delta) * (t.l0 * s.sup_t + t.l1 * s.sup_t1);
  finalize(t, options);
  return t;
}

StabilityTrial check_corollary(const PolynomialFilter& p, const ShiftFamily& shifts,
                               const PerturbationModel& model, const FilterCertificate& certificate,
                               const std::optional<Vector>& x, const StabilityOptions& options) {
  check_shapes(p, shifts, model);
  const double x_norm = vector_norm_or_one(x, shifts.dimension());
  if (!certificate.certified) return inapplicable("corollary", certificate.reason);
  if (auto why = spectral_hypotheses(shifts)) return inapplicable("corollary", *why);

  StabilityTrial t;
  t.check = "corollary";
  t.l0 = certificate.l0;
  t.l1 = certificate.l1;
  t.delta = commutation_analysis(shifts, model, options.pairing).delta;
  const Matrix base = eval_operator(p, shifts);
  const Matrix moved = eval_ordered(p, perturbed_shifts(shifts, model));
  t.lhs = output_difference(base - moved, x);
  const RemainderFit fit = fit_remainder(p, shifts, model, options);
  t.remainder = fit.constant;
  t.slope = fit.slope;
  const PerturbationSizes s = sizes(shifts, model);
  const double m = shifts.num_generators();
  t.rhs = (m * (1.0 + t.delta) * (t.l0 * s.sup_t + t.l1 * s.sup_t1) + fit.constant) * x_norm;
  finalize(t, options);
  return t;
}

bool ProofDecompositionReport::all_asserted_pass() const {
  return std::all_of(claims.begin(), claims.end(),
                     [](const ClaimCheck& c) { return !c.asserted || c.passed; });
}

const ClaimCheck& ProofDecompositionReport::claim(std::string_view name) const {
  for (const auto& c : claims) {
    if (c.name == name) return c;
  }
  throw ArgumentError("no claim named '" + std::string(name) + "'");
}

Complex modified_zeta(const PolynomialFilter& p, Complex lambda_p, Complex lambda_q) {
  if (p.num_generators() != 1) throw ArgumentError("modified_zeta needs a single-generator filter");
  // (a^k - b^k) / (a - b) = sum_j a^j b^{k-1-j}, which is k a^{k-1} when a = b.
  Complex divided{};
  for (const auto& [k, h] : p.coefficients()) {
    for (int j = 0; j < k[0]; ++j) divided += h * std::pow(lambda_p, j) * std::pow(lambda_q, k[0] - 1 - j);
  }
  return divided * lambda_q;
}

ProofDecompositionReport proof_decomposition_check(const PolynomialFilter& p,
                                                   const ShiftFamily& shifts,
                                                   const PerturbationModel& model,
                                                   const FilterCertificate& certificate,
                                                   const StabilityOptions& options) {
  check_shapes(p, shifts, model);
  if (shifts.num_generators() != 1) {
    throw ArgumentError("proof decomposition is defined for a single generator");
  }
  const SpectralDecomposition decomp = decompose(shifts);
  const Matrix& s = shifts.shift(0);
  const int n = shifts.dimension();
  const int degree = p.degree();
  const auto powers = matrix_powers(s, degree + 1);
  auto h = [&](int k) { return p.coefficient({k}); };
  const double l0 = certificate.l0;
  const double l1 = certificate.l1;
  const double tol = options.margin_tolerance;

  ProofDecompositionReport report;

  // Double sums over (l, k >= l) against their collapsed forms.
  Matrix double0 = Matrix::Zero(n, n);
  Matrix double1 = Matrix::Zero(n, n);
  Matrix deriv = Matrix::Zero(n, n);    // sum_k k h_k S^{k-1} = p'(S)
  Matrix deriv_s = Matrix::Zero(n, n);  // sum_k k h_k S^k
  for (int l = 1; l <= degree; ++l) {
    for (int k = l; k <= degree; ++k) {
      double0 += h(k) * powers[static_cast<std::size_t>(k - 1)];
      double1 += h(k) * powers[static_cast<std::size_t>(k)];
    }
  }
  for (int k = 1; k <= degree; ++k) {
    deriv += static_cast<double>(k) * h(k) * powers[static_cast<std::size_t>(k - 1)];
    deriv_s += static_cast<double>(k) * h(k) * powers[static_cast<std::size_t>(k)];
  }
  report.claims.push_back(make_claim("t0c_coefficient_identity", op_norm(double0 - deriv),
                                     1e-12 * std::max(1.0, op_norm(deriv))));
  report.claims.push_back(make_claim("t1c_coefficient_identity", op_norm(double1 - deriv_s),
                                     1e-12 * std::max(1.0, op_norm(deriv_s))));

  const CommutationAnalysis analysis = commutation_analysis(shifts, model, options.pairing);
  const CommutationTerm& c0 = analysis.term(0, 0);
  const CommutationTerm& c1 = analysis.term(0, 1);
  const Matrix& t0 = model.component(0, 0);
  const Matrix& t1 = model.component(0, 1);

  auto bound_with_slack = [&](double b) { return b * (1.0 + tol) + kRoundingFloor; };
  report.claims.push_back(make_claim("t0c_term_bound", op_norm(c0.t_cr * deriv),
                                     bound_with_slack(l0 * op_norm(t0))));
  const Matrix d_p0 = frechet_apply(p, shifts, 0, c0.p_r);
  report.claims.push_back(make_claim("p0_term_bound", op_norm(d_p0),
                                     bound_with_slack(l0 * c0.p_norm), false));
  report.claims.push_back(make_claim("t1c_term_bound", op_norm(c1.t_cr * deriv_s),
                                     bound_with_slack(l1 * op_norm(t1))));
  const Matrix d_p1 = frechet_apply(p, shifts, 0, c1.p_r * s);
  report.claims.push_back(make_claim("p1_term_bound", op_norm(d_p1),
                                     bound_with_slack(l1 * c1.p_norm), false));

  const Matrix full = frechet_apply(p, shifts, 0, model.displacement(0, s));
  const Matrix rebuilt = c0.t_cr * deriv + d_p0 + c1.t_cr * deriv_s + d_p1;
  report.claims.push_back(make_claim("reorganized_expansion", op_norm(full - rebuilt),
                                     1e-8 * std::max(1.0, op_norm(full)),
                                     !analysis.singular_shift));

  // Lifted map xi -> D{xi S}: u_p u_q* should be an eigenvector with
  // eigenvalue zeta_pq.
  const Matrix& u = decomp.eigenvectors;
  report.zeta.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Complex z = modified_zeta(p, decomp.eigenvalues(a, 0), decomp.eigenvalues(b, 0));
      report.zeta[static_cast<std::size_t>(a * n + b)] = z;
      report.max_zeta = std::max(report.max_zeta, std::abs(z));
    }
  }
  if (n <= 24) {
    double mismatch = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const Matrix e = u.col(a) * u.col(b).adjoint();
        const Matrix image = frechet_apply(p, shifts, 0, e * s);
        const Complex z = report.zeta[static_cast<std::size_t>(a * n + b)];
        mismatch = std::max(mismatch, (image - z * e).norm());
      }
    }
    const RealMatrix off = s.cwiseAbs() - RealMatrix(s.diagonal().cwiseAbs().asDiagonal());
    const bool diagonal = off.maxCoeff() == 0.0;
    report.claims.push_back(make_claim("lifted_eigenvalues", mismatch,
                                       1e-10 * std::max(1.0, report.max_zeta), diagonal));
  }

  NormOptions norm_options;
  report.modified_norm =
      power_norm([&](const Matrix& xi) { return frechet_apply(p, shifts, 0, xi * s); },
                 [&](const Matrix& eta) {
                   return Matrix(frechet_adjoint(p, shifts.shifts(), 0, eta) * s.adjoint());
                 },
                 n, norm_options)
          .value;
  report.claims.push_back(make_claim("modified_derivative_norm", report.modified_norm, l1 + 1e-8));
  return report;
}

}  // namespace algstab
