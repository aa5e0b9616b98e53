// Acceptance suite: one line per criterion, tolerances pinned below.
// Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "algstab/algnn.hpp"
#include "algstab/errors.hpp"
#include "algstab/frechet.hpp"
#include "algstab/signal_models.hpp"
#include "algstab/spectral.hpp"
#include "algstab/stability.hpp"
#include "oracles/oracles.hpp"

using namespace algstab;

namespace {

constexpr double kFrechetRelTol = 1e-6;
constexpr double kFdEpsilon = 1e-5;
constexpr double kSlopeLow = 1.9;
constexpr double kSlopeHigh = 2.1;
constexpr double kSpectralRelTol = 1e-8;
constexpr double kCyclicTol = 1e-10;
constexpr double kCommutationTol = 1e-8;
constexpr double kMarginTol = 1e-8;
constexpr double kTightnessTol = 1e-10;
constexpr double kModifiedNormSlack = 1e-8;
constexpr double kCollapseTol = 1e-10;
constexpr double kRoundingRelTol = 1e-10;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Vector random_vector(int n, std::mt19937_64& rng, bool real_only) {
  return oracle::random_gaussian(n, 1, rng, real_only).col(0);
}

std::vector<double> taps_of(const PolynomialFilter& p) {
  std::vector<double> t(static_cast<std::size_t>(p.degree()) + 1, 0.0);
  for (const auto& [k, h] : p.coefficients()) t[static_cast<std::size_t>(k[0])] = h;
  return t;
}

// 1. Frechet derivative against central differences, and remainder order.
Outcome frechet_exactness() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dim(2, 8), deg(1, 5), gens(1, 2);
  double worst_err = 0.0, slope_lo = 1e300, slope_hi = -1e300;
  int slope_cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = dim(rng), d = deg(rng), m = gens(rng);
    std::vector<Matrix> s;
    for (int i = 0; i < m; ++i) s.push_back(oracle::random_gaussian(n, n, rng, false) / std::sqrt(n));
    const auto p = random_filter(m, d, 5000 + static_cast<std::uint64_t>(trial));
    const Matrix xi = oracle::random_gaussian(n, n, rng, false) / std::sqrt(n);
    const int i = trial % m;
    const Matrix exact = frechet_apply(p, s, i, xi);
    const Matrix fd = oracle::central_difference(p.coefficients(), s, i, xi, kFdEpsilon);
    worst_err = std::max(worst_err, (exact - fd).norm() / std::max(exact.norm(), 1e-300));
    if (d >= 2) {
      const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
      std::vector<double> rem;
      const Matrix base = oracle::poly_eval(p.coefficients(), s);
      for (double e : eps) {
        auto moved = s;
        moved[static_cast<std::size_t>(i)] += e * xi;
        rem.push_back((oracle::poly_eval(p.coefficients(), moved) - base - e * exact).norm());
      }
      const double slope = oracle::loglog_slope(eps, rem);
      slope_lo = std::min(slope_lo, slope);
      slope_hi = std::max(slope_hi, slope);
      ++slope_cases;
    }
  }
  const bool ok = worst_err <= kFrechetRelTol && slope_lo >= kSlopeLow && slope_hi <= kSlopeHigh;
  return {ok, "200 cases, max rel err " + num(worst_err) + ", slope range [" + num(slope_lo) + ", " +
                  num(slope_hi) + "] over " + std::to_string(slope_cases) + " cases"};
}

// 2. Operator path vs spectral path, and the intertwining property.
Outcome spectral_equivalence() {
  std::mt19937_64 rng(202);
  double worst = 0.0, worst_int = 0.0;
  auto check = [&](const ShiftFamily& f, const PolynomialFilter& p) {
    const Vector x = random_vector(f.dimension(), rng, false);
    const auto d = decompose(f);
    const Vector a = eval_operator(p, f) * x;
    const Vector b = spectral_apply(d, p, x);
    worst = std::max(worst, (a - b).norm() / std::max(a.norm(), 1e-300));
    const Vector lhs = fourier(d, a);
    const Vector rhs = spectral_response(d, p).cwiseProduct(fourier(d, x));
    worst_int = std::max(worst_int, (lhs - rhs).norm() / std::max(lhs.norm(), 1e-300));
  };
  std::uniform_int_distribution<int> dim(3, 16);
  for (int t = 0; t < 100; ++t) {
    const int n = dim(rng);
    const Matrix u = oracle::random_unitary(n, rng);
    Vector lambda = random_vector(n, rng, t % 2 == 0);  // half Hermitian, half general normal
    lambda /= lambda.cwiseAbs().maxCoeff();
    const ShiftFamily f(ModelTag::custom, {u * lambda.asDiagonal() * u.adjoint()});
    check(f, random_filter(1, 1 + t % 5, 7000 + static_cast<std::uint64_t>(t)));
  }
  std::uniform_int_distribution<int> side(2, 5);
  for (int t = 0; t < 50; ++t) {
    const auto f = grid2d_shifts(side(rng), side(rng), t % 2 == 0);
    check(f, random_filter(2, 1 + t % 3, 8000 + static_cast<std::uint64_t>(t)));
  }
  const bool ok = worst <= kSpectralRelTol && worst_int <= kSpectralRelTol;
  return {ok, "150 cases, max rel diff " + num(worst) + ", intertwining " + num(worst_int)};
}

// 3. Cyclic shift against the DFT and brute-force circular convolution.
Outcome cyclic_ground_truth() {
  double eig_err = 0.0, vec_err = 0.0, conv_err = 0.0;
  std::mt19937_64 rng(303);
  for (int n : {4, 8, 16, 32}) {
    const auto c = cyclic_shift(n);
    const auto d = decompose(c);
    const Matrix f = oracle::dft_columns(n);
    for (int k = 0; k < n; ++k) {
      // Column k of the DFT carries eigenvalue e^{-2 pi i k / n}.
      const Complex expected = std::polar(1.0, -2.0 * std::numbers::pi * k / n);
      int match = -1;
      for (int i = 0; i < n; ++i) {
        if (std::abs(d.eigenvalues(i, 0) - expected) < 1e-6) match = i;
      }
      if (match < 0) return {false, "eigenvalue missing for n=" + std::to_string(n)};
      eig_err = std::max(eig_err, std::abs(d.eigenvalues(match, 0) - expected));
      const Complex overlap = f.col(k).adjoint() * d.eigenvectors.col(match);
      vec_err = std::max(vec_err, std::abs(1.0 - std::abs(overlap)));
      vec_err = std::max(vec_err, (c.shift(0) * f.col(k) - expected * f.col(k)).norm());
    }
    if (n <= 16) {
      for (int t = 0; t < 5; ++t) {
        const auto p = random_filter(1, 1 + t, 9000 + static_cast<std::uint64_t>(n * 10 + t));
        const Vector x = random_vector(n, rng, false);
        const Vector ref = oracle::circular_convolution(taps_of(p), x);
        conv_err = std::max(conv_err, (eval_operator(p, c) * x - ref).norm() / ref.norm());
        conv_err = std::max(conv_err, (spectral_apply(d, p, x) - ref).norm() / ref.norm());
      }
    }
  }
  const bool ok = eig_err <= kCyclicTol && vec_err <= kCyclicTol && conv_err <= kCyclicTol;
  return {ok, "eigenvalue err " + num(eig_err) + ", eigenvector err " + num(vec_err) +
                  ", convolution rel err " + num(conv_err)};
}

std::vector<ShiftFamily> commutation_models() {
  return {cyclic_shift(8), graph_shift(random_graph(10, 0.4, 17)),
          graphon_shift(named_graphon("gaussian"), 12), grid2d_shifts(3, 3, false),
          graph_shift(random_graph(9, 0.5, 23), GraphVariant::laplacian)};
}

// 4. Commutation factor.
Outcome commutation_factor() {
  double worst_commuting = 0.0, worst_norm = 0.0, worst_comm = 0.0, worst_ratio = 0.0;
  int generic_ok = 0, generic_total = 0;
  const auto models = commutation_models();
  for (int t = 0; t < 100; ++t) {
    const auto& s = models[static_cast<std::size_t>(t) % models.size()];
    const double a = 0.01 + 0.009 * (t % 10), b = 0.005 * (t % 7);
    const auto seed = 11000 + static_cast<std::uint64_t>(t);
    const auto cm = random_perturbation(s, a, b, PerturbationMode::commuting, seed);
    const auto ca = commutation_analysis(s, cm);
    worst_commuting = std::max(worst_commuting, ca.delta);
    const auto gm = random_perturbation(s, a, b, PerturbationMode::generic, seed);
    const auto ga = commutation_analysis(s, gm);
    const double bound = delta_upper_bound(s, gm);
    ++generic_total;
    if (ga.delta <= bound) ++generic_ok;
    if (bound > 0) worst_ratio = std::max(worst_ratio, ga.delta / bound);
    for (const auto* an : {&ca, &ga}) {
      for (const auto& term : an->terms) {
        const double scale = std::max(1.0, s.shift(term.generator).norm());
        worst_norm = std::max(worst_norm, std::abs(term.t_cr_norm - term.t_norm));
        worst_comm = std::max(worst_comm, term.commutator / scale);
      }
    }
  }
  const bool ok = worst_commuting <= kCommutationTol && generic_ok == generic_total &&
                  worst_norm <= kCommutationTol && worst_comm <= kCommutationTol;
  return {ok, "commuting max delta " + num(worst_commuting) + ", generic delta <= bound " +
                  std::to_string(generic_ok) + "/" + std::to_string(generic_total) +
                  " (max ratio " + num(worst_ratio) + "), | ||T_cr|| - ||T|| | " + num(worst_norm) +
                  ", [S, T_cr] " + num(worst_comm)};
}

struct Tally {
  int pass = 0, total = 0;
  double worst_rel = 1e300;  // min margin / rhs
  void add(const StabilityTrial& t) {
    ++total;
    if (t.status == TrialStatus::pass && t.margin >= -kMarginTol * t.rhs - 1e-14 * std::max(t.lhs, t.rhs)) ++pass;
    if (t.rhs > 0) worst_rel = std::min(worst_rel, t.margin / t.rhs);
  }
  bool ok() const { return pass == total && total > 0; }
  std::string str() const {
    return std::to_string(pass) + "/" + std::to_string(total) + " (min margin/rhs " + num(worst_rel) + ")";
  }
};

// 5. First-order stability bound with remainder.
Outcome theorem_one() {
  Tally single, multi;
  double slope_lo = 1e300, slope_hi = -1e300;
  const std::vector<ShiftFamily> one{cyclic_shift(16), graph_shift(random_graph(12, 0.4, 5)),
                                     graphon_shift(named_graphon("product"), 16)};
  const std::vector<ShiftFamily> two{grid2d_shifts(4, 4, true), abelian_group_shifts({3, 4}),
                                     grid2d_shifts(3, 4, false)};
  auto track = [&](const StabilityTrial& t) {
    if (std::isfinite(t.slope)) {
      slope_lo = std::min(slope_lo, t.slope);
      slope_hi = std::max(slope_hi, t.slope);
    }
  };
  std::mt19937_64 rng(505);
  for (int t = 0; t < 100; ++t) {
    const auto& s = one[static_cast<std::size_t>(t) % one.size()];
    const auto seed = 12000 + static_cast<std::uint64_t>(t);
    const auto p = random_filter(1, 2 + t % 5, seed);
    const auto model = random_perturbation(s, 0.01 + 0.001 * t, 0.005 * (t % 5), PerturbationMode::generic, seed);
    Vector x = random_vector(s.dimension(), rng, true);
    const auto trial = check_theorem1(p, s, model, x.normalized());
    single.add(trial);
    track(trial);
  }
  for (int t = 0; t < 50; ++t) {
    const auto& s = two[static_cast<std::size_t>(t) % two.size()];
    const auto seed = 13000 + static_cast<std::uint64_t>(t);
    const auto p = random_filter(2, 2 + t % 3, seed);
    const auto model = random_perturbation(s, 0.01 + 0.002 * t, 0.005 * (t % 4), PerturbationMode::generic, seed);
    const auto trial = check_theorem1(p, s, model);
    multi.add(trial);
    track(trial);
  }
  const bool ok = single.ok() && multi.ok() && slope_lo >= kSlopeLow && slope_hi <= kSlopeHigh;
  return {ok, "single " + single.str() + ", multi " + multi.str() + ", slope range [" + num(slope_lo) +
                  ", " + num(slope_hi) + "]"};
}

// 6. Lipschitz-constant bounds and the tightness probe.
Outcome theorem_two() {
  struct Case {
    const char* name;
    ShiftFamily s;
  };
  const std::vector<Case> cases{{"cyclic16", cyclic_shift(16)},
                                {"graph12", graph_shift(random_graph(12, 0.4, 6))},
                                {"graphon16", graphon_shift(named_graphon("gaussian"), 16)},
                                {"grid4x4", grid2d_shifts(4, 4, true)}};
  std::string detail;
  bool ok = true;
  std::mt19937_64 rng(606);
  for (const auto& c : cases) {
    Tally t2, cor;
    int uncertified = 0;
    const int m = c.s.num_generators();
    for (int t = 0; t < 100; ++t) {
      const auto seed = 14000 + static_cast<std::uint64_t>(t);
      PolynomialFilter p = random_filter(m, 1 + t % 4, seed);
      const auto model = random_perturbation(c.s, 0.005 + 0.001 * t, 0.002 * (t % 6), PerturbationMode::generic, seed);
      const auto cert = certify_filter(p, c.s, perturb(c.s, model));
      if (!cert.certified) {
        ++uncertified;
        continue;
      }
      t2.add(check_theorem2(p, c.s, model, cert));
      Vector x = random_vector(c.s.dimension(), rng, true);
      cor.add(check_corollary(p, c.s, model, cert, x.normalized()));
    }
    ok = ok && t2.ok() && cor.ok() && t2.total == 100;
    detail += std::string(c.name) + ": bound " + t2.str() + ", corollary " + cor.str() + "; ";
    if (uncertified) detail += std::to_string(uncertified) + " uncertified; ";
  }
  // Tightness probe: p = t, T0 = eps I (delta = 0 exactly in theory).
  double worst_gap = 0.0;
  const auto s = cyclic_shift(16);
  const auto p = PolynomialFilter::univariate({0.0, 1.0});
  for (double eps : {1e-3, 1e-2, 0.05, 0.1, 0.3, 0.9}) {
    const auto model = random_perturbation(s, eps, 0.0, PerturbationMode::scalar, 1);
    const auto trial = check_theorem2(p, s, model, certify_filter(p, s, perturb(s, model)));
    worst_gap = std::max(worst_gap, std::abs(trial.rhs - trial.lhs));
  }
  ok = ok && worst_gap <= kTightnessTol;
  detail += "tightness |rhs - lhs| " + num(worst_gap);
  return {ok, detail};
}

// 7. Proof decomposition on diagonal shifts with explicit zeta enumeration.
Outcome proof_decomposition() {
  std::mt19937_64 rng(707);
  double worst_identity = 0.0, worst_excess = -1e300, worst_zeta = 0.0;
  int asserted_fail = 0;
  for (int t = 0; t < 40; ++t) {
    const int n = 3 + t % 6;
    Vector lambda = random_vector(n, rng, t % 3 == 0);
    lambda /= lambda.cwiseAbs().maxCoeff();
    Matrix d = Matrix::Zero(n, n);
    d.diagonal() = lambda;
    const ShiftFamily s(ModelTag::custom, {d});
    const auto p = random_filter(1, 1 + t % 6, 15000 + static_cast<std::uint64_t>(t));
    const auto taps = taps_of(p);
    const auto model = random_perturbation(s, 0.05, 0.05, PerturbationMode::generic, 15000 + t);
    const auto cert = certify_filter(p, s, perturb(s, model));
    const auto report = proof_decomposition_check(p, s, model, cert);
    for (const auto& c : report.claims) {
      if (c.asserted && !c.passed) ++asserted_fail;
    }
    // sum_l sum_{k>=l} h_k S^{k-1} against the diagonal of p'(lambda).
    Matrix dbl = Matrix::Zero(n, n);
    for (std::size_t l = 1; l < taps.size(); ++l) {
      for (std::size_t k = l; k < taps.size(); ++k) dbl += taps[k] * oracle::power(d, static_cast<int>(k) - 1);
    }
    for (int i = 0; i < n; ++i) {
      worst_identity = std::max(worst_identity, std::abs(dbl(i, i) - oracle::derivative(taps, lambda(i))));
    }
    double max_zeta = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) max_zeta = std::max(max_zeta, std::abs(oracle::zeta(taps, lambda(a), lambda(b))));
    }
    worst_zeta = std::max(worst_zeta, std::abs(report.modified_norm - max_zeta));
    worst_excess = std::max(worst_excess, report.modified_norm - (cert.l1 + kModifiedNormSlack));
    worst_excess = std::max(worst_excess, max_zeta - (cert.l1 + kModifiedNormSlack));
  }
  const bool ok = asserted_fail == 0 && worst_identity <= 1e-12 && worst_excess <= 0.0 && worst_zeta <= 1e-6;
  return {ok, "identity err " + num(worst_identity) + ", failed claims " + std::to_string(asserted_fail) +
                  ", max(||D~||, max|zeta|) - (L1 + 1e-8) " + num(worst_excess) +
                  ", | ||D~|| - max|zeta| | " + num(worst_zeta)};
}

Features real_features(int count, int n, std::uint64_t seed) {
  Features x;
  for (int g = 0; g < count; ++g) {
    x.push_back(random_matrix(n, 1, seed * 7 + static_cast<std::uint64_t>(g), true).col(0).real());
  }
  return x;
}

// 8. Layer and network bounds.
Outcome network_bounds() {
  Tally layer, network;
  for (int t = 0; t < 50; ++t) {
    const auto seed = 16000 + static_cast<std::uint64_t>(t);
    const AlgNN net = demo_network(seed);
    LayerPerturbations models;
    for (int l = 0; l < net.num_layers(); ++l) {
      models.push_back(random_perturbation(net.layer(l).shifts, 0.005 + 0.001 * t, 0.002 * (t % 5),
                                           PerturbationMode::generic, seed * 3 + l));
    }
    Features x = real_features(1, 16, seed);
    network.add(network_stability_check(net, models, x).trial);
    for (int l = 0; l < net.num_layers(); ++l) {
      layer.add(layer_stability_check(net, l, models[static_cast<std::size_t>(l)], x));
      x = layer_map(net, l, x, net.layer(l).shifts.shifts());
    }
  }
  // Single-layer network against the filter-level corollary.
  double worst_single = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto seed = 17000 + static_cast<std::uint64_t>(t);
    const auto s = cyclic_shift(12);
    const auto p = random_filter(1, 1 + t % 4, seed);
    const AlgNN net({AlgNNLayer{s, {{p}}, Nonlinearity::identity, {}}}, 1);
    const auto model = random_perturbation(s, 0.02, 0.01, PerturbationMode::generic, seed);
    const Features x = real_features(1, 12, seed);
    const auto nt = network_stability_check(net, {model}, x).trial;
    const auto cert = certify_filter(p, s, perturb(s, model));
    const auto ct = check_corollary(p, s, model, cert, x[0].cast<Complex>());
    worst_single = std::max(worst_single, std::abs(nt.lhs - ct.lhs) / std::max(ct.lhs, 1e-300));
    worst_single = std::max(worst_single, std::abs(nt.rhs - ct.rhs) / std::max(ct.rhs, 1e-300));
  }
  // Perturbing one layer leaves one term in the sum.
  double worst_collapse = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto seed = 18000 + static_cast<std::uint64_t>(t);
    const AlgNN net = demo_network(seed);
    const int only = t % net.num_layers();
    LayerPerturbations models;
    for (int l = 0; l < net.num_layers(); ++l) {
      const auto& s = net.layer(l).shifts;
      models.push_back(l == only ? random_perturbation(s, 0.05, 0.02, PerturbationMode::generic, seed)
                                 : PerturbationModel::zero(s.dimension(), 1));
    }
    const Features x = real_features(1, 16, seed);
    const auto r = network_stability_check(net, models, x);
    const double single = std::sqrt(static_cast<double>(net.feature_counts().back())) *
                          network_bound_term(net, r.constants, only, feature_sum_norm(x));
    worst_collapse = std::max(worst_collapse, std::abs(r.trial.rhs - single));
  }
  const bool ok = layer.ok() && network.ok() && worst_single <= kRoundingRelTol && worst_collapse <= kCollapseTol;
  return {ok, "layer " + layer.str() + ", network " + network.str() + ", single-layer rel diff " +
                  num(worst_single) + ", one-layer collapse " + num(worst_collapse)};
}

int run_cli(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = std::string(ALGSTAB_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 9. CLI determinism, uncertified filters and exit codes.
Outcome cli_semantics() {
  const std::filesystem::path configs = ALGSTAB_CONFIG_DIR;
  const auto work = std::filesystem::temp_directory_path() / "algstab_acceptance";
  std::filesystem::remove_all(work);
  std::filesystem::create_directories(work);
  const auto log = work / "log.txt";
  const std::string demo = (configs / "demo.json").string();

  const int run_a = run_cli("run " + demo + " --out " + (work / "a").string(), log);
  const int run_b = run_cli("run " + demo + " --out " + (work / "b").string() + " --jobs 2", log);
  const std::string csv_a = slurp(work / "a" / "trials.csv");
  const bool identical = !csv_a.empty() && csv_a == slurp(work / "b" / "trials.csv");

  const int unc = run_cli("run " + (configs / "uncertified.json").string() + " --out " + (work / "u").string(), log);
  std::istringstream rows(slurp(work / "u" / "trials.csv"));
  std::string line;
  int inapplicable = 0, violated = 0;
  while (std::getline(rows, line)) {
    if (line.ends_with(",inapplicable")) ++inapplicable;
    if (line.ends_with(",violated")) ++violated;
  }
  const int unc_strict =
      run_cli("run " + (configs / "uncertified.json").string() + " --strict --out " + (work / "us").string(), log);

  std::ofstream(work / "bad.json") << "{\n  \"model\": {\"kind\": \"cyclic\", \"n\": 4},\n"
                                       "  \"filters\": [{\"taps\": [0, 1]}],\n"
                                       "  \"perturbation_grid\": {\"norm0\": [1.0], \"norm1\": [0]},\n"
                                       "  \"checks\": [\"theorem1\"]\n}\n";
  const int bad = run_cli("run " + (work / "bad.json").string(), log);
  const std::string bad_log = slurp(log);
  const bool line_numbered = bad_log.find("bad.json:4:") != std::string::npos;
  const int validate_ok = run_cli("validate " + demo, log);
  const int usage = run_cli("frobnicate", log);
  const int violation =
      run_cli("run " + (configs / "tightness_strict.json").string() + " --out " + (work / "v").string(), log);

  const bool ok = run_a == 0 && run_b == 0 && identical && unc == 0 && inapplicable > 0 && violated == 0 &&
                  unc_strict == 2 && bad == 1 && line_numbered && validate_ok == 0 && usage == 1 &&
                  violation == 2;
  std::filesystem::remove_all(work);
  return {ok, std::string("demo exits ") + std::to_string(run_a) + "/" + std::to_string(run_b) +
                  (identical ? ", CSV byte-identical" : ", CSV differs") + "; uncertified: " +
                  std::to_string(inapplicable) + " inapplicable, " + std::to_string(violated) +
                  " violated, exit " + std::to_string(unc) + " (strict " + std::to_string(unc_strict) +
                  "); bad config exit " + std::to_string(bad) + (line_numbered ? " with line" : " without line") +
                  "; validate " + std::to_string(validate_ok) + "; usage " + std::to_string(usage) +
                  "; tight-slack violation " + std::to_string(violation)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 frechet exactness", frechet_exactness},
      {"C2 spectral equivalence", spectral_equivalence},
      {"C3 cyclic ground truth", cyclic_ground_truth},
      {"C4 commutation factor", commutation_factor},
      {"C5 first-order bound", theorem_one},
      {"C6 lipschitz bounds and tightness", theorem_two},
      {"C7 proof decomposition", proof_decomposition},
      {"C8 layer and network bounds", network_bounds},
      {"C9 cli determinism and exit codes", cli_semantics},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
