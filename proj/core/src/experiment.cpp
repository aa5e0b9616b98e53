#include "algstab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "algstab/algnn.hpp"
#include "algstab/errors.hpp"
#include "algstab/perturbation.hpp"

namespace algstab {

namespace {

const std::vector<std::string> kChecks{"theorem1", "theorem2", "corollary",
                                       "proof_decomposition", "layer", "network"};
const std::vector<std::string> kFormats{"csv", "json", "plotdata"};
const std::vector<std::string> kTopLevel{"name",    "description", "model",  "filters",
                                         "perturbation_grid", "checks", "network", "signal",
                                         "output",  "lipschitz", "margin_tolerance"};
const std::vector<std::string> kModelKinds{"cyclic", "graph", "graphon", "abelian_group",
                                           "grid2d", "file"};

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Line of the key path in the raw text, searching each key after the
// previous one. Heuristic, but stable for hand-written configs.
class Locator {
 public:
  explicit Locator(const std::string* text) : text_(text) {}

  int line(const std::vector<std::string>& path) const {
    if (text_ == nullptr) return 0;
    std::size_t pos = 0;
    std::size_t found = std::string::npos;
    for (const auto& key : path) {
      const std::size_t at = text_->find("\"" + key + "\"", pos);
      if (at == std::string::npos) break;
      found = at;
      pos = at + 1;
    }
    if (found == std::string::npos) return 1;
    return 1 + static_cast<int>(std::count(text_->begin(), text_->begin() + static_cast<long>(found), '\n'));
  }

 private:
  const std::string* text_;
};

struct Collector {
  Locator locator;
  std::vector<Diagnostic> out;

  void add(const std::vector<std::string>& path, std::string message) {
    out.push_back({locator.line(path), std::move(message)});
  }
};

bool is_int(const Json& j) { return j.is_number_integer() || j.is_number_unsigned(); }

void validate_norm_list(const Json& grid, const std::string& key, Collector& c) {
  if (!grid.contains(key)) {
    c.add({"perturbation_grid"}, "perturbation_grid." + key + " is required");
    return;
  }
  const Json& list = grid.at(key);
  if (!list.is_array() || list.empty()) {
    c.add({"perturbation_grid", key}, "perturbation_grid." + key + " must be a non-empty list");
    return;
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!list[i].is_number()) {
      c.add({"perturbation_grid", key}, "perturbation_grid." + key + "[" + std::to_string(i) + "] is not a number");
      continue;
    }
    const double v = list[i].get<double>();
    if (!(v >= 0.0 && v < 1.0)) {
      std::ostringstream msg;
      msg << "perturbation_grid." << key << "[" << i << "] = " << v
          << " violates the requirement ||T_r|| < 1 (norms must lie in [0, 1))";
      c.add({"perturbation_grid", key}, msg.str());
    }
  }
}

std::optional<int> validate_model(const Json& cfg, const std::filesystem::path& base_dir,
                                  Collector& c) {
  if (!cfg.contains("model")) {
    c.add({}, "missing required key 'model'");
    return std::nullopt;
  }
  const Json& model = cfg.at("model");
  if (!model.is_object()) {
    c.add({"model"}, "model must be an object");
    return std::nullopt;
  }
  if (!model.contains("shifts")) {
    if (!model.contains("kind") || !model.at("kind").is_string()) {
      c.add({"model"}, "model.kind is required; allowed: " + join(kModelKinds));
      return std::nullopt;
    }
    const std::string kind = model.at("kind").get<std::string>();
    if (!contains(kModelKinds, kind)) {
      c.add({"model", "kind"}, "unknown model kind '" + kind + "'; allowed: " + join(kModelKinds));
      return std::nullopt;
    }
  }
  try {
    return family_from_spec(model, base_dir).num_generators();
  } catch (const std::exception& e) {
    c.add({"model"}, std::string("invalid model: ") + e.what());
  }
  return std::nullopt;
}

void validate_filters(const Json& cfg, std::optional<int> m, Collector& c) {
  if (!cfg.contains("filters")) {
    c.add({}, "missing required key 'filters'");
    return;
  }
  const Json& f = cfg.at("filters");
  if (f.is_object()) {
    if (!f.contains("degree") || !is_int(f.at("degree")) || f.at("degree").get<int>() < 0 ||
        f.at("degree").get<int>() > 8) {
      c.add({"filters", "degree"}, "filters.degree must be an integer in [0, 8]");
    }
    if (!f.contains("count") || !is_int(f.at("count")) || f.at("count").get<int>() < 1) {
      c.add({"filters", "count"}, "filters.count must be a positive integer");
    }
    if (f.contains("lipschitz_target") &&
        (!f.at("lipschitz_target").is_number() || !(f.at("lipschitz_target").get<double>() > 0.0))) {
      c.add({"filters", "lipschitz_target"}, "filters.lipschitz_target must be positive");
    }
    return;
  }
  if (!f.is_array() || f.empty()) {
    c.add({"filters"}, "filters must be a non-empty list of filters or a random recipe object");
    return;
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::string where = "filters[" + std::to_string(i) + "]";
    try {
      const PolynomialFilter p = filter_from_json(f[i]);
      if (m && p.num_generators() != *m) {
        c.add({"filters"}, where + " has " + std::to_string(p.num_generators()) +
                               " generators but the model has " + std::to_string(*m));
      }
    } catch (const std::exception& e) {
      c.add({"filters"}, where + ": " + e.what());
    }
    if (f[i].is_object() && f[i].contains("declared")) {
      const Json& d = f[i].at("declared");
      for (const char* key : {"l0", "l1"}) {
        if (d.contains(key) && (!d.at(key).is_number() || d.at(key).get<double>() < 0.0)) {
          c.add({"filters", "declared", key}, where + ".declared." + key + " must be non-negative");
        }
      }
    }
  }
}

void validate_grid(const Json& cfg, Collector& c) {
  if (!cfg.contains("perturbation_grid")) {
    c.add({}, "missing required key 'perturbation_grid'");
    return;
  }
  const Json& g = cfg.at("perturbation_grid");
  if (!g.is_object()) {
    c.add({"perturbation_grid"}, "perturbation_grid must be an object");
    return;
  }
  validate_norm_list(g, "norm0", c);
  validate_norm_list(g, "norm1", c);
  if (g.contains("mode")) {
    const std::string mode = g.at("mode").is_string() ? g.at("mode").get<std::string>() : "";
    if (!contains({"commuting", "generic", "scalar"}, mode)) {
      c.add({"perturbation_grid", "mode"}, "perturbation_grid.mode must be one of: commuting, generic, scalar");
    }
  }
  if (g.contains("pairing")) {
    const std::string p = g.at("pairing").is_string() ? g.at("pairing").get<std::string>() : "";
    if (!contains({"by_magnitude", "by_index"}, p)) {
      c.add({"perturbation_grid", "pairing"}, "perturbation_grid.pairing must be by_magnitude or by_index");
    }
  }
  if (g.contains("trials") && (!is_int(g.at("trials")) || g.at("trials").get<long long>() < 1)) {
    c.add({"perturbation_grid", "trials"}, "perturbation_grid.trials must be an integer >= 1");
  }
  if (g.contains("seed") && !(g.at("seed").is_number_unsigned() ||
                              (g.at("seed").is_number_integer() && g.at("seed").get<long long>() >= 0))) {
    c.add({"perturbation_grid", "seed"}, "perturbation_grid.seed must be a non-negative integer");
  }
}

void validate_checks(const Json& cfg, Collector& c) {
  if (!cfg.contains("checks")) {
    c.add({}, "missing required key 'checks'");
    return;
  }
  const Json& checks = cfg.at("checks");
  if (!checks.is_array() || checks.empty()) {
    c.add({"checks"}, "checks must be a non-empty list; allowed: " + join(kChecks));
    return;
  }
  for (const auto& ch : checks) {
    const std::string name = ch.is_string() ? ch.get<std::string>() : ch.dump();
    if (!contains(kChecks, name)) {
      c.add({"checks"}, "unknown check '" + name + "'; allowed: " + join(kChecks));
    }
  }
}

void validate_rest(const Json& cfg, const std::filesystem::path& base_dir, Collector& c) {
  for (const auto& [key, value] : cfg.items()) {
    if (!contains(kTopLevel, key)) {
      c.add({key}, "unknown key '" + key + "'; allowed: " + join(kTopLevel));
    }
  }
  if (cfg.contains("network")) {
    const Json& net = cfg.at("network");
    if (net.is_string()) {
      if (net.get<std::string>() != "demo") c.add({"network"}, "network must be \"demo\" or an object");
    } else {
      try {
        network_from_json(net, base_dir);
      } catch (const std::exception& e) {
        c.add({"network"}, std::string("invalid network: ") + e.what());
      }
    }
  }
  if (cfg.contains("output")) {
    const Json& o = cfg.at("output");
    if (!o.is_object()) {
      c.add({"output"}, "output must be an object");
    } else {
      if (o.contains("dir") && !o.at("dir").is_string()) c.add({"output", "dir"}, "output.dir must be a string");
      if (o.contains("formats")) {
        if (!o.at("formats").is_array()) {
          c.add({"output", "formats"}, "output.formats must be a list");
        } else {
          for (const auto& f : o.at("formats")) {
            const std::string name = f.is_string() ? f.get<std::string>() : f.dump();
            if (!contains(kFormats, name)) {
              c.add({"output", "formats"}, "unknown output format '" + name + "'; allowed: " + join(kFormats));
            }
          }
        }
      }
    }
  }
  if (cfg.contains("lipschitz")) {
    const Json& l = cfg.at("lipschitz");
    if (l.contains("grid_resolution") &&
        (!is_int(l.at("grid_resolution")) || l.at("grid_resolution").get<int>() < 8)) {
      c.add({"lipschitz", "grid_resolution"}, "lipschitz.grid_resolution must be an integer >= 8");
    }
    if (l.contains("radius_factor") &&
        (!l.at("radius_factor").is_number() || l.at("radius_factor").get<double>() < 1.0)) {
      c.add({"lipschitz", "radius_factor"}, "lipschitz.radius_factor must be >= 1");
    }
  }
  if (cfg.contains("margin_tolerance")) {
    const Json& t = cfg.at("margin_tolerance");
    if (!t.is_number() || !(std::abs(t.get<double>()) < 1.0)) {
      c.add({"margin_tolerance"}, "margin_tolerance must be a number in (-1, 1)");
    }
  }
  if (cfg.contains("signal")) {
    const Json& s = cfg.at("signal");
    if (!(s.is_string() && s.get<std::string>() == "random") && !s.is_array()) {
      c.add({"signal"}, "signal must be \"random\" or a list of numbers");
    }
  }
}

std::vector<Diagnostic> validate_json(const Json& cfg, const std::filesystem::path& base_dir,
                                      const std::string* text) {
  Collector c{Locator(text), {}};
  if (!cfg.is_object()) {
    c.add({}, "config must be a JSON object");
    return c.out;
  }
  const auto m = validate_model(cfg, base_dir, c);
  validate_filters(cfg, m, c);
  validate_grid(cfg, c);
  validate_checks(cfg, c);
  validate_rest(cfg, base_dir, c);
  return c.out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct FilterEntry {
  PolynomialFilter p;
  DeclaredBounds declared;
};

struct Job {
  enum Kind { filter, network } kind = filter;
  int trial_id = 0;
  int filter_index = 0;
  double norm0 = 0.0;
  double norm1 = 0.0;
};

struct Plan {
  ShiftFamily family;
  std::vector<FilterEntry> filters;
  std::vector<std::string> checks;
  std::optional<AlgNN> net;
  PerturbationMode mode = PerturbationMode::generic;
  StabilityOptions options;
  std::uint64_t base_seed = 0;
  std::optional<Vector> fixed_signal;
  std::vector<Job> jobs;
};

bool wants(const Plan& plan, const std::string& check) { return contains(plan.checks, check); }

Vector trial_signal(const Plan& plan, std::uint64_t seed) {
  if (plan.fixed_signal) return *plan.fixed_signal;
  Vector x = random_matrix(plan.family.dimension(), 1, seed ^ 0x51a7e5ull, true).col(0);
  return x / x.norm();
}

TrialRow base_row(const Plan& plan, const Job& job, int degree) {
  TrialRow r;
  r.trial_id = job.trial_id;
  r.model_tag = std::string(to_string(plan.family.tag()));
  r.n = plan.family.dimension();
  r.m = plan.family.num_generators();
  r.degree = degree;
  r.norm0 = job.norm0;
  r.norm1 = job.norm1;
  return r;
}

std::vector<TrialRow> run_filter_job(const Plan& plan, const Job& job) {
  const FilterEntry& entry = plan.filters[static_cast<std::size_t>(job.filter_index)];
  const std::uint64_t seed = plan.base_seed + static_cast<std::uint64_t>(job.trial_id);
  const PerturbationModel model =
      random_perturbation(plan.family, job.norm0, job.norm1, plan.mode, seed);
  const ShiftFamily perturbed = perturb(plan.family, model);
  const FilterCertificate cert =
      certify_filter(entry.p, plan.family, perturbed, entry.declared, plan.options);
  const Vector x = trial_signal(plan, seed);

  std::vector<TrialRow> rows;
  auto push = [&](StabilityTrial t) {
    TrialRow r = base_row(plan, job, entry.p.degree());
    if (std::isnan(t.l0)) t.l0 = cert.l0;
    if (std::isnan(t.l1)) t.l1 = cert.l1;
    r.trial = std::move(t);
    rows.push_back(std::move(r));
  };
  if (wants(plan, "theorem1")) push(check_theorem1(entry.p, plan.family, model, x, plan.options));
  if (wants(plan, "theorem2")) push(check_theorem2(entry.p, plan.family, model, cert, plan.options));
  if (wants(plan, "corollary")) push(check_corollary(entry.p, plan.family, model, cert, x, plan.options));
  if (wants(plan, "proof_decomposition")) {
    StabilityTrial t;
    t.check = "proof_decomposition";
    if (plan.family.num_generators() != 1 || !plan.family.is_normal()) {
      t.status = TrialStatus::inapplicable;
      t.lhs = t.rhs = t.margin = kNaN;
      t.note = "needs a single normal generator";
    } else if (!cert.certified) {
      t.status = TrialStatus::inapplicable;
      t.lhs = t.rhs = t.margin = kNaN;
      t.note = cert.reason;
    } else {
      const ProofDecompositionReport rep =
          proof_decomposition_check(entry.p, plan.family, model, cert, plan.options);
      t.lhs = rep.modified_norm;
      t.rhs = cert.l1 + 1e-8;
      t.margin = t.rhs - t.lhs;
      t.status = rep.all_asserted_pass() ? TrialStatus::pass : TrialStatus::violated;
      for (const auto& claim : rep.claims) {
        if (claim.asserted && !claim.passed) t.note += (t.note.empty() ? "" : "; ") + claim.name;
      }
    }
    push(std::move(t));
  }
  return rows;
}

std::vector<TrialRow> run_network_job(const Plan& plan, const Job& job) {
  const AlgNN& net = *plan.net;
  const std::uint64_t seed = plan.base_seed + static_cast<std::uint64_t>(job.trial_id);
  int degree = 0;
  for (const auto& layer : net.layers()) {
    for (const auto& row : layer.filters) {
      for (const auto& p : row) degree = std::max(degree, p.degree());
    }
  }
  auto row_for = [&](StabilityTrial t) {
    TrialRow r;
    r.trial_id = job.trial_id;
    r.model_tag = std::string(to_string(net.layer(0).shifts.tag()));
    r.n = net.input_dimension();
    r.m = net.layer(0).shifts.num_generators();
    r.degree = degree;
    r.norm0 = job.norm0;
    r.norm1 = job.norm1;
    r.trial = std::move(t);
    return r;
  };

  LayerPerturbations models;
  try {
    for (int l = 0; l < net.num_layers(); ++l) {
      models.push_back(random_perturbation(net.layer(l).shifts, job.norm0, job.norm1, plan.mode,
                                           seed * 31 + static_cast<std::uint64_t>(l)));
    }
  } catch (const SpectralError&) {
    models.clear();
  }
  Features x;
  for (int g = 0; g < net.feature_counts().front(); ++g) {
    x.push_back(random_matrix(net.input_dimension(), 1, seed * 131 + static_cast<std::uint64_t>(g), true)
                    .col(0)
                    .real());
  }

  std::vector<TrialRow> rows;
  auto not_real = [&](const std::string& check) {
    StabilityTrial t;
    t.check = check;
    t.status = TrialStatus::inapplicable;
    t.lhs = t.rhs = t.margin = kNaN;
    t.note = "perturbation is not real-valued for this network";
    return t;
  };
  if (wants(plan, "layer")) {
    Features cur = x;
    for (int l = 0; l < net.num_layers(); ++l) {
      try {
        if (models.empty()) throw ArgumentError("no models");
        rows.push_back(row_for(layer_stability_check(net, l, models[static_cast<std::size_t>(l)], cur, plan.options)));
        cur = layer_map(net, l, cur, net.layer(l).shifts.shifts());
      } catch (const ArgumentError&) {
        rows.push_back(row_for(not_real("layer")));
        break;
      }
    }
  }
  if (wants(plan, "network")) {
    try {
      if (models.empty()) throw ArgumentError("no models");
      rows.push_back(row_for(network_stability_check(net, models, x, plan.options).trial));
    } catch (const ArgumentError&) {
      rows.push_back(row_for(not_real("network")));
    }
  }
  return rows;
}

Plan make_plan(const Json& cfg, const std::filesystem::path& base_dir, const RunOptions& options) {
  Plan plan{family_from_spec(cfg.at("model"), base_dir), {}, {}, std::nullopt, PerturbationMode::generic,
            {}, 0, std::nullopt, {}};
  const Json grid = cfg.at("perturbation_grid");
  plan.mode = perturbation_mode_from_string(grid.value("mode", std::string("generic")));
  plan.options.pairing = pairing_from_string(grid.value("pairing", std::string("by_magnitude")));
  plan.base_seed = options.seed.value_or(grid.value("seed", std::uint64_t{0}));
  if (cfg.contains("lipschitz")) {
    plan.options.grid_resolution = cfg.at("lipschitz").value("grid_resolution", plan.options.grid_resolution);
    plan.options.radius_factor = cfg.at("lipschitz").value("radius_factor", plan.options.radius_factor);
  }
  // Negative values demand slack: a trial then passes only when the bound
  // is loose by at least that fraction of rhs.
  plan.options.margin_tolerance = cfg.value("margin_tolerance", plan.options.margin_tolerance);
  for (const auto& ch : cfg.at("checks")) plan.checks.push_back(ch.get<std::string>());

  const Json& filters = cfg.at("filters");
  if (filters.is_object()) {
    const int degree = filters.at("degree").get<int>();
    const int count = filters.at("count").get<int>();
    const double target = filters.value("lipschitz_target", 1.0);
    const std::uint64_t fseed = filters.value("seed", std::uint64_t{1});
    const double radius = std::max(plan.options.radius_factor * plan.family.max_norm(), 1e-12);
    for (int i = 0; i < count; ++i) {
      PolynomialFilter p = random_filter(plan.family.num_generators(), degree,
                                         fseed + static_cast<std::uint64_t>(i));
      const double l0 = estimate_lipschitz(p, radius, plan.options.grid_resolution).l0;
      plan.filters.push_back({l0 > 0.0 ? p.scaled(target / l0) : p, {}});
    }
  } else {
    for (const auto& f : filters) {
      FilterEntry e{filter_from_json(f), {}};
      if (f.contains("declared")) {
        const Json& d = f.at("declared");
        if (d.contains("l0")) e.declared.l0 = d.at("l0").get<double>();
        if (d.contains("l1")) e.declared.l1 = d.at("l1").get<double>();
      }
      plan.filters.push_back(std::move(e));
    }
  }
  if (cfg.contains("signal") && cfg.at("signal").is_array()) {
    const auto v = cfg.at("signal").get<std::vector<double>>();
    if (static_cast<int>(v.size()) != plan.family.dimension()) {
      throw ConfigError("signal length does not match the model dimension");
    }
    plan.fixed_signal = Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size())).cast<Complex>();
  }
  const bool network_checks = wants(plan, "layer") || wants(plan, "network");
  if (network_checks) {
    const Json net = cfg.value("network", Json("demo"));
    plan.net = net.is_string() ? demo_network(plan.base_seed) : network_from_json(net, base_dir);
  }

  const auto norm0 = grid.at("norm0").get<std::vector<double>>();
  const auto norm1 = grid.at("norm1").get<std::vector<double>>();
  const int trials = grid.value("trials", 1);
  const bool filter_checks = wants(plan, "theorem1") || wants(plan, "theorem2") ||
                             wants(plan, "corollary") || wants(plan, "proof_decomposition");
  int next_id = 0;
  if (filter_checks) {
    for (std::size_t f = 0; f < plan.filters.size(); ++f) {
      for (double a : norm0) {
        for (double b : norm1) {
          for (int t = 0; t < trials; ++t) {
            plan.jobs.push_back({Job::filter, next_id++, static_cast<int>(f), a, b});
          }
        }
      }
    }
  }
  if (network_checks) {
    for (double a : norm0) {
      for (double b : norm1) {
        for (int t = 0; t < trials; ++t) plan.jobs.push_back({Job::network, next_id++, 0, a, b});
      }
    }
  }
  return plan;
}

Json summarize(const std::vector<TrialRow>& rows, bool strict, int& exit_code) {
  struct Stats {
    int pass = 0, violated = 0, inapplicable = 0;
    double min_margin = kNaN;
    double min_relative_margin = kNaN;
    std::vector<double> slopes;
  };
  std::map<std::string, Stats> stats;
  Json violations = Json::array();
  for (const auto& r : rows) {
    Stats& s = stats[r.trial.check];
    switch (r.trial.status) {
      case TrialStatus::pass: ++s.pass; break;
      case TrialStatus::violated: ++s.violated; break;
      case TrialStatus::inapplicable: ++s.inapplicable; break;
    }
    if (r.trial.status == TrialStatus::violated) {
      violations.push_back({{"trial_id", r.trial_id}, {"check", r.trial.check}, {"lhs", r.trial.lhs},
                            {"rhs", r.trial.rhs}, {"margin", r.trial.margin}, {"note", r.trial.note}});
    }
    if (r.trial.status == TrialStatus::inapplicable) continue;
    if (std::isnan(s.min_margin) || r.trial.margin < s.min_margin) s.min_margin = r.trial.margin;
    if (r.trial.rhs > 0.0) {
      const double rel = r.trial.margin / r.trial.rhs;
      if (std::isnan(s.min_relative_margin) || rel < s.min_relative_margin) s.min_relative_margin = rel;
    }
    if (std::isfinite(r.trial.slope)) s.slopes.push_back(r.trial.slope);
  }
  Json per_check = Json::object();
  int total_violated = 0;
  int total_inapplicable = 0;
  for (const auto& [name, s] : stats) {
    Json slope = {{"count", s.slopes.size()}};
    if (!s.slopes.empty()) {
      slope["min"] = *std::min_element(s.slopes.begin(), s.slopes.end());
      slope["max"] = *std::max_element(s.slopes.begin(), s.slopes.end());
      double sum = 0.0;
      for (double v : s.slopes) sum += v;
      slope["mean"] = sum / static_cast<double>(s.slopes.size());
    }
    per_check[name] = {{"pass", s.pass},
                       {"violated", s.violated},
                       {"inapplicable", s.inapplicable},
                       {"min_margin", std::isnan(s.min_margin) ? Json(nullptr) : Json(s.min_margin)},
                       {"min_relative_margin", std::isnan(s.min_relative_margin)
                                                   ? Json(nullptr)
                                                   : Json(s.min_relative_margin)},
                       {"slope", slope}};
    total_violated += s.violated;
    total_inapplicable += s.inapplicable;
  }
  exit_code = (total_violated > 0 || (strict && total_inapplicable > 0)) ? kExitViolation : kExitPass;
  return {{"rows", rows.size()},
          {"violations", total_violated},
          {"inapplicable", total_inapplicable},
          {"strict", strict},
          {"per_check", per_check},
          {"violation_list", violations},
          {"exit_code", exit_code}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

void write_plotdata(const ExperimentResult& result) {
  const auto dir = result.out_dir / "plotdata";
  std::filesystem::create_directories(dir);
  struct Cell {
    double lhs = 0.0, rhs = 0.0, slope = 0.0;
    int count = 0, slope_count = 0;
  };
  std::map<std::string, std::map<double, Cell>> curves;
  for (const auto& r : result.rows) {
    if (r.trial.status == TrialStatus::inapplicable || r.trial.check == "proof_decomposition") continue;
    Cell& c = curves[r.trial.check][r.norm0 + r.norm1];
    c.lhs += r.trial.lhs;
    c.rhs += r.trial.rhs;
    ++c.count;
    if (std::isfinite(r.trial.slope)) {
      c.slope += r.trial.slope;
      ++c.slope_count;
    }
  }
  Json manifest = {{"x", "norm0 + norm1"}, {"curves", Json::array()}};
  for (const auto& [check, cells] : curves) {
    std::string measured, bound, slope;
    for (const auto& [x, c] : cells) {
      measured += fmt(x) + " " + fmt(c.lhs / c.count) + "\n";
      bound += fmt(x) + " " + fmt(c.rhs / c.count) + "\n";
      if (c.slope_count > 0) slope += fmt(x) + " " + fmt(c.slope / c.slope_count) + "\n";
    }
    write_file(dir / (check + "_measured.dat"), measured);
    write_file(dir / (check + "_bound.dat"), bound);
    manifest["curves"].push_back({{"file", check + "_measured.dat"}, {"check", check}, {"y", "mean lhs"}});
    manifest["curves"].push_back({{"file", check + "_bound.dat"}, {"check", check}, {"y", "mean rhs"}});
    if (!slope.empty()) {
      write_file(dir / (check + "_slope.dat"), slope);
      manifest["curves"].push_back({{"file", check + "_slope.dat"}, {"check", check}, {"y", "mean remainder slope"}});
    }
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

std::vector<Diagnostic> validate_config_text(const std::string& text) {
  Json cfg;
  try {
    cfg = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte > 0 ? byte - 1 : 0), '\n'));
    return {{line, std::string("JSON parse error: ") + e.what()}};
  }
  return validate_json(cfg, {}, &text);
}

std::vector<Diagnostic> validate_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  Json cfg;
  try {
    cfg = Json::parse(text);
  } catch (const Json::parse_error&) {
    return validate_config_text(text);
  }
  return validate_json(cfg, path.parent_path(), &text);
}

std::string format_diagnostic(const std::string& source, const Diagnostic& d) {
  return source + ":" + std::to_string(d.line) + ": " + d.message;
}

std::string rows_to_csv(const std::vector<TrialRow>& rows) {
  std::string out =
      "trial_id,model_tag,n,m,degree,norm0,norm1,delta,L0,L1,theorem,lhs,rhs,margin,slope,status\n";
  for (const auto& r : rows) {
    const auto& t = r.trial;
    out += std::to_string(r.trial_id) + "," + r.model_tag + "," + std::to_string(r.n) + "," +
           std::to_string(r.m) + "," + std::to_string(r.degree) + "," + fmt(r.norm0) + "," +
           fmt(r.norm1) + "," + fmt(t.delta) + "," + fmt(t.l0) + "," + fmt(t.l1) + "," + t.check +
           "," + fmt(t.lhs) + "," + fmt(t.rhs) + "," + fmt(t.margin) + "," + fmt(t.slope) + "," +
           std::string(to_string(t.status)) + "\n";
  }
  return out;
}

ExperimentResult run_experiment(const Json& config, const std::filesystem::path& base_dir,
                                const RunOptions& options) {
  const auto problems = validate_json(config, base_dir, nullptr);
  if (!problems.empty()) throw ConfigError(problems.front().message);
  const Plan plan = make_plan(config, base_dir, options);

  std::vector<std::vector<TrialRow>> results(plan.jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < plan.jobs.size(); j = next++) {
      try {
        const Job& job = plan.jobs[j];
        results[j] = job.kind == Job::filter ? run_filter_job(plan, job) : run_network_job(plan, job);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, options.jobs);
  std::vector<std::thread> pool;
  for (int w = 1; w < jobs; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto& r : results) {
    for (auto& row : r) result.rows.push_back(std::move(row));
  }
  result.summary = summarize(result.rows, options.strict, result.exit_code);
  result.summary["name"] = config.value("name", std::string("experiment"));
  const std::string dir = config.contains("output") ? config.at("output").value("dir", std::string("out"))
                                                    : std::string("out");
  const std::filesystem::path configured(dir);
  result.out_dir = options.out_dir.value_or(configured.is_absolute() ? configured : base_dir / configured);
  return result;
}

void write_artifacts(const ExperimentResult& result, const std::vector<std::string>& formats) {
  std::filesystem::create_directories(result.out_dir);
  if (contains(formats, "csv")) write_file(result.out_dir / "trials.csv", rows_to_csv(result.rows));
  if (contains(formats, "json")) write_file(result.out_dir / "summary.json", result.summary.dump(2) + "\n");
  if (contains(formats, "plotdata")) write_plotdata(result);
}

}  // namespace algstab
