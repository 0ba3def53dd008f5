#include "solitonforge/cli.hpp"

#include "solitonforge/closed_forms.hpp"
#include "solitonforge/expression.hpp"
#include "solitonforge/invariance.hpp"
#include "solitonforge/ode_reduction.hpp"
#include "solitonforge/report_io.hpp"
#include "solitonforge/sampling.hpp"
#include "solitonforge/soliton_core.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace solitonforge::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Schema helpers. Every config object is checked key-by-key: missing required
// keys and unknown keys are both usage errors.
// ---------------------------------------------------------------------------

void require_object(const json& j, const std::string& ctx) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: " + ctx + " must be a JSON object");
  }
}

void check_keys(const json& obj, const std::string& ctx,
                const std::set<std::string>& required,
                const std::set<std::string>& optional) {
  require_object(obj, ctx);
  for (const auto& key : required) {
    if (!obj.contains(key)) {
      throw std::invalid_argument("config: " + ctx + " is missing required key \"" + key +
                                  "\"");
    }
  }
  for (const auto& item : obj.items()) {
    if (!required.contains(item.key()) && !optional.contains(item.key())) {
      throw std::invalid_argument("config: " + ctx + " has unknown key \"" + item.key() +
                                  "\"");
    }
  }
}

double get_num(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw std::invalid_argument("config: " + ctx + "." + key + " must be a number");
  }
  return v.get<double>();
}

double get_num_or(const json& obj, const std::string& key, const std::string& ctx,
                  double fallback) {
  return obj.contains(key) ? get_num(obj, key, ctx) : fallback;
}

int get_int(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw std::invalid_argument("config: " + ctx + "." + key + " must be an integer");
  }
  return v.get<int>();
}

int get_int_or(const json& obj, const std::string& key, const std::string& ctx,
               int fallback) {
  return obj.contains(key) ? get_int(obj, key, ctx) : fallback;
}

std::string get_str(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = obj.at(key);
  if (!v.is_string()) {
    throw std::invalid_argument("config: " + ctx + "." + key + " must be a string");
  }
  return v.get<std::string>();
}

std::vector<double> get_num_array(const json& v, const std::string& ctx) {
  if (!v.is_array()) {
    throw std::invalid_argument("config: " + ctx + " must be an array of numbers");
  }
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) {
      throw std::invalid_argument("config: " + ctx + " must contain only numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

Vector get_vector_or_empty(const json& obj, const std::string& key, const std::string& ctx) {
  if (!obj.contains(key)) return Vector();
  const std::vector<double> vals = get_num_array(obj.at(key), ctx + "." + key);
  Vector v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
  return v;
}

std::vector<double> get_list_or_empty(const json& obj, const std::string& key,
                                      const std::string& ctx) {
  if (!obj.contains(key)) return {};
  return get_num_array(obj.at(key), ctx + "." + key);
}

GridSpec parse_grid(const json& obj) {
  check_keys(obj, "grid", {"ranges", "counts"}, {});
  const json& ranges_j = obj.at("ranges");
  const json& counts_j = obj.at("counts");
  if (!ranges_j.is_array() || !counts_j.is_array()) {
    throw std::invalid_argument("config: grid.ranges and grid.counts must be arrays");
  }
  std::vector<AxisRange> ranges;
  for (const json& r : ranges_j) {
    const std::vector<double> pair = get_num_array(r, "grid.ranges entry");
    if (pair.size() != 2) {
      throw std::invalid_argument("config: each grid range must be [lo, hi]");
    }
    ranges.push_back(AxisRange{pair[0], pair[1]});
  }
  std::vector<int> counts;
  for (const json& c : counts_j) {
    if (!c.is_number_integer()) {
      throw std::invalid_argument("config: grid.counts must contain integers");
    }
    counts.push_back(c.get<int>());
  }
  return GridSpec(std::move(ranges), std::move(counts));
}

// ---------------------------------------------------------------------------
// Family and field construction
// ---------------------------------------------------------------------------

SolitonBundle ode_bundle_from_json(const json& fam, const std::string& name) {
  const bool needs_rho = name != "ode_steady";
  std::set<std::string> required{"name", "n", "m", "c1", "c2"};
  if (needs_rho) required.insert("rho");
  check_keys(fam, "family", required, {"h1_const", "a_k", "b_k"});

  const int n = get_int(fam, "n", "family");
  OdeFamilyParams p;
  p.c1 = get_num(fam, "c1", "family");
  p.c2 = get_num(fam, "c2", "family");
  p.m = get_int(fam, "m", "family");
  p.rho = needs_rho ? get_num(fam, "rho", "family") : 0.0;

  ProfileFamily profile = name == "ode_expanding"  ? family_ode_expanding(p)
                          : name == "ode_steady"   ? family_ode_steady(p)
                                                   : family_ode_shrinking(p);
  if (n < 2) {
    throw std::invalid_argument("config: family.n must be >= 2");
  }
  Vector e1 = Vector::Zero(n);
  e1[0] = 1.0;
  const double h1_const = get_num_or(fam, "h1_const", "family", 0.0);
  Profile h1 = Profile::analytic([h1_const](double) { return h1_const; },
                                 [](double) { return 0.0; }, [](double) { return 0.0; });
  ScalarField f = lift_profile(profile.f, e1, 0.0);
  ScalarField h = reduced_potential(h1, profile.rho, get_list_or_empty(fam, "a_k", "family"),
                                    get_list_or_empty(fam, "b_k", "family"), n);
  WarpedSolitonSpec spec{n, profile.m, profile.rho, profile.lambda_f};
  validate(spec);
  return SolitonBundle{name, std::move(f), std::move(h), spec, {}};
}

SolitonBundle family_from_json(const json& fam) {
  require_object(fam, "family");
  if (!fam.contains("name")) {
    throw std::invalid_argument("config: family.name is required");
  }
  const std::string name = get_str(fam, "name", "family");

  if (name == "gaussian") {
    check_keys(fam, "family", {"name", "n", "m", "A"}, {"B", "C"});
    GaussianParams p;
    p.A = get_num(fam, "A", "family");
    p.B = get_vector_or_empty(fam, "B", "family");
    p.C = get_num_or(fam, "C", "family", 0.0);
    return family_gaussian(p, get_int(fam, "n", "family"), get_int(fam, "m", "family"));
  }
  if (name == "exp_translation") {
    check_keys(fam, "family", {"name", "n", "m", "a", "a1", "a2"}, {"c", "b"});
    ExpTranslationParams p;
    p.a = get_num(fam, "a", "family");
    p.a1 = get_num(fam, "a1", "family");
    p.a2 = get_num(fam, "a2", "family");
    p.c = get_vector_or_empty(fam, "c", "family");
    p.b = get_num_or(fam, "b", "family", 0.0);
    p.m = get_int(fam, "m", "family");
    return family_exp_translation(get_int(fam, "n", "family"), p);
  }
  if (name == "ode_expanding" || name == "ode_steady" || name == "ode_shrinking") {
    return ode_bundle_from_json(fam, name);
  }
  throw std::invalid_argument("config: unknown family name \"" + name + "\"");
}

SolitonBundle field_from_json(const json& field) {
  check_keys(field, "field", {"n", "m", "rho", "lambda_f", "f", "h"}, {});
  const int n = get_int(field, "n", "field");
  WarpedSolitonSpec spec{n, get_int(field, "m", "field"), get_num(field, "rho", "field"),
                         get_num(field, "lambda_f", "field")};
  validate(spec);
  ScalarField f = expression_field(get_str(field, "f", "field"), n);
  ScalarField h = expression_field(get_str(field, "h", "field"), n);
  return SolitonBundle{"field", std::move(f), std::move(h), spec, {}};
}

// ---------------------------------------------------------------------------
// Report emission (fixed key order, %.17g floats, '\n' endings)
// ---------------------------------------------------------------------------

std::string json_num(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt_g17(v);
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
  }
}

struct RandomCheck {
  long count = 0;
  long skipped = 0;
  std::uint64_t seed = 0;
  double sup_raw = 0.0;
  double sup_scaled = 0.0;
};

std::string verify_report_json(const SolitonBundle& bundle, const ResidualReport& report,
                               const RandomCheck& random_check, bool pass) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"command\": \"verify\",\n";
  os << "  \"subject\": \"" << bundle.name << "\",\n";
  os << "  \"classification\": \"" << to_string(classify(bundle.spec.rho)) << "\",\n";
  os << "  \"n\": " << bundle.spec.n << ",\n";
  os << "  \"m\": " << bundle.spec.m << ",\n";
  os << "  \"rho\": " << json_num(bundle.spec.rho) << ",\n";
  os << "  \"lambda_f\": " << json_num(bundle.spec.lambda_f) << ",\n";
  os << "  \"tolerance\": " << json_num(report.tolerance) << ",\n";
  os << "  \"grid\": {\"ranges\": [";
  for (int axis = 0; axis < report.grid.dimension(); ++axis) {
    if (axis) os << ", ";
    os << "[" << json_num(report.grid.ranges()[axis].lo) << ", "
       << json_num(report.grid.ranges()[axis].hi) << "]";
  }
  os << "], \"counts\": [";
  for (int axis = 0; axis < report.grid.dimension(); ++axis) {
    if (axis) os << ", ";
    os << report.grid.counts()[axis];
  }
  os << "]},\n";
  os << "  \"points_total\": " << report.points_total << ",\n";
  os << "  \"points_skipped\": " << report.points_skipped << ",\n";
  os << "  \"sup_raw\": {\"offdiag\": " << json_num(report.sup_raw_offdiag)
     << ", \"diag\": " << json_num(report.sup_raw_diag)
     << ", \"fiber\": " << json_num(report.sup_raw_fiber)
     << ", \"overall\": " << json_num(report.sup_raw()) << "},\n";
  os << "  \"sup_scaled\": {\"offdiag\": " << json_num(report.sup_scaled_offdiag)
     << ", \"diag\": " << json_num(report.sup_scaled_diag)
     << ", \"fiber\": " << json_num(report.sup_scaled_fiber)
     << ", \"overall\": " << json_num(report.sup_scaled()) << "},\n";
  os << "  \"random\": {\"count\": " << random_check.count
     << ", \"seed\": " << random_check.seed << ", \"skipped\": " << random_check.skipped
     << ", \"sup_raw\": " << json_num(random_check.sup_raw)
     << ", \"sup_scaled\": " << json_num(random_check.sup_scaled) << "},\n";
  os << "  \"pass\": " << (pass ? "true" : "false") << ",\n";
  os << "  \"per_point\": [\n";
  for (std::size_t i = 0; i < report.per_point.size(); ++i) {
    const PointResidual& pr = report.per_point[i];
    os << "    {\"index\": " << pr.index << ", \"skipped\": "
       << (pr.skipped ? "true" : "false") << ", \"max_raw\": " << json_num(pr.max_raw)
       << ", \"max_scaled\": " << json_num(pr.max_scaled) << "}"
       << (i + 1 < report.per_point.size() ? "," : "") << "\n";
  }
  os << "  ]\n";
  os << "}\n";
  return os.str();
}

int cmd_verify(const json& cfg, const std::string& out_path, std::ostream& out) {
  check_keys(cfg, "config", {"command", "grid"},
             {"family", "field", "tolerance", "lambda_f_override", "random_points", "seed"});
  const bool has_family = cfg.contains("family");
  const bool has_field = cfg.contains("field");
  if (has_family == has_field) {
    throw std::invalid_argument("config: verify needs exactly one of \"family\" or \"field\"");
  }

  SolitonBundle bundle = has_family ? family_from_json(cfg.at("family"))
                                    : field_from_json(cfg.at("field"));
  if (cfg.contains("lambda_f_override")) {
    bundle.spec.lambda_f = get_num(cfg, "lambda_f_override", "config");
  }
  const GridSpec grid = parse_grid(cfg.at("grid"));
  const double tol = get_num_or(cfg, "tolerance", "config", 1e-9);
  const long random_points = get_int_or(cfg, "random_points", "config", 0);
  const auto seed = static_cast<std::uint64_t>(get_int_or(cfg, "seed", "config", 0));
  if (random_points < 0) {
    throw std::invalid_argument("config: random_points must be >= 0");
  }

  const ResidualReport report = verify_on_grid(bundle.spec, bundle.f, bundle.h, grid, tol);

  RandomCheck random_check;
  random_check.count = random_points;
  random_check.seed = seed;
  UniformSampler sampler(seed);
  std::vector<AxisRange> box(grid.ranges().begin(), grid.ranges().end());
  for (long i = 0; i < random_points; ++i) {
    const Vector x = sampler.point(box);
    if (!(bundle.f.value(x) > kFMin)) {
      ++random_check.skipped;
      continue;
    }
    const ResidualBlock block = residual_system(bundle.spec, bundle.f, bundle.h, x);
    random_check.sup_raw = std::max(random_check.sup_raw, block.max_abs());
    random_check.sup_scaled = std::max(random_check.sup_scaled, block.max_scaled());
  }

  const bool pass = report.pass && random_check.sup_scaled <= tol;
  emit(verify_report_json(bundle, report, random_check, pass), out_path, out);
  return pass ? kExitPass : kExitMathFailure;
}

// ---------------------------------------------------------------------------

int cmd_ode(const json& cfg, const std::string& out_path, std::ostream& out) {
  check_keys(cfg, "config", {"command", "params", "init", "x_end", "step"}, {});
  const json& params_j = cfg.at("params");
  check_keys(params_j, "params", {"m", "rho", "lambda_f"}, {"k"});
  OdeParams params;
  params.m = get_int(params_j, "m", "params");
  params.rho = get_num(params_j, "rho", "params");
  params.lambda_f = get_num(params_j, "lambda_f", "params");
  const bool m1_path = params_j.contains("k");
  if (m1_path) {
    params.k = get_num(params_j, "k", "params");
    if (params.m != 1) {
      throw std::invalid_argument("config: the k-constrained path requires m = 1");
    }
  }
  if (params.m == 1 && params.lambda_f != 0.0) {
    throw std::invalid_argument("config: m = 1 requires lambda_f = 0");
  }

  const json& init_j = cfg.at("init");
  check_keys(init_j, "init", {"x1", "f", "fp", "h1p"}, {});
  OdeState init{get_num(init_j, "x1", "init"), get_num(init_j, "f", "init"),
                get_num(init_j, "fp", "init"), get_num(init_j, "h1p", "init")};
  const double x_end = get_num(cfg, "x_end", "config");
  const double step = get_num(cfg, "step", "config");
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("config: step must be finite and > 0");
  }
  if (!(x_end > init.x1)) {
    throw std::invalid_argument("config: x_end must exceed init.x1");
  }

  const OdeTrajectory traj = m1_path ? integrate_m1(init, params, x_end, step)
                                     : integrate_reduced(init, params, x_end, step);
  const double resub = traj.samples.size() >= 5
                           ? check_trajectory(traj, params)
                           : std::numeric_limits<double>::quiet_NaN();

  std::ostringstream os;
  os << "# solitonforge ode\n";
  os << "# mode=" << (m1_path ? "m1" : "reduced") << "\n";
  os << "# m=" << params.m << "\n";
  os << "# rho=" << fmt_g17(params.rho) << "\n";
  os << "# lambda_f=" << fmt_g17(params.lambda_f) << "\n";
  os << "# k=" << fmt_g17(params.k) << "\n";
  os << "# step=" << fmt_g17(step) << "\n";
  os << "# halt=" << to_string(traj.halt) << "\n";
  os << "# samples=" << traj.samples.size() << "\n";
  os << "# max_resub_residual=" << fmt_g17(resub) << "\n";
  os << "# columns: x1,f,fp,h1p\n";
  for (const OdeState& s : traj.samples) {
    os << fmt_g17(s.x1) << "," << fmt_g17(s.f) << "," << fmt_g17(s.fp) << ","
       << fmt_g17(s.h1p) << "\n";
  }
  emit(os.str(), out_path, out);
  return kExitPass;
}

// ---------------------------------------------------------------------------

int cmd_family(const json& cfg, const std::string& out_path, std::ostream& out) {
  check_keys(cfg, "config", {"command", "family", "grid"}, {});
  const SolitonBundle bundle = family_from_json(cfg.at("family"));
  const GridSpec grid = parse_grid(cfg.at("grid"));
  if (grid.dimension() != bundle.spec.n) {
    throw std::invalid_argument("config: grid dimension must match family n");
  }

  std::ostringstream os;
  os << "# solitonforge family\n";
  os << "# name=" << bundle.name << "\n";
  os << "# n=" << bundle.spec.n << "\n";
  os << "# m=" << bundle.spec.m << "\n";
  os << "# rho=" << fmt_g17(bundle.spec.rho) << "\n";
  os << "# lambda_f=" << fmt_g17(bundle.spec.lambda_f) << "\n";
  os << "# classification=" << to_string(classify(bundle.spec.rho)) << "\n";
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    os << "# grid axis=" << (axis + 1) << " lo=" << fmt_g17(grid.ranges()[axis].lo)
       << " hi=" << fmt_g17(grid.ranges()[axis].hi) << " count=" << grid.counts()[axis]
       << "\n";
  }
  os << "# columns: ";
  for (int k = 1; k <= bundle.spec.n; ++k) os << "x" << k << ",";
  os << "f,h,skipped\n";

  for (long i = 0; i < grid.point_count(); ++i) {
    const Vector x = grid.point(i);
    const double fx = bundle.f.value(x);
    const double hx = bundle.h.value(x);
    const bool skipped = !(fx > kFMin);
    for (Eigen::Index k = 0; k < x.size(); ++k) os << fmt_g17(x[k]) << ",";
    os << fmt_g17(fx) << "," << fmt_g17(hx) << "," << (skipped ? 1 : 0) << "\n";
  }
  emit(os.str(), out_path, out);
  return kExitPass;
}

// ---------------------------------------------------------------------------

struct FamilyCsv {
  GridSpec grid;
  std::vector<double> f_values;
};

FamilyCsv parse_family_csv(const std::string& text) {
  std::vector<AxisRange> ranges;
  std::vector<int> counts;
  std::vector<std::vector<double>> rows;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream ls(line.substr(1));
      std::string word;
      ls >> word;
      if (word != "grid") continue;
      double lo = 0.0, hi = 0.0;
      int count = 0;
      bool have_lo = false, have_hi = false, have_count = false;
      while (ls >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = word.substr(0, eq);
        const std::string val = word.substr(eq + 1);
        if (key == "lo") {
          lo = std::stod(val);
          have_lo = true;
        } else if (key == "hi") {
          hi = std::stod(val);
          have_hi = true;
        } else if (key == "count") {
          count = std::stoi(val);
          have_count = true;
        }
      }
      if (!have_lo || !have_hi || !have_count) {
        throw std::invalid_argument("csv: malformed grid metadata line: " + line);
      }
      ranges.push_back(AxisRange{lo, hi});
      counts.push_back(count);
      continue;
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(std::move(row));
  }

  if (ranges.empty()) {
    throw std::invalid_argument("csv: no grid metadata lines found");
  }
  GridSpec grid(std::move(ranges), std::move(counts));
  const auto n = static_cast<std::size_t>(grid.dimension());
  if (static_cast<long>(rows.size()) != grid.point_count()) {
    throw std::invalid_argument("csv: row count does not match grid point count");
  }
  std::vector<double> f_values;
  f_values.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() < n + 2) {
      throw std::invalid_argument("csv: data row has too few columns");
    }
    f_values.push_back(row[n]);
  }
  return FamilyCsv{std::move(grid), std::move(f_values)};
}

std::string invariance_report_json(const std::string& source, const std::string& mode,
                                   const InvarianceFit& fit) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"command\": \"invariance\",\n";
  os << "  \"source\": \"" << source << "\",\n";
  os << "  \"mode\": \"" << mode << "\",\n";
  os << "  \"tolerance\": " << json_num(fit.tolerance) << ",\n";
  os << "  \"verdict\": \"" << to_string(fit.verdict) << "\",\n";
  os << "  \"usable_points\": " << fit.usable_points << ",\n";
  os << "  \"max_angular_residual\": " << json_num(fit.max_angular_residual) << ",\n";
  os << "  \"direction\": [";
  for (Eigen::Index i = 0; i < fit.direction.size(); ++i) {
    if (i) os << ", ";
    os << json_num(fit.direction[i]);
  }
  os << "],\n";
  auto matrix_rows = [&os](const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      os << "    [";
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) os << ", ";
        os << json_num(m(i, j));
      }
      os << "]" << (i + 1 < m.rows() ? "," : "") << "\n";
    }
  };
  os << "  \"proportionality\": [\n";
  matrix_rows(fit.proportionality);
  os << "  ],\n";
  os << "  \"proportionality_residual\": [\n";
  matrix_rows(fit.proportionality_residual);
  os << "  ]\n";
  os << "}\n";
  return os.str();
}

int cmd_invariance(const json& cfg, const std::string& out_path, std::ostream& out) {
  check_keys(cfg, "config", {"command"}, {"family", "expr", "n", "csv", "grid", "tolerance"});
  const int sources = (cfg.contains("family") ? 1 : 0) + (cfg.contains("expr") ? 1 : 0) +
                      (cfg.contains("csv") ? 1 : 0);
  if (sources != 1) {
    throw std::invalid_argument(
        "config: invariance needs exactly one of \"family\", \"expr\", \"csv\"");
  }

  InvarianceFit fit;
  std::string source;
  std::string mode;
  if (cfg.contains("csv")) {
    const FamilyCsv csv = parse_family_csv(read_text_file(get_str(cfg, "csv", "config")));
    const double tol = get_num_or(cfg, "tolerance", "config", kAngleTolFd);
    const GridGradients gg = grid_sample_gradients(csv.grid, csv.f_values);
    fit = fit_gradient_directions(gg.gradients, tol);
    source = "csv";
    mode = "fd";
  } else if (cfg.contains("expr")) {
    if (!cfg.contains("n") || !cfg.contains("grid")) {
      throw std::invalid_argument("config: expr source requires \"n\" and \"grid\"");
    }
    const int n = get_int(cfg, "n", "config");
    const ScalarField f = expression_field(get_str(cfg, "expr", "config"), n);
    const GridSpec grid = parse_grid(cfg.at("grid"));
    const double tol = get_num_or(cfg, "tolerance", "config", kAngleTolFd);
    fit = detect_translation_invariance(f, grid, tol);
    source = "expr";
    mode = "fd";
  } else {
    if (!cfg.contains("grid")) {
      throw std::invalid_argument("config: family source requires \"grid\"");
    }
    const SolitonBundle bundle = family_from_json(cfg.at("family"));
    const GridSpec grid = parse_grid(cfg.at("grid"));
    const double tol = get_num_or(cfg, "tolerance", "config", kAngleTolAnalytic);
    fit = detect_translation_invariance(bundle.f, grid, tol);
    source = "family:" + bundle.name;
    mode = "analytic";
  }

  emit(invariance_report_json(source, mode, fit), out_path, out);
  return fit.verdict == InvarianceVerdict::Invariant ? kExitPass : kExitMathFailure;
}

}  // namespace

int run_config_text(const std::string& config_text, const std::string& out_path,
                    std::ostream& out, std::ostream& err) {
  try {
    json cfg;
    try {
      cfg = json::parse(config_text);
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    require_object(cfg, "document");
    if (!cfg.contains("command")) {
      throw std::invalid_argument("config: missing \"command\"");
    }
    const std::string command = get_str(cfg, "command", "config");
    if (command == "verify") return cmd_verify(cfg, out_path, out);
    if (command == "ode") return cmd_ode(cfg, out_path, out);
    if (command == "family") return cmd_family(cfg, out_path, out);
    if (command == "invariance") return cmd_invariance(cfg, out_path, out);
    throw std::invalid_argument("config: unknown command \"" + command + "\"");
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitMathFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Closed-form warped-product gradient Ricci solitons: construction, "
               "residual verification, reduced ODE integration, invariance detection"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify", "Evaluate the soliton residual system on a grid and report pass/fail"},
      {"ode", "Integrate the reduced ODE system and emit a trajectory CSV"},
      {"family", "Sample a closed-form family and emit a field CSV"},
      {"invariance", "Detect translation invariance of a field"},
  };
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "Output file (default: stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string sub_name = app.get_subcommands().front()->get_name();
  std::string config_text;
  try {
    config_text = read_text_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  // The config must agree with the invoked subcommand.
  try {
    const json cfg = json::parse(config_text);
    if (!cfg.is_object() || !cfg.contains("command") || !cfg.at("command").is_string() ||
        cfg.at("command").get<std::string>() != sub_name) {
      std::cerr << "error: config \"command\" must be \"" << sub_name << "\"\n";
      return kExitUsage;
    }
  } catch (const json::exception& e) {
    std::cerr << "error: config: invalid JSON: " << e.what() << "\n";
    return kExitUsage;
  }

  return run_config_text(config_text, out_path, std::cout, std::cerr);
}

}  // namespace solitonforge::cli
