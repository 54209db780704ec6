#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bvg/catalog.hpp"
#include "bvg/errors.hpp"
#include "bvg/kriging.hpp"
#include "bvg/model_io.hpp"
#include "bvg/oracle.hpp"
#include "bvg/schoenberg.hpp"

namespace bvg::cli {

namespace {

using json = nlohmann::json;

struct Options {
  std::string command;
  std::string model;
  std::string points;
  std::string recipe;
  std::string out;
  std::string checks;
  std::string grid;
  std::string mode = "dense";
  std::string bins = "0:4:8";
  std::string targets_file;
  std::string replicates_out;
  std::vector<std::string> targets;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  int random_points = 12;
  double lo = -5.0;
  double hi = 5.0;
  int replicates = 1000;
  int threads = 1;
  double search_radius = 10.0;
  double inner = std::nan("");
  double outer = std::nan("");
  bool as_json = false;
};

json config_json(const Options& o) {
  json j{{"command", o.command}};
  const auto put = [&](const char* k, const std::string& v) {
    if (!v.empty()) j[k] = v;
  };
  if (o.command == "catalog") {
    j["json"] = o.as_json;
    return j;
  }
  if (o.command == "construct") {
    put("recipe", o.recipe);
    put("out", o.out);
    return j;
  }
  put("model", o.model);
  put("out", o.out);
  if (o.command == "validate") {
    put("points", o.points);
    if (o.points.empty()) {
      j["random-points"] = o.random_points;
      j["lo"] = o.lo;
      j["hi"] = o.hi;
    }
    put("checks", o.checks);
    j["tol"] = o.tol;
    j["seed"] = o.seed;
    j["search-radius"] = o.search_radius;
    if (std::isfinite(o.inner)) j["inner"] = o.inner;
    if (std::isfinite(o.outer)) j["outer"] = o.outer;
  } else if (o.command == "grid") {
    j["grid"] = o.grid;
  } else if (o.command == "krige") {
    put("points", o.points);
    j["mode"] = o.mode;
    if (!o.targets.empty()) j["target"] = o.targets;
    put("targets", o.targets_file);
  } else if (o.command == "simulate") {
    put("points", o.points);
    j["seed"] = o.seed;
    j["replicates"] = o.replicates;
    j["threads"] = o.threads;
    j["bins"] = o.bins;
    j["tol"] = o.tol;
    put("replicates-out", o.replicates_out);
  }
  return j;
}

Model load_model(const std::string& spec) {
  if (spec.empty()) throw ParseError("--model is required");
  json j = load_json(spec);
  if (j.is_object() && j.contains("model") && j.contains("config")) j = j.at("model");
  return model_from_json(j);
}

std::vector<double> parse_list(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ParseError("'" + cell + "' is not a number in '" + s + "'");
    }
  }
  return out;
}

struct Axis {
  double lo;
  double hi;
  int n;
};

Axis parse_axis(const std::string& s) {
  const auto v = parse_list(s, ':');
  if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2]))
    throw ParseError("axis '" + s + "' must be lo:hi:n with integer n >= 1");
  return {v[0], v[1], static_cast<int>(v[2])};
}

double axis_point(const Axis& a, int i) {
  return a.n == 1 ? a.lo : a.lo + (a.hi - a.lo) * i / (a.n - 1);
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ','))
    if (!cell.empty()) out.push_back(cell);
  return out;
}

// Writes `payload` to --out or stdout. CSV payloads get a sidecar
// <out>.config.json, or a leading comment line on stdout.
void emit(const Options& o, std::ostream& out, const std::string& payload, bool csv,
          const json& extra = json::object()) {
  json cfg{{"config", config_json(o)}};
  cfg.update(extra);
  if (o.out.empty()) {
    if (csv) out << "# " << cfg.dump() << '\n';
    out << payload;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw ParseError("cannot write '" + o.out + "'");
  f << payload;
  if (csv) {
    std::ofstream side(o.out + ".config.json");
    side << cfg.dump(2) << '\n';
  }
}

void write_json(const Options& o, std::ostream& out, json body) {
  json doc{{"config", config_json(o)}};
  doc.update(body);
  emit(o, out, doc.dump(2) + "\n", false);
}

// -- catalog --------------------------------------------------------------

int cmd_catalog(const Options& o, std::ostream& out) {
  if (o.as_json) {
    json arr = json::array();
    for (const auto& a : atom_catalog()) {
      json params = json::array();
      for (const auto& p : a.params)
        params.push_back({{"name", p.name}, {"range", p.range_str()}, {"default", p.default_value}});
      const auto f = catalog_default(a.name);
      arr.push_back({{"name", a.name},
                     {"group", a.group},
                     {"formula", a.formula},
                     {"anchor", a.anchor},
                     {"tags", f.tags().str()},
                     {"params", params}});
    }
    write_json(o, out, {{"atoms", arr}});
    return 0;
  }
  const auto col = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size() + 2), ' ');
    return s;
  };
  for (const auto& a : atom_catalog()) {
    const auto f = catalog_default(a.name);
    std::string ps;
    for (const auto& p : a.params) ps += (ps.empty() ? "" : " ") + p.name + " in " + p.range_str();
    out << col(a.name, 20) << col(a.group, 11) << col(f.tags().str(), 15)
        << col(ps.empty() ? "-" : ps, 36) << a.anchor << " | " << a.formula << '\n';
  }
  return 0;
}

// -- validate -------------------------------------------------------------

CheckResult period_result(const Kernel& k, int d, double radius, double tol) {
  CheckResult r{.name = "period", .tolerance = tol};
  const auto y = detect_period(k, d, radius, tol);
  r.witness = {{"period", y ? json(std::vector<double>(y->data(), y->data() + y->size())) : json(nullptr)},
               {"search_radius", radius}};
  r.note = y ? "periodic" : "no period found within the search radius";
  return r;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Model model = load_model(o.model);
  const int d = model.dim();
  PointSet pts = o.points.empty() ? PointSet::random(o.random_points, d, o.lo, o.hi, o.seed)
                                  : PointSet::read_csv_file(o.points);
  if (pts.d != d) throw ParseError("points have dimension " + std::to_string(pts.d) +
                                   ", model has " + std::to_string(d));

  std::vector<std::string> checks = split_names(o.checks);
  if (checks.empty()) {
    switch (model.kind) {
      case ModelKind::Variogram: checks = {"axioms", "sqrt_subadditivity"}; break;
      case ModelKind::Covariance:
      case ModelKind::DifferenceKernel: checks = {"pd"}; break;
      case ModelKind::SumKernel: checks = {"axioms"}; break;
    }
  }

  const Kernel k = model.kernel();
  PermissibilityReport rep;
  rep.seed = o.seed;
  for (const auto& c : checks) {
    try {
      if (c == "cnd") rep.merge(cnd_check(k, pts, o.tol));
      else if (c == "pd") rep.merge(pd_check(k, pts, o.tol));
      else if (c == "axioms") rep.merge(variogram_axioms(k, pts, o.tol));
      else if (c == "sqrt_subadditivity") rep.merge(sqrt_subadditivity_check(k, pts, o.tol));
      else if (c == "period") rep.add(period_result(k, d, o.search_radius, o.tol));
      else if (c == "bernstein" || c == "profile_shape") {
        const Variogram v = model.as_variogram();
        const auto f = [&v](double x) { return v.squared_profile(x); };
        const auto grid = log_grid(1e-2, 1e2, c == "bernstein" ? 60 : 40);
        rep.merge(c == "bernstein" ? bernstein_check(f, grid, 6, std::max(o.tol, 1e-9))
                                   : profile_shape_check(f, grid, o.tol));
      } else if (c == "cm") {
        const ScalarFn f = model.covariance
                               ? ScalarFn([&](double x) { return model.covariance->radial(std::sqrt(x)); })
                               : ScalarFn([&](double x) { return model.variogram->squared_profile(x); });
        rep.merge(cm_check(f, log_grid(1e-2, 1e2, 40), 8, std::max(o.tol, 1e-9)));
      } else if (c == "polya") {
        if (!model.covariance) throw ParseError("polya needs a covariance model");
        const auto& cov = *model.covariance;
        const double top = std::isfinite(cov.support_radius) && cov.support_radius > 0.0
                               ? 2.0 * cov.support_radius
                               : o.search_radius;
        rep.merge(polya_check([&](double x) { return cov.radial(std::abs(x)); },
                              linear_grid(0.0, top, 200), o.tol));
      } else if (c == "eventual_constancy") {
        const Variogram v = model.as_variogram();
        const double r0 = v.support_radius.value_or(5.0);
        const double inner = std::isfinite(o.inner) ? o.inner : 1.1 * r0;
        const double outer = std::isfinite(o.outer) ? o.outer : 3.0 * r0;
        rep.merge(eventual_constancy_check([&v](double r) { return v.radial(r); }, inner, outer,
                                           v.certified_all_dims(), o.tol));
      } else {
        throw ParseError("unknown check '" + c + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      rep.add({.name = c,
               .verdict = Verdict::Inconclusive,
               .statistic = std::nan(""),
               .tolerance = o.tol,
               .witness = nullptr,
               .note = e.what()});
    }
  }
  write_json(o, out, {{"model", to_json(model)}, {"report", rep.to_json()}});
  switch (rep.verdict) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

// -- construct ------------------------------------------------------------

int cmd_construct(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.recipe.empty()) throw ParseError("--recipe is required");
  const json recipe = load_json(o.recipe);
  try {
    const Model m = construct(recipe);
    write_json(o, out, {{"recipe", recipe}, {"model", to_json(m)}});
  } catch (const ParameterGateError& e) {
    err << "rejected: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// -- grid -----------------------------------------------------------------

int cmd_grid(const Options& o, std::ostream& out) {
  const Model model = load_model(o.model);
  const int d = model.dim();
  std::vector<Axis> axes;
  std::stringstream ss(o.grid);
  std::string part;
  while (std::getline(ss, part, ',')) axes.push_back(parse_axis(part));
  if (static_cast<int>(axes.size()) != d)
    throw ParseError("--grid needs " + std::to_string(d) + " axes, got " + std::to_string(axes.size()));

  const Kernel k = model.kernel();
  std::ostringstream csv;
  csv.precision(17);
  for (int a = 0; a < d; ++a) csv << (a ? "," : "") << 'x' << (a + 1);
  csv << ",value\n";
  std::vector<int> idx(d, 0);
  Vec xi(d);
  for (;;) {
    for (int a = 0; a < d; ++a) xi[a] = axis_point(axes[a], idx[a]);
    const double v = k(xi);
    for (int a = 0; a < d; ++a) csv << xi[a] << ',';
    csv << v << '\n';
    int a = d - 1;
    while (a >= 0 && ++idx[a] == axes[a].n) idx[a--] = 0;
    if (a < 0) break;
  }
  emit(o, out, csv.str(), true);
  return 0;
}

// -- krige ----------------------------------------------------------------

int cmd_krige(const Options& o, std::ostream& out) {
  const Model model = load_model(o.model);
  const Variogram v = model.as_variogram();
  if (o.points.empty()) throw ParseError("--points is required");
  const PointSet pts = PointSet::read_csv_file(o.points);
  if (!pts.values) throw ParseError("kriging points need a value column");
  if (pts.d != v.d) throw ParseError("points and model dimensions differ");

  std::vector<Vec> targets;
  for (const auto& t : o.targets) {
    const auto c = parse_list(t, ',');
    if (static_cast<int>(c.size()) != v.d) throw ParseError("target '" + t + "' has the wrong dimension");
    targets.push_back(Eigen::Map<const Vec>(c.data(), v.d));
  }
  if (!o.targets_file.empty()) {
    const auto extra = PointSet::read_csv_file(o.targets_file);
    if (extra.d != v.d) throw ParseError("targets and model dimensions differ");
    targets.insert(targets.end(), extra.sites.begin(), extra.sites.end());
  }
  if (targets.empty()) throw ParseError("no kriging targets (--target or --targets)");

  const SolverMode mode = parse_solver_mode(o.mode);
  json preds = json::array();
  for (const auto& t : targets) {
    const auto r = ordinary_kriging(v, pts, t, mode);
    preds.push_back({{"target", std::vector<double>(t.data(), t.data() + t.size())},
                     {"prediction", r.prediction},
                     {"weights", std::vector<double>(r.weights.data(), r.weights.data() + r.weights.size())},
                     {"lagrange", r.lagrange},
                     {"variance", r.variance}});
  }
  write_json(o, out, {{"model", to_json(model)}, {"predictions", preds}});
  return 0;
}

// -- simulate -------------------------------------------------------------

int cmd_simulate(const Options& o, std::ostream& out) {
  const Model model = load_model(o.model);
  if (!model.covariance) throw ParseError("simulate needs a covariance model");
  if (o.points.empty()) throw ParseError("--points is required");
  SimulationSpec spec{.model = *model.covariance,
                      .sites = PointSet::read_csv_file(o.points),
                      .seed = o.seed,
                      .replicates = o.replicates,
                      .threads = o.threads,
                      .tol = o.tol};
  if (spec.sites.d != model.dim()) throw ParseError("points and model dimensions differ");
  const Axis b = parse_axis(o.bins);
  if (b.n < 1 || !(b.hi > b.lo)) throw ParseError("--bins must be lo:hi:n with hi > lo");
  std::vector<double> edges;
  for (int i = 0; i <= b.n; ++i) edges.push_back(b.lo + (b.hi - b.lo) * i / b.n);

  const auto sim = simulate_field(spec);
  if (!o.replicates_out.empty()) {
    std::ofstream f(o.replicates_out);
    if (!f) throw ParseError("cannot write '" + o.replicates_out + "'");
    f.precision(17);
    for (Eigen::Index r = 0; r < sim.values.rows(); ++r) {
      for (Eigen::Index i = 0; i < sim.values.cols(); ++i) f << (i ? "," : "") << sim.values(r, i);
      f << '\n';
    }
  }
  std::ostringstream csv;
  write_variogram_csv(csv, empirical_variogram(sim.values, spec.sites, edges));
  emit(o, out, csv.str(), true, {{"diagonal_shift", sim.shift}});
  return 0;
}

// Splices keys from a --config JSON file into argv for every option that
// was not given explicitly.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") path = args[i + 1];
  if (path.empty()) return args;
  json cfg = load_json(path);
  if (cfg.contains("config")) cfg = cfg.at("config");
  if (!cfg.is_object()) throw ParseError("--config must hold a JSON object");

  std::vector<std::string> out;
  bool has_command = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      ++i;
      continue;
    }
    if (i == 0 && args[i].rfind("-", 0) != 0) has_command = true;
    out.push_back(args[i]);
  }
  if (!has_command) {
    if (!cfg.contains("command")) throw ParseError("--config names no command");
    out.insert(out.begin(), cfg.at("command").get<std::string>());
  }
  const auto given = [&](const std::string& flag) {
    return std::find(out.begin(), out.end(), flag) != out.end();
  };
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        out.push_back(flag);
        out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else if (value.is_string()) {
      out.push_back(flag);
      out.push_back(value.get<std::string>());
    } else if (!value.is_null()) {
      out.push_back(flag);
      out.push_back(value.dump());
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"bvg: Bernstein-function variograms, permissibility checks and kriging"};
  app.require_subcommand(1);
  app.set_config();  // disable CLI11's own config handling

  auto* cat = app.add_subcommand("catalog", "List every catalog atom with ranges, tags and anchor");
  cat->add_flag("--json", o.as_json, "Emit JSON instead of a table");

  auto* val = app.add_subcommand("validate", "Run permissibility checks on a model");
  auto* con = app.add_subcommand("construct", "Build a model from a recipe");
  auto* grd = app.add_subcommand("grid", "Tabulate a model on a regular grid");
  auto* krg = app.add_subcommand("krige", "Ordinary kriging predictions");
  auto* sim = app.add_subcommand("simulate", "Simulate Gaussian fields and an empirical variogram");

  std::string config_path;
  for (auto* sc : {cat, val, con, grd, krg, sim}) {
    sc->add_option("--config", config_path, "JSON file with option values");
    sc->add_option("--out", o.out, "Output path (default stdout)");
  }
  for (auto* sc : {val, grd, krg, sim}) sc->add_option("--model", o.model, "Model JSON, inline or file");
  for (auto* sc : {val, krg, sim}) sc->add_option("--points", o.points, "Sites CSV: x1,...,xd[,value]");
  for (auto* sc : {val, sim}) {
    sc->add_option("--tol", o.tol, "Relative tolerance");
    sc->add_option("--seed", o.seed, "Random seed");
  }
  val->add_option("--checks", o.checks,
                  "Comma list: cnd,pd,axioms,sqrt_subadditivity,profile_shape,bernstein,cm,polya,"
                  "eventual_constancy,period");
  val->add_option("--random-points", o.random_points, "Random sites when --points is absent");
  val->add_option("--lo", o.lo, "Random site lower bound");
  val->add_option("--hi", o.hi, "Random site upper bound");
  val->add_option("--search-radius", o.search_radius, "Period search radius");
  val->add_option("--inner", o.inner, "Inner radius for eventual_constancy");
  val->add_option("--outer", o.outer, "Outer radius for eventual_constancy");
  con->add_option("--recipe", o.recipe, "Recipe JSON, inline or file");
  grd->add_option("--grid", o.grid, "Axes lo:hi:n separated by commas")->required();
  krg->add_option("--mode", o.mode, "dense | sparse");
  krg->add_option("--target", o.targets, "Target coordinates x1,...,xd (repeatable)");
  krg->add_option("--targets", o.targets_file, "Targets CSV: x1,...,xd");
  sim->add_option("--replicates", o.replicates, "Number of replicates");
  sim->add_option("--threads", o.threads, "Worker threads");
  sim->add_option("--bins", o.bins, "Lag bins lo:hi:n");
  sim->add_option("--replicates-out", o.replicates_out, "Optional CSV of replicates");

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::vector<std::string> storage{"bvg"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 2;
    }
    o.command = app.get_subcommands().front()->get_name();
    if (o.command == "catalog") return cmd_catalog(o, out);
    if (o.command == "validate") return cmd_validate(o, out);
    if (o.command == "construct") return cmd_construct(o, out, err);
    if (o.command == "grid") return cmd_grid(o, out);
    if (o.command == "krige") return cmd_krige(o, out);
    if (o.command == "simulate") return cmd_simulate(o, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterGateError& e) {
    err << "rejected: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace bvg::cli
