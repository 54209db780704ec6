#include "bvg/oracle.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "bvg/errors.hpp"

namespace bvg {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ParseError("line " + std::to_string(line) + ": '" + s + "' is not a finite number");
  return v;
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

CheckResult inconclusive(std::string name, const std::exception& e) {
  return CheckResult{.name = std::move(name),
                     .verdict = Verdict::Inconclusive,
                     .statistic = std::nan(""),
                     .tolerance = 0.0,
                     .witness = nullptr,
                     .note = std::string("evaluation failed: ") + e.what()};
}

Verdict verdict_of(double statistic, double tolerance) {
  return statistic <= tolerance ? Verdict::Pass : Verdict::Fail;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m > 0.0 ? m : 1.0;
}

std::vector<double> eval_on(const ScalarFn& f, std::span<const double> grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid[i]);
  return out;
}

void require_increasing(std::span<const double> grid, std::size_t min_size) {
  if (grid.size() < min_size) throw DomainError("grid has too few points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("grid must be strictly increasing");
}

// Signed divided-difference test over every window of `order + 1`
// consecutive nodes: sign * [x_i..x_{i+order}] f >= -tol * scale.
CheckResult sign_check(std::string name, std::span<const double> grid,
                       std::span<const double> fx, int order, double sign, double tol) {
  CheckResult r{.name = std::move(name), .tolerance = tol};
  double worst = 0.0;
  std::size_t worst_i = 0;
  double worst_value = 0.0;
  for (std::size_t i = 0; i + order < grid.size(); ++i) {
    const auto dd = divided_difference(grid.subspan(i, order + 1), fx.subspan(i, order + 1));
    if (dd.scale == 0.0) continue;
    const double violation = -sign * dd.value / dd.scale;
    if (violation > worst) {
      worst = violation;
      worst_i = i;
      worst_value = dd.value;
    }
  }
  r.statistic = worst;
  r.verdict = verdict_of(worst, tol);
  if (r.verdict == Verdict::Fail)
    r.witness = {{"order", order},
                 {"x", std::vector<double>(grid.begin() + worst_i, grid.begin() + worst_i + order + 1)},
                 {"divided_difference", worst_value}};
  return r;
}

}  // namespace

// -- PointSet -----------------------------------------------------------------

PointSet PointSet::random(std::size_t n, int d, double lo, double hi, std::uint64_t seed) {
  if (d < 1) throw DomainError("PointSet::random: d must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  PointSet p{.d = d};
  p.sites.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec s(d);
    for (int k = 0; k < d; ++k) s[k] = u(rng);
    p.sites.push_back(std::move(s));
  }
  return p;
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DomainError("PointSet::from_rows: no sites");
  PointSet p{.d = static_cast<int>(rows.front().size())};
  if (p.d < 1) throw DomainError("PointSet::from_rows: empty site");
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != p.d) throw DomainError("PointSet::from_rows: ragged rows");
    p.sites.push_back(Eigen::Map<const Vec>(r.data(), p.d));
  }
  return p;
}

PointSet PointSet::read_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("points CSV: missing header");
  bool has_value = header.back() == "value";
  const int d = static_cast<int>(header.size()) - (has_value ? 1 : 0);
  if (d < 1) throw ParseError("points CSV: header needs at least x1");
  for (int k = 0; k < d; ++k) {
    if (header[k] != "x" + std::to_string(k + 1))
      throw ParseError("points CSV: header column " + std::to_string(k + 1) + " is '" +
                       header[k] + "', expected 'x" + std::to_string(k + 1) + "'");
  }
  PointSet p{.d = d};
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw ParseError("points CSV line " + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(cells.size()));
    Vec s(d);
    for (int k = 0; k < d; ++k) s[k] = parse_number(cells[k], lineno);
    p.sites.push_back(std::move(s));
    if (has_value) values.push_back(parse_number(cells.back(), lineno));
  }
  if (p.sites.empty()) throw ParseError("points CSV: no sites");
  if (has_value) p.values = std::move(values);
  return p;
}

PointSet PointSet::read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open points file '" + path + "'");
  return read_csv(in);
}

void PointSet::write_csv(std::ostream& out) const {
  const auto prec = out.precision(17);
  for (int k = 0; k < d; ++k) out << (k ? "," : "") << 'x' << (k + 1);
  if (values) out << ",value";
  out << '\n';
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (int k = 0; k < d; ++k) out << (k ? "," : "") << sites[i][k];
    if (values) out << ',' << (*values)[i];
    out << '\n';
  }
  out.precision(prec);
}

// -- Reports ------------------------------------------------------------------

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

void PermissibilityReport::add(CheckResult c) {
  if (c.verdict == Verdict::Fail) verdict = Verdict::Fail;
  else if (c.verdict == Verdict::Inconclusive && verdict == Verdict::Pass)
    verdict = Verdict::Inconclusive;
  checks.push_back(std::move(c));
}

void PermissibilityReport::merge(const PermissibilityReport& other) {
  for (const auto& c : other.checks) add(c);
  if (!seed) seed = other.seed;
}

const CheckResult* PermissibilityReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::json PermissibilityReport::to_json() const {
  json j;
  j["verdict"] = to_string(verdict);
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["checks"] = json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"verdict", to_string(c.verdict)},
                           {"statistic", c.statistic},
                           {"tolerance", c.tolerance},
                           {"witness", c.witness},
                           {"note", c.note}});
  }
  return j;
}

// -- Matrix checks ------------------------------------------------------------

double matrix_scale(const Mat& m) {
  const double s = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  return s > 0.0 ? s : 1.0;
}

Mat kernel_matrix(const Kernel& k, const PointSet& pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = k(pts.sites[i] - pts.sites[j]);
  return m;
}

Mat kernel_matrix(const BinaryKernel& k, const PointSet& pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = k(pts.sites[i], pts.sites[j]);
  return m;
}

Mat contrast_basis(int n) {
  if (n < 2) throw DomainError("contrast basis needs n >= 2");
  Mat e = Mat::Zero(n, n - 1);
  for (int j = 0; j < n - 1; ++j) {
    e(j, j) = 1.0;
    e(n - 1, j) = -1.0;
  }
  Eigen::HouseholderQR<Mat> qr(e);
  return qr.householderQ() * Mat::Identity(n, n - 1);
}

PermissibilityReport cnd_check_matrix(const Mat& gamma, double tol) {
  const int n = static_cast<int>(gamma.rows());
  if (n < 2 || gamma.cols() != n) throw DomainError("cnd_check: need a square matrix with n >= 2");
  const double scale = matrix_scale(gamma);
  const Mat q = contrast_basis(n);
  const Mat sym = 0.5 * (gamma + gamma.transpose());
  const Mat restricted = q.transpose() * sym * q;
  Eigen::SelfAdjointEigenSolver<Mat> es(restricted);
  const double top = es.eigenvalues()(n - 2);

  CheckResult r{.name = "cnd", .tolerance = tol};
  r.statistic = top / scale;
  r.verdict = verdict_of(r.statistic, tol);
  r.note = "largest contrast-subspace eigenvalue / max|Gamma|, scale " + std::to_string(scale);
  if (r.verdict == Verdict::Fail) {
    const Vec a = q * es.eigenvectors().col(n - 2);
    r.witness = {{"contrast", vec_json(a)},
                 {"sum", a.sum()},
                 {"quadratic_form", a.dot(gamma * a)},
                 {"scale", scale}};
  }
  PermissibilityReport rep;
  rep.add(std::move(r));
  return rep;
}

PermissibilityReport cnd_check(const Kernel& gamma, const PointSet& pts, double tol) {
  if (pts.size() < 2) throw DomainError("cnd_check: need at least two sites");
  Mat m;
  try {
    m = kernel_matrix(gamma, pts);
  } catch (const std::exception& e) {
    PermissibilityReport rep;
    rep.add(inconclusive("cnd", e));
    return rep;
  }
  return cnd_check_matrix(m, tol);
}

PermissibilityReport pd_check_matrix(const Mat& c, double tol) {
  const auto n = c.rows();
  if (n < 1 || c.cols() != n) throw DomainError("pd_check: need a square matrix");
  const double scale = matrix_scale(c);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (c + c.transpose()));
  const double low = es.eigenvalues()(0);
  CheckResult r{.name = "pd", .tolerance = tol};
  r.statistic = -low / scale;
  r.verdict = verdict_of(r.statistic, tol);
  r.note = "-(smallest eigenvalue) / max|C|, scale " + std::to_string(scale);
  if (r.verdict == Verdict::Fail) {
    const Vec a = es.eigenvectors().col(0);
    r.witness = {{"weights", vec_json(a)}, {"quadratic_form", a.dot(c * a)}, {"scale", scale}};
  }
  PermissibilityReport rep;
  rep.add(std::move(r));
  return rep;
}

PermissibilityReport pd_check(const Kernel& c, const PointSet& pts, double tol) {
  Mat m;
  try {
    m = kernel_matrix(c, pts);
  } catch (const std::exception& e) {
    PermissibilityReport rep;
    rep.add(inconclusive("pd", e));
    return rep;
  }
  return pd_check_matrix(m, tol);
}

PermissibilityReport pd_check(const BinaryKernel& k, const PointSet& pts, double tol) {
  Mat m;
  try {
    m = kernel_matrix(k, pts);
  } catch (const std::exception& e) {
    PermissibilityReport rep;
    rep.add(inconclusive("pd", e));
    return rep;
  }
  return pd_check_matrix(m, tol);
}

PermissibilityReport variogram_axioms(const Kernel& gamma, const PointSet& pts, double tol) {
  PermissibilityReport rep;
  Mat m;
  double g0 = 0.0;
  try {
    m = kernel_matrix(gamma, pts);
    g0 = gamma(Vec::Zero(pts.d));
  } catch (const std::exception& e) {
    rep.add(inconclusive("variogram_axioms", e));
    return rep;
  }
  const double scale = matrix_scale(m);

  CheckResult origin{.name = "nonnegative_at_origin", .tolerance = tol};
  origin.statistic = std::max(0.0, -g0) / scale;
  origin.verdict = verdict_of(origin.statistic, tol);
  if (origin.verdict == Verdict::Fail) origin.witness = {{"gamma_0", g0}};
  rep.add(std::move(origin));

  CheckResult even{.name = "even", .tolerance = tol};
  const Mat asym = m - m.transpose();
  Eigen::Index wi = 0, wj = 0;
  even.statistic = asym.cwiseAbs().maxCoeff(&wi, &wj) / scale;
  even.verdict = verdict_of(even.statistic, tol);
  if (even.verdict == Verdict::Fail)
    even.witness = {{"xi", vec_json(pts.sites[wi] - pts.sites[wj])},
                    {"gamma_xi", m(wi, wj)},
                    {"gamma_minus_xi", m(wj, wi)}};
  rep.add(std::move(even));

  if (pts.size() >= 2) rep.merge(cnd_check_matrix(m, tol));
  return rep;
}

// -- Divided-difference checks -----------------------------------------------

DividedDifference divided_difference(std::span<const double> x, std::span<const double> fx) {
  DividedDifference dd{0.0, 0.0};
  for (std::size_t j = 0; j < x.size(); ++j) {
    double w = 1.0;
    for (std::size_t m = 0; m < x.size(); ++m)
      if (m != j) w /= x[j] - x[m];
    const double t = w * fx[j];
    dd.value += t;
    dd.scale += std::abs(t);
  }
  return dd;
}

PermissibilityReport cm_check(const ScalarFn& f, std::span<const double> grid, int max_order,
                              double tol) {
  if (max_order < 1) throw DomainError("cm_check: max_order must be >= 1");
  require_increasing(grid, 2);
  PermissibilityReport rep;
  std::vector<double> fx;
  try {
    fx = eval_on(f, grid);
  } catch (const std::exception& e) {
    rep.add(inconclusive("cm", e));
    return rep;
  }
  for (int k = 0; k <= max_order && k < static_cast<int>(grid.size()); ++k)
    rep.add(sign_check("cm_order_" + std::to_string(k), grid, fx, k, k % 2 ? -1.0 : 1.0, tol));
  return rep;
}

PermissibilityReport bernstein_check(const ScalarFn& f, std::span<const double> grid,
                                     int max_order, double tol) {
  if (max_order < 1) throw DomainError("bernstein_check: max_order must be >= 1");
  require_increasing(grid, 3);
  PermissibilityReport rep;
  std::vector<double> fx;
  try {
    fx = eval_on(f, grid);
  } catch (const std::exception& e) {
    rep.add(inconclusive("bernstein", e));
    return rep;
  }
  rep.add(sign_check("nonnegative", grid, fx, 0, 1.0, tol));
  for (int m = 1; m <= max_order + 1 && m < static_cast<int>(grid.size()); ++m)
    rep.add(sign_check("derivative_cm_order_" + std::to_string(m - 1), grid, fx, m,
                       m % 2 ? 1.0 : -1.0, tol));
  return rep;
}

PermissibilityReport polya_check(const ScalarFn& phi, std::span<const double> grid, double tol) {
  require_increasing(grid, 3);
  if (grid.front() < 0.0) throw DomainError("polya_check: grid must be nonnegative");
  PermissibilityReport rep;
  std::vector<double> fx, fneg;
  try {
    fx = eval_on(phi, grid);
    for (double x : grid) fneg.push_back(phi(-x));
  } catch (const std::exception& e) {
    rep.add(inconclusive("polya", e));
    return rep;
  }
  const double scale = max_abs(fx);

  CheckResult even{.name = "even", .tolerance = tol};
  CheckResult nonneg{.name = "nonnegative", .tolerance = tol};
  CheckResult decr{.name = "decreasing", .tolerance = tol};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ev = std::abs(fx[i] - fneg[i]) / scale;
    if (ev > even.statistic) {
      even.statistic = ev;
      even.witness = {{"x", grid[i]}, {"phi_x", fx[i]}, {"phi_minus_x", fneg[i]}};
    }
    const double nn = -fx[i] / scale;
    if (nn > nonneg.statistic) {
      nonneg.statistic = nn;
      nonneg.witness = {{"x", grid[i]}, {"phi_x", fx[i]}};
    }
    if (i > 0) {
      const double inc = (fx[i] - fx[i - 1]) / scale;
      if (inc > decr.statistic) {
        decr.statistic = inc;
        decr.witness = {{"x", {grid[i - 1], grid[i]}}, {"phi", {fx[i - 1], fx[i]}}};
      }
    }
  }
  for (auto* c : {&even, &nonneg, &decr}) {
    c->verdict = verdict_of(c->statistic, tol);
    if (c->verdict == Verdict::Pass) c->witness = nullptr;
    rep.add(std::move(*c));
  }
  rep.add(sign_check("convex", grid, fx, 2, 1.0, tol));
  return rep;
}

PermissibilityReport profile_shape_check(const ScalarFn& f, std::span<const double> grid,
                                         double tol) {
  require_increasing(grid, 3);
  PermissibilityReport rep;
  std::vector<double> fx;
  std::vector<double> fsum(grid.size() * grid.size());
  try {
    fx = eval_on(f, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = i; j < grid.size(); ++j) fsum[i * grid.size() + j] = f(grid[i] + grid[j]);
  } catch (const std::exception& e) {
    rep.add(inconclusive("profile_shape", e));
    return rep;
  }
  const double scale = max_abs(fx);

  CheckResult incr{.name = "increasing", .tolerance = tol};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dec = (fx[i - 1] - fx[i]) / scale;
    if (dec > incr.statistic) {
      incr.statistic = dec;
      incr.witness = {{"x", {grid[i - 1], grid[i]}}, {"f", {fx[i - 1], fx[i]}}};
    }
  }
  incr.verdict = verdict_of(incr.statistic, tol);
  if (incr.verdict == Verdict::Pass) incr.witness = nullptr;
  rep.add(std::move(incr));

  rep.add(sign_check("concave", grid, fx, 2, -1.0, tol));

  CheckResult sub{.name = "subadditive", .tolerance = tol};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i; j < grid.size(); ++j) {
      const double excess = (fsum[i * grid.size() + j] - fx[i] - fx[j]) / scale;
      if (excess > sub.statistic) {
        sub.statistic = excess;
        sub.witness = {{"a", grid[i]}, {"b", grid[j]}, {"f_a_plus_b", fsum[i * grid.size() + j]},
                       {"f_a", fx[i]}, {"f_b", fx[j]}};
      }
    }
  }
  sub.verdict = verdict_of(sub.statistic, tol);
  if (sub.verdict == Verdict::Pass) sub.witness = nullptr;
  rep.add(std::move(sub));
  return rep;
}

PermissibilityReport sqrt_subadditivity_check(const Kernel& gamma, const PointSet& pts,
                                              double tol) {
  PermissibilityReport rep;
  const std::size_t n = pts.size();
  std::vector<double> root(n);
  std::vector<double> root_sum(n * n);
  try {
    for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(std::max(0.0, gamma(pts.sites[i])));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        root_sum[i * n + j] = std::sqrt(std::max(0.0, gamma(pts.sites[i] + pts.sites[j])));
  } catch (const std::exception& e) {
    rep.add(inconclusive("sqrt_subadditive", e));
    return rep;
  }
  double scale = 0.0;
  for (double v : root_sum) scale = std::max(scale, v);
  for (double v : root) scale = std::max(scale, v);
  if (scale == 0.0) scale = 1.0;

  CheckResult r{.name = "sqrt_subadditive", .tolerance = tol};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double excess = (root_sum[i * n + j] - root[i] - root[j]) / scale;
      if (excess > r.statistic) {
        r.statistic = excess;
        r.witness = {{"xi", vec_json(pts.sites[i])},
                     {"eta", vec_json(pts.sites[j])},
                     {"sqrt_gamma_sum", root_sum[i * n + j]},
                     {"sqrt_gamma_xi", root[i]},
                     {"sqrt_gamma_eta", root[j]}};
      }
    }
  }
  r.verdict = verdict_of(r.statistic, tol);
  if (r.verdict == Verdict::Pass) r.witness = nullptr;
  rep.add(std::move(r));
  return rep;
}

// -- Structural properties ----------------------------------------------------

std::optional<Vec> detect_period(const Kernel& gamma, int d, double search_radius, double tol) {
  if (d < 1 || !(search_radius > 0.0)) throw DomainError("detect_period: bad arguments");
  constexpr int kSteps = 4096;
  const double h = search_radius / kSteps;
  const double g0 = gamma(Vec::Zero(d));

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-search_radius, search_radius);
  std::vector<Vec> probes;
  for (int m = 0; m < 24; ++m) {
    Vec p(d);
    for (int k = 0; k < d; ++k) p[k] = u(rng);
    probes.push_back(std::move(p));
  }

  for (int axis = 0; axis < d; ++axis) {
    Vec e = Vec::Zero(d);
    e[axis] = 1.0;
    const auto s = [&](double y) { return gamma(y * e) - g0; };

    std::vector<double> g(kSteps + 1, 0.0);
    double scale = std::abs(g0);
    double gmax = 0.0;
    for (int i = 1; i <= kSteps; ++i) {
      const double v = s(i * h);
      g[i] = std::abs(v);
      gmax = std::max(gmax, g[i]);
      scale = std::max(scale, std::abs(v + g0));
    }
    if (scale == 0.0) scale = 1.0;
    if (gmax <= tol * scale) return h * e;

    int start = 1;
    while (start <= kSteps && g[start] < 0.1 * gmax) ++start;

    const auto verified = [&](double y) {
      if (std::abs(s(y)) > tol * scale) return false;
      for (const auto& p : probes)
        if (std::abs(gamma(p + y * e) - gamma(p)) > 10.0 * tol * scale) return false;
      return true;
    };

    for (int i = start + 1; i < kSteps; ++i) {
      if (!(g[i] <= g[i - 1] && g[i] <= g[i + 1]) || g[i] > 0.5 * gmax) continue;
      const double a = (i - 1) * h;
      const double b = (i + 1) * h;
      double y = boost::math::tools::brent_find_minima([&](double t) { return std::abs(s(t)); }, a,
                                                       b, 52)
                     .first;
      boost::uintmax_t iters = 100;
      const auto tol_fn = boost::math::tools::eps_tolerance<double>(50);
      if (s(a) * s(b) < 0.0) {
        const auto root = boost::math::tools::toms748_solve(s, a, b, tol_fn, iters);
        y = 0.5 * (root.first + root.second);
      } else {
        // Tangential zero: refine on the central-difference derivative.
        const double dh = 1e-5 * std::max(1.0, y);
        const auto ds = [&](double t) { return (s(t + dh) - s(t - dh)) / (2.0 * dh); };
        if (ds(a) * ds(b) < 0.0) {
          const auto root = boost::math::tools::toms748_solve(ds, a, b, tol_fn, iters);
          y = 0.5 * (root.first + root.second);
        }
      }
      if (verified(y)) return y * e;
    }
  }
  return std::nullopt;
}

PermissibilityReport eventual_constancy_check(const ScalarFn& radial, double inner, double outer,
                                              bool certified_all_dims, double tol) {
  if (!(inner >= 0.0) || !(outer > inner)) throw DomainError("eventual_constancy_check: need 0 <= inner < outer");
  constexpr int kSamples = 65;
  PermissibilityReport rep;
  std::vector<double> ring, core;
  try {
    ring = eval_on(radial, linear_grid(inner, outer, kSamples));
    if (inner > 0.0) core = eval_on(radial, linear_grid(0.0, inner, kSamples));
  } catch (const std::exception& e) {
    rep.add(inconclusive("eventual_constancy", e));
    return rep;
  }
  const auto [lo, hi] = std::minmax_element(ring.begin(), ring.end());
  double scale = max_abs(ring);
  for (double v : core) scale = std::max(scale, std::abs(v));
  const double spread = (*hi - *lo) / scale;
  const bool constant = spread <= tol;

  bool increasing = true;
  for (std::size_t i = 1; i < ring.size(); ++i) increasing = increasing && ring[i] > ring[i - 1];

  bool contradiction = false;
  double plateau = std::nan("");
  if (constant) {
    plateau = 0.5 * (*hi + *lo);
    if (certified_all_dims) {
      for (double v : core) contradiction = contradiction || std::abs(v - plateau) > tol * scale;
    }
  }
  CheckResult r{.name = "eventual_constancy",
                .verdict = contradiction ? Verdict::Fail : Verdict::Pass,
                .statistic = spread,
                .tolerance = tol};
  r.witness = {{"constant", constant},
               {"plateau", constant ? json(plateau) : json(nullptr)},
               {"strictly_increasing", increasing},
               {"certified_all_dims", certified_all_dims},
               {"contradiction", contradiction},
               {"inner", inner},
               {"outer", outer}};
  r.note = contradiction ? "plateau on a model certified for every dimension that is not constant"
                         : (constant ? "plateau" : "not constant on the annulus");
  rep.add(std::move(r));
  return rep;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_grid: bad arguments");
  std::vector<double> g(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (!(hi > lo) || n < 2) throw DomainError("linear_grid: bad arguments");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  g.back() = hi;
  return g;
}

}  // namespace bvg
