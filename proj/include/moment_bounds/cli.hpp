#ifndef MOMENT_BOUNDS_CLI_HPP
#define MOMENT_BOUNDS_CLI_HPP

// Command-line front end. Requires CLI11.hpp and json.hpp on the include path.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "emm.hpp"
#include "errors.hpp"
#include "oppq.hpp"
#include "precision.hpp"
#include "problems.hpp"
#include "reconstruct.hpp"

namespace moment_bounds::cli {

using Real = PrecScalar;

// Every numeric input is kept as the decimal text the user typed and parsed
// once the working precision is set.
struct RunConfig {
  std::string command;
  std::string family = "spiked";
  std::string representation;  // empty: command default
  std::string branch = "physical";
  std::string b = "0";
  std::string gamma = "0.75";
  std::vector<std::string> b_list;
  std::vector<int> N;  // empty: command default
  int pmax = 0;
  int digits = 0;      // 0: environment or order-based default
  int sig = 0;         // 0: same as digits
  std::string window;  // "lo,hi"; empty: command default
  std::string bu;
  std::string log10_bu;
  std::string energy;
  std::string mode = "am";
  std::string method = "am";
  int state = 0;
  int states = 4;
  int n = 0;
  int count = 1;
  std::size_t grid = 0;
  std::size_t points = 2001;
  int eta = 15;
  std::string x_max = "10";
  std::string out = "-";
  std::string format = "csv";
  bool timing = false;

  bool operator==(const RunConfig&) const = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RunConfig, command, family, representation, branch, b, gamma, b_list,
                                                N, pmax, digits, sig, window, bu, log10_bu, energy, mode, method,
                                                state, states, n, count, grid, points, eta, x_max, out, format,
                                                timing)

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct ResultRecord {
  RunConfig inputs;
  Table outputs;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  std::string method;
  int order = 0;
  unsigned digits = 0;
  double seconds = -1;  // written only when timing was requested
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string serialize(const ResultRecord& r, const std::string& format) {
  if (format == "csv") {
    std::ostringstream os;
    for (std::size_t i = 0; i < r.outputs.columns.size(); ++i) os << (i ? "," : "") << r.outputs.columns[i];
    os << "\n";
    for (const auto& row : r.outputs.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
      os << "\n";
    }
    return os.str();
  }
  if (format != "json") throw usage_error("unknown format '" + format + "'");
  nlohmann::ordered_json j;
  j["inputs"] = nlohmann::json(r.inputs);
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  out["columns"] = r.outputs.columns;
  out["rows"] = r.outputs.rows;
  for (const auto& [k, v] : r.extra.items()) out[k] = v;
  j["outputs"] = out;
  nlohmann::ordered_json prov;
  prov["method"] = r.method;
  prov["order"] = r.order;
  prov["precision"] = r.digits;
  if (r.seconds >= 0) prov["wall_clock_s"] = r.seconds;
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_failure("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw io_failure("write to '" + path + "' failed");
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

inline std::pair<Real, Real> parse_window(const std::string& text, const Real& lo, const Real& hi) {
  if (text.empty()) return {lo, hi};
  auto parts = split(text, ',');
  if (parts.size() != 2) throw usage_error("window must be 'lo,hi'");
  Real a = parse_decimal<Real>(parts[0]);
  Real c = parse_decimal<Real>(parts[1]);
  if (!(a < c)) throw invalid_window("window lower end must be below upper end");
  return {a, c};
}

inline Representation parse_representation(const std::string& s) {
  if (s == "psi") return Representation::PsiTilde;
  if (s == "phi-sigma0") return Representation::PhiSigma0;
  if (s == "phi-sigma3") return Representation::PhiSigma3;
  if (s == "psi-squared") return Representation::PsiSquared;
  throw usage_error("unknown representation '" + s + "'");
}

inline Branch parse_branch(const std::string& s) {
  if (s == "physical") return Branch::Physical;
  if (s == "unphysical") return Branch::Unphysical;
  throw usage_error("unknown branch '" + s + "'");
}

inline ProblemSpec<Real> make_spec(const RunConfig& c, const std::string& b_text, Representation rep) {
  Real b = parse_decimal<Real>(b_text);
  ProblemSpec<Real> spec;
  if (c.family == "walled")
    spec = ProblemSpec<Real>::walled(b, parse_branch(c.branch));
  else if (c.family == "spiked")
    spec = ProblemSpec<Real>::spiked(b, rep, parse_decimal<Real>(c.gamma));
  else
    throw usage_error("unknown family '" + c.family + "'");
  spec.validate();
  return spec;
}

// Default energy window (0, 2 b^2 + 20).
inline std::pair<Real, Real> default_window(const RunConfig& c, const ProblemSpec<Real>& spec) {
  return parse_window(c.window, Real(0), 2 * spec.b * spec.b + 20);
}

struct Context {
  const RunConfig& cfg;
  unsigned digits;
  unsigned sig;
  std::string num(const Real& x) const { return format_number(x, sig); }
  std::string dig() const { return std::to_string(digits); }
};

inline int first_N(const RunConfig& c, int fallback) { return c.N.empty() ? fallback : c.N.front(); }

inline void require_bounding_precision(unsigned digits) {
  if (digits < 32) throw usage_error("bounding commands need at least 32 digits");
}

inline void cmd_exact(const Context& cx, ResultRecord& r) {
  const auto& c = cx.cfg;
  Real b = parse_decimal<Real>(c.b);
  if (b != 0) throw out_of_domain("closed-form spectra are available only at b = 0");
  if (c.n < 0 || c.count < 1) throw usage_error("--n must be non-negative and --count positive");
  r.outputs.columns = {"state", "E"};
  r.method = "closed-form";
  for (int n = c.n; n < c.n + c.count; ++n) {
    Real E;
    if (c.family == "spiked")
      E = exact_spectrum_gamma(parse_decimal<Real>(c.gamma), n);
    else if (c.family == "walled")
      E = Real(2 * n) + (parse_branch(c.branch) == Branch::Physical ? Real(3) / 2 : Real(1) / 2);
    else
      throw usage_error("unknown family '" + c.family + "'");
    r.outputs.rows.push_back({std::to_string(n), cx.num(E)});
  }
}

inline void cmd_am(const Context& cx, ResultRecord& r) {
  const auto& c = cx.cfg;
  auto spec = make_spec(c, c.b, Representation::PsiTilde);
  int N = first_N(c, 100);
  auto [lo, hi] = default_window(c, spec);
  auto basis = make_basis(spec, am_basis_order(spec, N));
  auto scan = am_scan(spec, basis, N, lo, hi, c.grid);
  r.outputs.columns = {"b", "state", "E", "N", "digits"};
  for (std::size_t k = 0; k < scan.roots.size(); ++k)
    r.outputs.rows.push_back({c.b, std::to_string(k), cx.num(scan.roots[k]), std::to_string(N), cx.dig()});
  nlohmann::ordered_json suspect = nlohmann::ordered_json::array();
  for (const auto& x : scan.suspected_complex) suspect.push_back(cx.num(x));
  r.extra["suspected_complex"] = suspect;
  r.method = "oppq-am";
  r.order = N;
}

inline void cmd_bm(const Context& cx, ResultRecord& r) {
  const auto& c = cx.cfg;
  using std::log10;
  require_bounding_precision(cx.digits);
  auto spec = make_spec(c, c.b, Representation::PsiTilde);
  int N = first_N(c, 100);
  auto [lo, hi] = default_window(c, spec);
  auto basis = make_basis(spec, N);
  auto minima = bm_local_minima(spec, basis, N, lo, hi, c.grid);
  r.outputs.columns = {"b", "state", "E", "log10_lambda", "N", "digits"};
  for (std::size_t k = 0; k < minima.size(); ++k)
    r.outputs.rows.push_back({c.b, std::to_string(k), cx.num(minima[k].E), cx.num(Real(log10(minima[k].lambda))),
                              std::to_string(N), cx.dig()});
  r.method = "oppq-bm";
  r.order = N;
}

inline Minimum<Real> state_minimum(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis, int N,
                                   const Real& lo, const Real& hi, std::size_t grid, int state) {
  auto minima = bm_local_minima(spec, basis, N, lo, hi, grid);
  if (state < 0 || static_cast<std::size_t>(state) >= minima.size())
    throw no_feasible_point("order " + std::to_string(N) + " has " + std::to_string(minima.size()) +
                            " minima in the window");
  return minima[static_cast<std::size_t>(state)];
}

inline void cmd_bounds(const Context& cx, ResultRecord& r) {
  const auto& c = cx.cfg;
  using std::pow;
  require_bounding_precision(cx.digits);
  auto spec = make_spec(c, c.b, Representation::PsiTilde);
  std::vector<int> Ns = c.N.empty() ? std::vector<int>{10, 50, 100, 150} : c.N;
  std::sort(Ns.begin(), Ns.end());
  auto [lo, hi] = default_window(c, spec);
  const int top = std::max(Ns.back(), calibration_order(Ns.back()));
  auto basis = make_basis(spec, top);
  Real B_U;
  if (!c.bu.empty())
    B_U = parse_decimal<Real>(c.bu);
  else if (!c.log10_bu.empty())
    B_U = pow(Real(10), parse_decimal<Real>(c.log10_bu));
  else
    B_U = calibrate_bu(state_minimum(spec, basis, calibration_order(Ns.back()), lo, hi, c.grid, c.state).lambda);
  r.outputs.columns = {"b", "state", "E_L", "E_U", "N", "B_U", "digits"};
  for (int N : Ns) {
    auto m = state_minimum(spec, basis, N, lo, hi, c.grid, c.state);
    auto br = bm_bounds(spec, basis, N, B_U, m.E);
    r.outputs.rows.push_back(
        {c.b, std::to_string(c.state), cx.num(br.E_L), cx.num(br.E_U), std::to_string(N), cx.num(B_U), cx.dig()});
  }
  r.method = "oppq-bm-bounds";
  r.order = Ns.back();
}

inline void cmd_emm_rows(const Context& cx, const std::string& b_text, const std::string& rep_text, int pmax,
                         Table& t) {
  const auto& c = cx.cfg;
  Representation rep = parse_representation(rep_text);
  auto spec = make_spec(c, b_text, rep);
  if (spec.family != Family::SpikedAQ) throw usage_error("emm applies to the spiked family");
  std::pair<Real, Real> w;
  if (rep == Representation::PhiSigma0 || rep == Representation::PhiSigma3)
    w = parse_window(c.window, Real(1) / 2, Real(2));
  else
    w = default_window(c, spec);
  EmmOptions<Real> opt;
  opt.grid = c.grid;
  auto iv = emm_energy_interval(spec, pmax, w.first, w.second, c.state, opt);
  t.rows.push_back({b_text, std::to_string(c.state), cx.num(iv.E_L), cx.num(iv.E_U), std::to_string(pmax),
                    iv.method, cx.dig()});
}

inline void cmd_emm(const Context& cx, ResultRecord& r) {
  const auto& c = cx.cfg;
  require_bounding_precision(cx.digits);
  if (c.pmax < 1) throw usage_error("--pmax is required");
  std::string rep = c.representation.empty() ? "phi-sigma3" : c.representation;
  r.outputs.columns = {"b", "state", "E_L", "E_U", "P_max", "method", "digits"};
  cmd_emm_rows(cx, c.b, rep, c.pmax, r.outputs);
  r.method = "emm-" + rep;
  r.order = c.pmax;
}

inline void cmd_reconstruct(const Context& cx, ResultRecord& r) {
  const auto& c = cx.cfg;
  auto spec = make_spec(c, c.b, Representation::PsiTilde);
  int N = first_N(c, 40);
  auto basis = make_basis(spec, am_basis_order(spec, N));
  Real E;
  if (!c.energy.empty()) {
    E = parse_decimal<Real>(c.energy);
  } else {
    auto [lo, hi] = default_window(c, spec);
    auto roots = am_scan(spec, basis, N, lo, hi, c.grid).roots;
    if (c.state < 0 || static_cast<std::size_t>(c.state) >= roots.size())
      throw no_feasible_point("window holds " + std::to_string(roots.size()) + " estimates");
    E = roots[static_cast<std::size_t>(c.state)];
  }
  NullMode mode;
  if (c.mode == "am")
    mode = NullMode::AM;
  else if (c.mode == "bm")
    mode = NullMode::BM;
  else
    throw usage_error("unknown mode '" + c.mode + "'");
  auto u = missing_moment_vector(spec, basis, E, N, mode);
  auto grid = uniform_grid<Real>(Real(0), spec.b + 10, c.points);
  auto w = wavefunction_samples(spec, basis, E, u, N, grid);
  r.outputs.columns = {"chi", "psi", "potential"};
  for (std::size_t i = 0; i < grid.size(); ++i)
    r.outputs.rows.push_back({cx.num(w.grid[i]), cx.num(w.values[i]), cx.num(w.potential[i])});
  r.extra["E"] = cx.num(E);
  nlohmann::ordered_json tuple = nlohmann::ordered_json::array();
  for (const auto& x : u) tuple.push_back(cx.num(x));
  r.extra["missing_moments"] = tuple;
  r.extra["nodes"] = node_count(w.values);
  r.method = "reconstruct-" + c.mode;
  r.order = N;
}

inline void cmd_denseness(const Context& cx, ResultRecord& r, std::ostream& err) {
  const auto& c = cx.cfg;
  int N = first_N(c, 10);
  auto grid = uniform_grid<Real>(Real(0), parse_decimal<Real>(c.x_max), c.points);
  auto d = denseness_demo<Real>(c.eta, N, grid);
  r.outputs.columns = {"x", "partial", "target"};
  for (std::size_t i = 0; i < grid.size(); ++i)
    r.outputs.rows.push_back({cx.num(grid[i]), cx.num(d.samples.values[i]), cx.num(d.target[i])});
  r.extra["l2_error"] = cx.num(d.l2_error);
  if (c.format == "csv") err << "l2_error=" << format_number(d.l2_error, 10) << "\n";
  r.method = "denseness";
  r.order = N;
}

inline const std::vector<std::string>& table2_b() {
  static const std::vector<std::string> v{"0.001", "0.01", "0.1", "0.5", "1", "5", "10", "20", "100", "1000", "2500"};
  return v;
}

inline std::vector<std::string> table5_b() {
  std::vector<std::string> v;
  for (int k = 0; k <= 20; ++k) v.push_back(k % 2 ? std::to_string(k / 2) + ".5" : std::to_string(k / 2));
  return v;
}

inline void cmd_sweep(const Context& cx, ResultRecord& r) {
  const auto& c = cx.cfg;
  if (c.method == "am") {
    std::vector<std::string> bs = c.b_list.empty() ? table5_b() : c.b_list;
    int N = first_N(c, 100);
    std::vector<std::pair<Real, std::vector<std::string>>> rows;
    for (const auto& bt : bs) {
      auto spec = make_spec(c, bt, Representation::PsiTilde);
      auto [lo, hi] = parse_window(c.window, Real(0), Real(9));
      auto basis = make_basis(spec, am_basis_order(spec, N));
      auto roots = am_scan(spec, basis, N, lo, hi, c.grid).roots;
      for (std::size_t k = 0; k < roots.size() && static_cast<int>(k) < c.states; ++k)
        rows.push_back({spec.b, {bt, std::to_string(k), cx.num(roots[k]), std::to_string(N), cx.dig()}});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    r.outputs.columns = {"b", "state", "E", "N", "digits"};
    for (auto& row : rows) r.outputs.rows.push_back(std::move(row.second));
    r.method = "oppq-am";
    r.order = N;
    return;
  }
  if (c.method != "emm") throw usage_error("unknown sweep method '" + c.method + "'");
  require_bounding_precision(cx.digits);
  std::vector<std::string> bs = c.b_list.empty() ? table2_b() : c.b_list;
  r.outputs.columns = {"b", "state", "E_L", "E_U", "P_max", "method", "digits"};
  std::vector<std::pair<Real, std::string>> order;
  for (const auto& bt : bs) order.push_back({parse_decimal<Real>(bt), bt});
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& [b, bt] : order) {
    // sigma = 3 is the sharper representation below b = 10.
    std::string rep = c.representation.empty() ? (b < 10 ? "phi-sigma3" : "phi-sigma0") : c.representation;
    int pmax = c.pmax > 0 ? c.pmax : (rep == "phi-sigma3" ? 16 : 10);
    cmd_emm_rows(cx, bt, rep, pmax, r.outputs);
  }
  r.method = "emm";
  r.order = c.pmax;
}

inline int largest_order(const RunConfig& c) {
  int m = c.pmax;
  for (int n : c.N) m = std::max(m, n);
  if (c.N.empty()) {
    if (c.command == "oppq-am" || c.command == "walled" || c.command == "oppq-bm" || c.command == "sweep")
      m = std::max(m, 100);
    if (c.command == "bounds") m = std::max(m, 150);
    if (c.command == "reconstruct") m = std::max(m, 40);
  }
  return m;
}

}  // namespace detail

inline ResultRecord execute(const RunConfig& c, std::ostream& err) {
  ResultRecord r;
  r.inputs = c;
  const unsigned digits = resolve_digits(static_cast<unsigned>(std::max(0, c.digits)),
                                         static_cast<unsigned>(detail::largest_order(c)));
  r.digits = digits;
  precision_scope scope(digits);
  detail::Context cx{c, digits, c.sig > 0 ? static_cast<unsigned>(c.sig) : digits};
  auto t0 = std::chrono::steady_clock::now();
  if (c.command == "exact")
    detail::cmd_exact(cx, r);
  else if (c.command == "oppq-am")
    detail::cmd_am(cx, r);
  else if (c.command == "walled") {
    detail::cmd_am(cx, r);
    r.method = "oppq-am-walled";
  } else if (c.command == "oppq-bm")
    detail::cmd_bm(cx, r);
  else if (c.command == "bounds")
    detail::cmd_bounds(cx, r);
  else if (c.command == "emm")
    detail::cmd_emm(cx, r);
  else if (c.command == "reconstruct")
    detail::cmd_reconstruct(cx, r);
  else if (c.command == "denseness")
    detail::cmd_denseness(cx, r, err);
  else if (c.command == "sweep")
    detail::cmd_sweep(cx, r);
  else
    throw usage_error("unknown command '" + c.command + "'");
  if (c.timing) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Parses argv into a RunConfig. Returns the exit code when parsing ends the
// run (help or a usage error).
inline std::optional<int> parse(int argc, const char* const* argv, RunConfig& c, std::ostream& out,
                                std::ostream& err) {
  CLI::App app{"Moment-method eigenvalue bounds for the spiked and walled harmonic oscillators"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* s) {
    s->add_option("--digits", c.digits, "working precision in decimal digits");
    s->add_option("--sig", c.sig, "significant digits in the output (default: --digits)");
    s->add_option("--out,-o", c.out, "output path, '-' for stdout");
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_flag("--timing", c.timing, "record wall-clock time in the JSON provenance");
  };
  auto problem = [&](CLI::App* s) {
    s->add_option("--family", c.family, "spiked or walled")->check(CLI::IsMember({"spiked", "walled"}));
    s->add_option("--b", c.b, "displacement b (decimal)");
    s->add_option("--gamma", c.gamma, "spike strength gamma (decimal)");
    s->add_option("--branch", c.branch, "physical or unphysical")->check(CLI::IsMember({"physical", "unphysical"}));
  };
  auto orders = [&](CLI::App* s) {
    s->add_option("--N", c.N, "expansion order(s)")->delimiter(',');
    s->add_option("--window", c.window, "energy window 'lo,hi'");
    s->add_option("--grid", c.grid, "scan grid points over the window");
  };

  auto* exact = app.add_subcommand("exact", "closed-form spectra at b = 0");
  common(exact);
  problem(exact);
  exact->add_option("--n", c.n, "first state index");
  exact->add_option("--count", c.count, "number of states");

  auto* emm = app.add_subcommand("emm", "Hankel-positivity energy brackets");
  common(emm);
  problem(emm);
  emm->add_option("--rep", c.representation, "phi-sigma3, phi-sigma0, psi-squared or psi");
  emm->add_option("--pmax", c.pmax, "highest moment index")->required();
  emm->add_option("--window", c.window, "energy window 'lo,hi'");
  emm->add_option("--grid", c.grid, "seed grid points over the window");
  emm->add_option("--state", c.state, "feasible component index");

  auto* am = app.add_subcommand("oppq-am", "secular-determinant energy estimates");
  common(am);
  problem(am);
  orders(am);

  auto* walled = app.add_subcommand("walled", "walled oscillator energy estimates");
  common(walled);
  walled->add_option("--b", c.b, "wall distance b (decimal)");
  walled->add_option("--branch", c.branch, "physical or unphysical")
      ->check(CLI::IsMember({"physical", "unphysical"}));
  orders(walled);

  auto* bm = app.add_subcommand("oppq-bm", "local minima of the smallest dyad-sum eigenvalue");
  common(bm);
  problem(bm);
  orders(bm);

  auto* bounds = app.add_subcommand("bounds", "level-set brackets at ascending orders");
  common(bounds);
  problem(bounds);
  orders(bounds);
  bounds->add_option("--state", c.state, "state index");
  auto* bu = bounds->add_option("--bu", c.bu, "level B_U (decimal)");
  bounds->add_option("--log10-bu", c.log10_bu, "log10 of the level B_U")->excludes(bu);

  auto* rec = app.add_subcommand("reconstruct", "wavefunction samples from the expansion coefficients");
  common(rec);
  problem(rec);
  orders(rec);
  rec->add_option("--state", c.state, "state index");
  rec->add_option("--E", c.energy, "energy (default: estimate at order N)");
  rec->add_option("--mode", c.mode, "am or bm")->check(CLI::IsMember({"am", "bm"}));
  rec->add_option("--points", c.points, "grid points on [0, b + 10]");

  auto* dense = app.add_subcommand("denseness", "odd half-line state from even states");
  common(dense);
  dense->add_option("--eta", c.eta, "target odd state index");
  dense->add_option("--N", c.N, "highest even index in the partial sum")->delimiter(',');
  dense->add_option("--x-max", c.x_max, "grid end");
  dense->add_option("--points", c.points, "grid points");

  auto* sweep = app.add_subcommand("sweep", "energies over a list of b values");
  common(sweep);
  problem(sweep);
  orders(sweep);
  sweep->add_option("--bs", c.b_list, "b values")->delimiter(',');
  sweep->add_option("--method", c.method, "am or emm")->check(CLI::IsMember({"am", "emm"}));
  sweep->add_option("--states", c.states, "states per b (am)");
  sweep->add_option("--rep", c.representation, "emm representation");
  sweep->add_option("--pmax", c.pmax, "emm order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }
  for (auto* s : app.get_subcommands()) c.command = s->get_name();
  if (c.command == "walled") c.family = "walled";
  return std::nullopt;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig c;
  if (auto code = parse(argc, argv, c, out, err)) return *code;
  try {
    auto r = execute(c, err);
    write_output(serialize(r, c.format), c.out, out);
    return 0;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.classification());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace moment_bounds::cli

#endif
