#include "wigner/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace wigner {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// plain number, or a multiple of pi written as "pi", "-pi", "2pi", "0.5*pi"
double parse_number(const std::string& key, const std::string& raw) {
  std::string s = trim(raw);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s.resize(s.size() - 2);
    if (!s.empty() && s.back() == '*') s.pop_back();
    if (s.empty() || s == "+") s = "1";
    if (s == "-") s = "-1";
  }
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(key, "expected a number, got '" + raw + "'");
  v *= factor;
  if (!std::isfinite(v)) throw ConfigError(key, "value is not finite");
  return v;
}

long parse_integer(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(key, "expected an integer, got '" + raw + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + raw + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

// n points on a circle; quarter turns of the set are exact when 4 | n
std::vector<std::array<double, 2>> ring_points(int n, double r) {
  std::vector<std::array<double, 2>> pts(static_cast<std::size_t>(n));
  auto base = [&](int i) -> std::array<double, 2> {
    if (8 * i == n) return {r * std::sqrt(0.5), r * std::sqrt(0.5)};
    if (i == 0) return {r, 0.0};
    const double th = 2.0 * std::numbers::pi * i / n;
    return {r * std::cos(th), r * std::sin(th)};
  };
  if (n % 4 == 0) {
    const int quarter = n / 4;
    for (int i = 0; i < quarter; ++i) {
      auto p = base(i);
      for (int q = 0; q < 4; ++q) {
        pts[static_cast<std::size_t>(i + q * quarter)] = p;
        p = {-p[1], p[0]};
      }
    }
  } else {
    for (int i = 0; i < n; ++i) pts[static_cast<std::size_t>(i)] = base(i);
  }
  return pts;
}

class Reader {
public:
  explicit Reader(const ConfigEntries& e) : e_(e) {}

  bool has(const std::string& k) const { return e_.values.count(k) != 0; }
  const std::string& raw(const std::string& k) {
    used_.insert(k);
    return e_.values.at(k);
  }
  void require(const std::string& k) const {
    if (!has(k)) throw ConfigError(k, "required key is missing");
  }
  double num(const std::string& k) {
    require(k);
    return parse_number(k, raw(k));
  }
  double num(const std::string& k, double def) { return has(k) ? parse_number(k, raw(k)) : def; }
  int integer(const std::string& k) {
    require(k);
    return checked_int(k, parse_integer(k, raw(k)));
  }
  int integer(const std::string& k, int def) { return has(k) ? checked_int(k, parse_integer(k, raw(k))) : def; }
  std::string word(const std::string& k) {
    require(k);
    return trim(raw(k));
  }
  std::string word(const std::string& k, const std::string& def) { return has(k) ? trim(raw(k)) : def; }
  bool flag(const std::string& k, bool def) { return has(k) ? parse_bool(k, raw(k)) : def; }

  void reject_unused() const {
    for (const auto& [k, v] : e_.values)
      if (!used_.count(k)) throw ConfigError(k, "unknown or inapplicable key (line " + std::to_string(e_.lines.at(k)) + ")");
  }

private:
  static int checked_int(const std::string& k, long v) {
    if (v < -1'000'000'000L || v > 1'000'000'000L) throw ConfigError(k, "integer out of range");
    return static_cast<int>(v);
  }
  const ConfigEntries& e_;
  std::set<std::string> used_;
};

// rethrows parameter problems found by validation against the closest key
void validate_with_keys(const SimulationConfig& c) {
  auto check = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
  };
  check(c.dimensions == 2 || c.dimensions == 4, "grid.dimensions", "must be 2 or 4");
  check(c.x_lo < c.x_hi, "grid.x_lo", "must be below grid.x_hi");
  check(c.Q >= 1, "grid.Q", "must be at least 1");
  check(c.M >= 3, "grid.M", "must be at least 3");
  check(c.k_min < c.k_max, "grid.k_min", "must be below grid.k_max");
  check(c.N_k >= 2 && c.N_k % 2 == 0, "grid.N_k", "N_k must be even and at least 2");
  check(c.consts.hbar > 0.0, "physics.hbar", "must be positive");
  check(c.consts.mass > 0.0, "physics.mass", "must be positive");
  check(c.dt > 0.0, "time.dt", "must be positive");
  check(c.t_final >= 0.0, "time.t_final", "must be non-negative");
  check(c.N_um >= 1, "observables.N_um", "must be at least 1");
  check(c.threads >= 0, "run.threads", "must be non-negative");
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const ParameterError& e) {
    const std::string msg = e.what();
    const char* key = "potential";
    if (msg.find("t_final") != std::string::npos) key = "time.t_final";
    else if (msg.find("snapshot") != std::string::npos) key = "time.snapshots";
    else if (msg.find("fermi") != std::string::npos) key = "init.kind";
    else if (msg.find("sigma") != std::string::npos) key = "init.sigma";
    else if (msg.find("max_tau") != std::string::npos) key = "time.max_tau";
    else if (msg.find("memory") != std::string::npos) key = "run.memory_budget_mb";
    throw ConfigError(key, msg);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

ConfigEntries parse_config_text(const std::string& text) {
  ConfigEntries out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
    if (out.values.count(key)) throw ConfigError(key, "given twice (line " + std::to_string(lineno) + ")");
    out.values[key] = value;
    out.lines[key] = lineno;
  }
  return out;
}

ConfigEntries load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("--config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

SimulationConfig config_from_entries(const ConfigEntries& entries) {
  Reader r(entries);
  SimulationConfig c;

  c.dimensions = r.integer("grid.dimensions", 2);
  c.x_lo = r.num("grid.x_lo");
  c.x_hi = r.num("grid.x_hi");
  c.Q = r.integer("grid.Q");
  c.M = r.integer("grid.M");
  c.k_min = r.num("grid.k_min");
  c.k_max = r.num("grid.k_max");
  c.N_k = r.integer("grid.N_k");

  const std::string init = r.word("init.kind");
  if (init == "gaussian") {
    c.init = InitKind::gaussian;
    c.packet.x0 = r.num("init.x0");
    c.packet.k0 = r.num("init.k0");
    c.packet.sigma = r.num("init.sigma");
    c.packet2.x0 = r.num("init.x0_2", c.packet.x0);
    c.packet2.k0 = r.num("init.k0_2", c.packet.k0);
    c.packet2.sigma = r.num("init.sigma_2", c.packet.sigma);
  } else if (init == "fermi_dirac") {
    c.init = InitKind::fermi_dirac;
    c.fermi_dirac.effective_mass_ratio = r.num("init.mass_ratio", c.fermi_dirac.effective_mass_ratio);
    c.fermi_dirac.m_e = r.num("init.m_e", c.fermi_dirac.m_e);
    c.fermi_dirac.k_B = r.num("init.k_B", c.fermi_dirac.k_B);
    c.fermi_dirac.T = r.num("init.T", c.fermi_dirac.T);
    c.fermi_dirac.E_F = r.num("init.E_F", c.fermi_dirac.E_F);
  } else {
    throw ConfigError("init.kind", "expected gaussian or fermi_dirac, got '" + init + "'");
  }

  c.consts.hbar = r.num("physics.hbar", 1.0);
  c.consts.mass = r.num("physics.mass", c.init == InitKind::fermi_dirac ? c.fermi_dirac.mass() : 1.0);

  const std::string kind = r.word("potential.kind");
  if (kind == "delta") {
    c.potential = DeltaPotential{r.num("potential.H")};
  } else if (kind == "logarithmic") {
    c.potential = LogarithmicPotential{r.num("potential.H"), r.num("potential.epsilon", 1e-5)};
  } else if (kind == "inverse_power") {
    c.potential = InversePowerPotential{r.num("potential.H"), r.num("potential.alpha")};
  } else if (kind == "inverse_square") {
    c.potential = InverseSquarePotential{r.num("potential.H")};
  } else if (kind == "gaussian") {
    c.potential = GaussianFinitePotential{r.num("potential.H"), r.num("potential.a")};
  } else if (kind == "multi_delta") {
    MultiDelta2DPotential md{r.num("potential.H"), {}};
    if (r.has("potential.points")) {
      for (const auto& pair : split(r.raw("potential.points"), ';')) {
        const auto xy = split(pair, ',');
        if (xy.size() != 2) throw ConfigError("potential.points", "expected 'x1, x2; x1, x2; ...'");
        md.points.push_back({parse_number("potential.points", xy[0]), parse_number("potential.points", xy[1])});
      }
    } else if (r.has("potential.ring_count")) {
      const int n = r.integer("potential.ring_count");
      if (n < 1) throw ConfigError("potential.ring_count", "must be at least 1");
      md.points = ring_points(n, r.num("potential.ring_radius"));
    } else {
      throw ConfigError("potential.points", "multi_delta needs potential.points or potential.ring_count");
    }
    c.potential = md;
  } else {
    throw ConfigError("potential.kind", "unknown potential '" + kind + "'");
  }
  try {
    validate_potential(c.potential);
  } catch (const ParameterError& e) {
    throw ConfigError("potential." + std::string(kind == "inverse_power" ? "alpha" : kind == "gaussian" ? "a" : "H"),
                      e.what());
  }

  const std::string route = r.word("potential.route", "exact");
  if (route == "exact") c.route = KernelRoute::exact;
  else if (route == "poisson") c.route = KernelRoute::poisson;
  else throw ConfigError("potential.route", "expected exact or poisson");
  c.poisson_dy = r.num("potential.poisson_dy", 0.0);

  c.quad.abs_tol = r.num("quad.abs_tol", c.quad.abs_tol);
  c.quad.rel_tol = r.num("quad.rel_tol", c.quad.rel_tol);
  c.quad.max_subdivisions = r.integer("quad.max_subdivisions", static_cast<int>(c.quad.max_subdivisions));
  c.quad.panel_rule_order = r.integer("quad.order", c.quad.panel_rule_order);

  c.dt = r.num("time.dt");
  c.t_final = r.num("time.t_final");
  if (r.has("time.snapshots"))
    for (const auto& t : split(r.raw("time.snapshots"), ',')) c.snapshot_times.push_back(parse_number("time.snapshots", t));
  try {
    c.scheme = SplitScheme::from_name(r.word("time.scheme", "yoshida4"));
  } catch (const ParameterError& e) {
    throw ConfigError("time.scheme", e.what());
  }
  c.max_tau = r.num("time.max_tau", c.max_tau);

  const std::string inflow = r.word("boundary.inflow", "zero");
  if (inflow == "zero") c.inflow = Inflow::zero;
  else if (inflow == "initial") c.inflow = Inflow::initial;
  else throw ConfigError("boundary.inflow", "expected zero or initial");
  const std::string seam = r.word("boundary.seam", "node");
  if (seam == "node") c.seam = SeamDrift::node;
  else if (seam == "mean") c.seam = SeamDrift::mean;
  else throw ConfigError("boundary.seam", "expected node or mean");

  c.N_um = r.integer("observables.N_um", c.N_um);
  c.observables = r.flag("observables.enabled", c.observables);
  c.normalize_moments = r.flag("observables.normalize", c.normalize_moments);
  c.threads = r.integer("run.threads", 0);
  c.memory_budget_mb = r.num("run.memory_budget_mb", c.memory_budget_mb);

  r.reject_unused();
  validate_with_keys(c);
  return c;
}

std::string config_to_text(const SimulationConfig& c) {
  std::ostringstream o;
  auto kv = [&](const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; };
  auto kd = [&](const std::string& k, double v) { kv(k, format_double(v)); };
  kv("grid.dimensions", std::to_string(c.dimensions));
  kd("grid.x_lo", c.x_lo);
  kd("grid.x_hi", c.x_hi);
  kv("grid.Q", std::to_string(c.Q));
  kv("grid.M", std::to_string(c.M));
  kd("grid.k_min", c.k_min);
  kd("grid.k_max", c.k_max);
  kv("grid.N_k", std::to_string(c.N_k));
  kd("physics.hbar", c.consts.hbar);
  kd("physics.mass", c.consts.mass);

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        kd("potential.H", p.H);
        if constexpr (std::is_same_v<T, DeltaPotential>) kv("potential.kind", "delta");
        if constexpr (std::is_same_v<T, LogarithmicPotential>) {
          kv("potential.kind", "logarithmic");
          kd("potential.epsilon", p.epsilon);
        }
        if constexpr (std::is_same_v<T, InversePowerPotential>) {
          kv("potential.kind", "inverse_power");
          kd("potential.alpha", p.alpha);
        }
        if constexpr (std::is_same_v<T, InverseSquarePotential>) kv("potential.kind", "inverse_square");
        if constexpr (std::is_same_v<T, GaussianFinitePotential>) {
          kv("potential.kind", "gaussian");
          kd("potential.a", p.a);
        }
        if constexpr (std::is_same_v<T, MultiDelta2DPotential>) {
          kv("potential.kind", "multi_delta");
          std::string pts;
          for (std::size_t i = 0; i < p.points.size(); ++i)
            pts += (i ? "; " : "") + format_double(p.points[i][0]) + ", " + format_double(p.points[i][1]);
          kv("potential.points", pts);
        }
      },
      c.potential);
  kv("potential.route", c.route == KernelRoute::exact ? "exact" : "poisson");
  kd("potential.poisson_dy", c.poisson_dy);
  kd("quad.abs_tol", c.quad.abs_tol);
  kd("quad.rel_tol", c.quad.rel_tol);
  kv("quad.max_subdivisions", std::to_string(c.quad.max_subdivisions));
  kv("quad.order", std::to_string(c.quad.panel_rule_order));

  if (c.init == InitKind::gaussian) {
    kv("init.kind", "gaussian");
    kd("init.x0", c.packet.x0);
    kd("init.k0", c.packet.k0);
    kd("init.sigma", c.packet.sigma);
    if (c.dimensions == 4) {
      kd("init.x0_2", c.packet2.x0);
      kd("init.k0_2", c.packet2.k0);
      kd("init.sigma_2", c.packet2.sigma);
    }
  } else {
    kv("init.kind", "fermi_dirac");
    kd("init.mass_ratio", c.fermi_dirac.effective_mass_ratio);
    kd("init.m_e", c.fermi_dirac.m_e);
    kd("init.k_B", c.fermi_dirac.k_B);
    kd("init.T", c.fermi_dirac.T);
    kd("init.E_F", c.fermi_dirac.E_F);
  }

  kd("time.dt", c.dt);
  kd("time.t_final", c.t_final);
  if (!c.snapshot_times.empty()) {
    std::string s;
    for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) s += (i ? ", " : "") + format_double(c.snapshot_times[i]);
    kv("time.snapshots", s);
  }
  kv("time.scheme", c.scheme.name());
  kd("time.max_tau", c.max_tau);
  kv("boundary.inflow", c.inflow == Inflow::zero ? "zero" : "initial");
  kv("boundary.seam", c.seam == SeamDrift::node ? "node" : "mean");
  kv("observables.N_um", std::to_string(c.N_um));
  kv("observables.enabled", c.observables ? "true" : "false");
  kv("observables.normalize", c.normalize_moments ? "true" : "false");
  kv("run.threads", std::to_string(c.threads));
  kd("run.memory_budget_mb", c.memory_budget_mb);
  return o.str();
}

}  // namespace wigner
