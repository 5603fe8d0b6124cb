#include "mixnl/config.hpp"

#include "mixnl/error.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mixnl {

namespace {

std::string join(const std::string& prefix, const std::string& key)
{
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const toml::table& t, const std::set<std::string>& allowed, const std::string& prefix)
{
  for (const auto& [k, v] : t) {
    const std::string key(k.str());
    if (!allowed.count(key))
      throw ConfigError(join(prefix, key), "unknown key");
  }
}

double number(const toml::node& n, const std::string& key)
{
  if (auto v = n.value<double>())
    return *v;
  throw ConfigError(key, "expected a number");
}

std::int64_t integer(const toml::node& n, const std::string& key)
{
  if (auto v = n.value_exact<std::int64_t>())
    return *v;
  throw ConfigError(key, "expected an integer");
}

std::string text(const toml::node& n, const std::string& key)
{
  if (auto v = n.value_exact<std::string>())
    return *v;
  throw ConfigError(key, "expected a string");
}

const toml::table& table(const toml::node& n, const std::string& key)
{
  if (const toml::table* t = n.as_table())
    return *t;
  throw ConfigError(key, "expected a table");
}

const toml::array& array(const toml::node& n, const std::string& key)
{
  if (const toml::array* a = n.as_array())
    return *a;
  throw ConfigError(key, "expected an array");
}

std::vector<double> numbers(const toml::node& n, const std::string& key)
{
  std::vector<double> out;
  const toml::array& a = array(n, key);
  for (std::size_t i = 0; i < a.size(); ++i)
    out.push_back(number(a[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

int to_int(std::int64_t v, const std::string& key)
{
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(key, "integer out of range");
  return static_cast<int>(v);
}

RunConfig from_table(const toml::table& t)
{
  reject_unknown(t, {"omega", "collar_R", "n_in", "n_ext", "alpha", "lambda", "seed", "output",
                     "atoms", "density", "nonlinearity", "quad", "solver"},
                 "");
  RunConfig c;
  if (auto n = t.get("omega")) {
    const std::vector<double> om = numbers(*n, "omega");
    if (om.size() != 2)
      throw ConfigError("omega", "expected [x_l, x_r]");
    c.omega_left = om[0];
    c.omega_right = om[1];
  }
  if (auto n = t.get("collar_R"))
    c.collar_R = number(*n, "collar_R");
  if (auto n = t.get("n_in"))
    c.n_in = to_int(integer(*n, "n_in"), "n_in");
  if (auto n = t.get("n_ext"))
    c.n_ext = to_int(integer(*n, "n_ext"), "n_ext");
  if (auto n = t.get("alpha"))
    c.alpha = number(*n, "alpha");
  if (auto n = t.get("lambda"))
    c.lambda = number(*n, "lambda");
  if (auto n = t.get("seed")) {
    const std::int64_t s = integer(*n, "seed");
    if (s < 0)
      throw ConfigError("seed", "must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (auto n = t.get("output"))
    c.output = text(*n, "output");

  if (t.contains("atoms") || t.contains("density"))
    c.measure = MeasureSpec{{}, std::nullopt};
  if (auto n = t.get("atoms")) {
    const toml::array& a = array(*n, "atoms");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string key = "atoms[" + std::to_string(i) + "]";
      const std::vector<double> pair = numbers(a[i], key);
      if (pair.size() != 2)
        throw ConfigError(key, "expected [s, c]");
      c.measure.atoms.push_back({pair[0], pair[1]});
    }
  }
  if (auto n = t.get("density")) {
    const toml::table& d = table(*n, "density");
    reject_unknown(d, {"kind", "params", "nodes"}, "density");
    DensitySpec ds;
    if (auto k = d.get("kind"))
      ds.kind = text(*k, "density.kind");
    if (auto p = d.get("params"))
      ds.params = numbers(*p, "density.params");
    if (auto m = d.get("nodes"))
      ds.nodes = to_int(integer(*m, "density.nodes"), "density.nodes");
    c.measure.density = ds;
  }
  if (auto n = t.get("nonlinearity")) {
    const toml::table& d = table(*n, "nonlinearity");
    reject_unknown(d, {"kind", "a", "p"}, "nonlinearity");
    if (auto k = d.get("kind"))
      c.nonlinearity.kind = text(*k, "nonlinearity.kind");
    if (auto k = d.get("a"))
      c.nonlinearity.a = number(*k, "nonlinearity.a");
    if (auto k = d.get("p"))
      c.nonlinearity.p = number(*k, "nonlinearity.p");
  }
  if (auto n = t.get("quad")) {
    const toml::table& d = table(*n, "quad");
    reject_unknown(d, {"subdiv", "order", "tol"}, "quad");
    if (auto k = d.get("subdiv"))
      c.quad.near_singular_subdivisions = to_int(integer(*k, "quad.subdiv"), "quad.subdiv");
    if (auto k = d.get("order"))
      c.quad.far_field_order = to_int(integer(*k, "quad.order"), "quad.order");
    if (auto k = d.get("tol"))
      c.quad.tolerance = number(*k, "quad.tol");
  }
  if (auto n = t.get("solver")) {
    const toml::table& d = table(*n, "solver");
    reject_unknown(d, {"tol", "max_iter", "path_points", "seeds", "directions", "eig_count",
                       "eig_method"},
                   "solver");
    if (auto k = d.get("tol"))
      c.solver.tol = number(*k, "solver.tol");
    if (auto k = d.get("max_iter"))
      c.solver.max_iter = to_int(integer(*k, "solver.max_iter"), "solver.max_iter");
    if (auto k = d.get("path_points"))
      c.solver.path_points = to_int(integer(*k, "solver.path_points"), "solver.path_points");
    if (auto k = d.get("seeds"))
      c.solver.seeds = to_int(integer(*k, "solver.seeds"), "solver.seeds");
    if (auto k = d.get("directions"))
      c.solver.directions = to_int(integer(*k, "solver.directions"), "solver.directions");
    if (auto k = d.get("eig_count"))
      c.solver.eig_count = to_int(integer(*k, "solver.eig_count"), "solver.eig_count");
    if (auto k = d.get("eig_method"))
      c.solver.eig_method = text(*k, "solver.eig_method");
  }
  c.validate();
  return c;
}

toml::table to_table(const RunConfig& c)
{
  toml::table t;
  t.insert("omega", toml::array{c.omega_left, c.omega_right});
  t.insert("collar_R", c.collar_R);
  t.insert("n_in", c.n_in);
  t.insert("n_ext", c.n_ext);
  t.insert("alpha", c.alpha);
  t.insert("lambda", c.lambda);
  t.insert("seed", static_cast<std::int64_t>(c.seed));
  t.insert("output", c.output);
  toml::array atoms;
  for (const Atom& a : c.measure.atoms)
    atoms.push_back(toml::array{a.order, a.weight});
  t.insert("atoms", std::move(atoms));
  if (c.measure.density) {
    toml::array params;
    for (double p : c.measure.density->params)
      params.push_back(p);
    t.insert("density", toml::table{{"kind", c.measure.density->kind},
                                    {"params", std::move(params)},
                                    {"nodes", c.measure.density->nodes}});
  }
  t.insert("nonlinearity",
           toml::table{{"kind", c.nonlinearity.kind}, {"a", c.nonlinearity.a}, {"p", c.nonlinearity.p}});
  t.insert("quad", toml::table{{"subdiv", c.quad.near_singular_subdivisions},
                               {"order", c.quad.far_field_order},
                               {"tol", c.quad.tolerance}});
  t.insert("solver", toml::table{{"tol", c.solver.tol},
                                 {"max_iter", c.solver.max_iter},
                                 {"path_points", c.solver.path_points},
                                 {"seeds", c.solver.seeds},
                                 {"directions", c.solver.directions},
                                 {"eig_count", c.solver.eig_count},
                                 {"eig_method", c.solver.eig_method}});
  return t;
}

void merge(toml::table& base, const toml::table& overlay)
{
  for (const auto& [k, v] : overlay) {
    toml::node* existing = base.get(k);
    if (existing && existing->is_table() && v.is_table())
      merge(*existing->as_table(), *v.as_table());
    else
      base.insert_or_assign(k, v);
  }
}

toml::table parse_text(std::string_view text, const std::string& source)
{
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(source, os.str());
  }
}

} // namespace

SpectralMeasure MeasureSpec::build() const
{
  std::vector<Atom> all = atoms;
  if (density) {
    const DensitySpec& d = *density;
    std::function<double(double)> fn;
    if (d.kind == "constant") {
      if (d.params.size() != 1)
        throw ConfigError("density.params", "constant density takes [c]");
      const double c = d.params[0];
      fn = [c](double) { return c; };
    } else if (d.kind == "power") {
      if (d.params.size() != 2)
        throw ConfigError("density.params", "power density takes [c, k]");
      const double c = d.params[0];
      const double k = d.params[1];
      fn = [c, k](double s) { return c * std::pow(s, k); };
    } else {
      throw ConfigError("density.kind", "unknown density kind '" + d.kind + "'");
    }
    try {
      const SpectralMeasure reduced = SpectralMeasure::from_density(fn, d.nodes);
      all.insert(all.end(), reduced.atoms().begin(), reduced.atoms().end());
    } catch (const Error& e) {
      throw ConfigError("density", e.what());
    }
  }
  try {
    return SpectralMeasure::from_atoms(all);
  } catch (const Error& e) {
    throw ConfigError("atoms", e.what());
  }
}

std::shared_ptr<const SourceTerm> NonlinearitySpec::build() const
{
  if (kind != "power")
    throw ConfigError("nonlinearity.kind", "unknown nonlinearity '" + kind + "'");
  try {
    return std::make_shared<PowerNonlinearity>(a, p);
  } catch (const Error& e) {
    throw ConfigError("nonlinearity", e.what());
  }
}

void RunConfig::validate() const
{
  if (!std::isfinite(omega_left) || !std::isfinite(omega_right) || !(omega_right > omega_left))
    throw ConfigError("omega", "need finite x_l < x_r");
  if (!(collar_R > std::max(std::abs(omega_left), std::abs(omega_right))) || !std::isfinite(collar_R))
    throw ConfigError("collar_R", "must exceed max(|x_l|, |x_r|)");
  if (n_in < 2)
    throw ConfigError("n_in", "must be >= 2");
  if (n_ext < 1)
    throw ConfigError("n_ext", "must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw ConfigError("alpha", "must be finite and >= 0");
  if (!std::isfinite(lambda))
    throw ConfigError("lambda", "must be finite");
  const SpectralMeasure mu = measure.build();
  if (alpha == 0.0 && mu.empty())
    throw ConfigError("atoms", "alpha = 0 needs a nonzero measure");
  const OrderBookkeeping bk = s_sharp(mu, alpha);
  const std::shared_ptr<const SourceTerm> nl = nonlinearity.build();
  if (!(nonlinearity.p < bk.critical_exponent))
    throw ConfigError("nonlinearity.p", "must be below the critical exponent");
  try {
    quad.validate();
  } catch (const Error& e) {
    throw ConfigError("quad", e.what());
  }
  if (!(solver.tol > 0.0))
    throw ConfigError("solver.tol", "must be positive");
  if (solver.max_iter < 1)
    throw ConfigError("solver.max_iter", "must be positive");
  if (solver.path_points < 3)
    throw ConfigError("solver.path_points", "must be >= 3");
  if (solver.seeds < 0)
    throw ConfigError("solver.seeds", "must be >= 0");
  if (solver.directions < 1)
    throw ConfigError("solver.directions", "must be positive");
  if (solver.eig_count < 2 || solver.eig_count > n_in + 1)
    throw ConfigError("solver.eig_count", "must lie in [2, n_in + 1]");
  if (solver.eig_method != "schur" && solver.eig_method != "regularized")
    throw ConfigError("solver.eig_method", "expected \"schur\" or \"regularized\"");
  if (output.empty())
    throw ConfigError("output", "must not be empty");
}

RunConfig parse_config(std::string_view text)
{
  return from_table(parse_text(text, "config"));
}

RunConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_table(parse_text(ss.str(), path));
}

RunConfig apply_overrides(const RunConfig& base, const std::vector<std::string>& overrides)
{
  toml::table t = to_table(base);
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError(o, "override must look like key=value");
    const std::string key = o.substr(0, eq);
    const std::string value = o.substr(eq + 1);
    toml::table overlay;
    try {
      overlay = toml::parse(key + " = " + value);
    } catch (const toml::parse_error&) {
      // bare words are strings
      std::string quoted = "\"";
      for (char ch : value) {
        if (ch == '"' || ch == '\\')
          quoted += '\\';
        quoted += ch;
      }
      quoted += '"';
      overlay = parse_text(key + " = " + quoted, key);
    }
    merge(t, overlay);
  }
  return from_table(t);
}

std::string to_toml(const RunConfig& config)
{
  std::ostringstream os;
  os << to_table(config) << '\n';
  return os.str();
}

std::vector<std::string> preset_names() { return {"cor1", "cor2", "cor3", "cor4"}; }

RunConfig preset(std::string_view name, const std::map<std::string, double>& params)
{
  auto param = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  auto allow = [&](std::set<std::string> keys) {
    for (const auto& [k, v] : params)
      if (!keys.count(k))
        throw ConfigError(k, "not a parameter of preset " + std::string(name));
  };
  auto count = [&](const std::string& key, double fallback) {
    const double v = param(key, fallback);
    if (!(v >= 1.0) || v != std::floor(v) || v > 64.0)
      throw ConfigError(key, "expected an integer in [1, 64]");
    return static_cast<int>(v);
  };

  RunConfig c;
  if (name == "cor1") {
    allow({"alpha", "beta", "s"});
    c.alpha = param("alpha", 1.0);
    c.measure.atoms = {{param("s", 0.5), param("beta", 1.0)}};
    if (c.measure.atoms.front().weight == 0.0)
      c.measure.atoms.clear();
  } else if (name == "cor2") {
    c.measure.atoms.clear();
    allow({"n", "alpha"});
    c.alpha = param("alpha", 0.0);
    const int n = count("n", 2);
    for (int k = 1; k <= n; ++k)
      c.measure.atoms.push_back({(2.0 * k - 1.0) / (2.0 * n), 1.0});
  } else if (name == "cor3") {
    c.measure.atoms.clear();
    allow({"K", "alpha"});
    c.alpha = param("alpha", 0.0);
    const int terms = count("K", 10);
    for (int k = 1; k <= terms; ++k)
      c.measure.atoms.push_back({1.0 - std::ldexp(1.0, -k), std::ldexp(1.0, -k)});
  } else if (name == "cor4") {
    allow({"omega", "nodes", "alpha"});
    c.alpha = param("alpha", 0.0);
    c.measure.atoms.clear();
    c.measure.density = DensitySpec{"constant", {param("omega", 1.0)}, count("nodes", 8)};
  } else {
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
  }
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string(name), e.what());
  }
  return c;
}

} // namespace mixnl
