#include "nsrel/harness/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nsrel/errors.hpp"

namespace nsrel::harness {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"experiment", {"name", "seed", "out_dir"}},
      {"grid", {"dim", "x_lo", "x_hi", "y_lo", "y_hi", "x_boundary", "y_boundary", "resolutions"}},
      {"fluid", {"mu", "eta", "beta", "a", "gamma", "rho_bar", "cfl", "scheme", "artificial_viscosity"}},
      {"pair", {"family", "r0", "density_amplitude", "velocity_amplitude", "frequency", "contrast_family"}},
      {"run", {"t_final", "save_every", "K", "perturbation", "perturbation_resolution", "calibration_runs",
               "heldout_runs", "ensemble_size", "korn_modes"}},
      {"tolerance", {}},
  };
  return s;
}

std::string fmt_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double to_double(const std::string& section, const std::string& key, const std::string& raw) {
  double v = 0.0;
  const char* b = raw.data();
  const char* e = b + raw.size();
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e || !std::isfinite(v))
    throw ConfigError("[" + section + "] " + key + ": expected a finite number, got '" + raw + "'");
  return v;
}

long long to_int(const std::string& section, const std::string& key, const std::string& raw) {
  long long v = 0;
  const char* b = raw.data();
  const char* e = b + raw.size();
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e)
    throw ConfigError("[" + section + "] " + key + ": expected an integer, got '" + raw + "'");
  return v;
}

BoundaryKind to_boundary(const std::string& key, const std::string& raw) {
  try {
    return boundary_kind_from_string(raw);
  } catch (const std::exception&) {
    throw ConfigError("[grid] " + key + ": unknown boundary kind '" + raw + "'");
  }
}

class Reader {
public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(pt::ptree::path_type(section, '\0'));
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return *v;
  }
  std::string require(const std::string& section, const std::string& key) const {
    auto v = get(section, key);
    if (!v) throw ConfigError("missing required key [" + section + "] " + key);
    return *v;
  }
  double number(const std::string& s, const std::string& k, double fallback) const {
    const auto v = get(s, k);
    return v ? to_double(s, k, *v) : fallback;
  }
  long long integer(const std::string& s, const std::string& k, long long fallback) const {
    const auto v = get(s, k);
    return v ? to_int(s, k, *v) : fallback;
  }

private:
  const pt::ptree& tree_;
};

void check_schema(const pt::ptree& tree) {
  const auto& s = schema();
  const auto& tols = tolerance_names();
  for (const auto& [section, body] : tree) {
    const auto it = s.find(section);
    if (it == s.end()) {
      if (body.empty() && !body.data().empty())
        throw ConfigError("key '" + section + "' outside of any section");
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      (void)value;
      const bool known = section == "tolerance"
                             ? std::find(tols.begin(), tols.end(), key) != tols.end()
                             : it->second.count(key) > 0;
      if (!known) throw ConfigError("unknown key [" + section + "] " + key);
    }
  }
}

}  // namespace

const std::vector<std::string>& tolerance_names() {
  static const std::vector<std::string> names = {
      "ratio_min",          // minimum reduction factor per refinement level
      "order_min",          // lower bound of the observed convergence order
      "order_max",          // upper bound of the observed convergence order
      "energy_envelope_c",  // energy residual bound C (dt + dx)
      "gap_envelope_c",     // identical-data relative entropy bound C dx^2
      "contrast_tol",       // REI residual bound against a different pair
      "korn_stability",     // relative spread of the Korn constant across seeds
      "k_safety",           // factor applied to the calibrated Gronwall constant
  };
  return names;
}

Grid GridSpec::make(int n) const {
  if (dim == 1) return Grid::line(n, lo[0], hi[0], x_boundary);
  return Grid::box(n, n, lo, hi, x_boundary, y_boundary);
}

FluidParams FluidSpec::make() const {
  FluidParams p;
  p.visc = visc;
  p.law = std::make_shared<IsentropicLaw>(a, gamma, rho_bar);
  p.cfl = cfl;
  p.scheme = scheme;
  p.artificial_viscosity = artificial_viscosity;
  p.validate();
  return p;
}

double ExperimentConfig::tol(const std::string& name, double fallback) const {
  const auto it = tolerance.find(name);
  return it == tolerance.end() ? fallback : it->second;
}

std::string ExperimentConfig::canonical_text() const {
  std::map<std::string, std::string> kv;
  kv["experiment.name"] = experiment;
  kv["experiment.seed"] = std::to_string(seed);
  kv["grid.dim"] = std::to_string(grid.dim);
  kv["grid.x_lo"] = fmt_double(grid.lo[0]);
  kv["grid.x_hi"] = fmt_double(grid.hi[0]);
  kv["grid.y_lo"] = fmt_double(grid.lo[1]);
  kv["grid.y_hi"] = fmt_double(grid.hi[1]);
  kv["grid.x_boundary"] = to_string(grid.x_boundary);
  kv["grid.y_boundary"] = to_string(grid.y_boundary);
  std::string res;
  for (int r : resolutions) res += (res.empty() ? "" : " ") + std::to_string(r);
  kv["grid.resolutions"] = res;
  kv["fluid.mu"] = fmt_double(fluid.visc.mu);
  kv["fluid.eta"] = fmt_double(fluid.visc.eta);
  kv["fluid.beta"] = fmt_double(fluid.visc.beta);
  kv["fluid.a"] = fmt_double(fluid.a);
  kv["fluid.gamma"] = fmt_double(fluid.gamma);
  kv["fluid.rho_bar"] = fmt_double(fluid.rho_bar);
  kv["fluid.cfl"] = fmt_double(fluid.cfl);
  kv["fluid.scheme"] = fluid.scheme == ConvectionScheme::Upwind ? "upwind" : "central";
  kv["fluid.artificial_viscosity"] = fmt_double(fluid.artificial_viscosity);
  kv["pair.family"] = pair_family;
  kv["pair.r0"] = fmt_double(pair.r0);
  kv["pair.density_amplitude"] = fmt_double(pair.density_amplitude);
  kv["pair.velocity_amplitude"] = fmt_double(pair.velocity_amplitude);
  kv["pair.frequency"] = fmt_double(pair.frequency);
  if (contrast_family) kv["pair.contrast_family"] = *contrast_family;
  kv["run.t_final"] = fmt_double(t_final);
  kv["run.save_every"] = std::to_string(save_every);
  kv["run.K"] = fmt_double(K);
  kv["run.perturbation"] = fmt_double(perturbation);
  kv["run.perturbation_resolution"] = std::to_string(perturbation_resolution);
  kv["run.calibration_runs"] = std::to_string(calibration_runs);
  kv["run.heldout_runs"] = std::to_string(heldout_runs);
  kv["run.ensemble_size"] = std::to_string(ensemble_size);
  kv["run.korn_modes"] = std::to_string(korn_modes);
  for (const auto& [k, v] : tolerance) kv["tolerance." + k] = fmt_double(v);
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string ExperimentConfig::hash() const {
  const std::string text = canonical_text();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", digest[k]);
    hex += buf;
  }
  return hex;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  check_schema(tree);
  const Reader r(tree);
  ExperimentConfig c;

  c.experiment = r.require("experiment", "name");
  const long long seed = r.integer("experiment", "seed", 1);
  if (seed < 0) throw ConfigError("[experiment] seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.out_dir = r.get("experiment", "out_dir");

  c.grid.dim = static_cast<int>(r.integer("grid", "dim", 2));
  if (c.grid.dim != 1 && c.grid.dim != 2) throw ConfigError("[grid] dim must be 1 or 2");
  c.grid.lo = {r.number("grid", "x_lo", 0.0), r.number("grid", "y_lo", 0.0)};
  c.grid.hi = {r.number("grid", "x_hi", 1.0), r.number("grid", "y_hi", 1.0)};
  if (auto v = r.get("grid", "x_boundary")) c.grid.x_boundary = to_boundary("x_boundary", *v);
  if (auto v = r.get("grid", "y_boundary")) c.grid.y_boundary = to_boundary("y_boundary", *v);
  {
    std::istringstream in(r.require("grid", "resolutions"));
    for (std::string tok; in >> tok;) {
      const long long n = to_int("grid", "resolutions", tok);
      if (n < 4 || n > 4096) throw ConfigError("[grid] resolutions must lie in [4, 4096]");
      c.resolutions.push_back(static_cast<int>(n));
    }
    if (c.resolutions.empty()) throw ConfigError("[grid] resolutions is empty");
    for (std::size_t k = 1; k < c.resolutions.size(); ++k)
      if (c.resolutions[k] <= c.resolutions[k - 1])
        throw ConfigError("[grid] resolutions must be strictly increasing");
  }

  c.fluid.visc.mu = to_double("fluid", "mu", r.require("fluid", "mu"));
  c.fluid.visc.eta = r.number("fluid", "eta", 0.0);
  c.fluid.visc.beta = r.number("fluid", "beta", 0.0);
  c.fluid.a = r.number("fluid", "a", 1.0);
  c.fluid.gamma = to_double("fluid", "gamma", r.require("fluid", "gamma"));
  c.fluid.rho_bar = r.number("fluid", "rho_bar", 1.0);
  c.fluid.cfl = r.number("fluid", "cfl", 0.4);
  if (auto v = r.get("fluid", "scheme")) {
    if (*v == "upwind") c.fluid.scheme = ConvectionScheme::Upwind;
    else if (*v == "central") c.fluid.scheme = ConvectionScheme::Central;
    else throw ConfigError("[fluid] scheme must be 'upwind' or 'central'");
  }
  c.fluid.artificial_viscosity = r.number("fluid", "artificial_viscosity", 0.25);

  c.pair_family = r.require("pair", "family");
  const auto families = pair_family_names();
  auto known_family = [&](const std::string& f) {
    return std::find(families.begin(), families.end(), f) != families.end();
  };
  if (!known_family(c.pair_family)) throw ConfigError("[pair] unknown family '" + c.pair_family + "'");
  c.contrast_family = r.get("pair", "contrast_family");
  if (c.contrast_family && !known_family(*c.contrast_family))
    throw ConfigError("[pair] unknown contrast_family '" + *c.contrast_family + "'");
  c.pair.r0 = r.number("pair", "r0", c.fluid.rho_bar > 0.0 ? c.fluid.rho_bar : 1.0);
  c.pair.density_amplitude = r.number("pair", "density_amplitude", c.pair.density_amplitude);
  c.pair.velocity_amplitude = r.number("pair", "velocity_amplitude", c.pair.velocity_amplitude);
  c.pair.frequency = r.number("pair", "frequency", c.pair.frequency);

  c.t_final = to_double("run", "t_final", r.require("run", "t_final"));
  if (!(c.t_final > 0.0)) throw ConfigError("[run] t_final must be > 0");
  c.save_every = static_cast<int>(r.integer("run", "save_every", 1));
  if (c.save_every < 1) throw ConfigError("[run] save_every must be >= 1");
  c.K = r.number("run", "K", 1.0);
  if (!(c.K >= 0.0)) throw ConfigError("[run] K must be >= 0");
  c.perturbation = r.number("run", "perturbation", c.perturbation);
  if (!(c.perturbation >= 0.0)) throw ConfigError("[run] perturbation must be >= 0");
  c.perturbation_resolution = static_cast<int>(r.integer("run", "perturbation_resolution", 0));
  if (c.perturbation_resolution != 0 &&
      std::find(c.resolutions.begin(), c.resolutions.end(), c.perturbation_resolution) == c.resolutions.end())
    throw ConfigError("[run] perturbation_resolution must be one of the resolutions");
  c.calibration_runs = static_cast<int>(r.integer("run", "calibration_runs", c.calibration_runs));
  c.heldout_runs = static_cast<int>(r.integer("run", "heldout_runs", c.heldout_runs));
  c.ensemble_size = static_cast<int>(r.integer("run", "ensemble_size", c.ensemble_size));
  c.korn_modes = static_cast<int>(r.integer("run", "korn_modes", c.korn_modes));
  if (c.calibration_runs < 0 || c.heldout_runs < 0 || c.ensemble_size < 1 || c.korn_modes < 1)
    throw ConfigError("[run] run counts must be nonnegative and ensemble_size, korn_modes >= 1");

  if (const auto sec = tree.get_child_optional("tolerance"))
    for (const auto& [key, value] : *sec) c.tolerance[key] = to_double("tolerance", key, value.data());

  try {
    (void)c.fluid.make();
    (void)c.grid.make(c.resolutions.front());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid parameters: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace nsrel::harness
