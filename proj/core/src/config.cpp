#include "mfglab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mfglab/error.hpp"

namespace mfglab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_real(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto r = std::from_chars(b, e, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != e || !std::isfinite(v))
    throw ConfigError("not a finite number: '" + s + "'");
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto r = std::from_chars(b, e, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != e) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(to_real(t));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

Point to_point(const std::string& s) {
  const auto v = to_list(s);
  if (v.size() > 2) throw ConfigError("a point has at most two coordinates: '" + s + "'");
  return Point{v[0], v.size() > 1 ? v[1] : 0.0};
}

PotentialKind to_kind(const std::string& s) {
  if (s == "zero") return PotentialKind::zero;
  if (s == "power") return PotentialKind::power;
  if (s == "shifted_power") return PotentialKind::shifted_power;
  if (s == "multi_well") return PotentialKind::multi_well;
  throw ConfigError("unknown potential kind '" + s + "' (zero, power, shifted_power, multi_well)");
}

// "x[,y]:b; x[,y]:b"
std::vector<Well> to_wells(const std::string& s) {
  std::vector<Well> out;
  for (const auto& item : split(s, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("well needs the form center:b, got '" + item + "'");
    out.push_back(Well{to_point(trim(item.substr(0, colon))), to_real(trim(item.substr(colon + 1)))});
  }
  if (out.empty()) throw ConfigError("wells list is empty");
  return out;
}

struct Key {
  const char* name;
  const char* fallback;
  const char* meaning;
};

const Key kKeys[] = {
    {"dim", "1", "space dimension N (1 or 2)"},
    {"gamma", "2", "Hamiltonian exponent, H(p) = |p|^gamma / gamma"},
    {"alpha", "0.5", "Riesz order, N - gamma' < alpha < N"},
    {"mass", "1", "total mass M"},
    {"epsilon", "1", "viscosity for solve / choquard / rescale"},
    {"coupling", "1", "weight of K_alpha * m (0 decouples)"},
    {"potential", "power", "zero | power | shifted_power | multi_well"},
    {"b", "2", "growth exponent of power kinds"},
    {"C_V", "0", "comparability constant (0 = smallest admissible)"},
    {"center", "0.3", "well center x[,y] for power kinds"},
    {"r0", "0", "flat radius of shifted_power"},
    {"amplitude", "1", "prefactor of multi_well"},
    {"wells", "", "multi_well centers and exponents, x[,y]:b; ..."},
    {"half_width", "24", "box half width"},
    {"points", "1537", "nodes per axis (odd)"},
    {"ladder", "", "explicit epsilon ladder, comma separated, decreasing"},
    {"eps0", "1", "first rung of the geometric ladder"},
    {"rungs", "7", "rungs of the geometric ladder eps0 2^-k"},
    {"R", "6", "concentration ball radius (rescaled units)"},
    {"eta", "0.05", "mass allowed outside the ball"},
    {"fit_eps_max", "0.25", "largest epsilon used by the scaling fits"},
    {"damping", "0.5", "Picard damping in (0, 1]"},
    {"tol", "1e-8", "outer tolerance on the L1 change of m, relative to M"},
    {"max_outer", "200", "outer iteration cap"},
    {"anderson_depth", "6", "Anderson mixing depth (0 = plain damped Picard)"},
    {"duality_tol", "1e-6", "tolerance of the lambda M identity"},
    {"hjb_tol", "1e-11", "policy iteration tolerance relative to 1 + max|f|"},
    {"hjb_max_iters", "100", "policy iteration cap"},
    {"choquard_tol", "1e-10", "Choquard residual tolerance relative to max v"},
    {"subadditivity_eps", "0.125", "epsilon of the sub-additivity probe"},
    {"subadditivity_fraction", "0.5", "a / M of the sub-additivity probe"},
    {"seed", "0", "seed of the randomised property suites"},
    {"random_fields", "20", "test fields of the adjoint identity check"},
    {"convexity_pairs", "100", "random pairs of the convexity check"},
    {"smoke_2d", "true", "include the 2D smoke case in verify"},
    {"write_fields", "true", "persist .f64 fields"},
    {"source", "", "directory of a previous solve, read by rescale"},
};

}  // namespace

std::string config_reference() {
  std::ostringstream out;
  for (const auto& k : kKeys) out << k.name << " = " << k.fallback << "  # " << k.meaning << "\n";
  return out.str();
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::pair<std::string, int>> kv;
  std::set<std::string> known;
  for (const auto& k : kKeys) known.insert(k.name);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!known.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (kv.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "' (first on line " +
                        std::to_string(kv[key].second) + ")");
    kv[key] = {value, lineno};
  }

  RunConfig c;
  auto get = [&](const char* key, const std::function<void(const std::string&)>& apply) {
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    try {
      apply(it->second.first);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(it->second.second) + ": " + key + ": " + e.what());
    }
  };
  ProblemSpec& p = c.problem;
  double half_width = 24.0;
  long long points = 1537;
  get("dim", [&](const std::string& v) { p.dim = static_cast<int>(to_int(v)); });
  get("gamma", [&](const std::string& v) { p.gamma = to_real(v); });
  get("alpha", [&](const std::string& v) { p.alpha = to_real(v); });
  get("mass", [&](const std::string& v) { p.mass = to_real(v); });
  get("epsilon", [&](const std::string& v) { p.epsilon = to_real(v); });
  get("coupling", [&](const std::string& v) { p.coupling = to_real(v); });
  get("potential", [&](const std::string& v) { p.potential.kind = to_kind(v); });
  get("b", [&](const std::string& v) { p.potential.b = to_real(v); });
  get("C_V", [&](const std::string& v) { p.potential.C_V = to_real(v); });
  get("center", [&](const std::string& v) { p.potential.center = to_point(v); });
  get("r0", [&](const std::string& v) { p.potential.r0 = to_real(v); });
  get("amplitude", [&](const std::string& v) { p.potential.amplitude = to_real(v); });
  get("wells", [&](const std::string& v) { p.potential.wells = to_wells(v); });
  get("half_width", [&](const std::string& v) { half_width = to_real(v); });
  get("points", [&](const std::string& v) { points = to_int(v); });

  SweepOptions& s = c.sweep;
  double eps0 = 1.0;
  long long rungs = 7;
  get("eps0", [&](const std::string& v) { eps0 = to_real(v); });
  get("rungs", [&](const std::string& v) { rungs = to_int(v); });
  get("ladder", [&](const std::string& v) { c.ladder = to_list(v); });
  if (kv.count("ladder") && (kv.count("eps0") || kv.count("rungs")))
    throw ConfigError("line " + std::to_string(kv["ladder"].second) + ": ladder excludes eps0 / rungs");
  get("R", [&](const std::string& v) { s.R = to_real(v); });
  get("eta", [&](const std::string& v) { s.eta = to_real(v); });
  get("fit_eps_max", [&](const std::string& v) { s.fit_eps_max = to_real(v); });
  get("damping", [&](const std::string& v) { s.mfg.damping = to_real(v); });
  get("tol", [&](const std::string& v) { s.mfg.tol = to_real(v); });
  get("max_outer", [&](const std::string& v) { s.mfg.max_outer = static_cast<int>(to_int(v)); });
  get("anderson_depth", [&](const std::string& v) { s.mfg.anderson_depth = static_cast<int>(to_int(v)); });
  get("duality_tol", [&](const std::string& v) { s.mfg.duality_tol = to_real(v); });
  get("hjb_tol", [&](const std::string& v) { s.mfg.hjb.tol = to_real(v); });
  get("hjb_max_iters", [&](const std::string& v) { s.mfg.hjb.max_iters = static_cast<int>(to_int(v)); });
  get("choquard_tol", [&](const std::string& v) { c.choquard.tol = to_real(v); });
  get("subadditivity_eps", [&](const std::string& v) { c.subadditivity_eps = to_real(v); });
  get("subadditivity_fraction", [&](const std::string& v) { c.subadditivity_fraction = to_real(v); });
  get("seed", [&](const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int(v)); });
  get("random_fields", [&](const std::string& v) { c.random_fields = static_cast<int>(to_int(v)); });
  get("convexity_pairs", [&](const std::string& v) { c.convexity_pairs = static_cast<int>(to_int(v)); });
  get("smoke_2d", [&](const std::string& v) { c.smoke_2d = to_bool(v); });
  get("write_fields", [&](const std::string& v) { c.write_fields = to_bool(v); });
  get("source", [&](const std::string& v) { c.source = v; });

  // Semantic checks.
  try {
    if (points % 2 == 0) throw DomainError("points must be odd so that the origin is a node");
    p.grid = GridSpec(p.dim, half_width, static_cast<int>(points));
    if (p.potential.kind == PotentialKind::multi_well && p.potential.wells.empty())
      throw DomainError("multi_well needs wells");
    p.validate();
    if (!kv.count("ladder")) c.ladder = geometric_ladder(eps0, static_cast<int>(rungs));
    for (std::size_t k = 0; k < c.ladder.size(); ++k)
      if (!(c.ladder[k] > 0.0) || (k > 0 && !(c.ladder[k] < c.ladder[k - 1])))
        throw DomainError("ladder must be positive and strictly decreasing");
    if (!(s.R > 0.0) || !(s.eta >= 0.0)) throw DomainError("R must be positive and eta nonnegative");
    if (!(s.mfg.damping > 0.0 && s.mfg.damping <= 1.0)) throw DomainError("damping must lie in (0, 1]");
    if (!(s.mfg.tol > 0.0) || s.mfg.max_outer < 1 || s.mfg.anderson_depth < 0 || s.mfg.hjb.max_iters < 1)
      throw DomainError("solver tolerances and iteration caps must be positive");
    if (!(c.subadditivity_eps > 0.0) || !(c.subadditivity_fraction > 0.0 && c.subadditivity_fraction < 1.0))
      throw DomainError("subadditivity_eps > 0 and 0 < subadditivity_fraction < 1 required");
    if (c.random_fields < 1 || c.convexity_pairs < 1) throw DomainError("property suites need at least one case");
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace mfglab
