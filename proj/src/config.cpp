// SPDX-License-Identifier: Apache-2.0
#include "abem/config.hpp"

#include "abem/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace abem {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
  fail(ErrorKind::config, "invalid value '" + value + "' for key '" + key + "': " + why);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    bad_value(key, value, "expected a number");
  }
  if (used != value.size() || !std::isfinite(v)) bad_value(key, value, "expected a number");
  return v;
}

long to_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(value, &used);
  } catch (const std::exception&) {
    bad_value(key, value, "expected an integer");
  }
  if (used != value.size()) bad_value(key, value, "expected an integer");
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "expected true or false");
}

Vec2 to_vec(const std::string& key, const std::string& value) {
  const auto comma = value.find(',');
  if (comma == std::string::npos) bad_value(key, value, "expected 'x,y'");
  return Vec2(to_double(key, trim(value.substr(0, comma))), to_double(key, trim(value.substr(comma + 1))));
}

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> p = {
      {"smooth-circle",
       "# Sound-soft scattering off a circle, uniform refinement.\n"
       "geometry = circle\n"
       "radius = 0.4\n"
       "equation = weakly_singular\n"
       "k = 1\n"
       "marking = uniform\n"
       "max_dofs = 256\n"
       "reference.levels = 3\n"},
      {"lshape-nonconvex",
       "# Sound-soft L-shape, incident wave hitting the reentrant corner.\n"
       "geometry = lshape\n"
       "equation = weakly_singular\n"
       "k = 1\n"
       "theta = 0.4\n"
       "marking = expanded\n"
       "direction = -0.70710678118654757,0.70710678118654757\n"
       "max_dofs = 320\n"},
      {"lshape-convex",
       "# Sound-soft L-shape, incident wave hitting the convex side.\n"
       "geometry = lshape\n"
       "equation = weakly_singular\n"
       "k = 1\n"
       "theta = 0.4\n"
       "marking = expanded\n"
       "direction = 0.70710678118654757,-0.70710678118654757\n"
       "max_dofs = 320\n"},
      {"slit",
       "# Laplace single-layer equation on a slit with constant data.\n"
       "geometry = slit\n"
       "equation = weakly_singular\n"
       "k = 0\n"
       "theta = 0.4\n"
       "marking = expanded\n"
       "max_dofs = 256\n"
       "reference.levels = 3\n"},
      {"soundhard-lshape",
       "# Sound-hard L-shape through the hypersingular equation.\n"
       "geometry = lshape\n"
       "equation = hypersingular\n"
       "k = 1\n"
       "theta = 0.4\n"
       "marking = expanded\n"
       "direction = -0.70710678118654757,0.70710678118654757\n"
       "max_dofs = 320\n"},
      {"idp-trigger",
       "# k^2 is the first interior Dirichlet eigenvalue of the disk.\n"
       "geometry = circle\n"
       "radius = 0.4\n"
       "equation = weakly_singular\n"
       "k = idp\n"
       "theta = 0.4\n"
       "marking = expanded\n"
       "max_dofs = 256\n"},
  };
  return p;
}

// Winding number of the sampled closed curve around p.
double winding(const BoundaryCurve& curve, const Vec2& p) {
  double angle = 0.0;
  for (const auto& s : curve.segments()) {
    const int n = 256;
    for (int i = 0; i < n; ++i) {
      const Vec2 a = s.position(s.t0 + (s.t1 - s.t0) * i / n) - p;
      const Vec2 b = s.position(s.t0 + (s.t1 - s.t0) * (i + 1) / n) - p;
      angle += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    }
  }
  return angle / (2.0 * std::acos(-1.0));
}

}  // namespace

double ExperimentConfig::wavenumber() const { return k_idp ? bessel_j0_zero(1) / radius : k; }

namespace {

void apply_option(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "geometry") {
    if (value != "circle" && value != "lshape" && value != "slit")
      fail(ErrorKind::config, "unknown geometry '" + value + "' for key 'geometry'");
    cfg.geometry = value;
  } else if (key == "radius") {
    cfg.radius = to_double(key, value);
    if (!(cfg.radius > 0.0)) bad_value(key, value, "must be positive");
  } else if (key == "scale") {
    cfg.scale = to_double(key, value);
    if (!(*cfg.scale > 0.0)) bad_value(key, value, "must be positive");
  } else if (key == "mesh.splits") {
    const long v = to_int(key, value);
    if (v < 0 || v > 12) bad_value(key, value, "must lie in [0,12]");
    cfg.mesh_splits = static_cast<int>(v);
  } else if (key == "equation") {
    if (value == "weakly_singular")
      cfg.equation = Equation::weakly_singular;
    else if (value == "hypersingular")
      cfg.equation = Equation::hypersingular;
    else
      bad_value(key, value, "expected weakly_singular or hypersingular");
  } else if (key == "k") {
    if (value == "idp") {
      cfg.k_idp = true;
    } else {
      cfg.k = to_double(key, value);
      cfg.k_idp = false;
      if (cfg.k < 0.0) bad_value(key, value, "must be >= 0");
    }
  } else if (key == "theta") {
    cfg.theta = to_double(key, value);
    if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) bad_value(key, value, "must lie in (0,1]");
  } else if (key == "marking") {
    if (value == "doerfler")
      cfg.marking = MarkingVariant::doerfler;
    else if (value == "expanded")
      cfg.marking = MarkingVariant::expanded;
    else if (value == "uniform")
      cfg.marking = MarkingVariant::uniform;
    else
      bad_value(key, value, "expected doerfler, expanded or uniform");
  } else if (key == "max_dofs") {
    const long v = to_int(key, value);
    if (v < 1) bad_value(key, value, "must be positive");
    cfg.max_dofs = static_cast<std::size_t>(v);
  } else if (key == "quad.regular" || key == "quad.near" || key == "quad.log") {
    const long v = to_int(key, value);
    if (v < 2 || v > 32) bad_value(key, value, "must lie in [2,32]");
    (key == "quad.regular" ? cfg.quad.regular : key == "quad.near" ? cfg.quad.near : cfg.quad.log) =
        static_cast<int>(v);
  } else if (key == "rhs") {
    if (value == "plane_wave")
      cfg.incident.kind = IncidentField::Kind::plane_wave;
    else if (value == "point_source")
      cfg.incident.kind = IncidentField::Kind::point_source;
    else
      bad_value(key, value, "expected plane_wave or point_source");
  } else if (key == "direction") {
    cfg.incident.direction = to_vec(key, value);
    if (std::abs(cfg.incident.direction.norm() - 1.0) > 1e-12) bad_value(key, value, "must be a unit vector");
  } else if (key == "source") {
    cfg.incident.source = to_vec(key, value);
  } else if (key == "stabilize") {
    if (value == "auto")
      cfg.stabilize.reset();
    else
      cfg.stabilize = to_bool(key, value);
  } else if (key == "reference.levels") {
    const long v = to_int(key, value);
    if (v < 0 || v > 5) bad_value(key, value, "must lie in [0,5]");
    cfg.reference_levels = static_cast<int>(v);
  } else if (key == "estimator.points") {
    const long v = to_int(key, value);
    if (v < 3 || v > 32) bad_value(key, value, "must lie in [3,32]");
    cfg.estimator_points = static_cast<int>(v);
  } else if (key == "beta") {
    cfg.beta = to_bool(key, value);
  } else if (key == "axioms") {
    cfg.axioms = to_bool(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else {
    fail(ErrorKind::config, "unknown config key '" + key + "'");
  }
}

}  // namespace

// A rejected value leaves the config untouched.
void set_option(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  ExperimentConfig next = cfg;
  apply_option(next, key, value);
  cfg = std::move(next);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(ErrorKind::config, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) fail(ErrorKind::config, "line " + std::to_string(lineno) + ": empty key");
    set_option(cfg, key, trim(t.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : presets()) names.push_back(name);
  return names;
}

const std::string& preset_text(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) fail(ErrorKind::config, "unknown preset '" + name + "'");
  return it->second;
}

ExperimentConfig preset(const std::string& name) { return parse_config(preset_text(name)); }

void validate(const ExperimentConfig& cfg) {
  if (cfg.k_idp && cfg.geometry != "circle") fail(ErrorKind::config, "key 'k': 'idp' needs geometry = circle");
  if (std::abs(cfg.incident.direction.norm() - 1.0) > 1e-12)
    fail(ErrorKind::config, "key 'direction': must be a unit vector");
  const CurvePtr curve = make_curve(cfg);
  const bool stab = cfg.stabilize.value_or(false);
  if (stab && cfg.equation != Equation::hypersingular)
    fail(ErrorKind::config, "key 'stabilize': only the hypersingular equation has a stabilized form");
  if (stab && !curve->closed()) fail(ErrorKind::config, "key 'stabilize': open arcs are not stabilized");
  if (cfg.incident.kind == IncidentField::Kind::point_source) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& s : curve->segments())
      for (int i = 0; i <= 256; ++i)
        dmin = std::min(dmin, (s.position(s.t0 + (s.t1 - s.t0) * i / 256.0) - cfg.incident.source).norm());
    if (dmin < 1e-3 * curve->diameter() || (curve->closed() && std::abs(winding(*curve, cfg.incident.source)) > 0.5))
      fail(ErrorKind::config, "key 'source': the point source must lie outside the scatterer");
  }
}

CurvePtr make_curve(const ExperimentConfig& cfg) {
  try {
    if (cfg.geometry == "circle") return make_circle(cfg.radius, cfg.scale.value_or(1.0));
    if (cfg.geometry == "lshape") return cfg.scale ? make_lshape(*cfg.scale) : make_lshape();
    if (cfg.geometry == "slit") return cfg.scale ? make_slit(*cfg.scale) : make_slit();
  } catch (const Error& e) {
    fail(ErrorKind::config, "key 'geometry': " + std::string(e.what()));
  }
  fail(ErrorKind::config, "unknown geometry '" + cfg.geometry + "' for key 'geometry'");
}

WaveProblem make_problem(const ExperimentConfig& cfg, CurvePtr curve) {
  WaveProblem p;
  p.curve = std::move(curve);
  p.k = cfg.wavenumber();
  p.equation = cfg.equation;
  p.incident = cfg.incident;
  p.stabilize = cfg.stabilize.value_or(cfg.equation == Equation::hypersingular && p.k == 0.0 && p.curve->closed());
  return p;
}

LoopOptions loop_options(const ExperimentConfig& cfg) {
  LoopOptions o;
  o.max_N = cfg.max_dofs;
  o.estimator_points = cfg.estimator_points;
  o.orders = cfg.quad;
  o.compute_beta = cfg.beta;
  o.axioms = cfg.axioms;
  o.reference_levels = cfg.reference_levels;
  return o;
}

}  // namespace abem
