#include "protonfem/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "json.hpp"
#include "protonfem/error.hpp"

namespace protonfem {

namespace {

using json = nlohmann::json;

// Collects every problem found while reading a config instead of stopping at the first.
class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& where, const std::string& what) { errors.push_back(where + ": " + what); }

  void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
        fail(join(where, it.key()), "unknown field");
      }
    }
  }

  const json* section(const json& root, const std::string& key, const std::string& where = "") {
    if (!root.contains(key)) return nullptr;
    const json& s = root.at(key);
    if (!s.is_object()) {
      fail(join(where, key), "must be an object");
      return nullptr;
    }
    return &s;
  }

  std::optional<double> number(const json* obj, const std::string& where, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      fail(join(where, key), "must be a number");
      return std::nullopt;
    }
    const double d = v->get<double>();
    if (!std::isfinite(d)) {
      fail(join(where, key), "must be finite");
      return std::nullopt;
    }
    return d;
  }

  std::optional<int> integer(const json* obj, const std::string& where, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      fail(join(where, key), "must be an integer");
      return std::nullopt;
    }
    return v->get<int>();
  }

  std::optional<bool> boolean(const json* obj, const std::string& where, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      fail(join(where, key), "must be true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<std::string> string(const json* obj, const std::string& where, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(join(where, key), "must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const json* obj, const std::string& where, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_array() || !std::all_of(v->begin(), v->end(), [](const json& e) { return e.is_number(); })) {
      fail(join(where, key), "must be an array of numbers");
      return std::nullopt;
    }
    return v->get<std::vector<double>>();
  }

  std::optional<std::vector<int>> integers(const json* obj, const std::string& where, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_array() || !std::all_of(v->begin(), v->end(), [](const json& e) { return e.is_number_integer(); })) {
      fail(join(where, key), "must be an array of integers");
      return std::nullopt;
    }
    return v->get<std::vector<int>>();
  }

  std::optional<Interval> interval(const json* obj, const std::string& where, const std::string& key) {
    const auto v = numbers(obj, where, key);
    if (!v) return std::nullopt;
    if (v->size() != 2 || !((*v)[1] > (*v)[0])) {
      fail(join(where, key), "must be [lo, hi] with lo < hi");
      return std::nullopt;
    }
    return Interval{(*v)[0], (*v)[1]};
  }

  static std::string join(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
  }

 private:
  static const json* find(const json* obj, const std::string& key) {
    if (!obj || !obj->contains(key)) return nullptr;
    return &obj->at(key);
  }
};

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

json material_json(const BraggKleeman& m) { return {{"alpha", m.alpha}, {"p", m.p}, {"rho", m.rho}}; }

// {"preset": name} and/or explicit alpha, p, rho.
std::optional<BraggKleeman> read_material(Reader& r, const json& obj, const std::string& where) {
  BraggKleeman m;
  bool ok = true;
  if (auto name = r.string(&obj, where, "preset")) {
    try {
      m = material_preset(*name);
    } catch (const Error& e) {
      r.fail(Reader::join(where, "preset"), e.what());
      ok = false;
    }
  } else if (!obj.contains("alpha") || !obj.contains("p")) {
    r.fail(where, "needs either preset or both alpha and p");
    ok = false;
  }
  if (auto a = r.number(&obj, where, "alpha")) m.alpha = *a;
  if (auto p = r.number(&obj, where, "p")) m.p = *p;
  if (auto rho = r.number(&obj, where, "rho")) m.rho = *rho;
  if (!ok) return std::nullopt;
  try {
    m.validate();
  } catch (const Error& e) {
    r.fail(where, e.what());
    return std::nullopt;
  }
  return m;
}

// Index of the coordinate axis omega points along, or -1.
int beam_axis(const std::vector<double>& omega) {
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (std::abs(std::abs(omega[k]) - 1.0) < 1e-12) return static_cast<int>(k);
  }
  return -1;
}

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {
      {"example1-supg", R"({
  "name": "example1-supg",
  "domain": {"spatial_extent": [[0, 4]], "energy": [1, 70], "omega": [1]},
  "mesh": {"resolution": [64, 64]},
  "materials": {"preset": "water-bortfeld"},
  "scatter": {"epsilon": 0},
  "inflow": {"type": "exact", "e0": 62, "delta": 0.01, "phi": 1.21e9},
  "solver": {"kind": "supg"},
  "dose": {"projection": "galerkin", "resolution": [128]},
  "convergence": {"levels": 4}
})"},
      {"example1-vi", R"({
  "name": "example1-vi",
  "domain": {"spatial_extent": [[0, 4]], "energy": [1, 70], "omega": [1]},
  "mesh": {"resolution": [64, 64]},
  "materials": {"preset": "water-bortfeld"},
  "scatter": {"epsilon": 0},
  "inflow": {"type": "exact", "e0": 62, "delta": 0.01, "phi": 1.21e9},
  "solver": {"kind": "vi", "vi_max_outer": 200, "vi_tolerance": 1e-8},
  "dose": {"projection": "vi", "resolution": [128]},
  "convergence": {"levels": 4}
})"},
      {"example2-adaptive", R"({
  "name": "example2-adaptive",
  "domain": {"spatial_extent": [[0, 4]], "energy": [1, 70], "omega": [1]},
  "mesh": {"resolution": [32, 32]},
  "materials": {"preset": "water-bortfeld"},
  "scatter": {"epsilon": 0},
  "inflow": {"type": "exact", "e0": 62, "delta": 0.01, "phi": 1.21e9},
  "solver": {"kind": "vi"},
  "dose": {"projection": "vi", "resolution": [128]},
  "adaptivity": {"enabled": true, "theta": 0.01, "max_levels": 4}
})"},
      {"example3", R"({
  "name": "example3",
  "domain": {"spatial_extent": [[-1, 1], [0, 4]], "energy": [1, 70], "omega": [0, 1]},
  "mesh": {"resolution": [16, 24, 24]},
  "materials": {"preset": "water-bortfeld"},
  "scatter": {"epsilon": 0.01},
  "inflow": {"type": "beam", "e0": 62, "delta": 0.01, "phi": 1.21e9,
             "lateral": {"center": 0, "sigma": 0.2}},
  "solver": {"kind": "supg"},
  "dose": {"projection": "element-constant", "resolution": [32, 48]}
})"},
      {"example4-orbital", R"({
  "name": "example4-orbital",
  "domain": {"spatial_extent": [[0, 5]], "energy": [1, 70], "omega": [1]},
  "mesh": {"resolution": [100, 128]},
  "materials": {"layers": [
    {"name": "eyelid", "depth": [0, 0.6], "preset": "muscle", "rho": 1.04},
    {"name": "orbital-bone", "depth": [0.6, 0.9], "preset": "bone", "rho": 1.85},
    {"name": "orbital-fat", "depth": [0.9, 2.7], "preset": "lung", "rho": 0.3},
    {"name": "tumour", "depth": [2.7, 3.7], "preset": "water", "rho": 1.0},
    {"name": "post-tumour", "depth": [3.7, 4.1], "preset": "water", "rho": 1.0},
    {"name": "skull", "depth": [4.1, 4.4], "preset": "bone", "rho": 1.85},
    {"name": "deep-tissue", "depth": [4.4, 5.0], "preset": "muscle", "rho": 1.04}
  ]},
  "scatter": {"epsilon": 0},
  "inflow": {"type": "beam", "e0": 62, "delta": 0.01, "phi": 1.21e9},
  "solver": {"kind": "vi"},
  "dose": {"projection": "vi", "resolution": [200]}
})"},
  };
  return table;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  Reader r;
  Scenario s;
  json canon;
  r.check_keys(root, "", {"name", "domain", "mesh", "materials", "scatter", "inflow", "source", "solver", "dose",
                          "adaptivity", "convergence"});
  if (auto name = r.string(&root, "", "name")) s.name = *name;
  canon["name"] = s.name;

  // domain
  bool domain_ok = false;
  if (const json* d = r.section(root, "domain")) {
    r.check_keys(*d, "domain", {"spatial_extent", "energy", "omega"});
    const json* ext = d->contains("spatial_extent") ? &d->at("spatial_extent") : nullptr;
    std::vector<Interval> extent;
    if (!ext || !ext->is_array() || ext->empty() || ext->size() > 2) {
      r.fail("domain.spatial_extent", "must list 1 or 2 [lo, hi] intervals");
    } else {
      for (std::size_t k = 0; k < ext->size(); ++k) {
        const json wrap = {{"v", (*ext)[k]}};
        if (auto iv = r.interval(&wrap, "domain.spatial_extent[" + std::to_string(k) + "]", "v")) {
          extent.push_back(*iv);
        }
      }
    }
    auto energy = r.interval(d, "domain", "energy");
    if (!d->contains("energy")) r.fail("domain.energy", "required");
    auto omega = r.numbers(d, "domain", "omega");
    if (!d->contains("omega")) r.fail("domain.omega", "required");
    if (ext && extent.size() == ext->size() && energy && omega) {
      s.domain.spatial_dim = static_cast<int>(extent.size());
      s.domain.spatial_extent = extent;
      s.domain.energy = *energy;
      s.domain.omega = *omega;
      try {
        s.domain.validate();
        domain_ok = true;
      } catch (const Error& e) {
        r.fail("domain", e.what());
      }
    }
  } else {
    r.fail("domain", "required");
  }
  if (domain_ok) {
    json ext = json::array();
    for (const auto& i : s.domain.spatial_extent) ext.push_back(interval_json(i));
    canon["domain"] = {{"spatial_extent", ext}, {"energy", interval_json(s.domain.energy)}, {"omega", s.domain.omega}};
  }
  const int sd = s.domain.spatial_dim;

  // mesh
  if (const json* m = r.section(root, "mesh")) {
    r.check_keys(*m, "mesh", {"resolution"});
    if (auto res = r.integers(m, "mesh", "resolution")) {
      if (domain_ok && static_cast<int>(res->size()) != sd + 1) {
        r.fail("mesh.resolution", "needs one entry per spatial axis plus one for energy");
      } else if (std::any_of(res->begin(), res->end(), [](int n) { return n < 1; })) {
        r.fail("mesh.resolution", "entries must be at least 1");
      } else {
        s.resolution = *res;
      }
    } else {
      r.fail("mesh.resolution", "required");
    }
  } else {
    r.fail("mesh", "required");
  }
  canon["mesh"] = {{"resolution", s.resolution}};

  // materials
  bool layered = false;
  if (const json* m = r.section(root, "materials")) {
    if (m->contains("layers")) {
      layered = true;
      r.check_keys(*m, "materials", {"layers"});
      const json& layers = m->at("layers");
      if (!layers.is_array() || layers.empty()) {
        r.fail("materials.layers", "must be a non-empty array");
      } else {
        std::vector<Layer> list;
        json canon_layers = json::array();
        bool ok = true;
        for (std::size_t i = 0; i < layers.size(); ++i) {
          const std::string where = "materials.layers[" + std::to_string(i) + "]";
          if (!layers[i].is_object()) {
            r.fail(where, "must be an object");
            ok = false;
            continue;
          }
          r.check_keys(layers[i], where, {"name", "depth", "preset", "alpha", "p", "rho"});
          Layer layer;
          layer.name = r.string(&layers[i], where, "name").value_or("layer" + std::to_string(i));
          auto depth = r.interval(&layers[i], where, "depth");
          if (!layers[i].contains("depth")) r.fail(where + ".depth", "required");
          auto mat = read_material(r, layers[i], where);
          if (!depth || !mat) {
            ok = false;
            continue;
          }
          layer.depth = *depth;
          layer.material = *mat;
          json cl = material_json(*mat);
          cl["name"] = layer.name;
          cl["depth"] = interval_json(*depth);
          canon_layers.push_back(cl);
          list.push_back(std::move(layer));
        }
        if (ok && domain_ok) {
          try {
            s.materials = MaterialField(list, s.domain.omega);
            canon["materials"] = {{"layers", canon_layers}};
            // The layers must cover every depth reached inside the box.
            double dmin = 0.0, dmax = 0.0;
            for (int k = 0; k < sd; ++k) {
              const double a = s.domain.omega[k] * s.domain.spatial_extent[k].lo;
              const double b = s.domain.omega[k] * s.domain.spatial_extent[k].hi;
              dmin += std::min(a, b);
              dmax += std::max(a, b);
            }
            const double tol = 1e-12 * std::max(1.0, s.domain.diameter());
            if (dmin < list.front().depth.lo - tol || dmax > list.back().depth.hi + tol) {
              r.fail("materials.layers", "layers do not cover the depth range of the domain");
            }
            if (beam_axis(s.domain.omega) < 0) {
              r.fail("materials.layers", "layered media need omega along a coordinate axis");
            }
          } catch (const Error& e) {
            r.fail("materials.layers", e.what());
          }
        }
      }
    } else {
      r.check_keys(*m, "materials", {"preset", "alpha", "p", "rho"});
      if (auto mat = read_material(r, *m, "materials")) {
        s.materials = MaterialField(*mat);
        canon["materials"] = material_json(*mat);
      }
    }
  } else {
    r.fail("materials", "required");
  }

  // scatter
  if (const json* sc = r.section(root, "scatter")) {
    r.check_keys(*sc, "scatter", {"epsilon", "g_hg"});
    const auto eps = r.number(sc, "scatter", "epsilon");
    const auto g = r.number(sc, "scatter", "g_hg");
    if (eps && g) {
      r.fail("scatter", "give either epsilon or g_hg, not both");
    } else if (g) {
      try {
        s.scatter = ScatterModel::from_hg(*g);
      } catch (const Error& e) {
        r.fail("scatter.g_hg", e.what());
      }
    } else if (eps) {
      try {
        s.scatter = ScatterModel::from_epsilon(*eps);
      } catch (const Error& e) {
        r.fail("scatter.epsilon", e.what());
      }
    }
  }
  if (domain_ok && sd == 1 && s.scatter.epsilon > 0.0) {
    r.fail("scatter", "epsilon > 0 requires two spatial dimensions");
  }
  canon["scatter"] = {{"epsilon", s.scatter.epsilon}};
  if (s.scatter.g_hg) canon["scatter"]["g_hg"] = *s.scatter.g_hg;

  // inflow
  if (const json* in = r.section(root, "inflow")) {
    r.check_keys(*in, "inflow", {"type", "e0", "delta", "phi", "lateral"});
    const std::string type = r.string(in, "inflow", "type").value_or("exact");
    if (type == "exact") {
      s.inflow.kind = InflowKind::Exact;
    } else if (type == "beam") {
      s.inflow.kind = InflowKind::Beam;
    } else {
      r.fail("inflow.type", "expected exact or beam, got '" + type + "'");
    }
    if (auto v = r.number(in, "inflow", "e0")) s.inflow.e0 = *v;
    if (auto v = r.number(in, "inflow", "delta")) s.inflow.delta = *v;
    if (auto v = r.number(in, "inflow", "phi")) s.inflow.phi = *v;
    if (!(s.inflow.e0 > 0.0)) r.fail("inflow.e0", "must be positive");
    if (!(s.inflow.delta > 0.0)) r.fail("inflow.delta", "must be positive");
    if (!(s.inflow.phi >= 0.0)) r.fail("inflow.phi", "must be non-negative");
    if (const json* lat = r.section(*in, "lateral", "inflow")) {
      r.check_keys(*lat, "inflow.lateral", {"center", "sigma"});
      LateralProfile lp;
      lp.center = r.number(lat, "inflow.lateral", "center").value_or(0.0);
      lp.sigma = r.number(lat, "inflow.lateral", "sigma").value_or(0.0);
      if (!(lp.sigma > 0.0)) r.fail("inflow.lateral.sigma", "must be positive");
      if (domain_ok && sd != 2) r.fail("inflow.lateral", "needs two spatial dimensions");
      s.inflow.lateral = lp;
    }
  }
  if (layered && s.inflow.kind == InflowKind::Exact) {
    r.fail("inflow.type", "exact inflow needs a homogeneous medium; use beam for layers");
  }
  canon["inflow"] = {{"type", s.inflow.kind == InflowKind::Exact ? "exact" : "beam"},
                     {"e0", s.inflow.e0},
                     {"delta", s.inflow.delta},
                     {"phi", s.inflow.phi}};
  if (s.inflow.lateral) {
    canon["inflow"]["lateral"] = {{"center", s.inflow.lateral->center}, {"sigma", s.inflow.lateral->sigma}};
  }

  // source
  if (const json* src = r.section(root, "source")) {
    r.check_keys(*src, "source", {"constant"});
    s.source_constant = r.number(src, "source", "constant");
    if (s.source_constant && *s.source_constant == 0.0) s.source_constant.reset();
  }
  if (s.source_constant) canon["source"] = {{"constant", *s.source_constant}};

  // solver
  if (const json* so = r.section(root, "solver")) {
    r.check_keys(*so, "solver", {"kind", "vi_max_outer", "vi_tolerance"});
    const std::string kind = r.string(so, "solver", "kind").value_or("vi");
    if (kind == "supg") {
      s.solver = SolverKind::Supg;
    } else if (kind == "vi") {
      s.solver = SolverKind::Vi;
    } else {
      r.fail("solver.kind", "expected supg or vi, got '" + kind + "'");
    }
    if (auto v = r.integer(so, "solver", "vi_max_outer")) {
      if (*v < 1) r.fail("solver.vi_max_outer", "must be at least 1");
      s.vi.max_outer = *v;
    }
    if (auto v = r.number(so, "solver", "vi_tolerance")) {
      if (!(*v > 0.0)) r.fail("solver.vi_tolerance", "must be positive");
      s.vi.tolerance_factor = *v;
    }
  }
  canon["solver"] = {{"kind", to_string(s.solver)}, {"vi_max_outer", s.vi.max_outer}, {"vi_tolerance", s.vi.tolerance_factor}};

  // dose
  if (domain_ok && static_cast<int>(s.resolution.size()) == sd + 1) {
    s.dose_resolution.assign(s.resolution.begin(), s.resolution.begin() + sd);
  }
  if (const json* d = r.section(root, "dose")) {
    r.check_keys(*d, "dose", {"projection", "resolution", "energy_rule"});
    if (auto p = r.string(d, "dose", "projection")) {
      try {
        s.dose_projection = parse_dose_representation(*p);
      } catch (const Error& e) {
        r.fail("dose.projection", e.what());
      }
    }
    if (auto res = r.integers(d, "dose", "resolution")) {
      if (domain_ok && static_cast<int>(res->size()) != sd) {
        r.fail("dose.resolution", "needs one entry per spatial axis");
      } else if (std::any_of(res->begin(), res->end(), [](int n) { return n < 1; })) {
        r.fail("dose.resolution", "entries must be at least 1");
      } else {
        s.dose_resolution = *res;
      }
    }
    if (auto rule = r.string(d, "dose", "energy_rule"); rule && *rule != "trapezoid") {
      r.fail("dose.energy_rule", "only trapezoid is supported");
    }
  }
  canon["dose"] = {{"projection", to_string(s.dose_projection)},
                   {"resolution", s.dose_resolution},
                   {"energy_rule", "trapezoid"}};

  // adaptivity
  if (const json* a = r.section(root, "adaptivity")) {
    r.check_keys(*a, "adaptivity", {"enabled", "theta", "max_levels", "target_error"});
    if (auto v = r.boolean(a, "adaptivity", "enabled")) s.adaptivity.enabled = *v;
    if (auto v = r.number(a, "adaptivity", "theta")) s.adaptivity.theta = *v;
    if (auto v = r.integer(a, "adaptivity", "max_levels")) s.adaptivity.max_levels = *v;
    s.adaptivity.target_error = r.number(a, "adaptivity", "target_error");
    if (!(s.adaptivity.theta > 0.0 && s.adaptivity.theta <= 1.0)) r.fail("adaptivity.theta", "must lie in (0, 1]");
    if (s.adaptivity.max_levels < 0) r.fail("adaptivity.max_levels", "must be non-negative");
  }
  canon["adaptivity"] = {{"enabled", s.adaptivity.enabled},
                         {"theta", s.adaptivity.theta},
                         {"max_levels", s.adaptivity.max_levels}};
  if (s.adaptivity.target_error) canon["adaptivity"]["target_error"] = *s.adaptivity.target_error;

  // convergence
  if (const json* c = r.section(root, "convergence")) {
    r.check_keys(*c, "convergence", {"levels"});
    if (auto v = r.integer(c, "convergence", "levels")) {
      if (*v < 1) r.fail("convergence.levels", "must be at least 1");
      s.convergence_levels = *v;
    }
  }
  canon["convergence"] = {{"levels", s.convergence_levels}};

  if (!r.errors.empty()) {
    std::ostringstream msg;
    msg << "invalid scenario (" << r.errors.size() << (r.errors.size() == 1 ? " problem" : " problems") << "):";
    for (const auto& e : r.errors) msg << "\n  " << e;
    throw ConfigError(msg.str());
  }
  s.canonical_json = canon.dump();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : presets()) out.push_back(name);
  return out;
}

std::string preset_json(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw NotFoundError("unknown preset '" + name + "'");
  return it->second;
}

Scenario preset_scenario(const std::string& name) { return parse_scenario(preset_json(name)); }

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s.canonical_json) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

GaussianSpectrum make_spectrum(const Scenario& s) {
  return GaussianSpectrum::make(s.inflow.e0, s.inflow.delta, s.inflow.phi, s.domain.energy);
}

std::shared_ptr<TransportProblem> make_problem(const Scenario& s) {
  auto prob = std::make_shared<TransportProblem>();
  prob->domain = s.domain;
  prob->materials = s.materials;
  prob->scatter = s.scatter;
  const GaussianSpectrum spectrum = make_spectrum(s);
  prob->inflow.sup = spectrum.peak();
  if (s.inflow.kind == InflowKind::Exact) {
    if (!s.materials.homogeneous()) throw ConfigError("exact inflow needs a homogeneous medium");
    const ExactFluence ex(spectrum, s.materials.min_alpha(), s.domain.omega, s.inflow.lateral);
    prob->inflow.g = [ex](const Point& x) { return ex.value(x); };
  } else {
    const Domain dom = s.domain;
    const auto lateral = s.inflow.lateral;
    const double tol = 1e-9 * dom.diameter();
    prob->inflow.g = [dom, spectrum, lateral, tol](const Point& x) {
      bool spatial_inflow = false;
      for (int k = 0; k < dom.spatial_dim; ++k) {
        if (dom.omega[k] > 1e-12 && std::abs(x[k] - dom.spatial_extent[k].lo) <= tol) spatial_inflow = true;
        if (dom.omega[k] < -1e-12 && std::abs(x[k] - dom.spatial_extent[k].hi) <= tol) spatial_inflow = true;
      }
      if (!spatial_inflow) return 0.0;
      double v = spectrum.value(x[dom.spatial_dim]);
      if (lateral) v *= lateral->value(-dom.omega[1] * x[0] + dom.omega[0] * x[1]);
      return v;
    };
  }
  if (s.source_constant) {
    const double c = *s.source_constant;
    prob->source = [c](const Point&) { return c; };
  }
  return prob;
}

std::optional<ExactFluence> exact_solution(const Scenario& s) {
  if (s.inflow.kind != InflowKind::Exact || !s.materials.homogeneous() || s.scatter.epsilon != 0.0 ||
      s.source_constant) {
    return std::nullopt;
  }
  return ExactFluence(make_spectrum(s), s.materials.min_alpha(), s.domain.omega, s.inflow.lateral);
}

Mesh initial_mesh(const Scenario& s, int refinement) {
  std::vector<int> res = s.resolution;
  for (int& n : res) n <<= refinement;
  AxisBreaks breaks(static_cast<std::size_t>(s.domain.total_dim()));
  if (!s.materials.homogeneous()) {
    const int k = beam_axis(s.domain.omega);
    if (k < 0) throw ConfigError("layered media need omega along a coordinate axis");
    const Interval ext = s.domain.spatial_extent[k];
    for (double depth : s.materials.interfaces()) {
      const double x = depth * s.domain.omega[k];
      if (x > ext.lo && x < ext.hi) breaks[k].push_back(x);
    }
    std::sort(breaks[k].begin(), breaks[k].end());
  }
  return build_structured(s.domain, res, breaks);
}

std::shared_ptr<const FeSpace> dose_space(const Scenario& s) {
  auto mesh = std::make_shared<const Mesh>(build_spatial_grid(s.domain.spatial_extent, s.dose_resolution));
  return std::make_shared<const FeSpace>(mesh);
}

}  // namespace protonfem
