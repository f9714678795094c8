#include "icflow/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "icflow/errors.hpp"
#include "icflow/report.hpp"

namespace icflow {

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"shape", {"variant", "n", "radius", "a", "b", "modes", "profile_file"}},
    {"grid", {"mode", "N", "n_phi", "n_theta", "order"}},
    {"flow",
     {"k", "speed", "dt_initial", "t_end", "cfl_safety", "max_steps", "record_every",
      "fixed_dt", "rescale_every"}},
    {"suite", {"shapes", "k_list", "rungs", "dt_probes", "flow_t_end", "flow_record_every"}},
    {"output", {"dir", "svg"}},
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct RawEntry {
  std::string section, key, value;
  int line;
};

std::vector<RawEntry> tokenize(const std::string& text) {
  std::vector<RawEntry> out;
  std::istringstream is(text);
  std::string line, section;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", ln);
      section = trim(line.substr(1, line.size() - 2));
      if (!kSchema.count(section)) throw ConfigError("unknown section [" + section + "]", ln);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", ln);
    if (section.empty()) throw ConfigError("key outside any section", ln);
    RawEntry e{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), ln};
    if (!kSchema.at(section).count(e.key))
      throw ConfigError("unknown key '" + e.key + "' in [" + section + "]", ln);
    out.push_back(std::move(e));
  }
  return out;
}

double to_double(const RawEntry& e) {
  try {
    size_t pos;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("bad number for " + e.key + ": '" + e.value + "'", e.line);
  }
}

long to_long(const RawEntry& e) {
  try {
    size_t pos;
    const long v = std::stol(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("bad integer for " + e.key + ": '" + e.value + "'", e.line);
  }
}

bool to_bool(const RawEntry& e) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  throw ConfigError("bad boolean for " + e.key + ": '" + e.value + "'", e.line);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, sep)) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  const auto entries = tokenize(text);
  RunConfig cfg;

  auto find = [&](const std::string& sec, const std::string& key) -> const RawEntry* {
    for (const auto& e : entries)
      if (e.section == sec && e.key == key) return &e;
    return nullptr;
  };
  auto has_section = [&](const std::string& sec) {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const RawEntry& e) { return e.section == sec; });
  };

  // [shape]
  if (has_section("shape")) {
    const auto* variant = find("shape", "variant");
    const auto* nent = find("shape", "n");
    if (!variant) throw ConfigError("[shape] requires 'variant'");
    if (!nent) throw ConfigError("[shape] requires 'n'");
    const int n = static_cast<int>(to_long(*nent));
    try {
      if (variant->value == "sphere") {
        const auto* r = find("shape", "radius");
        cfg.shape = ShapeSpec::sphere(r ? to_double(*r) : 1.0, n);
      } else if (variant->value == "ellipsoid") {
        const auto* a = find("shape", "a");
        const auto* b = find("shape", "b");
        cfg.shape = ShapeSpec::ellipsoid(a ? to_double(*a) : 1.0, b ? to_double(*b) : 1.0, n);
      } else if (variant->value == "perturbed_sphere") {
        const auto* r = find("shape", "radius");
        const auto* m = find("shape", "modes");
        std::vector<std::pair<int, double>> modes;
        if (m) {
          for (const auto& part : split(m->value, ',')) {
            const auto c = part.find(':');
            if (c == std::string::npos)
              throw ConfigError("modes entries look like m:eps", m->line);
            modes.emplace_back(std::stoi(part.substr(0, c)), std::stod(part.substr(c + 1)));
          }
        }
        cfg.shape = ShapeSpec::perturbed_sphere(r ? to_double(*r) : 1.0, std::move(modes), n);
      } else if (variant->value == "tabulated") {
        const auto* pf = find("shape", "profile_file");
        if (!pf) throw ConfigError("tabulated shape requires profile_file", variant->line);
        std::ifstream prof(pf->value);
        if (!prof) throw ConfigError("cannot read profile file " + pf->value, pf->line);
        std::vector<std::pair<double, double>> samples;
        double a, b;
        while (prof >> a >> b) samples.emplace_back(a, b);
        cfg.shape = ShapeSpec::tabulated(samples, n);
      } else {
        throw ConfigError("unknown shape variant '" + variant->value + "'", variant->line);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("invalid shape: ") + e.what(), variant->line);
    }
  }

  // [grid]
  if (const auto* m = find("grid", "mode")) {
    if (m->value == "axisym")
      cfg.grid.mode = GridSpec::Mode::Axisym1D;
    else if (m->value == "full2d")
      cfg.grid.mode = GridSpec::Mode::Full2D;
    else
      throw ConfigError("grid mode is 'axisym' or 'full2d'", m->line);
  }
  if (const auto* e = find("grid", "N")) cfg.grid.N = static_cast<int>(to_long(*e));
  if (const auto* e = find("grid", "n_phi")) cfg.grid.n_phi = static_cast<int>(to_long(*e));
  if (const auto* e = find("grid", "n_theta")) cfg.grid.n_theta = static_cast<int>(to_long(*e));
  if (const auto* e = find("grid", "order")) cfg.grid.p = static_cast<int>(to_long(*e));
  cfg.grid.validate(cfg.shape ? cfg.shape->n : 3);

  // [flow]
  if (has_section("flow")) {
    if (!cfg.shape) throw ConfigError("[flow] requires a [shape] section");
    FlowConfig fc;
    fc.n = cfg.shape->n;
    const auto* kent = find("flow", "k");
    if (!kent) throw ConfigError("[flow] requires 'k'");
    fc.k = static_cast<int>(to_long(*kent));
    if (const auto* e = find("flow", "speed")) {
      if (e->value == "normalized")
        fc.speed = FlowConfig::Speed::Normalized;
      else if (e->value == "unnormalized")
        fc.speed = FlowConfig::Speed::Unnormalized;
      else
        throw ConfigError("flow speed is 'normalized' or 'unnormalized'", e->line);
    }
    if (const auto* e = find("flow", "dt_initial")) fc.dt_initial = to_double(*e);
    if (const auto* e = find("flow", "t_end")) fc.t_end = to_double(*e);
    if (const auto* e = find("flow", "cfl_safety")) fc.cfl_safety = to_double(*e);
    if (const auto* e = find("flow", "max_steps")) fc.max_steps = to_long(*e);
    if (const auto* e = find("flow", "fixed_dt")) fc.fixed_dt = to_bool(*e);
    if (const auto* e = find("flow", "rescale_every"))
      fc.rescale_every = static_cast<int>(to_long(*e));
    if (const auto* e = find("flow", "record_every")) cfg.record_every = to_double(*e);
    if (fc.k < 1 || fc.k > fc.n - 1) {
      throw ConfigError("k = " + std::to_string(fc.k) + " outside the valid range 1.." +
                            std::to_string(fc.n - 1),
                        kent->line);
    }
    fc.validate();
    cfg.flow = fc;
  }

  // [suite]
  cfg.suite_given = has_section("suite");
  if (const auto* e = find("suite", "shapes")) {
    cfg.suite.shapes.clear();
    for (const auto& part : split(e->value, ';')) {
      try {
        cfg.suite.shapes.push_back(shape_from_string(part));
      } catch (const std::exception& ex) {
        throw ConfigError(std::string("bad shape entry '") + part + "': " + ex.what(), e->line);
      }
    }
  }
  if (const auto* e = find("suite", "k_list")) {
    cfg.suite.ks.clear();
    for (const auto& part : split(e->value, ',')) cfg.suite.ks.push_back(std::stoi(part));
  }
  if (const auto* e = find("suite", "rungs")) {
    cfg.suite.rungs.clear();
    for (const auto& part : split(e->value, ',')) cfg.suite.rungs.push_back(std::stoi(part));
  }
  if (const auto* e = find("suite", "dt_probes")) {
    cfg.suite.dt_probes.clear();
    for (const auto& part : split(e->value, ',')) cfg.suite.dt_probes.push_back(std::stod(part));
  }
  if (const auto* e = find("suite", "flow_t_end")) cfg.suite.flow_t_end = to_double(*e);
  if (const auto* e = find("suite", "flow_record_every"))
    cfg.suite.flow_record_every = to_double(*e);
  cfg.suite.p = cfg.grid.p;
  cfg.suite.mode = cfg.grid.mode;
  if (cfg.suite.shapes.empty()) {
    if (cfg.shape)
      cfg.suite.shapes = {*cfg.shape};
    else
      cfg.suite.shapes = SuiteConfig::default_suite().shapes;
  }
  cfg.suite.validate();

  // [output]
  if (const auto* e = find("output", "dir")) cfg.out_dir = e->value;
  if (const auto* e = find("output", "svg")) cfg.svg = to_bool(*e);

  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  if (cfg.shape) {
    const auto& sp = *cfg.shape;
    os << "[shape]\n";
    switch (sp.kind) {
      case ShapeSpec::Kind::Sphere:
        os << "variant = sphere\nradius = " << sp.radius << "\n";
        break;
      case ShapeSpec::Kind::Ellipsoid:
        os << "variant = ellipsoid\na = " << sp.axis_a << "\nb = " << sp.axis_b << "\n";
        break;
      case ShapeSpec::Kind::PerturbedSphere: {
        os << "variant = perturbed_sphere\nradius = " << sp.radius << "\nmodes = ";
        for (size_t i = 0; i < sp.modes.size(); ++i)
          os << (i ? "," : "") << sp.modes[i].first << ":" << sp.modes[i].second;
        os << "\n";
        break;
      }
      case ShapeSpec::Kind::Tabulated:
        os << "variant = tabulated\n";
        break;
    }
    os << "n = " << sp.n << "\n";
  }
  os << "[grid]\n";
  os << "mode = " << (cfg.grid.mode == GridSpec::Mode::Axisym1D ? "axisym" : "full2d") << "\n";
  os << "N = " << cfg.grid.N << "\n";
  os << "n_phi = " << cfg.grid.n_phi << "\nn_theta = " << cfg.grid.n_theta << "\n";
  os << "order = " << cfg.grid.p << "\n";
  if (cfg.flow) {
    const auto& fc = *cfg.flow;
    os << "[flow]\n";
    os << "k = " << fc.k << "\n";
    os << "speed = "
       << (fc.speed == FlowConfig::Speed::Normalized ? "normalized" : "unnormalized") << "\n";
    os << "dt_initial = " << fc.dt_initial << "\nt_end = " << fc.t_end << "\n";
    os << "cfl_safety = " << fc.cfl_safety << "\nmax_steps = " << fc.max_steps << "\n";
    os << "record_every = " << cfg.record_every << "\n";
    os << "fixed_dt = " << (fc.fixed_dt ? "true" : "false") << "\n";
    os << "rescale_every = " << fc.rescale_every << "\n";
  }
  os << "[suite]\n";
  os << "shapes = ";
  for (size_t i = 0; i < cfg.suite.shapes.size(); ++i)
    os << (i ? "; " : "") << cfg.suite.shapes[i].describe();
  os << "\n";
  if (!cfg.suite.ks.empty()) {
    os << "k_list = ";
    for (size_t i = 0; i < cfg.suite.ks.size(); ++i) os << (i ? "," : "") << cfg.suite.ks[i];
    os << "\n";
  }
  os << "rungs = ";
  for (size_t i = 0; i < cfg.suite.rungs.size(); ++i) os << (i ? "," : "") << cfg.suite.rungs[i];
  os << "\n";
  os << "dt_probes = ";
  for (size_t i = 0; i < cfg.suite.dt_probes.size(); ++i)
    os << (i ? "," : "") << cfg.suite.dt_probes[i];
  os << "\n";
  os << "flow_t_end = " << cfg.suite.flow_t_end << "\n";
  os << "flow_record_every = " << cfg.suite.flow_record_every << "\n";
  os << "[output]\n";
  os << "dir = " << cfg.out_dir << "\n";
  os << "svg = " << (cfg.svg ? "true" : "false") << "\n";
  return os.str();
}

std::string override_key(const std::string& text, const std::string& dotted,
                         const std::string& value) {
  const auto dot = dotted.find('.');
  if (dot == std::string::npos) throw ConfigError("sweep axis must be section.key");
  const std::string section = dotted.substr(0, dot);
  const std::string key = dotted.substr(dot + 1);
  const auto it = kSchema.find(section);
  if (it == kSchema.end() || !it->second.count(key))
    throw ConfigError("unknown sweep key " + dotted);

  std::istringstream is(text);
  std::ostringstream os;
  std::string line, cur;
  bool replaced = false, in_section = false;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (!t.empty() && t.front() == '[' && t.back() == ']') {
      // entering a new section; inject the key if it was missing
      if (in_section && !replaced) {
        os << key << " = " << value << "\n";
        replaced = true;
      }
      cur = trim(t.substr(1, t.size() - 2));
      in_section = cur == section;
      os << line << "\n";
      continue;
    }
    const auto eq = t.find('=');
    if (in_section && eq != std::string::npos && trim(t.substr(0, eq)) == key) {
      os << key << " = " << value << "\n";
      replaced = true;
    } else {
      os << line << "\n";
    }
  }
  if (in_section && !replaced) {
    os << key << " = " << value << "\n";
    replaced = true;
  }
  if (!replaced) os << "[" << section << "]\n" << key << " = " << value << "\n";
  return os.str();
}

}  // namespace icflow
