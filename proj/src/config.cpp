#include "irhm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace irhm {

namespace {

struct SectionSchema {
  std::string_view name;
  std::vector<std::string_view> keys;
};

const std::vector<SectionSchema>& schema() {
  static const std::vector<SectionSchema> s = {
      {"", {"experiment"}},
      {"model", {"n_sites", "j_star", "delta"}},
      {"coupling", {"g", "omega"}},
      {"bath", {"kind", "g", "g_im", "omega", "lambda", "omega_c", "temperature"}},
      {"state", {"preset", "amplitudes", "seed"}},
      {"times", {"t_end", "n_samples"}},
      {"local", {"method", "dt"}},
      {"global", {"method", "kernel_spacing"}},
      {"appendix", {"all_pairs"}},
      {"polaron", {"n_max", "vacuum"}},
      {"output", {"path", "element"}},
  };
  return s;
}

std::vector<std::string_view> sections_for(Experiment e) {
  switch (e) {
    case Experiment::spectrum: return {"", "model", "output"};
    case Experiment::effective: return {"", "model", "coupling", "output"};
    case Experiment::verify_appendix_a: return {"", "model", "appendix", "output"};
    case Experiment::evolve_local: return {"", "model", "coupling", "state", "times", "local", "output"};
    case Experiment::evolve_global: return {"", "model", "bath", "state", "times", "global", "output"};
    case Experiment::rvb: return {"", "model", "output"};
    case Experiment::polaron: return {"", "model", "coupling", "state", "times", "polaron", "output"};
  }
  return {};
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<std::string> suggest(std::string_view word, const std::vector<std::string_view>& candidates) {
  std::size_t best = std::string_view::npos;
  std::string_view pick;
  for (auto c : candidates) {
    if (c.empty()) continue;
    const std::size_t d = edit_distance(word, c);
    if (d < best) {
      best = d;
      pick = c;
    }
  }
  const std::size_t limit = std::max<std::size_t>(2, word.size() / 3);
  if (best <= limit) return std::string(pick);
  return std::nullopt;
}

struct Entry {
  std::string value;
  int line = 0;
};

std::string qualified(std::string_view section, std::string_view key) {
  return section.empty() ? std::string(key) : std::string(section) + "." + std::string(key);
}

class Reader {
 public:
  Reader(std::map<std::string, std::map<std::string, Entry>> entries, std::vector<std::string>& errors)
      : entries_(std::move(entries)), errors_(errors) {}

  bool has(std::string_view section, std::string_view key) const {
    auto s = entries_.find(std::string(section));
    return s != entries_.end() && s->second.count(std::string(key)) > 0;
  }
  bool has_section(std::string_view section) const { return entries_.count(std::string(section)) > 0; }

  std::optional<std::string> raw(std::string_view section, std::string_view key) const {
    if (!has(section, key)) return std::nullopt;
    return entries_.at(std::string(section)).at(std::string(key)).value;
  }

  void require(std::string_view section, std::string_view key) {
    if (!has(section, key)) errors_.push_back("missing required key '" + qualified(section, key) + "'");
  }

  double number(std::string_view section, std::string_view key, double fallback) {
    auto v = raw(section, key);
    if (!v) return fallback;
    double out = 0.0;
    const char* first = v->data();
    const char* last = first + v->size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || !std::isfinite(out)) {
      errors_.push_back(qualified(section, key) + ": expected a finite number, got '" + *v + "'");
      return fallback;
    }
    return out;
  }

  long long integer(std::string_view section, std::string_view key, long long fallback) {
    auto v = raw(section, key);
    if (!v) return fallback;
    long long out = 0;
    const char* first = v->data();
    const char* last = first + v->size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
      errors_.push_back(qualified(section, key) + ": expected an integer, got '" + *v + "'");
      return fallback;
    }
    return out;
  }

  bool boolean(std::string_view section, std::string_view key, bool fallback) {
    auto v = raw(section, key);
    if (!v) return fallback;
    if (*v == "true") return true;
    if (*v == "false") return false;
    errors_.push_back(qualified(section, key) + ": expected true or false, got '" + *v + "'");
    return fallback;
  }

  template <typename E>
  E choice(std::string_view section, std::string_view key, const std::vector<std::pair<std::string_view, E>>& options,
           E fallback) {
    auto v = raw(section, key);
    if (!v) return fallback;
    for (const auto& [name, value] : options)
      if (*v == name) return value;
    std::string msg = qualified(section, key) + ": unknown value '" + *v + "' (expected one of:";
    for (const auto& o : options) msg += " " + std::string(o.first);
    errors_.push_back(msg + ")");
    return fallback;
  }

  void error(std::string msg) { errors_.push_back(std::move(msg)); }

 private:
  std::map<std::string, std::map<std::string, Entry>> entries_;
  std::vector<std::string>& errors_;
};

std::vector<cplx> parse_amplitudes(const std::string& text, Reader& r) {
  std::vector<cplx> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    const auto colon = token.find(':');
    auto read = [&](std::string_view s, double& v) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(v);
    };
    double re = 0.0, im = 0.0;
    bool ok = colon == std::string::npos
                  ? read(token, re)
                  : read(trim(token.substr(0, colon)), re) && read(trim(token.substr(colon + 1)), im);
    if (!ok) {
      r.error("state.amplitudes: cannot parse amplitude '" + token + "' (expected re or re:im)");
      return {};
    }
    out.emplace_back(re, im);
  }
  return out;
}

template <typename E>
std::string_view name_of(const std::vector<std::pair<std::string_view, E>>& options, E value) {
  for (const auto& [name, v] : options)
    if (v == value) return name;
  return "";
}

const std::vector<std::pair<std::string_view, StatePreset>> kPresets = {
    {"dsz1", StatePreset::dsz1},
    {"same_sector", StatePreset::same_sector},
    {"random", StatePreset::random},
    {"site_one_occupied", StatePreset::site_one_occupied},
    {"amplitudes", StatePreset::amplitudes}};
const std::vector<std::pair<std::string_view, LocalMethod>> kLocalMethods = {{"closed_form", LocalMethod::closed_form},
                                                                             {"tcl2", LocalMethod::tcl2}};
const std::vector<std::pair<std::string_view, GlobalMethod>> kGlobalMethods = {
    {"closed_form", GlobalMethod::closed_form}, {"master_equation", GlobalMethod::master_equation}};
const std::vector<std::pair<std::string_view, PhononVacuum>> kVacua = {{"polaron", PhononVacuum::polaron},
                                                                       {"bare", PhononVacuum::bare}};

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::spectrum: return "spectrum";
    case Experiment::effective: return "effective";
    case Experiment::verify_appendix_a: return "verify-appendix-a";
    case Experiment::evolve_local: return "evolve-local";
    case Experiment::evolve_global: return "evolve-global";
    case Experiment::rvb: return "rvb";
    case Experiment::polaron: return "polaron";
  }
  return "";
}

std::optional<Experiment> experiment_from_string(std::string_view name) {
  for (Experiment e : {Experiment::spectrum, Experiment::effective, Experiment::verify_appendix_a,
                       Experiment::evolve_local, Experiment::evolve_global, Experiment::rvb, Experiment::polaron})
    if (to_string(e) == name) return e;
  return std::nullopt;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

ConfigResult parse_config(std::string_view text, std::optional<Experiment> experiment) {
  ConfigResult result;
  auto& errors = result.errors;

  // Pass 1: syntax.
  std::map<std::string, std::map<std::string, Entry>> entries;
  std::string section;
  bool section_known = true;
  std::vector<std::string_view> section_names;
  for (const auto& s : schema()) section_names.push_back(s.name);
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (t.front() == '[') {
      if (t.back() != ']') {
        errors.push_back(where + "malformed section header '" + t + "'");
        section_known = false;
        continue;
      }
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      const auto it = std::find_if(schema().begin(), schema().end(),
                                   [&](const SectionSchema& s) { return !s.name.empty() && s.name == section; });
      section_known = it != schema().end();
      if (!section_known) {
        std::string msg = where + "unknown section [" + section + "]";
        if (auto s = suggest(section, section_names)) msg += "; did you mean [" + *s + "]?";
        errors.push_back(msg);
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected 'key = value', got '" + t + "'");
      continue;
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (const auto hash = value.find('#'); hash != std::string::npos) value = trim(value.substr(0, hash));
    if (key.empty()) {
      errors.push_back(where + "empty key");
      continue;
    }
    if (!section_known) continue;
    const auto& keys =
        std::find_if(schema().begin(), schema().end(), [&](const SectionSchema& s) { return s.name == section; })->keys;
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      std::string msg = where + "unknown key '" + qualified(section, key) + "'";
      if (auto s = suggest(key, keys)) msg += "; did you mean '" + *s + "'?";
      errors.push_back(msg);
      continue;
    }
    if (value.empty()) {
      errors.push_back(where + "key '" + qualified(section, key) + "' has an empty value");
      continue;
    }
    auto& slot = entries[section];
    if (slot.count(key)) {
      errors.push_back(where + "duplicate key '" + qualified(section, key) + "'");
      continue;
    }
    slot[key] = {value, line_no};
  }

  Reader r(entries, errors);

  // Experiment selection.
  std::optional<Experiment> file_experiment;
  if (auto v = r.raw("", "experiment")) {
    file_experiment = experiment_from_string(*v);
    if (!file_experiment) {
      std::vector<std::string_view> names;
      for (auto e : {Experiment::spectrum, Experiment::effective, Experiment::verify_appendix_a,
                     Experiment::evolve_local, Experiment::evolve_global, Experiment::rvb, Experiment::polaron})
        names.push_back(to_string(e));
      std::string msg = "unknown experiment '" + *v + "'";
      if (auto s = suggest(*v, names)) msg += "; did you mean '" + *s + "'?";
      errors.push_back(msg);
    }
  }
  if (experiment && file_experiment && *experiment != *file_experiment)
    errors.push_back("experiment '" + std::string(to_string(*experiment)) + "' on the command line disagrees with '" +
                     std::string(to_string(*file_experiment)) + "' in the config");
  const std::optional<Experiment> chosen = experiment ? experiment : file_experiment;
  if (!chosen) {
    if (!r.has("", "experiment")) errors.push_back("missing required key 'experiment'");
    return result;
  }

  RunConfig cfg;
  cfg.experiment = *chosen;
  const auto used = sections_for(cfg.experiment);
  for (const auto& [name, _] : entries)
    if (std::find(used.begin(), used.end(), name) == used.end())
      errors.push_back("section [" + name + "] is not used by experiment '" + std::string(to_string(cfg.experiment)) +
                       "'");
  auto uses = [&](std::string_view s) { return std::find(used.begin(), used.end(), s) != used.end(); };
  auto& echo = cfg.resolved;
  echo.emplace_back("experiment", std::string(to_string(cfg.experiment)));

  // [model]
  const bool polaron = cfg.experiment == Experiment::polaron;
  if (!polaron) r.require("model", "n_sites");
  const long long n_sites = r.integer("model", "n_sites", 2);
  cfg.model.j_star = r.number("model", "j_star", 1.0);
  cfg.model.delta = r.number("model", "delta", 1.0);
  if (n_sites < 2 || n_sites > SpinBasis::kMaxSites)
    errors.push_back("model.n_sites must be in [2, " + std::to_string(SpinBasis::kMaxSites) + "] (got " +
                     std::to_string(n_sites) + ")");
  cfg.model.n_sites = static_cast<int>(std::clamp<long long>(n_sites, 2, SpinBasis::kMaxSites));
  if (!(cfg.model.j_star > 0.0) || !std::isfinite(cfg.model.j_star))
    errors.push_back("model.j_star must be > 0 (got " + format_number(cfg.model.j_star) + ")");
  if (!(cfg.model.delta >= 0.0) || !std::isfinite(cfg.model.delta))
    errors.push_back("model.delta must be >= 0 (got " + format_number(cfg.model.delta) + ")");
  if (polaron && n_sites != 2) errors.push_back("model.n_sites must be 2 for the polaron experiment");
  if (cfg.experiment == Experiment::rvb && n_sites != 4 && n_sites != 6)
    errors.push_back("model.n_sites must be 4 or 6 for the rvb experiment");
  if (cfg.experiment == Experiment::verify_appendix_a && n_sites < 3)
    errors.push_back("model.n_sites must be at least 3 for verify-appendix-a");
  echo.emplace_back("model.n_sites", std::to_string(cfg.model.n_sites));
  echo.emplace_back("model.j_star", format_number(cfg.model.j_star));
  echo.emplace_back("model.delta", format_number(cfg.model.delta));

  // [coupling]
  if (uses("coupling")) {
    r.require("coupling", "g");
    r.require("coupling", "omega");
    CouplingParams c;
    c.model = cfg.model;
    c.g = r.number("coupling", "g", 1.0);
    c.omega = r.number("coupling", "omega", 1.0);
    if (c.g < 0.0) errors.push_back("coupling.g must be >= 0 (got " + format_number(c.g) + ")");
    if (!(c.omega > 0.0)) errors.push_back("coupling.omega must be > 0 (got " + format_number(c.omega) + ")");
    echo.emplace_back("coupling.g", format_number(c.g));
    echo.emplace_back("coupling.omega", format_number(c.omega));
    cfg.coupling = c;
  }

  // [bath]
  if (uses("bath")) {
    r.require("bath", "kind");
    const std::string kind = r.raw("bath", "kind").value_or("single_mode");
    BathSpec bath;
    bath.temperature = r.number("bath", "temperature", 0.0);
    if (bath.temperature < 0.0)
      errors.push_back("bath.temperature must be >= 0 (got " + format_number(bath.temperature) + ")");
    echo.emplace_back("bath.kind", kind);
    if (kind == "single_mode") {
      for (auto k : {"lambda", "omega_c"})
        if (r.has("bath", k)) errors.push_back(std::string("bath.") + k + " applies only to kind = ohmic");
      BathMode mode;
      mode.g = {r.number("bath", "g", 1.0), r.number("bath", "g_im", 0.0)};
      mode.omega = r.number("bath", "omega", 1.0);
      if (!(mode.omega > 0.0)) errors.push_back("bath.omega must be > 0 (got " + format_number(mode.omega) + ")");
      bath.kind = std::vector<BathMode>{mode};
      echo.emplace_back("bath.g", format_number(mode.g.real()));
      echo.emplace_back("bath.g_im", format_number(mode.g.imag()));
      echo.emplace_back("bath.omega", format_number(mode.omega));
    } else if (kind == "ohmic") {
      for (auto k : {"g", "g_im", "omega"})
        if (r.has("bath", k)) errors.push_back(std::string("bath.") + k + " applies only to kind = single_mode");
      OhmicDensity o;
      o.lambda = r.number("bath", "lambda", 0.1);
      o.omega_c = r.number("bath", "omega_c", 1.0);
      if (!(o.lambda > 0.0)) errors.push_back("bath.lambda must be > 0 (got " + format_number(o.lambda) + ")");
      if (!(o.omega_c > 0.0)) errors.push_back("bath.omega_c must be > 0 (got " + format_number(o.omega_c) + ")");
      bath.kind = o;
      echo.emplace_back("bath.lambda", format_number(o.lambda));
      echo.emplace_back("bath.omega_c", format_number(o.omega_c));
    } else if (r.has("bath", "kind")) {
      errors.push_back("bath.kind: unknown value '" + kind + "' (expected one of: single_mode ohmic)");
    }
    echo.emplace_back("bath.temperature", format_number(bath.temperature));
    cfg.bath = bath;
  }

  // [state]
  if (uses("state")) {
    const StatePreset fallback = polaron ? StatePreset::site_one_occupied : StatePreset::dsz1;
    cfg.state.preset = r.choice("state", "preset", kPresets, fallback);
    const long long seed = r.integer("state", "seed", 1);
    if (seed < 0) errors.push_back("state.seed must be >= 0");
    cfg.state.seed = static_cast<std::uint64_t>(std::max<long long>(seed, 0));
    const bool wants_amplitudes = cfg.state.preset == StatePreset::amplitudes;
    if (wants_amplitudes != r.has("state", "amplitudes"))
      errors.push_back(wants_amplitudes ? "missing required key 'state.amplitudes' for preset = amplitudes"
                                        : "state.amplitudes requires preset = amplitudes");
    if (polaron && (cfg.state.preset == StatePreset::dsz1 || cfg.state.preset == StatePreset::same_sector))
      errors.push_back("state.preset for the polaron experiment must be site_one_occupied, random or amplitudes");
    if (!polaron && cfg.state.preset == StatePreset::site_one_occupied)
      errors.push_back("state.preset = site_one_occupied applies only to the polaron experiment");
    const std::size_t dim = std::size_t{1} << cfg.model.n_sites;
    if (wants_amplitudes && r.has("state", "amplitudes")) {
      cfg.state.amplitudes = parse_amplitudes(*r.raw("state", "amplitudes"), r);
      if (!cfg.state.amplitudes.empty()) {
        double norm = 0.0;
        for (auto a : cfg.state.amplitudes) norm += std::norm(a);
        if (cfg.state.amplitudes.size() != dim)
          errors.push_back("state.amplitudes: expected " + std::to_string(dim) + " entries, got " +
                           std::to_string(cfg.state.amplitudes.size()));
        else if (!(norm > 0.0))
          errors.push_back("state.amplitudes: the state vector is zero");
      }
    }
    echo.emplace_back("state.preset", std::string(name_of(kPresets, cfg.state.preset)));
    if (wants_amplitudes) echo.emplace_back("state.amplitudes", r.raw("state", "amplitudes").value_or(""));
    if (cfg.state.preset == StatePreset::random) echo.emplace_back("state.seed", std::to_string(cfg.state.seed));
  }

  // [times]
  if (uses("times")) {
    r.require("times", "t_end");
    cfg.times.t_end = r.number("times", "t_end", 1.0);
    const long long n = r.integer("times", "n_samples", 101);
    if (!(cfg.times.t_end > 0.0)) errors.push_back("times.t_end must be > 0 (got " + format_number(cfg.times.t_end) + ")");
    if (n < 2 || n > 1000000) errors.push_back("times.n_samples must be in [2, 1000000] (got " + std::to_string(n) + ")");
    cfg.times.n_samples = static_cast<std::size_t>(std::clamp<long long>(n, 2, 1000000));
    echo.emplace_back("times.t_end", format_number(cfg.times.t_end));
    echo.emplace_back("times.n_samples", std::to_string(cfg.times.n_samples));
  }

  if (uses("local")) {
    cfg.local_method = r.choice("local", "method", kLocalMethods, LocalMethod::closed_form);
    cfg.local_dt = r.number("local", "dt", 1e-3);
    if (!(cfg.local_dt > 0.0)) errors.push_back("local.dt must be > 0 (got " + format_number(cfg.local_dt) + ")");
    echo.emplace_back("local.method", std::string(name_of(kLocalMethods, cfg.local_method)));
    if (cfg.local_method == LocalMethod::tcl2) echo.emplace_back("local.dt", format_number(cfg.local_dt));
  }

  if (uses("global")) {
    cfg.global_method = r.choice("global", "method", kGlobalMethods, GlobalMethod::closed_form);
    cfg.kernel_spacing = r.number("global", "kernel_spacing", 0.01);
    if (!(cfg.kernel_spacing > 0.0))
      errors.push_back("global.kernel_spacing must be > 0 (got " + format_number(cfg.kernel_spacing) + ")");
    echo.emplace_back("global.method", std::string(name_of(kGlobalMethods, cfg.global_method)));
    echo.emplace_back("global.kernel_spacing", format_number(cfg.kernel_spacing));
  }

  if (uses("appendix")) {
    cfg.all_pairs = r.boolean("appendix", "all_pairs", false);
    echo.emplace_back("appendix.all_pairs", cfg.all_pairs ? "true" : "false");
  }

  if (uses("polaron")) {
    const double g = cfg.coupling ? cfg.coupling->g : 0.0;
    const long long n_max = r.integer("polaron", "n_max", 0);
    if (r.has("polaron", "n_max") && (n_max < 1 || n_max > 200))
      errors.push_back("polaron.n_max must be in [1, 200] (got " + std::to_string(n_max) + ")");
    cfg.n_max = r.has("polaron", "n_max") ? static_cast<int>(std::clamp<long long>(n_max, 1, 200))
                                          : (g >= 0.0 ? BosonFockSpace::default_n_max(g) : 1);
    cfg.phonon_vacuum = r.choice("polaron", "vacuum", kVacua, PhononVacuum::polaron);
    echo.emplace_back("polaron.n_max", std::to_string(cfg.n_max));
    echo.emplace_back("polaron.vacuum", std::string(name_of(kVacua, cfg.phonon_vacuum)));
  }

  cfg.output_path = r.raw("output", "path").value_or("");
  if (auto v = r.raw("output", "element")) {
    const auto comma = v->find(',');
    long long n = -1, m = -1;
    bool ok = comma != std::string::npos;
    if (ok) {
      const std::string a = trim(v->substr(0, comma)), b = trim(v->substr(comma + 1));
      auto ra = std::from_chars(a.data(), a.data() + a.size(), n);
      auto rb = std::from_chars(b.data(), b.data() + b.size(), m);
      ok = ra.ec == std::errc{} && ra.ptr == a.data() + a.size() && rb.ec == std::errc{} &&
           rb.ptr == b.data() + b.size();
    }
    const long long dim = polaron ? 4 : (1LL << cfg.model.n_sites);
    if (!ok)
      errors.push_back("output.element: expected 'n,m', got '" + *v + "'");
    else if (n < 0 || m < 0 || n >= dim || m >= dim || n == m)
      errors.push_back("output.element: indices must be distinct and in [0, " + std::to_string(dim) + ")");
    else if (cfg.experiment != Experiment::evolve_local && cfg.experiment != Experiment::evolve_global)
      errors.push_back("output.element applies only to evolve-local and evolve-global");
    else
      cfg.element = std::make_pair(static_cast<Index>(n), static_cast<Index>(m));
  }
  if (cfg.element) echo.emplace_back("output.element", std::to_string(cfg.element->first) + "," +
                                                           std::to_string(cfg.element->second));

  if (errors.empty()) result.config = std::move(cfg);
  return result;
}

}  // namespace irhm
