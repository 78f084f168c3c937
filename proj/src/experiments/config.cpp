#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "uwoc/errors.hpp"
#include "uwoc/experiments.hpp"

namespace uwoc::experiments {

namespace pt = boost::property_tree;

std::optional<PointingChoice> pointing_preset(const std::string& name) {
  static const std::map<std::string, std::pair<double, double>> presets{
      {"significant", {0.8532, 0.8863}},
      {"strong", {0.3900, 0.5718}},
      {"negligible", {1.0, 8.0}},
  };
  const auto it = presets.find(name);
  if (it == presets.end()) return std::nullopt;
  return PointingChoice{name, it->second.first, it->second.second};
}

std::string to_string(SchemeChoice s) {
  switch (s) {
    case SchemeChoice::mrc: return "mrc";
    case SchemeChoice::sc: return "sc";
    case SchemeChoice::both: return "both";
  }
  return "?";
}

std::vector<double> ExperimentConfig::sweep() const {
  std::vector<double> pts;
  // Integer step count keeps the grid free of accumulated rounding.
  const long steps = std::lround(std::floor((pt_stop - pt_start) / pt_step + 1e-9));
  for (long i = 0; i <= steps; ++i) pts.push_back(pt_start + i * pt_step);
  return pts;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError(field + ": " + why);
  };
  auto positive = [&](const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(field, "must be finite and > 0");
  };
  positive("link.sigma_w2", sigma_w2);
  if (!(l >= 0.0) || !std::isfinite(l)) fail("link.l", "must be >= 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail("link.alpha", "must be >= 0");
  if (!std::isfinite(pt_start) || !std::isfinite(pt_stop) || !(pt_start < pt_stop))
    fail("link.pt_start", "sweep start must be below pt_stop");
  positive("link.pt_step", pt_step);
  if (sweep().size() > 10000) fail("link.pt_step", "sweep has more than 10000 points");
  if (!(omega > 0.0 && omega < 1.0)) fail("egg.omega", "must lie in (0, 1)");
  positive("egg.lambda", lambda);
  positive("egg.a", a);
  positive("egg.b", b);
  positive("egg.c", c);
  if (!(pointing.a0 > 0.0 && pointing.a0 <= 1.0)) fail("pointing.a0", "must lie in (0, 1]");
  positive("pointing.rho", pointing.rho);
  if (!std::isfinite(gamma_th_db)) fail("threshold.gamma_th_db", "must be finite");
  if (n_list.empty()) fail("receiver.n_list", "at least one aperture count required");
  for (int n : n_list) {
    if (n < 1 || n > 16) fail("receiver.n_list", "aperture counts must lie in [1, 16]");
  }
  if (trials < 1000) fail("montecarlo.trials", "must be >= 1000");
  if (workers < 1 || workers > 256) fail("montecarlo.workers", "must lie in [1, 256]");
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "fig2") {
    cfg.n_list = {1, 2, 3, 4};
  } else if (name == "fig3a") {
  } else if (name == "fig3b") {
    cfg.pointing = *pointing_preset("negligible");
  } else if (name == "fig4") {
    cfg.scheme = SchemeChoice::sc;
    cfg.n_list = {2, 3, 4};
    cfg.pointing = *pointing_preset("strong");
  } else {
    throw ConfigError("preset: unknown preset '" + name + "' (fig2 | fig3a | fig3b | fig4)");
  }
  return cfg;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

template <typename T>
T parse_number(const std::string& field, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError(field + ": cannot parse '" + text + "' as a number");
  }
  return value;
}

std::vector<int> parse_int_list(const std::string& field, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_number<int>(field, item));
  }
  return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"link", {"sigma_w2", "l", "alpha", "pt_start", "pt_stop", "pt_step"}},
      {"egg", {"omega", "lambda", "a", "b", "c"}},
      {"pointing", {"preset", "a0", "rho"}},
      {"threshold", {"gamma_th_db"}},
      {"receiver", {"scheme", "n_list", "variant", "prefactor"}},
      {"montecarlo", {"trials", "seed", "workers"}},
  };
  return keys;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError(section + ": unknown section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(section + "." + key + ": unknown key");
    }
  }

  ExperimentConfig cfg;
  auto get = [&](const std::string& path, auto& target) {
    const auto text = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'));
    if (!text) return;
    using T = std::decay_t<decltype(target)>;
    target = parse_number<T>(path, *text);
  };
  get("link.sigma_w2", cfg.sigma_w2);
  get("link.l", cfg.l);
  get("link.alpha", cfg.alpha);
  get("link.pt_start", cfg.pt_start);
  get("link.pt_stop", cfg.pt_stop);
  get("link.pt_step", cfg.pt_step);
  get("egg.omega", cfg.omega);
  get("egg.lambda", cfg.lambda);
  get("egg.a", cfg.a);
  get("egg.b", cfg.b);
  get("egg.c", cfg.c);
  get("threshold.gamma_th_db", cfg.gamma_th_db);
  get("montecarlo.trials", cfg.trials);
  get("montecarlo.seed", cfg.seed);
  get("montecarlo.workers", cfg.workers);

  if (auto preset = tree.get_optional<std::string>("pointing.preset")) {
    auto choice = pointing_preset(*preset);
    if (!choice) {
      throw ConfigError("pointing.preset: unknown preset '" + *preset +
                        "' (significant | strong | negligible)");
    }
    if (tree.get_optional<std::string>("pointing.a0") ||
        tree.get_optional<std::string>("pointing.rho")) {
      throw ConfigError("pointing.preset: give either a preset or explicit a0/rho, not both");
    }
    cfg.pointing = *choice;
  } else if (tree.get_child_optional("pointing")) {
    cfg.pointing.preset.clear();
    get("pointing.a0", cfg.pointing.a0);
    get("pointing.rho", cfg.pointing.rho);
  }

  if (auto scheme = tree.get_optional<std::string>("receiver.scheme")) {
    if (*scheme == "mrc") cfg.scheme = SchemeChoice::mrc;
    else if (*scheme == "sc") cfg.scheme = SchemeChoice::sc;
    else if (*scheme == "both") cfg.scheme = SchemeChoice::both;
    else throw ConfigError("receiver.scheme: expected mrc | sc | both, got '" + *scheme + "'");
  }
  if (auto list = tree.get_optional<std::string>("receiver.n_list")) {
    cfg.n_list = parse_int_list("receiver.n_list", *list);
  }
  try {
    if (auto v = tree.get_optional<std::string>("receiver.variant"))
      cfg.conv.variant = parse_mrc_variant(*v);
    if (auto v = tree.get_optional<std::string>("receiver.prefactor"))
      cfg.conv.prefactor = parse_mrc_prefactor(*v);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("receiver: ") + e.what());
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  auto kv = [&](const char* key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  out << "[link]\n";
  kv("sigma_w2", format_double(cfg.sigma_w2));
  kv("l", format_double(cfg.l));
  kv("alpha", format_double(cfg.alpha));
  kv("pt_start", format_double(cfg.pt_start));
  kv("pt_stop", format_double(cfg.pt_stop));
  kv("pt_step", format_double(cfg.pt_step));
  out << "\n[egg]\n";
  kv("omega", format_double(cfg.omega));
  kv("lambda", format_double(cfg.lambda));
  kv("a", format_double(cfg.a));
  kv("b", format_double(cfg.b));
  kv("c", format_double(cfg.c));
  out << "\n[pointing]\n";
  if (!cfg.pointing.preset.empty()) {
    kv("preset", cfg.pointing.preset);
  } else {
    kv("a0", format_double(cfg.pointing.a0));
    kv("rho", format_double(cfg.pointing.rho));
  }
  out << "\n[threshold]\n";
  kv("gamma_th_db", format_double(cfg.gamma_th_db));
  out << "\n[receiver]\n";
  kv("scheme", to_string(cfg.scheme));
  std::string list;
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    list += (i ? "," : "") + std::to_string(cfg.n_list[i]);
  }
  kv("n_list", list);
  kv("variant", to_string(cfg.conv.variant));
  kv("prefactor", to_string(cfg.conv.prefactor));
  out << "\n[montecarlo]\n";
  kv("trials", std::to_string(cfg.trials));
  kv("seed", std::to_string(cfg.seed));
  kv("workers", std::to_string(cfg.workers));
  return out.str();
}

}  // namespace uwoc::experiments
