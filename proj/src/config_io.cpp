// Key-value text formats for PvaConfig and ModelSpec.

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "reserve/config_io.hpp"
#include "reserve/errors.hpp"
#include "reserve/models.hpp"
#include "reserve/pva.hpp"

namespace reserve {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_value(const std::string& text, T& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

using Setter = std::function<bool(const std::string&)>;

// Applies each key=value line through `setters`; reports the line number of
// the first problem.
void parse_key_values(std::istream& in, const std::string& source, const std::map<std::string, Setter>& setters) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, "expected key=value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(source, line_no, "unknown key '" + key + "'");
    bool ok = false;
    try {
      ok = it->second(value);
    } catch (const ReserveError& e) {
      throw ConfigError(source, line_no, e.what());
    }
    if (!ok) throw ConfigError(source, line_no, "bad value '" + value + "' for '" + key + "'");
  }
}

template <typename T>
Setter bind(T& field) {
  return [&field](const std::string& v) { return parse_value(v, field); };
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text, std::size_t expected) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!parse_value(trim(item), v)) throw InvalidArgumentError("bad number '" + item + "' in list '" + text + "'");
    out.push_back(v);
  }
  if (expected != 0 && out.size() != expected) {
    throw InvalidArgumentError("expected " + std::to_string(expected) + " comma-separated values, got '" + text + "'");
  }
  return out;
}

PvaConfig parse_pva_config(std::istream& in, const std::string& source) {
  PvaConfig cfg;
  parse_key_values(in, source,
                   {{"horizon", bind(cfg.horizon)},
                    {"replicates", bind(cfg.replicates)},
                    {"growth_rate", bind(cfg.growth_rate)},
                    {"env_sigma", bind(cfg.env_sigma)},
                    {"kappa", bind(cfg.kappa)},
                    {"init_fraction", bind(cfg.init_fraction)},
                    {"dispersal_rate", bind(cfg.dispersal_rate)},
                    {"kernel_scale", bind(cfg.kernel_scale)},
                    {"extinction_threshold", bind(cfg.extinction_threshold)},
                    {"ci_alpha", bind(cfg.ci_alpha)}});
  try {
    cfg.validate();
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(source, 0, e.what());
  }
  return cfg;
}

PvaConfig load_pva_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open PVA config '" + path + "'");
  return parse_pva_config(in, path);
}

std::string to_text(const PvaConfig& cfg) {
  std::ostringstream out;
  out << "horizon=" << cfg.horizon << '\n'
      << "replicates=" << cfg.replicates << '\n'
      << "growth_rate=" << format_number(cfg.growth_rate) << '\n'
      << "env_sigma=" << format_number(cfg.env_sigma) << '\n'
      << "kappa=" << format_number(cfg.kappa) << '\n'
      << "init_fraction=" << format_number(cfg.init_fraction) << '\n'
      << "dispersal_rate=" << format_number(cfg.dispersal_rate) << '\n'
      << "kernel_scale=" << format_number(cfg.kernel_scale) << '\n'
      << "extinction_threshold=" << cfg.extinction_threshold << '\n'
      << "ci_alpha=" << format_number(cfg.ci_alpha) << '\n';
  return out.str();
}

ModelSpec parse_model_spec(std::istream& in, const std::string& source) {
  ModelSpec spec;
  parse_key_values(in, source,
                   {{"model",
                     [&](const std::string& v) {
                       spec.kind = model_kind_from_string(v);
                       return true;
                     }},
                    {"rho",
                     [&](const std::string& v) {
                       const auto rho = parse_number_list(v, 3);
                       spec.constrained = ConstrainedSpec{rho[0], rho[1], rho[2]};
                       spec.constrained.validate();
                       return true;
                     }},
                    {"lambda", [&](const std::string& v) {
                       const auto l = parse_number_list(v, 4);
                       spec.multi.lambda = {l[0], l[1], l[2], l[3]};
                       spec.multi.validate();
                       return true;
                     }}});
  return spec;
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model spec '" + path.string() + "'");
  return parse_model_spec(in, path.string());
}

}  // namespace reserve
