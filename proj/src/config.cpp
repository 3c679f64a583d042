#include "kmslab/config.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kmslab/csv.hpp"

namespace kmslab::cfg {

namespace pt = boost::property_tree;

bool is_experiment(const std::string& name) {
  for (const char* e : kExperimentNames)
    if (name == e) return true;
  return false;
}

double parse_real(const std::string& text) {
  const std::string t = boost::algorithm::trim_copy(text);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + t + "'");
  }
  if (used != t.size() || !std::isfinite(x)) throw ConfigError("not a finite number: '" + t + "'");
  return x;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_real(item));
    if (parts.size() != 3) throw ConfigError("range needs start:stop:step: '" + text + "'");
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0.0) || stop < start) throw ConfigError("range needs step > 0 and stop >= start: '" + text + "'");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    if (n > 1000000) throw ConfigError("range too long: '" + text + "'");
    for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

ExperimentConfig parse_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  ExperimentConfig cfg;
  for (const auto& [key, node] : tree) {
    if (!node.empty()) {
      if (key == "parameters") {
        for (const auto& [k, v] : node) cfg.parameters[k] = v.data();
      } else if (key == "coupling") {
        for (const auto& [k, v] : node) cfg.coupling.emplace_back(k, v.data());
      } else {
        throw ConfigError("unknown section [" + key + "]");
      }
      continue;
    }
    const std::string value = node.data();
    if (key == "experiment") {
      if (!is_experiment(value)) throw ConfigError("unknown experiment '" + value + "'");
      cfg.experiment = value;
    } else if (key == "seed") {
      try {
        std::size_t used = 0;
        cfg.seed = std::stoull(value, &used);
        if (used != value.size() || value.front() == '-') throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError("seed must be a nonnegative integer: '" + value + "'");
      }
    } else if (key == "output") {
      cfg.output_path = value;
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return parse_config(in);
}

std::optional<std::string> Parameters::take(const std::string& key) {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double Parameters::real(const std::string& key, double fallback) {
  const auto v = take(key);
  const double x = v ? parse_real(*v) : fallback;
  resolved_[key] = format_double(x);
  return x;
}

long Parameters::integer(const std::string& key, long fallback) {
  const auto v = take(key);
  long x = fallback;
  if (v) {
    const double d = parse_real(*v);
    if (d != std::floor(d) || std::abs(d) > 1e15) throw ConfigError(key + " must be an integer");
    x = static_cast<long>(d);
  }
  resolved_[key] = std::to_string(x);
  return x;
}

std::string Parameters::text(const std::string& key, const std::string& fallback) {
  const auto v = take(key);
  const std::string x = v ? *v : fallback;
  resolved_[key] = x;
  return x;
}

std::optional<std::string> Parameters::optional_text(const std::string& key) {
  const auto v = take(key);
  if (v) resolved_[key] = *v;
  return v;
}

std::optional<double> Parameters::optional_real(const std::string& key) {
  const auto v = take(key);
  if (!v) return std::nullopt;
  const double x = parse_real(*v);
  resolved_[key] = format_double(x);
  return x;
}

std::vector<double> Parameters::list(const std::string& key, std::vector<double> fallback) {
  const auto v = take(key);
  auto x = v ? parse_list(*v) : std::move(fallback);
  std::string joined;
  for (std::size_t i = 0; i < x.size(); ++i) joined += (i ? "," : "") + format_double(x[i]);
  resolved_[key] = joined;
  return x;
}

void Parameters::finish() const {
  for (const auto& [k, v] : values_)
    if (!used_.contains(k)) throw ConfigError("unknown parameter '" + k + "'");
}

}  // namespace kmslab::cfg
