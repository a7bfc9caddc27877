// Copyright 2026 The tvcbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tvcbias/experiment_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tvcbias/error.hpp"

namespace tvc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::kConfig,
              "invalid value '" + value + "' for " + key);
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    bad_value(key, raw);
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, raw);
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) bad_value(key, raw);
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(Conditioning conditioning) {
  return conditioning == Conditioning::kFullPath ? "full-path" : "per-time";
}

void validate(const ExperimentConfig& config) {
  try {
    validate(config.sir);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  if (config.thresholds.empty()) {
    throw Error(ErrorCode::kConfig, "at least one threshold is required");
  }
  for (std::size_t k = 0; k < config.thresholds.size(); ++k) {
    const double t = config.thresholds[k];
    if (!(t > 0.0 && t < 1.0)) {
      throw Error(ErrorCode::kConfig, "thresholds must lie in (0, 1)");
    }
    if (k > 0 && !(t > config.thresholds[k - 1])) {
      throw Error(ErrorCode::kConfig, "thresholds must be strictly increasing");
    }
  }
  if (config.replicates < 1) {
    throw Error(ErrorCode::kConfig, "replicates must be at least 1");
  }
  if (config.output_dir.empty()) {
    throw Error(ErrorCode::kConfig, "output directory must not be empty");
  }
}

void set_config_value(ExperimentConfig& c, const std::string& key,
                      const std::string& value) {
  if (key == "sir.population") {
    c.sir.population = parse_double(key, value);
  } else if (key == "sir.initial_infected") {
    c.sir.initial_infected = parse_double(key, value);
  } else if (key == "sir.beta") {
    c.sir.beta = parse_double(key, value);
  } else if (key == "sir.gamma") {
    c.sir.gamma = parse_double(key, value);
  } else if (key == "sir.lambda") {
    c.sir.lambda = parse_double(key, value);
  } else if (key == "sir.overdispersion") {
    c.sir.overdispersion = parse_double(key, value);
  } else if (key == "sir.horizon") {
    const auto h = parse_u64(key, value);
    if (h > 100'000) bad_value(key, value);
    c.sir.horizon = static_cast<int>(h);
  } else if (key == "experiment.thresholds") {
    c.thresholds = parse_list(key, value);
  } else if (key == "experiment.replicates") {
    c.replicates = parse_u64(key, value);
  } else if (key == "experiment.seed") {
    c.seed = parse_u64(key, value);
  } else if (key == "experiment.out") {
    c.output_dir = trim(value);
  } else if (key == "experiment.conditioning") {
    const std::string v = trim(value);
    if (v == "full-path") {
      c.conditioning = Conditioning::kFullPath;
    } else if (v == "per-time") {
      c.conditioning = Conditioning::kPerTime;
    } else {
      bad_value(key, value);
    }
  } else if (key == "experiment.threads") {
    const auto n = parse_u64(key, value);
    if (n > 4096) bad_value(key, value);
    c.threads = static_cast<unsigned>(n);
  } else {
    throw Error(ErrorCode::kConfig, "unknown config key: " + key);
  }
}

ExperimentConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  ExperimentConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw Error(ErrorCode::kConfig,
                  "config key outside a section: " + section);
    }
    for (const auto& [key, value] : body) {
      set_config_value(config, section + "." + key, value.data());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[sir]\n"
     << "population = " << fmt17(c.sir.population) << '\n'
     << "initial_infected = " << fmt17(c.sir.initial_infected) << '\n'
     << "beta = " << fmt17(c.sir.beta) << '\n'
     << "gamma = " << fmt17(c.sir.gamma) << '\n'
     << "lambda = " << fmt17(c.sir.lambda) << '\n'
     << "overdispersion = " << fmt17(c.sir.overdispersion) << '\n'
     << "horizon = " << c.sir.horizon << "\n\n"
     << "[experiment]\n"
     << "thresholds = ";
  for (std::size_t k = 0; k < c.thresholds.size(); ++k) {
    os << (k ? "," : "") << fmt17(c.thresholds[k]);
  }
  os << '\n'
     << "replicates = " << c.replicates << '\n'
     << "seed = " << c.seed << '\n'
     << "out = " << c.output_dir << '\n'
     << "conditioning = " << to_string(c.conditioning) << '\n'
     << "threads = " << c.threads << '\n';
  return os.str();
}

}  // namespace tvc
