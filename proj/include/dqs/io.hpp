// Copyright 2026 The dqsim Authors
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

#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "dqs/experiments.hpp"
#include "dqs/version.hpp"

namespace dqs {

// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline std::string iso8601_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

// Comma-separated, LF line endings, mandatory header row.
inline void write_csv(std::ostream& os, const SweepTable& table) {
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    os << (c == 0 ? "" : ",") << table.names[c];
  }
  os << "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c != 0) {
        os << ",";
      }
      if (const auto* nums = std::get_if<std::vector<double>>(&table.columns[c])) {
        os << format_double((*nums)[r]);
      } else {
        os << std::get<std::vector<std::string>>(table.columns[c])[r];
      }
    }
    os << "\n";
  }
}

inline void to_json(nlohmann::json& j, const EstimationResult& r) {
  j = nlohmann::json{{"mean", r.mean},     {"std", r.stddev},       {"analytic", r.analytic},
                     {"z_score", r.z_score}, {"alpha_bar", r.true_value}, {"trials", r.trials},
                     {"seed", r.seed}};
}

inline nlohmann::json metadata_json(const SweepMetadata& metadata) {
  nlohmann::json j;
  j["seed"] = metadata.seed;
  j["trials"] = metadata.trials;
  j["timestamp"] = metadata.timestamp;
  j["tool_version"] = kVersion;
  for (const auto& [key, value] : metadata.params) {
    j["params"][key] = value;
  }
  return j;
}

inline nlohmann::json table_json(const SweepTable& table) {
  nlohmann::json cols;
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    if (const auto* nums = std::get_if<std::vector<double>>(&table.columns[c])) {
      cols[table.names[c]] = *nums;
    } else {
      cols[table.names[c]] = std::get<std::vector<std::string>>(table.columns[c]);
    }
  }
  nlohmann::json j;
  j["columns"] = cols;
  j["metadata"] = metadata_json(table.metadata);
  return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  os << content;
}

}  // namespace dqs
