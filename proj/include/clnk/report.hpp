// Copyright 2026 The clnk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "clnk/error.hpp"
#include "clnk/metrics.hpp"
#include "clnk/text.hpp"

namespace clnk {

enum class ReportFormat { Table, Json };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "table") return ReportFormat::Table;
  if (s == "json") return ReportFormat::Json;
  throw InputError("unknown report format '" + std::string(s) + "' (expected table or json)");
}

namespace detail {

inline std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}
inline std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace detail

/// Fixed-width comparison table. The first four metric columns are
/// Precision, Recall, F1-Score and AUC; the remaining ones give the decision
/// threshold and the best-F1 operating point.
inline std::string format_table(std::span<const EvalReport> reports) {
  std::size_t name_width = 6;
  for (const EvalReport& r : reports) name_width = std::max(name_width, r.display_name.size());
  name_width += 2;
  const std::size_t col = 10;
  static constexpr const char* kHeaders[] = {"Precision", "Recall",  "F1-Score",
                                             "AUC",       "Thresh.", "Best-F1",
                                             "Best-Thr."};
  std::string out;
  if (!reports.empty()) {
    out += "# seed=" + std::to_string(reports.front().seed) + '\n';
  }
  out += detail::pad_right("Method", name_width);
  for (const char* h : kHeaders) out += detail::pad_left(h, col);
  out += '\n';
  for (const EvalReport& r : reports) {
    out += detail::pad_right(r.display_name, name_width);
    for (double v : {r.precision, r.recall, r.f1, r.auc, r.threshold, r.best_f1, r.best_threshold}) {
      out += detail::pad_left(text::format_fixed(v, 4), col);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["name"] = r.display_name;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["auc"] = r.auc;
  j["threshold"] = r.threshold;
  j["precision_undefined"] = r.precision_undefined;
  j["tp"] = r.counts.tp;
  j["fp"] = r.counts.fp;
  j["tn"] = r.counts.tn;
  j["fn"] = r.counts.fn;
  j["best_threshold"] = r.best_threshold;
  j["best_f1"] = r.best_f1;
  j["seed"] = r.seed;
  j["config_hash"] = r.config_hash;
  return j;
}

inline std::string format_json(std::span<const EvalReport> reports) {
  nlohmann::ordered_json doc;
  doc["format"] = "clnk-report-1";
  doc["reports"] = nlohmann::ordered_json::array();
  for (const EvalReport& r : reports) doc["reports"].push_back(report_to_json(r));
  return doc.dump(2) + '\n';
}

inline std::string format_reports(std::span<const EvalReport> reports, ReportFormat f) {
  return f == ReportFormat::Table ? format_table(reports) : format_json(reports);
}

inline std::vector<EvalReport> parse_json_reports(const std::string& content) {
  std::vector<EvalReport> out;
  try {
    const auto doc = nlohmann::json::parse(content);
    if (doc.at("format") != "clnk-report-1") throw InputError("unsupported report format");
    for (const auto& j : doc.at("reports")) {
      EvalReport r;
      r.method = j.at("method").get<std::string>();
      r.display_name = j.at("name").get<std::string>();
      r.precision = j.at("precision").get<double>();
      r.recall = j.at("recall").get<double>();
      r.f1 = j.at("f1").get<double>();
      r.auc = j.at("auc").get<double>();
      r.threshold = j.at("threshold").get<double>();
      r.precision_undefined = j.at("precision_undefined").get<bool>();
      r.counts = {j.at("tp").get<std::uint64_t>(), j.at("fp").get<std::uint64_t>(),
                  j.at("tn").get<std::uint64_t>(), j.at("fn").get<std::uint64_t>()};
      r.best_threshold = j.at("best_threshold").get<double>();
      r.best_f1 = j.at("best_f1").get<double>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.config_hash = j.at("config_hash").get<std::uint64_t>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  return out;
}

}  // namespace clnk
