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
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "clnk/error.hpp"

namespace clnk {

struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct BinaryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Set when nothing was predicted positive; precision is then reported 0.
  bool precision_undefined = false;
  ConfusionCounts counts;
};

namespace detail {

inline void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InputError(std::string(what) + ": " + std::to_string(a) +
                     " scores but " + std::to_string(b) + " labels");
  }
}

inline void check_both_classes(std::span<const int> labels, const char* what) {
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos == 0 || static_cast<std::size_t>(pos) == labels.size()) {
    throw InputError(std::string(what) + " needs both positive and negative labels");
  }
}

inline BinaryMetrics metrics_from_counts(const ConfusionCounts& c) {
  BinaryMetrics m;
  m.counts = c;
  if (c.tp + c.fp == 0) {
    m.precision_undefined = true;
  } else {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (c.tp + c.fn > 0) {
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  if (m.precision + m.recall > 0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

}  // namespace detail

/// Thresholded metrics. A score equal to the threshold counts as positive.
inline BinaryMetrics binary_metrics(std::span<const double> probs,
                                    std::span<const int> labels,
                                    double threshold) {
  detail::check_lengths(probs.size(), labels.size(), "binary_metrics");
  if (probs.empty()) throw InputError("binary_metrics: no samples");
  ConfusionCounts c;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const bool pred = probs[k] >= threshold;
    const bool truth = labels[k] == 1;
    if (pred && truth) ++c.tp;
    else if (pred) ++c.fp;
    else if (truth) ++c.fn;
    else ++c.tn;
  }
  return detail::metrics_from_counts(c);
}

/// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
/// (positive, negative) pairs where the positive scores higher, ties worth
/// one half. The numerator is accumulated in half-units as an integer so the
/// result is exact for any input order.
inline double auc(std::span<const double> scores, std::span<const int> labels) {
  detail::check_lengths(scores.size(), labels.size(), "auc");
  detail::check_both_classes(labels, "auc");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::uint64_t neg_below = 0, pos_total = 0, twice_wins = 0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    std::uint64_t pos = 0, neg = 0;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) {
      (labels[order[end]] == 1 ? pos : neg) += 1;
      ++end;
    }
    twice_wins += pos * (2 * neg_below + neg);
    neg_below += neg;
    pos_total += pos;
    start = end;
  }
  const std::uint64_t neg_total = neg_below;
  return static_cast<double>(twice_wins) /
         (2.0 * static_cast<double>(pos_total) * static_cast<double>(neg_total));
}

struct ThresholdChoice {
  double threshold = 0.0;
  double f1 = 0.0;
};

/// Scans the smallest score and every midpoint between consecutive distinct
/// scores; returns the F1 maximizer, lowest threshold on ties.
inline ThresholdChoice best_f1_threshold(std::span<const double> probs,
                                         std::span<const int> labels) {
  detail::check_lengths(probs.size(), labels.size(), "best_f1_threshold");
  detail::check_both_classes(labels, "best_f1_threshold");

  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });
  const std::uint64_t pos_total =
      static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), 1));

  // Walking ascending, `pos_below`/`neg_below` count scores strictly under
  // the current candidate; everything at or above is predicted positive.
  std::uint64_t pos_below = 0, neg_below = 0;
  std::uint64_t best_num = 0, best_den = 1;
  double best_threshold = probs[order.front()];
  double candidate = best_threshold;
  bool have_best = false;
  for (std::size_t start = 0; start < order.size();) {
    const std::uint64_t tp = pos_total - pos_below;
    const std::uint64_t predicted = order.size() - (pos_below + neg_below);
    // F1 = 2TP / (2TP + FP + FN) = 2TP / (predicted + positives).
    const std::uint64_t num = 2 * tp;
    const std::uint64_t den = predicted + pos_total;
    if (!have_best || num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_threshold = candidate;
      have_best = true;
    }
    std::size_t end = start;
    const double value = probs[order[start]];
    while (end < order.size() && probs[order[end]] == value) {
      (labels[order[end]] == 1 ? pos_below : neg_below) += 1;
      ++end;
    }
    if (end == order.size()) break;
    const double next = probs[order[end]];
    candidate = value + (next - value) / 2.0;
    if (!(candidate > value)) candidate = next;
    start = end;
  }
  const BinaryMetrics m = binary_metrics(probs, labels, best_threshold);
  return {best_threshold, m.f1};
}

/// One row of a benchmark comparison.
struct EvalReport {
  std::string method;
  std::string display_name;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  double threshold = 0.5;
  bool precision_undefined = false;
  ConfusionCounts counts;
  double best_threshold = 0.0;
  double best_f1 = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

}  // namespace clnk
