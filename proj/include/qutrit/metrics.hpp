// Copyright 2026 The qutrit-qae Authors
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

// ROC / AUC and fidelity histograms. Signal is the positive class and a
// higher score means more anomalous.

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qutrit/qae.hpp"
#include "qutrit/tensor.hpp"

namespace qutrit {

namespace detail {

inline void check_classes(const std::vector<double>& bg, const std::vector<double>& sig) {
  if (bg.empty() || sig.empty()) throw InvalidArgument("AUC needs at least one background and one signal score");
  for (const auto* v : {&bg, &sig})
    for (double x : *v)
      if (std::isnan(x)) throw InvalidArgument("AUC: NaN score");
}

}  // namespace detail

/// P(signal > background) + P(tie) / 2, via rank sums in O(n log n).
inline double auc(const std::vector<double>& background, const std::vector<double>& signal) {
  detail::check_classes(background, signal);
  std::vector<std::pair<double, int>> all;
  all.reserve(background.size() + signal.size());
  for (double x : background) all.emplace_back(x, 0);
  for (double x : signal) all.emplace_back(x, 1);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  // Count, for every signal score, the background below it and ties.
  double wins = 0.0;
  double bg_below = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    double nb = 0.0, ns = 0.0;
    while (j < all.size() && all[j].first == all[i].first) {
      (all[j].second ? ns : nb) += 1.0;
      ++j;
    }
    wins += ns * (bg_below + 0.5 * nb);
    bg_below += nb;
    i = j;
  }
  return wins / (static_cast<double>(background.size()) * static_cast<double>(signal.size()));
}

struct RocCurve {
  std::vector<double> thresholds;  // descending; score >= threshold is called signal
  std::vector<double> tpr;
  std::vector<double> fpr;
  double auc = 0.0;
};

inline double trapezoid_area(const std::vector<double>& fpr, const std::vector<double>& tpr) {
  double a = 0.0;
  for (std::size_t i = 1; i < fpr.size(); ++i) a += (fpr[i] - fpr[i - 1]) * (tpr[i] + tpr[i - 1]) / 2.0;
  return a;
}

/// One point per distinct score. points > 0 keeps at most that many interior
/// points, evenly spaced; endpoints (0,0) and (1,1) are always present. The
/// auc field is the trapezoidal area of the stored points.
inline RocCurve roc(const std::vector<double>& background, const std::vector<double>& signal, std::size_t points = 0) {
  detail::check_classes(background, signal);
  std::vector<std::pair<double, int>> all;
  for (double x : background) all.emplace_back(x, 0);
  for (double x : signal) all.emplace_back(x, 1);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const double nb = static_cast<double>(background.size()), ns = static_cast<double>(signal.size());

  RocCurve full;
  full.thresholds.push_back(std::numeric_limits<double>::infinity());
  full.tpr.push_back(0.0);
  full.fpr.push_back(0.0);
  double tp = 0.0, fp = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) {
      (all[j].second ? tp : fp) += 1.0;
      ++j;
    }
    full.thresholds.push_back(all[i].first);
    full.tpr.push_back(tp / ns);
    full.fpr.push_back(fp / nb);
    i = j;
  }
  if (points > 0 && full.thresholds.size() > points + 2) {
    RocCurve sub;
    const std::size_t last = full.thresholds.size() - 1;
    for (std::size_t k = 0; k <= points + 1; ++k) {
      const std::size_t idx = (k * last) / (points + 1);
      if (!sub.thresholds.empty() && full.thresholds[idx] == sub.thresholds.back()) continue;
      sub.thresholds.push_back(full.thresholds[idx]);
      sub.tpr.push_back(full.tpr[idx]);
      sub.fpr.push_back(full.fpr[idx]);
    }
    full = std::move(sub);
  }
  full.auc = trapezoid_area(full.fpr, full.tpr);
  return full;
}

struct Histogram {
  std::vector<double> bin_edges;
  std::vector<std::size_t> counts;
  std::string class_label;

  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

/// Equal-width bins on [0, 1]; the last bin is closed on the right.
inline Histogram histogram01(const std::vector<double>& values, std::size_t bins, std::string label = {}) {
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  Histogram h;
  h.class_label = std::move(label);
  h.counts.assign(bins, 0);
  for (std::size_t i = 0; i <= bins; ++i) h.bin_edges.push_back(static_cast<double>(i) / static_cast<double>(bins));
  for (double v : values) {
    const double c = std::clamp(v, 0.0, 1.0);
    auto k = static_cast<std::size_t>(c * static_cast<double>(bins));
    h.counts[std::min(k, bins - 1)] += 1;
  }
  return h;
}

/// One histogram per label, ordered by label.
inline std::vector<Histogram> fidelity_histogram(const std::vector<FidelityRecord>& records, std::size_t bins) {
  std::map<std::string, std::vector<double>> by_label;
  for (const auto& r : records) by_label[r.label].push_back(r.fidelity);
  std::vector<Histogram> out;
  for (auto& [label, v] : by_label) out.push_back(histogram01(v, bins, label));
  return out;
}

// CSV exports ------------------------------------------------------------------------

/// Columns: class_label,bin_low,bin_high,count
inline void write_histogram_csv(std::ostream& out, const std::vector<Histogram>& hs) {
  out << "class_label,bin_low,bin_high,count\n";
  for (const auto& h : hs)
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      out << h.class_label << ',' << detail::format_double(h.bin_edges[i]) << ','
          << detail::format_double(h.bin_edges[i + 1]) << ',' << h.counts[i] << '\n';
    }
}

/// Columns: signal_label,threshold,fpr,tpr
inline void write_roc_csv(std::ostream& out, const std::vector<std::pair<std::string, RocCurve>>& curves) {
  out << "signal_label,threshold,fpr,tpr\n";
  for (const auto& [label, c] : curves)
    for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
      out << label << ',' << detail::format_double(c.thresholds[i]) << ',' << detail::format_double(c.fpr[i]) << ','
          << detail::format_double(c.tpr[i]) << '\n';
    }
}

/// Columns: event_id,fidelity,anomaly_score,label
inline void write_scores_csv(std::ostream& out, const std::vector<FidelityRecord>& records) {
  out << "event_id,fidelity,anomaly_score,label\n";
  for (const auto& r : records) {
    out << r.event_id << ',' << detail::format_double(r.fidelity) << ',' << detail::format_double(r.anomaly_score)
        << ',' << r.label << '\n';
  }
}

struct ScoresLoad {
  std::vector<FidelityRecord> records;
  std::vector<RowError> rejects;
};

inline ScoresLoad read_scores_csv(std::istream& in) {
  ScoresLoad out;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split_csv(line);
    if (!header) {
      if (f.size() != 4 || detail::trim(f[0]) != "event_id" || detail::trim(f[1]) != "fidelity" ||
          detail::trim(f[2]) != "anomaly_score" || detail::trim(f[3]) != "label") {
        throw DataError("scores CSV: header must be event_id,fidelity,anomaly_score,label");
      }
      header = true;
      continue;
    }
    try {
      if (f.size() != 4) throw InvalidArgument("expected 4 fields, found " + std::to_string(f.size()));
      FidelityRecord r;
      r.event_id = detail::trim(f[0]);
      r.fidelity = detail::parse_double(f[1], "fidelity");
      r.anomaly_score = detail::parse_double(f[2], "anomaly_score");
      r.label = detail::trim(f[3]);
      out.records.push_back(std::move(r));
    } catch (const InvalidArgument& e) {
      out.rejects.push_back({lineno, e.what()});
    }
  }
  return out;
}

struct AucEntry {
  std::string signal_label;
  std::size_t n_signal = 0;
  double auc = 0.0;
};

/// AUC of every non-background label against the background, ordered by label.
inline std::vector<AucEntry> auc_table(const std::vector<FidelityRecord>& records,
                                       const std::string& background = kBackgroundLabel) {
  std::map<std::string, std::vector<double>> by_label;
  for (const auto& r : records) by_label[r.label].push_back(r.anomaly_score);
  if (by_label.size() < 2) throw InvalidArgument("evaluation needs at least two classes");
  auto bg = by_label.find(background);
  if (bg == by_label.end()) throw InvalidArgument("no '" + background + "' events in scores");
  std::vector<AucEntry> out;
  for (const auto& [label, v] : by_label) {
    if (label == background) continue;
    out.push_back({label, v.size(), auc(bg->second, v)});
  }
  return out;
}

}  // namespace qutrit
