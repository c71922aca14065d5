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

// Jet-constituent records, angle feature maps and data I/O.
//
// Per constituent, with r = pt / jet_pt and scale factor f:
//   theta = pi/2 + f r delta_eta          (clamped to [0, pi])
//   phi   = f r delta_phi                 (wrapped to [0, 2 pi))
//   sigma = f r (m - jet_mass)   eps  = f r E
//   rho0  = f r d0               rhoz = f r dz        (each wrapped)
//
// Impact parameter names follow the source model: d0 is called longitudinal
// and dz transverse, the reverse of the usual collider convention.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "qutrit/majorana.hpp"
#include "qutrit/tensor.hpp"

namespace qutrit {

/// Unreadable data files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JetConstituent {
  double pt = 0.0;         // GeV
  double delta_eta = 0.0;  // relative to the jet axis
  double delta_phi = 0.0;  // radians, relative to the jet axis, in (-pi, pi]
  double energy = 0.0;     // GeV
  double d0 = 0.0;         // mm
  double dz = 0.0;         // mm
  /// Constituent mass if the source provides one; treated as 0 otherwise.
  std::optional<double> mass;

  friend bool operator==(const JetConstituent&, const JetConstituent&) = default;
};

inline const std::string kBackgroundLabel = "background";

struct JetEvent {
  std::string id;
  std::vector<JetConstituent> constituents;  // descending pt
  double jet_pt = 0.0;
  double jet_mass = 0.0;
  double jet_energy = 0.0;
  /// Evaluation-only class tag; never read by training or inference.
  std::string label = kBackgroundLabel;

  friend bool operator==(const JetEvent&, const JetEvent&) = default;
};

enum class FeatureMode { A, B };

inline FeatureMode parse_mode(std::string_view s) {
  if (s == "A" || s == "a") return FeatureMode::A;
  if (s == "B" || s == "b") return FeatureMode::B;
  throw InvalidArgument("feature mode must be A or B, got '" + std::string(s) + "'");
}

inline const char* mode_name(FeatureMode m) { return m == FeatureMode::A ? "A" : "B"; }

inline void validate(const JetConstituent& c) {
  for (double v : {c.pt, c.delta_eta, c.delta_phi, c.energy, c.d0, c.dz}) {
    if (!std::isfinite(v)) throw InvalidArgument("constituent has a non-finite field");
  }
  if (c.mass && !std::isfinite(*c.mass)) throw InvalidArgument("constituent mass is non-finite");
  if (c.pt < 0.0) throw InvalidArgument("constituent pt must be >= 0");
  if (c.energy < 0.0) throw InvalidArgument("constituent energy must be >= 0");
}

inline void validate(const JetEvent& j) {
  if (j.constituents.empty()) throw InvalidArgument("jet '" + j.id + "' has no constituents");
  if (!(j.jet_pt > 0.0) || !std::isfinite(j.jet_pt)) throw InvalidArgument("jet '" + j.id + "': jet_pt must be > 0");
  if (!std::isfinite(j.jet_mass) || !std::isfinite(j.jet_energy)) {
    throw InvalidArgument("jet '" + j.id + "': non-finite jet mass or energy");
  }
  for (const auto& c : j.constituents) validate(c);
}

inline void sort_constituents(JetEvent& j) {
  std::stable_sort(j.constituents.begin(), j.constituents.end(),
                   [](const JetConstituent& a, const JetConstituent& b) { return a.pt > b.pt; });
}

// Feature maps -----------------------------------------------------------------

inline constexpr double kDefaultScaleF = kPi;

struct BaseAngles {
  double theta = 0.0;
  double phi = 0.0;
};

inline double pt_ratio(const JetConstituent& c, const JetEvent& jet) {
  if (!(jet.jet_pt > 0.0)) throw InvalidArgument("jet_pt must be > 0");
  return c.pt / jet.jet_pt;
}

inline BaseAngles base_angles(const JetConstituent& c, const JetEvent& jet, double f) {
  const double r = pt_ratio(c, jet);
  return {clamp_theta(f * r * c.delta_eta + kPi / 2.0), wrap_two_pi(f * r * c.delta_phi)};
}

struct ExtendedFeatures {
  double sigma_m = 0.0;  // mass term
  double eps = 0.0;      // energy term
  double rho0 = 0.0;     // d0 term
  double rhoz = 0.0;     // dz term
};

/// The four products before wrapping.
inline ExtendedFeatures extended_features_raw(const JetConstituent& c, const JetEvent& jet, double f) {
  const double k = f * pt_ratio(c, jet);
  return {k * (c.mass.value_or(0.0) - jet.jet_mass), k * c.energy, k * c.d0, k * c.dz};
}

inline ExtendedFeatures extended_features(const JetConstituent& c, const JetEvent& jet, double f) {
  const auto raw = extended_features_raw(c, jet, f);
  return {wrap_two_pi(raw.sigma_m), wrap_two_pi(raw.eps), wrap_two_pi(raw.rho0), wrap_two_pi(raw.rhoz)};
}

/// One Majorana tuple per leading constituent, zero-padded to max_particles.
/// theta1 is the eta angle; theta2 is the phi angle folded onto [0, pi]
/// around the equator so that small azimuthal offsets of either sign stay
/// close together.
inline std::vector<MajoranaAngles> encode_event(const JetEvent& jet, FeatureMode mode, double f,
                                                std::size_t max_particles) {
  if (max_particles == 0) throw InvalidArgument("encode_event: max_particles must be >= 1");
  if (jet.constituents.empty()) throw InvalidArgument("encode_event: jet '" + jet.id + "' has no constituents");
  if (!(jet.jet_pt > 0.0)) throw InvalidArgument("encode_event: jet_pt must be > 0");
  std::vector<MajoranaAngles> out;
  out.reserve(max_particles);
  const std::size_t take = std::min(max_particles, jet.constituents.size());
  for (std::size_t i = 0; i < take; ++i) {
    const auto& c = jet.constituents[i];
    const BaseAngles b = base_angles(c, jet, f);
    const auto x = extended_features(c, jet, f);
    const double theta2 = clamp_theta(kPi / 2.0 + wrap_pi(b.phi));
    if (mode == FeatureMode::A) {
      out.emplace_back(b.theta, theta2, x.sigma_m, x.eps);
    } else {
      out.emplace_back(b.theta, theta2, x.rho0, x.rhoz);
    }
  }
  out.resize(max_particles, MajoranaAngles{});
  return out;
}

// Kinematic summaries ------------------------------------------------------------

inline double delta_r(const JetConstituent& a, const JetConstituent& b) {
  const double de = a.delta_eta - b.delta_eta;
  const double dp = wrap_pi(a.delta_phi - b.delta_phi);
  return std::hypot(de, dp);
}

/// Mean pairwise Delta R among the k leading constituents.
inline double mean_leading_delta_r(const JetEvent& j, std::size_t k = 4) {
  const std::size_t m = std::min(k, j.constituents.size());
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b, ++n) s += delta_r(j.constituents[a], j.constituents[b]);
  return n ? s / static_cast<double>(n) : 0.0;
}

/// Shannon entropy of the pt shares of the k leading constituents.
inline double leading_pt_entropy(const JetEvent& j, std::size_t k = 4) {
  const std::size_t m = std::min(k, j.constituents.size());
  double tot = 0.0;
  for (std::size_t i = 0; i < m; ++i) tot += j.constituents[i].pt;
  if (!(tot > 0.0)) return 0.0;
  double h = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double p = j.constituents[i].pt / tot;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

// File I/O -----------------------------------------------------------------------

enum class DataFormat { csv, jsonl };

inline DataFormat format_from_path(const std::string& path) {
  auto ends_with = [&](std::string_view suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends_with(".csv")) return DataFormat::csv;
  if (ends_with(".jsonl") || ends_with(".json")) return DataFormat::jsonl;
  throw InvalidArgument("cannot infer data format from '" + path + "' (expected .csv or .jsonl)");
}

struct RowError {
  std::size_t row = 0;  // 1-based line number in the file
  std::string message;
};

struct LoadResult {
  std::vector<JetEvent> events;
  std::vector<RowError> rejects;
};

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"jet_id", "jet_pt", "jet_mass", "jet_energy", "label", "pt",
                                             "delta_eta", "delta_phi", "energy", "d0", "dz"};
  return cols;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* field) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw InvalidArgument(std::string("field '") + field + "': cannot parse '" + std::string(s) + "' as a number");
  }
  if (!std::isfinite(v)) throw InvalidArgument(std::string("field '") + field + "' is not finite");
  return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  return std::string(s);
}

inline LoadResult load_csv(std::istream& in, std::size_t limit) {
  LoadResult out;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    for (auto f : split_csv(line)) header.push_back(trim(f));
    break;
  }
  if (header.empty()) return out;  // empty file

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!col.emplace(header[i], i).second) throw DataError("CSV header: duplicate column '" + header[i] + "'");
  }
  for (const auto& c : csv_columns()) {
    if (!col.count(c)) throw DataError("CSV header (row " + std::to_string(lineno) + "): missing column '" + c + "'");
  }
  for (const auto& h : header) {
    if (h != "mass" && std::find(csv_columns().begin(), csv_columns().end(), h) == csv_columns().end()) {
      throw DataError("CSV header (row " + std::to_string(lineno) + "): unknown column '" + h + "'");
    }
  }
  const bool has_mass = col.count("mass") > 0;

  struct Pending {
    JetEvent jet;
    std::size_t first_row = 0;
    bool bad = false;
  };
  std::vector<Pending> jets;
  std::map<std::string, std::size_t> by_id;

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    try {
      if (fields.size() != header.size()) {
        throw InvalidArgument("expected " + std::to_string(header.size()) + " fields, found " +
                              std::to_string(fields.size()));
      }
      auto num = [&](const char* name) { return parse_double(fields[col.at(name)], name); };
      const std::string id = trim(fields[col.at("jet_id")]);
      if (id.empty()) throw InvalidArgument("empty jet_id");
      JetConstituent c;
      c.pt = num("pt");
      c.delta_eta = num("delta_eta");
      c.delta_phi = num("delta_phi");
      c.energy = num("energy");
      c.d0 = num("d0");
      c.dz = num("dz");
      if (has_mass && !trim(fields[col.at("mass")]).empty()) c.mass = num("mass");
      validate(c);
      const double jpt = num("jet_pt"), jm = num("jet_mass"), je = num("jet_energy");
      const std::string label = trim(fields[col.at("label")]);

      auto it = by_id.find(id);
      if (it == by_id.end()) {
        if (limit && by_id.size() >= limit) continue;
        by_id.emplace(id, jets.size());
        Pending p;
        p.jet.id = id;
        p.jet.jet_pt = jpt;
        p.jet.jet_mass = jm;
        p.jet.jet_energy = je;
        p.jet.label = label;
        p.first_row = lineno;
        jets.push_back(std::move(p));
        it = by_id.find(id);
      }
      Pending& p = jets[it->second];
      if (p.jet.jet_pt != jpt || p.jet.jet_mass != jm || p.jet.jet_energy != je || p.jet.label != label) {
        throw InvalidArgument("jet-level fields differ from earlier rows of jet '" + id + "'");
      }
      p.jet.constituents.push_back(c);
    } catch (const InvalidArgument& e) {
      out.rejects.push_back({lineno, e.what()});
    }
  }
  for (auto& p : jets) {
    if (p.jet.constituents.empty()) continue;
    try {
      validate(p.jet);
      sort_constituents(p.jet);
      out.events.push_back(std::move(p.jet));
    } catch (const InvalidArgument& e) {
      out.rejects.push_back({p.first_row, e.what()});
    }
  }
  return out;
}

inline double json_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("missing key '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw InvalidArgument(std::string("key '") + key + "' is not a number");
  return v.get<double>();
}

inline JetEvent jet_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("line is not a JSON object");
  static const std::vector<std::string> allowed{"id", "jet_pt", "jet_mass", "jet_energy", "label", "constituents"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw InvalidArgument("unknown key '" + k + "'");
    }
  }
  JetEvent ev;
  ev.id = j.value("id", std::string{});
  ev.jet_pt = json_number(j, "jet_pt");
  ev.jet_mass = json_number(j, "jet_mass");
  ev.jet_energy = json_number(j, "jet_energy");
  if (!j.contains("label") || !j.at("label").is_string()) throw InvalidArgument("missing string key 'label'");
  ev.label = j.at("label").get<std::string>();
  if (!j.contains("constituents") || !j.at("constituents").is_array()) {
    throw InvalidArgument("missing array key 'constituents'");
  }
  for (const auto& cj : j.at("constituents")) {
    if (!cj.is_object()) throw InvalidArgument("constituent is not an object");
    JetConstituent c;
    c.pt = json_number(cj, "pt");
    c.delta_eta = json_number(cj, "delta_eta");
    c.delta_phi = json_number(cj, "delta_phi");
    c.energy = json_number(cj, "energy");
    c.d0 = json_number(cj, "d0");
    c.dz = json_number(cj, "dz");
    if (cj.contains("mass")) c.mass = json_number(cj, "mass");
    ev.constituents.push_back(c);
  }
  validate(ev);
  sort_constituents(ev);
  return ev;
}

inline LoadResult load_jsonl(std::istream& in, std::size_t limit) {
  LoadResult out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (limit && out.events.size() >= limit) break;
    try {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("invalid JSON: ") + e.what());
      }
      JetEvent ev = jet_from_json(j);
      if (ev.id.empty()) ev.id = std::to_string(lineno);
      out.events.push_back(std::move(ev));
    } catch (const InvalidArgument& e) {
      out.rejects.push_back({lineno, e.what()});
    }
  }
  return out;
}

}  // namespace detail

inline nlohmann::json jet_to_json(const JetEvent& j) {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : j.constituents) {
    nlohmann::json cj{{"pt", c.pt},       {"delta_eta", c.delta_eta}, {"delta_phi", c.delta_phi},
                      {"energy", c.energy}, {"d0", c.d0},             {"dz", c.dz}};
    if (c.mass) cj["mass"] = *c.mass;
    cs.push_back(std::move(cj));
  }
  return {{"id", j.id},
          {"jet_pt", j.jet_pt},
          {"jet_mass", j.jet_mass},
          {"jet_energy", j.jet_energy},
          {"label", j.label},
          {"constituents", std::move(cs)}};
}

/// Reads events in file order. limit == 0 means no limit. Malformed rows are
/// collected in `rejects` with their line numbers.
inline LoadResult load_events(std::istream& in, DataFormat format, std::size_t limit = 0) {
  return format == DataFormat::csv ? detail::load_csv(in, limit) : detail::load_jsonl(in, limit);
}

inline LoadResult load_events(const std::string& path, DataFormat format, std::size_t limit = 0) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return load_events(in, format, limit);
}

inline void write_events(std::ostream& out, const std::vector<JetEvent>& events, DataFormat format) {
  using detail::format_double;
  if (format == DataFormat::jsonl) {
    for (const auto& j : events) out << jet_to_json(j).dump() << '\n';
    return;
  }
  const bool any_mass = std::any_of(events.begin(), events.end(), [](const JetEvent& j) {
    return std::any_of(j.constituents.begin(), j.constituents.end(), [](const auto& c) { return c.mass.has_value(); });
  });
  for (std::size_t i = 0; i < csv_columns().size(); ++i) out << (i ? "," : "") << csv_columns()[i];
  if (any_mass) out << ",mass";
  out << '\n';
  for (const auto& j : events) {
    for (const auto& c : j.constituents) {
      out << j.id << ',' << format_double(j.jet_pt) << ',' << format_double(j.jet_mass) << ','
          << format_double(j.jet_energy) << ',' << j.label << ',' << format_double(c.pt) << ','
          << format_double(c.delta_eta) << ',' << format_double(c.delta_phi) << ',' << format_double(c.energy)
          << ',' << format_double(c.d0) << ',' << format_double(c.dz);
      if (any_mass) out << ',' << (c.mass ? format_double(*c.mass) : std::string{});
      out << '\n';
    }
  }
}

// Synthetic jets -----------------------------------------------------------------

enum class JetKind { qcd_like, two_prong, three_prong };

inline JetKind parse_jet_kind(std::string_view s) {
  if (s == "qcd-like" || s == "qcd") return JetKind::qcd_like;
  if (s == "two-prong") return JetKind::two_prong;
  if (s == "three-prong") return JetKind::three_prong;
  throw InvalidArgument("jet kind must be qcd-like, two-prong or three-prong, got '" + std::string(s) + "'");
}

inline const char* jet_kind_label(JetKind k) {
  switch (k) {
    case JetKind::qcd_like: return "background";
    case JetKind::two_prong: return "two-prong";
    case JetKind::three_prong: return "three-prong";
  }
  return "?";
}

namespace detail {

struct Particle {
  double pt, eta, phi, d0, dz;
};

struct Prong {
  double eta, phi;     // relative to the nominal jet direction
  double pt;           // GeV carried by the prong's core
  bool displaced;      // heavy-flavour-like tracks
};

// Hard collinear core: a few constituents splitting the prong's pt with a
// falling fragmentation spectrum, tightly around the prong axis.
template <class Rng>
void emit_core(const Prong& p, Rng& rng, std::vector<Particle>& out) {
  std::uniform_int_distribution<int> count(2, 4);
  std::normal_distribution<double> spread(0.0, 0.015);
  std::normal_distribution<double> prompt(0.0, 0.01);
  std::exponential_distribution<double> flight(1.0 / 0.3);
  std::bernoulli_distribution sign(0.5);
  const int n = count(rng);
  std::vector<double> w(static_cast<std::size_t>(n));
  std::exponential_distribution<double> frag(1.0);
  double tot = 0.0;
  for (auto& x : w) {
    x = frag(rng) + 0.05;
    x = x * x;
    tot += x;
  }
  for (int i = 0; i < n; ++i) {
    Particle q;
    q.pt = p.pt * w[static_cast<std::size_t>(i)] / tot;
    q.eta = p.eta + spread(rng);
    q.phi = p.phi + spread(rng);
    const double s = sign(rng) ? 1.0 : -1.0;
    q.d0 = prompt(rng) + (p.displaced ? s * flight(rng) : 0.0);
    q.dz = prompt(rng) + (p.displaced ? s * flight(rng) : 0.0);
    out.push_back(q);
  }
}

// Soft wide-angle radiation around the jet direction.
template <class Rng>
void emit_soft(double total_pt, Rng& rng, std::vector<Particle>& out) {
  std::poisson_distribution<int> count(14.0);
  std::normal_distribution<double> spread(0.0, 0.25);
  std::normal_distribution<double> prompt(0.0, 0.01);
  std::exponential_distribution<double> share(1.0);
  const int n = std::max(1, count(rng));
  std::vector<double> w(static_cast<std::size_t>(n));
  double tot = 0.0;
  for (auto& x : w) tot += (x = share(rng));
  for (int i = 0; i < n; ++i) {
    Particle q;
    q.pt = total_pt * w[static_cast<std::size_t>(i)] / tot;
    q.eta = std::clamp(spread(rng), -0.8, 0.8);
    q.phi = std::clamp(spread(rng), -0.8, 0.8);
    q.d0 = prompt(rng);
    q.dz = prompt(rng);
    out.push_back(q);
  }
}

// Places prongs with the requested momentum shares so that their combined
// (massless, small-angle) invariant mass equals `mass`.
template <class Rng>
std::vector<Prong> place_prongs(const std::vector<double>& shares, double pt, double mass, Rng& rng) {
  std::normal_distribution<double> dir(0.0, 1.0);
  std::vector<Prong> prongs(shares.size());
  for (auto& p : prongs) {
    p.eta = dir(rng);
    p.phi = dir(rng);
  }
  // Recentre on the pt-weighted axis.
  double ce = 0.0, cp = 0.0;
  for (std::size_t i = 0; i < prongs.size(); ++i) {
    ce += shares[i] * prongs[i].eta;
    cp += shares[i] * prongs[i].phi;
  }
  double m2 = 0.0;
  for (std::size_t i = 0; i < prongs.size(); ++i) {
    prongs[i].eta -= ce;
    prongs[i].phi -= cp;
    prongs[i].pt = shares[i] * pt;
  }
  for (std::size_t i = 0; i < prongs.size(); ++i)
    for (std::size_t j = i + 1; j < prongs.size(); ++j) {
      const double dr2 = std::pow(prongs[i].eta - prongs[j].eta, 2) + std::pow(prongs[i].phi - prongs[j].phi, 2);
      m2 += shares[i] * shares[j] * dr2;
    }
  const double scale = mass / (pt * std::sqrt(std::max(m2, 1e-12)));
  for (auto& p : prongs) {
    p.eta *= scale;
    p.phi *= scale;
  }
  return prongs;
}

template <class Rng>
JetEvent build_jet(JetKind kind, std::size_t index, Rng& rng) {
  std::uniform_real_distribution<double> pt_dist(450.0, 650.0);
  std::uniform_real_distribution<double> eta_dist(-1.5, 1.5);
  std::uniform_real_distribution<double> phi_dist(-kPi, kPi);
  std::uniform_real_distribution<double> soft_frac(0.08, 0.2);
  const double pt = pt_dist(rng);
  const double soft = soft_frac(rng) * pt;
  const double hard = pt - soft;

  std::vector<Particle> parts;
  std::vector<Prong> prongs;
  switch (kind) {
    case JetKind::qcd_like: {
      prongs.push_back({0.0, 0.0, hard, false});
      break;
    }
    case JetKind::two_prong: {
      std::uniform_real_distribution<double> z(0.25, 0.75);
      std::discrete_distribution<int> which({0.5, 0.25, 0.25});
      const int k = which(rng);
      const double mass = k == 0 ? 80.4 : (k == 1 ? 91.2 : 125.0);
      const double zz = z(rng);
      prongs = place_prongs({zz, 1.0 - zz}, hard, mass, rng);
      // Higgs-like splittings go to b quarks.
      for (auto& p : prongs) p.displaced = (k == 2);
      break;
    }
    case JetKind::three_prong: {
      std::gamma_distribution<double> g(3.0, 1.0);
      std::vector<double> s{g(rng), g(rng), g(rng)};
      const double tot = s[0] + s[1] + s[2];
      for (auto& x : s) x /= tot;
      prongs = place_prongs(s, hard, 173.0, rng);
      prongs[0].displaced = true;
      break;
    }
  }
  for (const auto& p : prongs) emit_core(p, rng, parts);
  emit_soft(soft, rng, parts);

  // Lab-frame four-momenta of massless constituents, then the jet axis.
  const double eta0 = eta_dist(rng), phi0 = phi_dist(rng);
  double px = 0, py = 0, pz = 0, e = 0;
  for (auto& q : parts) {
    q.eta += eta0;
    q.phi += phi0;
    px += q.pt * std::cos(q.phi);
    py += q.pt * std::sin(q.phi);
    pz += q.pt * std::sinh(q.eta);
    e += q.pt * std::cosh(q.eta);
  }
  JetEvent jet;
  jet.id = (kind == JetKind::qcd_like ? std::string("qcd-") : std::string(jet_kind_label(kind)) + "-") +
           std::to_string(index);
  jet.label = jet_kind_label(kind);
  jet.jet_pt = std::hypot(px, py);
  jet.jet_energy = e;
  jet.jet_mass = std::sqrt(std::max(0.0, e * e - px * px - py * py - pz * pz));
  const double jet_eta = std::asinh(pz / jet.jet_pt);
  const double jet_phi = std::atan2(py, px);
  for (const auto& q : parts) {
    JetConstituent c;
    c.pt = q.pt;
    c.delta_eta = q.eta - jet_eta;
    c.delta_phi = wrap_pi(q.phi - jet_phi);
    c.energy = q.pt * std::cosh(q.eta);
    c.d0 = q.d0;
    c.dz = q.dz;
    jet.constituents.push_back(c);
  }
  sort_constituents(jet);
  return jet;
}

}  // namespace detail

/// Seeded synthetic jets. qcd-like: one collimated core plus soft diffuse
/// radiation. two-prong / three-prong: 2 or 3 separated cores whose combined
/// mass matches a W/Z/H or top-like resonance.
inline std::vector<JetEvent> synth_jets(JetKind kind, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("synth_jets: n must be >= 1");
  std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(kind) + 1)));
  std::vector<JetEvent> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(detail::build_jet(kind, i, rng));
  return out;
}

}  // namespace qutrit
