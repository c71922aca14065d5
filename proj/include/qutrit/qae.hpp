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

// Qutrit quantum autoencoder.
//
// Wire layout: data qutrits 0 .. latent+trash-1 (latent first), then the
// reference qutrits, then the ancilla. One event loads its leading
// constituents onto the data qutrits, the encoder acts on the data register
// and a SWAP test compares trash against reference.
//
// Two evaluation backends give the same fidelity:
//   full     the whole register including the SWAP test;
//   reduced  the data register only, F = <0..0| rho_trash |0..0>, which is
//            what the SWAP test measures against |0..0> references.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qutrit/gates.hpp"
#include "qutrit/jets.hpp"
#include "qutrit/majorana.hpp"
#include "qutrit/statevector.hpp"
#include "qutrit/tensor.hpp"

namespace qutrit {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kModelFormatVersion = 1;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LayerKind { sigma, lambda };
enum class Entangler { tadd_all_pairs, none };

inline const char* layer_kind_name(LayerKind k) { return k == LayerKind::sigma ? "sigma" : "lambda"; }
inline const char* entangler_name(Entangler e) { return e == Entangler::tadd_all_pairs ? "tadd_all_pairs" : "none"; }

inline LayerKind parse_layer_kind(std::string_view s) {
  if (s == "sigma") return LayerKind::sigma;
  if (s == "lambda") return LayerKind::lambda;
  throw InvalidArgument("layer kind must be sigma or lambda, got '" + std::string(s) + "'");
}

inline Entangler parse_entangler(std::string_view s) {
  if (s == "tadd_all_pairs") return Entangler::tadd_all_pairs;
  if (s == "none") return Entangler::none;
  throw InvalidArgument("entangler must be tadd_all_pairs or none, got '" + std::string(s) + "'");
}

/// Time order of the three rotations inside a layer, e.g. "yzx" applies
/// R_y first. The parameter triple is always (phi -> x, theta -> z, omega -> y).
inline std::array<Axis, 3> parse_rotation_order(std::string_view s) {
  if (s.size() != 3) throw InvalidArgument("rotation order must be a permutation of 'xyz', got '" + std::string(s) + "'");
  std::array<Axis, 3> out{};
  bool seen[3] = {false, false, false};
  for (std::size_t i = 0; i < 3; ++i) {
    int k = s[i] == 'x' ? 0 : s[i] == 'y' ? 1 : s[i] == 'z' ? 2 : -1;
    if (k < 0 || seen[k]) throw InvalidArgument("rotation order must be a permutation of 'xyz', got '" + std::string(s) + "'");
    seen[k] = true;
    out[i] = static_cast<Axis>(k);
  }
  return out;
}

inline std::string rotation_order_name(const std::array<Axis, 3>& o) {
  return std::string(axis_name(o[0])) + axis_name(o[1]) + axis_name(o[2]);
}

struct QaeTopology {
  std::size_t latent = 1;
  std::size_t trash = 3;
  std::size_t reference = 3;
  std::size_t ancilla = 1;
  std::size_t layers = 1;
  LayerKind layer = LayerKind::sigma;
  Entangler entangler = Entangler::tadd_all_pairs;
  std::array<Axis, 3> rotation_order{Axis::y, Axis::z, Axis::x};

  std::size_t data_qutrits() const noexcept { return latent + trash; }
  std::size_t total_qutrits() const noexcept { return latent + trash + reference + ancilla; }
  std::size_t num_params() const noexcept { return 3 * data_qutrits() * layers; }
  std::size_t reference_wire(std::size_t k) const noexcept { return data_qutrits() + k; }
  std::size_t ancilla_wire() const noexcept { return data_qutrits() + reference; }

  void validate(std::size_t max_qutrits = QutritState::kDefaultMaxQutrits) const {
    if (latent < 1) throw InvalidArgument("topology: latent must be >= 1");
    if (reference != trash) throw InvalidArgument("topology: reference count must equal trash count");
    if (ancilla != 1) throw InvalidArgument("topology: exactly one ancilla is supported");
    if (layers < 1) throw InvalidArgument("topology: layers must be >= 1");
    if (total_qutrits() > max_qutrits) {
      throw InvalidArgument("topology needs " + std::to_string(total_qutrits()) + " qutrits, simulator cap is " +
                            std::to_string(max_qutrits));
    }
  }

  friend bool operator==(const QaeTopology&, const QaeTopology&) = default;
};

using ParameterVector = std::vector<double>;

inline std::size_t param_index(const QaeTopology& t, std::size_t layer, std::size_t qutrit, std::size_t k) {
  return (layer * t.data_qutrits() + qutrit) * 3 + k;
}

inline void check_params(const QaeTopology& t, const ParameterVector& p) {
  if (p.size() != t.num_params()) {
    throw InvalidArgument("parameter vector has " + std::to_string(p.size()) + " entries, topology needs " +
                          std::to_string(t.num_params()));
  }
  for (double v : p)
    if (!std::isfinite(v)) throw InvalidArgument("parameter vector has a non-finite entry");
}

inline ParameterVector init_params(const QaeTopology& t, std::uint64_t seed, double half_width = 0.1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-half_width, half_width);
  ParameterVector p(t.num_params());
  for (auto& v : p) v = u(rng);
  return p;
}

/// One event's data-register input: its angle tuples and the product state
/// the preparation unitaries produce from |0..0>.
struct EncodedEvent {
  std::string id;
  std::string label;
  std::vector<MajoranaAngles> angles;
  QutritState prepared{1};
};

inline QutritState prepare_data_register(const QaeTopology& t, const std::vector<MajoranaAngles>& angles) {
  if (angles.size() != t.data_qutrits()) {
    throw InvalidArgument("expected " + std::to_string(t.data_qutrits()) + " angle tuples, got " +
                          std::to_string(angles.size()));
  }
  QutritState s(t.data_qutrits());
  for (std::size_t q = 0; q < angles.size(); ++q) s.apply(preparation_unitary(encode(angles[q])), {q});
  return s;
}

inline EncodedEvent encode_for_model(const QaeTopology& t, std::vector<MajoranaAngles> angles, std::string id = {},
                                     std::string label = kBackgroundLabel) {
  EncodedEvent e;
  e.prepared = prepare_data_register(t, angles);
  e.angles = std::move(angles);
  e.id = std::move(id);
  e.label = std::move(label);
  return e;
}

inline std::vector<EncodedEvent> encode_events(const QaeTopology& t, const std::vector<JetEvent>& jets, FeatureMode mode,
                                               double f) {
  std::vector<EncodedEvent> out;
  out.reserve(jets.size());
  for (const auto& j : jets) out.push_back(encode_for_model(t, encode_event(j, mode, f, t.data_qutrits()), j.id, j.label));
  return out;
}

namespace detail {

inline GateMatrix layer_rotation(LayerKind kind, Axis axis, double x) {
  if (kind == LayerKind::sigma) return sigma_rotation(axis, x);
  // lambda layer: x <-> lambda_2, z <-> lambda_5, y <-> lambda_7.
  const int idx = axis == Axis::x ? 2 : axis == Axis::z ? 5 : 7;
  return exp_lambda(idx, x);
}

inline std::size_t axis_slot(Axis a) { return a == Axis::x ? 0 : a == Axis::z ? 1 : 2; }

}  // namespace detail

/// Variational layers on the data register, in place.
inline void apply_encoder(const QaeTopology& t, const ParameterVector& p, QutritState& data) {
  static const GateMatrix add = tadd();
  const std::size_t n = t.data_qutrits();
  for (std::size_t l = 0; l < t.layers; ++l) {
    for (std::size_t q = 0; q < n; ++q) {
      for (Axis a : t.rotation_order) {
        data.apply(detail::layer_rotation(t.layer, a, p[param_index(t, l, q, detail::axis_slot(a))]), {q});
      }
    }
    if (t.entangler == Entangler::tadd_all_pairs) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) data.apply(add, {i, j});
    }
  }
}

/// Data register after preparation and the encoder.
inline QutritState encoder_state(const QaeTopology& t, const std::vector<MajoranaAngles>& angles,
                                 const ParameterVector& p) {
  t.validate();
  check_params(t, p);
  QutritState s = prepare_data_register(t, angles);
  apply_encoder(t, p, s);
  return s;
}

inline std::vector<WirePair> swap_pairs(const QaeTopology& t) {
  std::vector<WirePair> pairs;
  for (std::size_t k = 0; k < t.trash; ++k) pairs.emplace_back(t.latent + k, t.reference_wire(k));
  return pairs;
}

/// Embeds a data-register state into the full register (references and
/// ancilla in |0>).
inline QutritState embed_full(const QaeTopology& t, const QutritState& data) {
  std::vector<Complex> amps(pow3(t.total_qutrits()), Complex{0.0, 0.0});
  const std::size_t shift = pow3(t.reference + t.ancilla);
  for (std::size_t i = 0; i < data.dim(); ++i) amps[i * shift] = data[i];
  return QutritState::from_amplitudes(std::move(amps));
}

/// The full circuit: preparation, encoder, then the SWAP-test block (Ch,
/// controlled swaps, Ch^dagger on the ancilla).
inline QutritState build_circuit(const QaeTopology& t, const std::vector<MajoranaAngles>& angles,
                                 const ParameterVector& p) {
  QutritState s = embed_full(t, encoder_state(t, angles, p));
  static const GateMatrix ch = chrestenson();
  static const GateMatrix ch_dag = ch.adjoint();
  static const GateMatrix cswap = controlled_swap();
  const std::size_t anc = t.ancilla_wire();
  s.apply(ch, {anc});
  for (const auto& [a, b] : swap_pairs(t)) s.apply(cswap, {anc, a, b});
  s.apply(ch_dag, {anc});
  return s;
}

enum class Backend { reduced, full };

/// Probability that every trash wire of the data register reads 0.
inline double trash_zero_probability(const QaeTopology& t, const QutritState& data) {
  const std::size_t block = pow3(t.trash);
  double p = 0.0;
  for (std::size_t i = 0; i < data.dim(); i += block) p += std::norm(data[i]);
  return p;
}

inline SwapTestResult event_swap_test(const QaeTopology& t, const EncodedEvent& ev, const ParameterVector& p,
                                      const ReadoutOptions& readout = {}, Backend backend = Backend::reduced) {
  QutritState data = ev.prepared;
  apply_encoder(t, p, data);
  if (backend == Backend::full) {
    const auto pairs = swap_pairs(t);
    return swap_test_fidelity(embed_full(t, data), t.ancilla_wire(), pairs, readout);
  }
  const double p0 = p0_from_fidelity(trash_zero_probability(t, data));
  return finish_swap_test(readout.shots ? sample_p0(p0, readout) : p0);
}

struct EvalOptions {
  ReadoutOptions readout;
  Backend backend = Backend::reduced;
};

namespace detail {

inline ReadoutOptions event_readout(const ReadoutOptions& r, std::size_t index) {
  ReadoutOptions o = r;
  o.seed = r.seed * 0x9E3779B97F4A7C15ULL + index;
  return o;
}

}  // namespace detail

/// Per-event fidelities, in input order.
inline std::vector<double> event_fidelities(const QaeTopology& t, const std::vector<EncodedEvent>& batch,
                                            const ParameterVector& p, const EvalOptions& opt = {}) {
  t.validate();
  check_params(t, p);
  std::vector<double> f(batch.size());
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    f[k] = event_swap_test(t, batch[k], p, detail::event_readout(opt.readout, k), opt.backend).fidelity;
  }
  return f;
}

/// Mean of -F over the batch, summed in index order.
inline double cost(const QaeTopology& t, const std::vector<EncodedEvent>& batch, const ParameterVector& p,
                   const EvalOptions& opt = {}) {
  if (batch.empty()) throw InvalidArgument("cost: empty batch");
  const auto f = event_fidelities(t, batch, p, opt);
  double s = 0.0;
  for (double v : f) s += v;
  return -s / static_cast<double>(f.size());
}

enum class GradientMethod { finite_diff, parameter_shift };

inline GradientMethod parse_gradient_method(std::string_view s) {
  if (s == "fd" || s == "finite-diff") return GradientMethod::finite_diff;
  if (s == "shift" || s == "parameter-shift") return GradientMethod::parameter_shift;
  throw InvalidArgument("gradient method must be fd or shift, got '" + std::string(s) + "'");
}

inline const char* gradient_method_name(GradientMethod m) {
  return m == GradientMethod::finite_diff ? "finite-diff" : "parameter-shift";
}

// Every trainable gate is exp(i x G) where G has eigenvalues {-1, 0, 1}, so the cost
// is a trigonometric polynomial in x with frequencies 1 and 2. Shifts of
// pi/4 and 3pi/4 isolate the derivative exactly.
inline constexpr double kShiftA = kPi / 4.0;
inline constexpr double kShiftB = 3.0 * kPi / 4.0;
inline const double kShiftCoefA = (1.0 / std::sqrt(2.0) + 1.0) / 2.0;
inline const double kShiftCoefB = (1.0 / std::sqrt(2.0) - 1.0) / 2.0;

/// Gradient of cost() with respect to every parameter.
inline std::vector<double> gradient(const QaeTopology& t, const std::vector<EncodedEvent>& batch,
                                    const ParameterVector& p, GradientMethod method, double fd_step = 1e-4,
                                    const EvalOptions& opt = {}) {
  if (batch.empty()) throw InvalidArgument("gradient: empty batch");
  if (method == GradientMethod::finite_diff && !(fd_step > 0.0 && fd_step <= 0.1)) {
    throw InvalidArgument("fd_step must be in (0, 0.1]");
  }
  check_params(t, p);
  auto at = [&](std::size_t k, double delta) {
    ParameterVector q = p;
    q[k] += delta;
    return cost(t, batch, q, opt);
  };
  std::vector<double> g(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (method == GradientMethod::finite_diff) {
      g[k] = (at(k, fd_step) - at(k, -fd_step)) / (2.0 * fd_step);
    } else {
      g[k] = kShiftCoefA * (at(k, kShiftA) - at(k, -kShiftA)) + kShiftCoefB * (at(k, kShiftB) - at(k, -kShiftB));
    }
  }
  return g;
}

// Training -------------------------------------------------------------------------

enum class OptimizerKind { adam, sgd };

inline OptimizerKind parse_optimizer(std::string_view s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "sgd") return OptimizerKind::sgd;
  throw InvalidArgument("optimizer must be adam or sgd, got '" + std::string(s) + "'");
}

inline const char* optimizer_name(OptimizerKind o) { return o == OptimizerKind::adam ? "adam" : "sgd"; }

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  GradientMethod gradient_method = GradientMethod::parameter_shift;
  double fd_step = 1e-4;
  OptimizerKind optimizer = OptimizerKind::adam;
  FeatureMode mode = FeatureMode::B;
  double f = kDefaultScaleF;
  double validation_fraction = 0.2;
  std::optional<std::uint64_t> shots;  // nullopt: exact probabilities
  std::size_t divergence_patience = 10;
  double divergence_tol = 1e-12;

  void validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw InvalidArgument("learning_rate must be > 0");
    if (!(fd_step > 0.0 && fd_step <= 0.1)) throw InvalidArgument("fd_step must be in (0, 0.1]");
    if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
      throw InvalidArgument("validation_fraction must be in [0, 1)");
    }
    if (!std::isfinite(f)) throw InvalidArgument("scale factor f must be finite");
    if (shots && *shots == 0) throw InvalidArgument("shots must be >= 1");
    if (divergence_patience < 1) throw InvalidArgument("divergence_patience must be >= 1");
  }
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_cost = 0.0;
  double validation_cost = 0.0;
};

struct TrainResult {
  ParameterVector params;       // best validation cost
  ParameterVector final_params;
  std::vector<EpochRecord> history;  // entry 0 is the initial point
  std::size_t best_epoch = 0;
  bool diverged = false;
  std::string diagnostic;
};

class Adam {
 public:
  Adam(std::size_t n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

  void step(ParameterVector& p, const std::vector<double>& g) {
    ++t_;
    const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
    for (std::size_t k = 0; k < p.size(); ++k) {
      m_[k] = b1_ * m_[k] + (1.0 - b1_) * g[k];
      v_[k] = b2_ * v_[k] + (1.0 - b2_) * g[k] * g[k];
      p[k] -= lr_ * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + eps_);
    }
  }

 private:
  double lr_, b1_, b2_, eps_;
  std::vector<double> m_, v_;
  std::uint64_t t_ = 0;
};

/// Splits off a seeded validation subset. With a single event, or a zero
/// fraction, validation reuses the training set.
inline std::pair<std::vector<EncodedEvent>, std::vector<EncodedEvent>> split_validation(
    const std::vector<EncodedEvent>& events, double fraction, std::uint64_t seed) {
  std::vector<std::size_t> idx(events.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed ^ 0x5851F42D4C957F2DULL);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::size_t nval = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(events.size())));
  if (events.size() < 2) nval = 0;
  nval = std::min(nval, events.size() - 1);
  std::vector<EncodedEvent> train, val;
  for (std::size_t i = 0; i < idx.size(); ++i) (i < nval ? val : train).push_back(events[idx[i]]);
  return {std::move(train), std::move(val)};
}

inline TrainResult train(const QaeTopology& t, const TrainConfig& cfg, const std::vector<EncodedEvent>& events) {
  t.validate();
  cfg.validate();
  if (events.empty()) throw InvalidArgument("train: no events");
  auto [train_set, val_set] = split_validation(events, cfg.validation_fraction, cfg.seed);
  const auto& val = val_set.empty() ? train_set : val_set;

  EvalOptions eval;
  if (cfg.shots) eval.readout.shots = cfg.shots;

  TrainResult r;
  ParameterVector p = init_params(t, cfg.seed);
  std::uint64_t eval_counter = 0;
  auto eval_opt = [&]() {
    EvalOptions o = eval;
    o.readout.seed = cfg.seed + 1000003ULL * (++eval_counter);
    return o;
  };

  double best = cost(t, val, p, eval_opt());
  r.history.push_back({0, cost(t, train_set, p, eval_opt()), best});
  r.params = p;
  r.best_epoch = 0;

  Adam adam(p.size(), cfg.learning_rate);
  std::mt19937_64 rng(cfg.seed ^ 0xD1B54A32D192ED03ULL);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t rising = 0;
  double prev_val = best;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::vector<EncodedEvent> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + cfg.batch_size); ++i) {
        batch.push_back(train_set[order[i]]);
      }
      const auto g = gradient(t, batch, p, cfg.gradient_method, cfg.fd_step, eval_opt());
      if (cfg.optimizer == OptimizerKind::adam) {
        adam.step(p, g);
      } else {
        for (std::size_t k = 0; k < p.size(); ++k) p[k] -= cfg.learning_rate * g[k];
      }
    }
    const double vc = cost(t, val, p, eval_opt());
    r.history.push_back({epoch, cost(t, train_set, p, eval_opt()), vc});
    if (vc < best) {
      best = vc;
      r.params = p;
      r.best_epoch = epoch;
    }
    rising = vc > prev_val + cfg.divergence_tol ? rising + 1 : 0;
    prev_val = vc;
    if (rising >= cfg.divergence_patience) {
      r.diverged = true;
      r.diagnostic = "validation cost rose for " + std::to_string(rising) + " consecutive epochs (epoch " +
                     std::to_string(epoch) + "); returning best parameters from epoch " +
                     std::to_string(r.best_epoch);
      break;
    }
  }
  r.final_params = p;
  return r;
}

// Inference --------------------------------------------------------------------------

struct FidelityRecord {
  std::string event_id;
  double fidelity = 0.0;
  double anomaly_score = 0.0;
  std::string label;
};

inline std::vector<FidelityRecord> infer(const QaeTopology& t, const ParameterVector& p,
                                         const std::vector<EncodedEvent>& events, const EvalOptions& opt = {}) {
  const auto f = event_fidelities(t, events, p, opt);
  std::vector<FidelityRecord> out;
  out.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) out.push_back({events[i].id, f[i], 1.0 - f[i], events[i].label});
  return out;
}

// Model files ------------------------------------------------------------------------

struct Model {
  QaeTopology topology;
  FeatureMode mode = FeatureMode::B;
  double f = kDefaultScaleF;
  ParameterVector params;
  TrainConfig train_config;
  std::vector<EpochRecord> loss_history;
};

inline nlohmann::json topology_to_json(const QaeTopology& t) {
  return {{"latent", t.latent},
          {"trash", t.trash},
          {"reference", t.reference},
          {"ancilla", t.ancilla},
          {"layers", t.layers},
          {"layer", layer_kind_name(t.layer)},
          {"entangler", entangler_name(t.entangler)},
          {"rotation_order", rotation_order_name(t.rotation_order)}};
}

namespace detail {

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> keys, const char* where) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      throw InvalidArgument(std::string(where) + ": unknown key '" + k + "'");
    }
  }
}

}  // namespace detail

/// Missing keys keep their defaults; unknown keys are rejected.
inline QaeTopology topology_from_json(const nlohmann::json& j, QaeTopology t = {}) {
  detail::reject_unknown(j, {"latent", "trash", "reference", "ancilla", "layers", "layer", "entangler", "rotation_order"},
                         "topology");
  bool ref_given = false;
  try {
    if (j.contains("latent")) t.latent = j.at("latent").get<std::size_t>();
    if (j.contains("trash")) t.trash = j.at("trash").get<std::size_t>();
    if (j.contains("reference")) {
      t.reference = j.at("reference").get<std::size_t>();
      ref_given = true;
    }
    if (j.contains("ancilla")) t.ancilla = j.at("ancilla").get<std::size_t>();
    if (j.contains("layers")) t.layers = j.at("layers").get<std::size_t>();
    if (j.contains("layer")) t.layer = parse_layer_kind(j.at("layer").get<std::string>());
    if (j.contains("entangler")) t.entangler = parse_entangler(j.at("entangler").get<std::string>());
    if (j.contains("rotation_order")) t.rotation_order = parse_rotation_order(j.at("rotation_order").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("topology: ") + e.what());
  }
  if (!ref_given) t.reference = t.trash;
  t.validate();
  return t;
}

inline nlohmann::json train_config_to_json(const TrainConfig& c) {
  nlohmann::json j{{"learning_rate", c.learning_rate},
                   {"epochs", c.epochs},
                   {"batch_size", c.batch_size},
                   {"seed", c.seed},
                   {"gradient_method", gradient_method_name(c.gradient_method)},
                   {"fd_step", c.fd_step},
                   {"optimizer", optimizer_name(c.optimizer)},
                   {"mode", mode_name(c.mode)},
                   {"f", c.f},
                   {"validation_fraction", c.validation_fraction},
                   {"divergence_patience", c.divergence_patience},
                   {"divergence_tol", c.divergence_tol}};
  j["shots"] = c.shots ? nlohmann::json(*c.shots) : nlohmann::json("exact");
  return j;
}

inline std::optional<std::uint64_t> parse_shots(const nlohmann::json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "exact") return std::nullopt;
    const std::string s = v.get<std::string>();
    std::uint64_t n = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || n == 0) {
      throw InvalidArgument("shots must be a positive integer or 'exact', got '" + s + "'");
    }
    return n;
  }
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > 0) return v.get<std::uint64_t>();
  throw InvalidArgument("shots must be a positive integer or 'exact'");
}

inline TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig c = {}) {
  detail::reject_unknown(j,
                         {"learning_rate", "epochs", "batch_size", "seed", "gradient_method", "fd_step", "optimizer",
                          "mode", "f", "validation_fraction", "shots", "divergence_patience", "divergence_tol"},
                         "train");
  try {
    if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("epochs")) c.epochs = j.at("epochs").get<std::size_t>();
    if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("gradient_method")) c.gradient_method = parse_gradient_method(j.at("gradient_method").get<std::string>());
    if (j.contains("fd_step")) c.fd_step = j.at("fd_step").get<double>();
    if (j.contains("optimizer")) c.optimizer = parse_optimizer(j.at("optimizer").get<std::string>());
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("f")) c.f = j.at("f").get<double>();
    if (j.contains("validation_fraction")) c.validation_fraction = j.at("validation_fraction").get<double>();
    if (j.contains("shots")) c.shots = parse_shots(j.at("shots"));
    if (j.contains("divergence_patience")) c.divergence_patience = j.at("divergence_patience").get<std::size_t>();
    if (j.contains("divergence_tol")) c.divergence_tol = j.at("divergence_tol").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("train config: ") + e.what());
  }
  c.validate();
  return c;
}

inline nlohmann::json model_to_json(const Model& m) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& h : m.loss_history) {
    hist.push_back({{"epoch", h.epoch}, {"train_cost", h.train_cost}, {"validation_cost", h.validation_cost}});
  }
  return {{"version", kVersion},
          {"format_version", kModelFormatVersion},
          {"topology", topology_to_json(m.topology)},
          {"mode", mode_name(m.mode)},
          {"f", m.f},
          {"params", m.params},
          {"train_config", train_config_to_json(m.train_config)},
          {"loss_history", hist}};
}

inline Model model_from_json(const nlohmann::json& j) {
  Model m;
  try {
    if (!j.is_object()) throw ModelError("model file is not a JSON object");
    if (!j.contains("format_version") || j.at("format_version").get<int>() != kModelFormatVersion) {
      throw ModelError("unsupported model format_version (expected " + std::to_string(kModelFormatVersion) + ")");
    }
    for (const char* k : {"version", "topology", "mode", "f", "params", "train_config", "loss_history"}) {
      if (!j.contains(k)) throw ModelError(std::string("model file is missing '") + k + "'");
    }
    m.topology = topology_from_json(j.at("topology"));
    m.mode = parse_mode(j.at("mode").get<std::string>());
    m.f = j.at("f").get<double>();
    m.params = j.at("params").get<std::vector<double>>();
    m.train_config = train_config_from_json(j.at("train_config"));
    for (const auto& h : j.at("loss_history")) {
      m.loss_history.push_back(
          {h.at("epoch").get<std::size_t>(), h.at("train_cost").get<double>(), h.at("validation_cost").get<double>()});
    }
    check_params(m.topology, m.params);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("corrupt model file: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ModelError(std::string("invalid model file: ") + e.what());
  }
  return m;
}

/// Writes to a sibling temporary file and renames it into place.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ModelError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ModelError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ModelError("cannot move output into place at '" + path + "'");
  }
}

inline void save_model(const Model& m, const std::string& path) {
  check_params(m.topology, m.params);
  write_file_atomic(path, model_to_json(m).dump(2) + "\n");
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw ModelError("corrupt model file '" + path + "': " + e.what());
  }
  return model_from_json(j);
}

}  // namespace qutrit
