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

// Dense n-qutrit statevector simulation.
//
// Basis order: qutrit 0 is the most significant ternary digit, so the index
// of |q0 q1 ... q_{n-1}> is sum_k q_k 3^(n-1-k).

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qutrit/gates.hpp"
#include "qutrit/majorana.hpp"
#include "qutrit/tensor.hpp"

namespace qutrit {

inline std::size_t pow3(std::size_t k) {
  std::size_t p = 1;
  while (k--) p *= 3;
  return p;
}

class QutritState {
 public:
  /// Mirrors the eight-qutrit limit of the reference simulator; raise it
  /// explicitly for larger registers.
  static constexpr std::size_t kDefaultMaxQutrits = 8;

  /// |0...0> on n qutrits.
  explicit QutritState(std::size_t n, std::size_t max_qutrits = kDefaultMaxQutrits) : n_(n) {
    check_size(n, max_qutrits);
    amps_.assign(pow3(n), Complex{0.0, 0.0});
    amps_[0] = 1.0;
  }

  static QutritState from_amplitudes(std::vector<Complex> amps,
                                     std::size_t max_qutrits = kDefaultMaxQutrits) {
    std::size_t n = 0;
    std::size_t d = 1;
    while (d < amps.size()) {
      d *= 3;
      ++n;
    }
    if (d != amps.size() || amps.empty()) {
      throw InvalidArgument("QutritState: amplitude count " + std::to_string(amps.size()) +
                            " is not a power of 3");
    }
    QutritState s(n, max_qutrits);
    s.amps_ = std::move(amps);
    return s;
  }

  /// Tensor product of single-qutrit states, qutrit 0 first.
  static QutritState product(std::span<const PureQutrit> qutrits,
                             std::size_t max_qutrits = kDefaultMaxQutrits) {
    QutritState s(qutrits.size(), max_qutrits);
    std::vector<Complex> cur{Complex{1.0, 0.0}};
    for (const auto& q : qutrits) {
      std::vector<Complex> next(cur.size() * 3);
      for (std::size_t i = 0; i < cur.size(); ++i)
        for (std::size_t k = 0; k < 3; ++k) next[i * 3 + k] = cur[i] * q[k];
      cur = std::move(next);
    }
    s.amps_ = std::move(cur);
    return s;
  }

  std::size_t num_qutrits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  std::span<Complex> amplitudes() noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  /// Stride of a wire's digit in the flat index.
  std::size_t stride(std::size_t wire) const { return pow3(n_ - 1 - wire); }

  double norm() const {
    double s = 0.0;
    for (const auto& z : amps_) s += std::norm(z);
    return std::sqrt(s);
  }

  ComplexVector vector() const { return ComplexVector(amps_); }

  /// In-place (gate on wires) (x) identity elsewhere. wires[0] is the most
  /// significant digit of the gate's own index.
  void apply(const GateMatrix& gate, std::span<const std::size_t> wires) {
    validate_wires(gate, wires);
    if (wires.size() == 1) {
      apply_single(gate.matrix, stride(wires[0]));
    } else {
      apply_multi(gate.matrix, wires);
    }
  }

  void apply(const GateMatrix& gate, std::initializer_list<std::size_t> wires) {
    apply(gate, std::span<const std::size_t>(wires.begin(), wires.size()));
  }

 private:
  static void check_size(std::size_t n, std::size_t max_qutrits) {
    if (n == 0) throw InvalidArgument("QutritState: need at least one qutrit");
    if (n > max_qutrits) {
      throw InvalidArgument("QutritState: " + std::to_string(n) + " qutrits exceeds the register cap of " +
                            std::to_string(max_qutrits));
    }
  }

  void validate_wires(const GateMatrix& gate, std::span<const std::size_t> wires) const {
    if (wires.size() != static_cast<std::size_t>(gate.arity) || gate.dim() != pow3(wires.size())) {
      throw InvalidArgument("apply: gate '" + gate.name + "' needs " + std::to_string(gate.arity) +
                            " wires, got " + std::to_string(wires.size()));
    }
    for (std::size_t i = 0; i < wires.size(); ++i) {
      if (wires[i] >= n_) {
        throw InvalidArgument("apply: wire " + std::to_string(wires[i]) + " out of range for " +
                              std::to_string(n_) + " qutrits");
      }
      for (std::size_t j = 0; j < i; ++j)
        if (wires[i] == wires[j]) throw InvalidArgument("apply: duplicate wire " + std::to_string(wires[i]));
    }
  }

  void apply_single(const ComplexMatrix& m, std::size_t st) {
    const Complex m00 = m(0, 0), m01 = m(0, 1), m02 = m(0, 2);
    const Complex m10 = m(1, 0), m11 = m(1, 1), m12 = m(1, 2);
    const Complex m20 = m(2, 0), m21 = m(2, 1), m22 = m(2, 2);
    const std::size_t block = 3 * st;
    for (std::size_t hi = 0; hi < amps_.size(); hi += block) {
      for (std::size_t lo = 0; lo < st; ++lo) {
        Complex* p = amps_.data() + hi + lo;
        const Complex a0 = p[0], a1 = p[st], a2 = p[2 * st];
        p[0] = m00 * a0 + m01 * a1 + m02 * a2;
        p[st] = m10 * a0 + m11 * a1 + m12 * a2;
        p[2 * st] = m20 * a0 + m21 * a1 + m22 * a2;
      }
    }
  }

  void apply_multi(const ComplexMatrix& m, std::span<const std::size_t> wires) {
    const std::size_t k = wires.size();
    const std::size_t gd = pow3(k);
    std::vector<std::size_t> offsets(gd, 0);
    for (std::size_t g = 0; g < gd; ++g) {
      std::size_t rem = g;
      for (std::size_t t = k; t-- > 0;) {
        offsets[g] += (rem % 3) * stride(wires[t]);
        rem /= 3;
      }
    }
    std::vector<std::size_t> free_strides;
    for (std::size_t w = 0; w < n_; ++w)
      if (std::find(wires.begin(), wires.end(), w) == wires.end()) free_strides.push_back(stride(w));

    std::vector<Complex> in(gd), out(gd);
    std::vector<std::uint8_t> digits(free_strides.size(), 0);
    std::size_t base = 0;
    const std::size_t groups = pow3(free_strides.size());
    for (std::size_t grp = 0; grp < groups; ++grp) {
      for (std::size_t g = 0; g < gd; ++g) in[g] = amps_[base + offsets[g]];
      for (std::size_t r = 0; r < gd; ++r) {
        Complex s{0.0, 0.0};
        for (std::size_t c = 0; c < gd; ++c) {
          const Complex mrc = m(r, c);
          if (mrc != Complex{0.0, 0.0}) s += mrc * in[c];
        }
        out[r] = s;
      }
      for (std::size_t g = 0; g < gd; ++g) amps_[base + offsets[g]] = out[g];
      // Odometer over the untouched wires, least significant last.
      for (std::size_t t = free_strides.size(); t-- > 0;) {
        if (++digits[t] < 3) {
          base += free_strides[t];
          break;
        }
        digits[t] = 0;
        base -= 2 * free_strides[t];
      }
    }
  }

  std::size_t n_ = 0;
  std::vector<Complex> amps_;
};

inline QutritState apply_gate(QutritState state, const GateMatrix& gate, std::span<const std::size_t> wires) {
  state.apply(gate, wires);
  return state;
}

inline QutritState apply_gate(QutritState state, const GateMatrix& gate, std::initializer_list<std::size_t> wires) {
  state.apply(gate, wires);
  return state;
}

namespace detail {

inline void check_wire(const QutritState& s, std::size_t wire) {
  if (wire >= s.num_qutrits()) {
    throw InvalidArgument("wire " + std::to_string(wire) + " out of range for " +
                          std::to_string(s.num_qutrits()) + " qutrits");
  }
}

}  // namespace detail

/// Marginal distribution of one wire.
inline std::array<double, 3> probabilities(const QutritState& s, std::size_t wire) {
  detail::check_wire(s, wire);
  const std::size_t st = s.stride(wire);
  std::array<double, 3> p{0.0, 0.0, 0.0};
  const auto a = s.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) p[(i / st) % 3] += std::norm(a[i]);
  return p;
}

/// Reduced density matrix of the listed wires (in the listed digit order),
/// normalized to unit trace.
inline ComplexMatrix reduced_density_matrix(const QutritState& s, std::span<const std::size_t> wires) {
  for (std::size_t i = 0; i < wires.size(); ++i) {
    detail::check_wire(s, wires[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (wires[i] == wires[j]) throw InvalidArgument("reduced_density: duplicate wire");
  }
  const std::size_t k = wires.size();
  const std::size_t d = pow3(k);
  std::vector<std::size_t> keep_offsets(d, 0);
  for (std::size_t g = 0; g < d; ++g) {
    std::size_t rem = g;
    for (std::size_t t = k; t-- > 0;) {
      keep_offsets[g] += (rem % 3) * s.stride(wires[t]);
      rem /= 3;
    }
  }
  ComplexMatrix rho(d, d);
  const auto a = s.amplitudes();
  for (std::size_t base = 0; base < a.size(); ++base) {
    bool is_base = true;
    for (std::size_t w : wires)
      if ((base / s.stride(w)) % 3 != 0) {
        is_base = false;
        break;
      }
    if (!is_base) continue;
    for (std::size_t r = 0; r < d; ++r) {
      const Complex ar = a[base + keep_offsets[r]];
      if (ar == Complex{0.0, 0.0}) continue;
      for (std::size_t c = 0; c < d; ++c) rho(r, c) += ar * std::conj(a[base + keep_offsets[c]]);
    }
  }
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw InvalidArgument("reduced_density: zero state");
  return Complex{1.0 / tr, 0.0} * rho;
}

/// Smallest eigenvalue of a Hermitian matrix.
inline double min_eigenvalue(const ComplexMatrix& h) {
  Eigen::MatrixXcd m(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) m(i, j) = h(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// 3x3 Hermitian, unit trace, positive semidefinite (to 1e-10).
class DensityMatrix3 {
 public:
  explicit DensityMatrix3(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != 3 || m_.cols() != 3) throw InvalidArgument("DensityMatrix3: must be 3x3");
    if (!m_.all_finite()) throw InvalidArgument("DensityMatrix3: non-finite entries");
    if (!is_hermitian(m_, kExactTol)) throw InvalidArgument("DensityMatrix3: not Hermitian");
    if (std::abs(m_.trace() - Complex{1.0, 0.0}) > kExactTol) {
      throw InvalidArgument("DensityMatrix3: trace is not 1");
    }
    if (min_eigenvalue(m_) < -1e-10) throw InvalidArgument("DensityMatrix3: negative eigenvalue (non-physical)");
  }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double purity() const { return (m_ * m_).trace().real(); }

 private:
  ComplexMatrix m_;
};

inline DensityMatrix3 reduced_density(const QutritState& s, std::size_t wire) {
  const std::array<std::size_t, 1> w{wire};
  return DensityMatrix3(reduced_density_matrix(s, w));
}

using BlochVector8 = std::array<double, 8>;

inline double bloch_norm(const BlochVector8& n) {
  double s = 0.0;
  for (double x : n) s += x * x;
  return std::sqrt(s);
}

/// n_k = (sqrt(3)/2) tr(rho lambda_k).
inline BlochVector8 bloch_from_density(const DensityMatrix3& rho) {
  const auto& g = GeneratorSet::standard();
  BlochVector8 n{};
  for (int k = 1; k <= 8; ++k)
    n[static_cast<std::size_t>(k - 1)] = std::sqrt(3.0) / 2.0 * (rho.matrix() * g.lambda(k)).trace().real();
  return n;
}

/// rho = (I + sqrt(3) n . lambda) / 3; throws if the result is not a state.
inline DensityMatrix3 density_from_bloch(const BlochVector8& n) {
  const auto& g = GeneratorSet::standard();
  ComplexMatrix rho = ComplexMatrix::identity(3);
  for (int k = 1; k <= 8; ++k)
    rho = rho + Complex{std::sqrt(3.0) * n[static_cast<std::size_t>(k - 1)], 0.0} * g.lambda(k);
  return DensityMatrix3(Complex{1.0 / 3.0, 0.0} * rho);
}

// SWAP test ------------------------------------------------------------------

/// Exact readout when shots is empty, otherwise a seeded binomial sample of
/// the ancilla's |0> probability.
struct ReadoutOptions {
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;
};

struct SwapTestResult {
  double fidelity = 0.0;
  double p0 = 0.0;
  bool clamped = false;
};

/// With control level k applying SWAP^k, P(ancilla = 0) = (5 + 4 <SWAP>) / 9,
/// and <SWAP> = tr(rho_A sigma_B) when the two sides are uncorrelated.
inline double fidelity_from_p0(double p0) { return (9.0 * p0 - 5.0) / 4.0; }
inline double p0_from_fidelity(double f) { return (5.0 + 4.0 * f) / 9.0; }

namespace detail {
inline std::atomic<std::uint64_t>& clamp_counter() {
  static std::atomic<std::uint64_t> c{0};
  return c;
}
}  // namespace detail

/// Number of fidelities pushed back into [0, 1] so far in this process.
inline std::uint64_t fidelity_clamp_count() { return detail::clamp_counter().load(); }

inline double sample_p0(double p0, const ReadoutOptions& opt) {
  if (!opt.shots) return p0;
  if (*opt.shots == 0) throw InvalidArgument("readout: shots must be positive");
  std::mt19937_64 rng(opt.seed);
  std::binomial_distribution<std::uint64_t> dist(*opt.shots, std::clamp(p0, 0.0, 1.0));
  return static_cast<double>(dist(rng)) / static_cast<double>(*opt.shots);
}

inline SwapTestResult finish_swap_test(double p0) {
  SwapTestResult r;
  r.p0 = p0;
  const double f = fidelity_from_p0(p0);
  r.fidelity = std::clamp(f, 0.0, 1.0);
  if (r.fidelity != f) {
    r.clamped = true;
    detail::clamp_counter().fetch_add(1, std::memory_order_relaxed);
  }
  return r;
}

using WirePair = std::pair<std::size_t, std::size_t>;

/// Joint SWAP test: Ch on the ancilla, one controlled SWAP per pair sharing
/// the ancilla, Ch^dagger, then read P(ancilla = 0).
inline SwapTestResult swap_test_fidelity(QutritState state, std::size_t ancilla,
                                         std::span<const WirePair> pairs,
                                         const ReadoutOptions& readout = {}) {
  detail::check_wire(state, ancilla);
  std::vector<std::size_t> used{ancilla};
  for (const auto& [a, b] : pairs) {
    detail::check_wire(state, a);
    detail::check_wire(state, b);
    for (std::size_t w : {a, b}) {
      if (std::find(used.begin(), used.end(), w) != used.end()) {
        throw InvalidArgument("swap_test: wire " + std::to_string(w) + " used twice (pairs must be disjoint "
                              "from each other and from the ancilla)");
      }
      used.push_back(w);
    }
  }
  if (probabilities(state, ancilla)[0] < 1.0 - 1e-10) {
    throw InvalidArgument("swap_test: ancilla must start in |0>");
  }
  static const GateMatrix ch = chrestenson();
  static const GateMatrix ch_dag = ch.adjoint();
  static const GateMatrix cswap = controlled_swap();
  state.apply(ch, {ancilla});
  for (const auto& [a, b] : pairs) state.apply(cswap, {ancilla, a, b});
  state.apply(ch_dag, {ancilla});
  return finish_swap_test(sample_p0(probabilities(state, ancilla)[0], readout));
}

/// One SWAP test per pair, each on its own copy of the input.
inline std::vector<SwapTestResult> swap_test_per_pair(const QutritState& state, std::size_t ancilla,
                                                      std::span<const WirePair> pairs,
                                                      const ReadoutOptions& readout = {}) {
  std::vector<SwapTestResult> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ReadoutOptions r = readout;
    r.seed = readout.seed + i;
    out.push_back(swap_test_fidelity(state, ancilla, pairs.subspan(i, 1), r));
  }
  return out;
}

// Snapshot export ------------------------------------------------------------

inline nlohmann::json state_to_json(const QutritState& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& z : s.amplitudes()) amps.push_back({z.real(), z.imag()});
  return {{"num_qutrits", s.num_qutrits()},
          {"basis_order", "qutrit0_most_significant"},
          {"amplitudes", std::move(amps)}};
}

inline QutritState state_from_json(const nlohmann::json& j, std::size_t max_qutrits = QutritState::kDefaultMaxQutrits) {
  if (j.value("basis_order", std::string{}) != "qutrit0_most_significant") {
    throw InvalidArgument("state snapshot: unsupported basis_order");
  }
  std::vector<Complex> amps;
  for (const auto& e : j.at("amplitudes")) amps.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  QutritState s = QutritState::from_amplitudes(std::move(amps), max_qutrits);
  if (s.num_qutrits() != j.at("num_qutrits").get<std::size_t>()) {
    throw InvalidArgument("state snapshot: num_qutrits does not match amplitude count");
  }
  return s;
}

}  // namespace qutrit
