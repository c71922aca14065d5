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

// Majorana-sphere codec for a pure qutrit.
//
// A pure qutrit is a pair of points P1(theta1, phi1), P2(theta2, phi2) on the
// unit sphere. With zeta_k = exp(i phi_k) tan(theta_k / 2) the state is, up to
// normalization and global phase,
//
//   [ sqrt(2), zeta_1 + zeta_2, sqrt(2) zeta_1 zeta_2 ]
//
// and the points are recovered as the roots of
//   (c0/sqrt2) z^2 - c1 z + c2/sqrt2 = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <tuple>
#include <utility>

#include "qutrit/gates.hpp"
#include "qutrit/tensor.hpp"

namespace qutrit {

/// Wraps into [0, 2 pi).
inline double wrap_two_pi(double a) {
  double w = std::fmod(a, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  if (w >= 2.0 * kPi) w = 0.0;
  return w;
}

/// Wraps into (-pi, pi].
inline double wrap_pi(double a) {
  double w = wrap_two_pi(a);
  return w > kPi ? w - 2.0 * kPi : w;
}

inline double clamp_theta(double t) { return std::clamp(t, 0.0, kPi); }

/// Polar angles clamp to [0, pi]; azimuths wrap into [0, 2 pi).
struct MajoranaAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;

  MajoranaAngles() = default;
  MajoranaAngles(double t1, double t2, double p1, double p2) {
    for (double v : {t1, t2, p1, p2}) {
      if (!std::isfinite(v)) throw InvalidArgument("MajoranaAngles: non-finite angle");
    }
    theta1 = clamp_theta(t1);
    theta2 = clamp_theta(t2);
    phi1 = wrap_two_pi(p1);
    phi2 = wrap_two_pi(p2);
  }

  friend bool operator==(const MajoranaAngles&, const MajoranaAngles&) = default;
};

/// Unit-norm qutrit amplitudes in computational order |0>,|1>,|2>
/// (= C_{-1}, C_0, C_{+1}).
class PureQutrit {
 public:
  PureQutrit() : amps_{1.0, 0.0, 0.0} {}

  /// Normalizes the input; rejects the zero vector.
  static PureQutrit normalized(std::array<Complex, 3> a) {
    const double n = std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
    if (!(n > 1e-300) || !std::isfinite(n)) throw InvalidArgument("PureQutrit: zero or non-finite state");
    for (auto& z : a) z /= n;
    return PureQutrit(a);
  }

  const std::array<Complex, 3>& amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  ComplexVector vector() const { return ComplexVector{amps_[0], amps_[1], amps_[2]}; }

 private:
  explicit PureQutrit(std::array<Complex, 3> a) : amps_(a) {}
  std::array<Complex, 3> amps_;
};

/// min over alpha of || a - exp(i alpha) b || for unit vectors a, b.
inline double ray_distance(const ComplexVector& a, const ComplexVector& b) {
  const Complex ov = inner(b, a);
  const Complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex(1.0);
  return (a - phase * b).norm();
}

inline double ray_distance(const PureQutrit& a, const PureQutrit& b) {
  return ray_distance(a.vector(), b.vector());
}

/// The general pure state of the two Majorana points.
inline PureQutrit encode(const MajoranaAngles& a) {
  const double c1 = std::cos(a.theta1 / 2.0), s1 = std::sin(a.theta1 / 2.0);
  const double c2 = std::cos(a.theta2 / 2.0), s2 = std::sin(a.theta2 / 2.0);
  const Complex e1 = std::polar(1.0, a.phi1);
  const Complex e2 = std::polar(1.0, a.phi2);
  const double r2 = std::sqrt(2.0);
  // The bracket lies in [2, 4], so gamma is always finite.
  const double bracket = 3.0 + std::cos(a.theta1) * std::cos(a.theta2) +
                         (std::sin(a.theta1) * std::sin(a.theta2)) * std::cos(std::abs(a.phi1 - a.phi2));
  const double gamma = r2 / std::sqrt(bracket);
  std::array<Complex, 3> v{
      gamma * r2 * (c1 * c2),
      gamma * (e1 * (s1 * c2) + e2 * (c1 * s2)),
      gamma * r2 * std::polar(1.0, a.phi1 + a.phi2) * (s1 * s2),
  };
  // gamma already normalizes; this only trims rounding.
  return PureQutrit::normalized(v);
}

/// Fixed completion columns for the QR preparation. Together with the state
/// they reproduce the published preparation unitary (up to global phase).
inline const std::array<ComplexVector, 2>& preparation_completion() {
  static const std::array<ComplexVector, 2> cols{
      ComplexVector{1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0)},
      ComplexVector{0.0, -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)},
  };
  return cols;
}

/// Unitary whose first column is the state, from the QR factorization of
/// [state | completion]. The global phase makes the largest-magnitude
/// component of the first column real and positive.
inline GateMatrix preparation_unitary(const PureQutrit& state) {
  const auto& comp = preparation_completion();
  const std::array<ComplexVector, 3> cols{state.vector(), comp[0], comp[1]};
  const QrResult qr = qr_decompose(ComplexMatrix::from_columns(cols));

  std::size_t lead = 0;
  for (std::size_t k = 1; k < 3; ++k)
    if (std::abs(qr.q(k, 0)) > std::abs(qr.q(lead, 0)) + 1e-15) lead = k;
  const Complex phase = std::conj(qr.q(lead, 0)) / std::abs(qr.q(lead, 0));
  return GateMatrix::unitary("MajoranaPrep", 1, phase * qr.q);
}

namespace detail {

// (theta, phi) of the point with stereographic coordinate zeta.
inline std::pair<double, double> point_from_root(Complex zeta) {
  return {2.0 * std::atan(std::abs(zeta)), wrap_two_pi(std::arg(zeta))};
}

}  // namespace detail

/// Inverts encode() on rays. Points come back ordered by (theta, phi).
inline MajoranaAngles decode(const PureQutrit& state) {
  const auto& c = state.amplitudes();
  const double r2 = std::sqrt(2.0);
  const Complex a2 = c[0] / r2;
  const Complex a1 = -c[1];
  const Complex a0 = c[2] / r2;
  const double scale = std::max({std::abs(a0), std::abs(a1), std::abs(a2)});
  if (!(scale > 0.0)) throw InvalidArgument("decode: zero state");
  constexpr double kDegree = 1e-15;

  std::pair<double, double> p, q;
  if (std::abs(a2) <= kDegree * scale) {
    if (std::abs(a1) <= kDegree * scale) {
      // Only c2 survives: |2>, both points at the south pole.
      p = {kPi, 0.0};
      q = {kPi, 0.0};
    } else {
      const Complex finite = -a0 / a1;
      p = detail::point_from_root(finite);
      q = {kPi, wrap_two_pi(std::arg(finite))};
    }
  } else {
    // Cancellation-free quadratic roots.
    const Complex disc = std::sqrt(a1 * a1 - 4.0 * a2 * a0);
    const Complex plus = a1 + disc;
    const Complex minus = a1 - disc;
    const Complex big = std::abs(plus) >= std::abs(minus) ? plus : minus;
    if (std::abs(big) == 0.0) {
      // a1 == 0 and a0 * a2 == 0 with a2 != 0: double root at zero.
      p = {0.0, 0.0};
      q = {0.0, 0.0};
    } else {
      const Complex z1 = -big / (2.0 * a2);
      const Complex z2 = -2.0 * a0 / big;
      p = detail::point_from_root(z1);
      q = detail::point_from_root(z2);
    }
  }
  if (q < p) std::swap(p, q);
  MajoranaAngles out;
  out.theta1 = p.first;
  out.phi1 = p.second;
  out.theta2 = q.first;
  out.phi2 = q.second;
  return out;
}

/// Ray distance between encode(a) and encode(decode(encode(a))).
inline double roundtrip_check(const MajoranaAngles& a) {
  const PureQutrit s = encode(a);
  return ray_distance(s, encode(decode(s)));
}

}  // namespace qutrit
