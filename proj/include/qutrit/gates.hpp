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

// Qutrit gate catalog.
//
// Generators: the Gell-Mann matrices lambda_1..lambda_8 (tr(l_k l_l) = 2 d_kl)
// and two SO(3) families, J_i and Sigma_i. Sigma_1 = (l_1 + l_6)/sqrt(2),
// Sigma_2 = (l_2 + l_7)/sqrt(2), Sigma_3 = diag(1, 0, -1). Every generator used
// for a rotation has spectrum {-1, 0, 1}, so G^3 = G and
//
//   exp(i x G) = I + (cos x - 1) G^2 + i sin x G.
//
// Computational |0>,|1>,|2> correspond to angular momentum |-1>,|0>,|+1>.

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qutrit/tensor.hpp"

namespace qutrit {

enum class Axis { x, y, z };

inline const char* axis_name(Axis a) {
  switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

/// A named operator acting on `arity` qutrits (matrix is 3^arity square).
/// Hermitian generators are stored with is_generator set; everything else is
/// unitary.
struct GateMatrix {
  std::string name;
  int arity = 1;
  ComplexMatrix matrix;
  std::vector<double> params;
  bool is_generator = false;

  std::size_t dim() const noexcept { return matrix.rows(); }

  GateMatrix adjoint() const {
    GateMatrix g = *this;
    g.name += "_dag";
    g.matrix = matrix.adjoint();
    return g;
  }

  static GateMatrix unitary(std::string name, int arity, ComplexMatrix m, std::vector<double> params = {}) {
    std::size_t expect = 1;
    for (int i = 0; i < arity; ++i) expect *= 3;
    if (m.rows() != expect || m.cols() != expect) {
      throw InvalidArgument("gate '" + name + "': matrix is not " + std::to_string(expect) + "x" +
                            std::to_string(expect));
    }
    if (!is_unitary(m, kExactTol)) throw InvalidArgument("gate '" + name + "': matrix is not unitary");
    return GateMatrix{std::move(name), arity, std::move(m), std::move(params), false};
  }
};

/// The eight Gell-Mann matrices plus the J and Sigma families.
struct GeneratorSet {
  std::array<ComplexMatrix, 8> gellmann;
  std::array<ComplexMatrix, 3> j_family;
  std::array<ComplexMatrix, 3> sigma_family;

  const ComplexMatrix& lambda(int i) const {
    if (i < 1 || i > 8) throw InvalidArgument("Gell-Mann index must be in 1..8, got " + std::to_string(i));
    return gellmann[static_cast<std::size_t>(i - 1)];
  }
  const ComplexMatrix& sigma(Axis a) const { return sigma_family[static_cast<std::size_t>(a)]; }
  const ComplexMatrix& j(Axis a) const { return j_family[static_cast<std::size_t>(a)]; }

  static GeneratorSet build() {
    const Complex i = 1i;
    const double s3 = 1.0 / std::sqrt(3.0);
    const double s2 = 1.0 / std::sqrt(2.0);
    GeneratorSet g;
    g.gellmann = {
        ComplexMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}},
        ComplexMatrix{{0, -i, 0}, {i, 0, 0}, {0, 0, 0}},
        ComplexMatrix{{1, 0, 0}, {0, -1, 0}, {0, 0, 0}},
        ComplexMatrix{{0, 0, 1}, {0, 0, 0}, {1, 0, 0}},
        ComplexMatrix{{0, 0, -i}, {0, 0, 0}, {i, 0, 0}},
        ComplexMatrix{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}},
        ComplexMatrix{{0, 0, 0}, {0, 0, -i}, {0, i, 0}},
        ComplexMatrix{{s3, 0, 0}, {0, s3, 0}, {0, 0, -2.0 * s3}},
    };
    g.j_family = {
        i * ComplexMatrix{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
        i * ComplexMatrix{{0, 0, 1}, {0, 0, 0}, {-1, 0, 0}},
        i * ComplexMatrix{{0, -1, 0}, {1, 0, 0}, {0, 0, 0}},
    };
    g.sigma_family = {
        s2 * ComplexMatrix{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}},
        s2 * ComplexMatrix{{0, -i, 0}, {i, 0, -i}, {0, i, 0}},
        ComplexMatrix{{1, 0, 0}, {0, 0, 0}, {0, 0, -1}},
    };
    return g;
  }

  static const GeneratorSet& standard() {
    static const GeneratorSet g = build();
    return g;
  }
};

/// exp(i x G) for a generator with G^3 = G.
inline ComplexMatrix exp_i_cubic(const ComplexMatrix& g, double x) {
  const ComplexMatrix g2 = g * g;
  return ComplexMatrix::identity(g.rows()) + Complex{std::cos(x) - 1.0, 0.0} * g2 +
         Complex{0.0, std::sin(x)} * g;
}

inline GateMatrix gellmann(int i) {
  const auto& m = GeneratorSet::standard().lambda(i);
  return GateMatrix{"lambda" + std::to_string(i), 1, m, {}, true};
}

/// exp(i theta lambda_i). lambda_1..7 have spectrum {-1,0,1}; lambda_8 is
/// diagonal and gives a pure relative phase.
inline GateMatrix exp_lambda(int i, double theta) {
  const auto& l = GeneratorSet::standard().lambda(i);
  ComplexMatrix m;
  if (i == 8) {
    std::array<Complex, 3> d;
    for (std::size_t k = 0; k < 3; ++k) d[k] = std::exp(Complex{0.0, theta * l(k, k).real()});
    m = ComplexMatrix::diagonal(d);
  } else {
    m = exp_i_cubic(l, theta);
  }
  return GateMatrix::unitary("exp_lambda" + std::to_string(i), 1, std::move(m), {theta});
}

/// Phase gate generated by lambda_8.
inline GateMatrix lambda8_phase(double theta) {
  GateMatrix g = exp_lambda(8, theta);
  g.name = "lambda8_phase";
  return g;
}

/// Closed-form R_axis(xi) = exp(i xi Sigma_axis) from an explicit generator
/// set (so a perturbed set can be pushed through the same code path).
inline ComplexMatrix sigma_rotation_matrix(Axis axis, double xi, const GeneratorSet& gens) {
  return exp_i_cubic(gens.sigma(axis), xi);
}

inline GateMatrix sigma_rotation(Axis axis, double xi) {
  return GateMatrix::unitary(std::string("R") + axis_name(axis), 1,
                             sigma_rotation_matrix(axis, xi, GeneratorSet::standard()), {xi});
}

/// Chrestenson (ternary Hadamard): 3-point DFT with omega = exp(2 pi i / 3).
inline GateMatrix chrestenson() {
  const double s = 1.0 / std::sqrt(3.0);
  ComplexMatrix m(3, 3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      m(r, c) = s * std::exp(Complex{0.0, 2.0 * kPi * static_cast<double>((r * c) % 3) / 3.0});
  return GateMatrix::unitary("Ch", 1, std::move(m));
}

/// |a,b> -> |b,a> on two qutrits.
inline GateMatrix swap_gate() {
  ComplexMatrix m(9, 9);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) m(b * 3 + a, a * 3 + b) = 1.0;
  return GateMatrix::unitary("SWAP", 2, std::move(m));
}

/// Wires (control, a, b). Control level k applies SWAP^k, i.e. identity for
/// k = 0 and SWAP for k = 1, 2. Hermitian as well as unitary.
inline GateMatrix controlled_swap() {
  ComplexMatrix m(27, 27);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        const std::size_t in = c * 9 + a * 3 + b;
        const std::size_t out = c == 0 ? in : c * 9 + b * 3 + a;
        m(out, in) = 1.0;
      }
  return GateMatrix::unitary("CSWAP", 3, std::move(m));
}

/// Ternary controlled add: |i,j> -> |i, (i + j) mod 3>.
inline GateMatrix tadd() {
  ComplexMatrix m(9, 9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i * 3 + (i + j) % 3, i * 3 + j) = 1.0;
  return GateMatrix::unitary("TAdd", 2, std::move(m));
}

/// Every named operator, with parameterized gates instantiated at `angle`.
inline std::vector<GateMatrix> gate_catalog(double angle) {
  const auto& gens = GeneratorSet::standard();
  std::vector<GateMatrix> out;
  for (int i = 1; i <= 8; ++i) out.push_back(gellmann(i));
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    out.push_back(GateMatrix{std::string("J") + axis_name(a), 1, gens.j(a), {}, true});
  }
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    out.push_back(GateMatrix{std::string("Sigma_") + axis_name(a), 1, gens.sigma(a), {}, true});
  }
  for (int i = 1; i <= 8; ++i) out.push_back(exp_lambda(i, angle));
  out.push_back(lambda8_phase(angle));
  for (Axis a : {Axis::x, Axis::y, Axis::z}) out.push_back(sigma_rotation(a, angle));
  out.push_back(chrestenson());
  out.push_back(swap_gate());
  out.push_back(controlled_swap());
  out.push_back(tadd());
  return out;
}

}  // namespace qutrit
