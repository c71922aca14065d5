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

// Acceptance checks. Prints one line per criterion:
//   criterion N: PASS|FAIL <details>
// Usage: acceptance [--only N]

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qutrit/metrics.hpp"
#include "qutrit/qae.hpp"
#include "qutrit/verify.hpp"

#ifndef QUTRIT_CLI_PATH
#error "QUTRIT_CLI_PATH must be defined"
#endif

namespace fs = std::filesystem;
using namespace qutrit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

double max_component_diff(const ComplexVector& a, const ComplexVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

MajoranaAngles random_angles(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> t(0.0, kPi), p(0.0, 2 * kPi);
  return {t(rng), t(rng), p(rng), p(rng)};
}

Outcome criterion1() {
  const ComplexVector got = encode(fixtures::worked_angles_literal()).vector();
  const ComplexVector want = fixtures::worked_state_printed();
  const double direct = max_component_diff(got, want);
  const double phased = detail::dev_up_to_phase(got, want);
  const bool pass = std::min(direct, phased) <= 0.01;
  return {pass, "encode(pi/2, pi/4, 2pi/3, 3pi/4) = " + detail::fmt_vec(got) + ", expected " + detail::fmt_vec(want) +
                    "; max dev " + fmt("%.3g", direct) + " (up to phase " + fmt("%.3g", phased) + "), tol 0.01"};
}

Outcome criterion2() {
  const PureQutrit psi = fixtures::worked_state();
  const auto u = preparation_unitary(psi).matrix;
  const double col = detail::dev_up_to_phase(u.column(0), psi.vector());
  const double mat = detail::dev_up_to_phase(u, fixtures::preparation_printed());
  const bool pass = col <= 1e-10 && mat <= 0.01 && is_unitary(u, 1e-12);
  return {pass, "first column dev " + fmt("%.3g", col) + " (tol 1e-10); matrix dev up to phase " + fmt("%.3g", mat) +
                    " (tol 0.01)"};
}

Outcome criterion3() {
  const double dx = max_abs_diff(sigma_rotation(Axis::x, kPi / 2).matrix, fixtures::rx_printed());
  const double dy = max_abs_diff(sigma_rotation(Axis::y, kPi / 4).matrix, fixtures::ry_printed());
  const double dz = max_abs_diff(sigma_rotation(Axis::z, 4 * kPi / 3).matrix, fixtures::rz_printed());
  const ComplexVector phi = sigma_rotation(Axis::z, 4 * kPi / 3).matrix *
                            (sigma_rotation(Axis::y, kPi / 4).matrix *
                             (sigma_rotation(Axis::x, kPi / 2).matrix * fixtures::worked_state().vector()));
  const double dc = max_component_diff(phi, fixtures::composite_printed());
  const bool pass = dx <= 0.05 && dy <= 0.05 && dz <= 0.05 && dc <= 0.01;
  const auto ry = sigma_rotation(Axis::y, kPi / 4).matrix;
  double dy_rest = 0.0;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      if (!fixtures::ry_misprinted_entry(r, c)) dy_rest = std::max(dy_rest, std::abs(ry(r, c) - fixtures::ry_printed()(r, c)));
  return {pass, "R_x dev " + fmt("%.3g", dx) + ", R_y dev " + fmt("%.3g", dy) + " (R_y[0][2] = " +
                    fmt("%.4f", ry(0, 2).real()) + ", R_y[2][0] = " + fmt("%.4f", ry(2, 0).real()) +
                    ", other entries dev " + fmt("%.3g", dy_rest) + "), R_z dev " + fmt("%.3g", dz) + " (tol 0.05); composite dev " + fmt("%.3g", dc) +
                    " (tol 0.01)"};
}

Outcome criterion4() {
  double worst = 0.0;
  for (int k = 1; k <= 8; ++k)
    for (int l = 1; l <= 8; ++l) {
      const Complex tr = (gellmann(k).matrix * gellmann(l).matrix).trace();
      worst = std::max(worst, std::abs(tr - Complex(k == l ? 2.0 : 0.0)));
    }
  const auto ch = chrestenson().matrix;
  const auto sw = swap_gate().matrix;
  ComplexMatrix ch_ref(3, 3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) ch_ref(r, c) = std::polar(1.0 / std::sqrt(3.0), 2.0 * kPi * double(r * c) / 3.0);
  const double ch_dev = max_abs_diff(ch, ch_ref);
  const bool pass = worst <= 1e-14 && is_unitary(ch, 1e-12) && is_unitary(sw, 1e-12) && ch_dev <= 1e-15 &&
                    sw == fixtures::swap_printed();
  return {pass, "max |tr(l_k l_l) - 2 delta| = " + fmt("%.3g", worst) + " (tol 1e-14); Ch dev " + fmt("%.3g", ch_dev) +
                    ", SWAP " + (sw == fixtures::swap_printed() ? "exact" : "mismatch")};
}

Outcome criterion5() {
  auto point = [](double th, double ph) {
    return std::array<double, 3>{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
  };
  auto dist = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
  };
  std::mt19937_64 rng(2024);
  double worst_res = 0.0, worst_pt = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_angles(rng);
    worst_res = std::max(worst_res, roundtrip_check(a));
    const auto d = decode(encode(a));
    const auto p1 = point(a.theta1, a.phi1), p2 = point(a.theta2, a.phi2);
    const auto q1 = point(d.theta1, d.phi1), q2 = point(d.theta2, d.phi2);
    worst_pt = std::max(worst_pt, std::min(std::max(dist(p1, q1), dist(p2, q2)), std::max(dist(p1, q2), dist(p2, q1))));
  }
  const std::vector<MajoranaAngles> edge{{0, 0, 0, 0},        {kPi, kPi, 0, 0},         {0, kPi, 0, 0},
                                         {1.0, 1.0, 2.0, 2.0}, {kPi, 0.3, 1.0, 2.0},     {kPi / 2, kPi / 2, 0, kPi},
                                         {1e-9, 1e-9, 0.1, 0.2}, {kPi - 1e-9, 0.5, 0.3, 5.0}, {0.0, 2.0, 0.0, 4.0}};
  double worst_edge = 0.0;
  for (const auto& a : edge) worst_edge = std::max(worst_edge, roundtrip_check(a));
  const bool pass = worst_res < 1e-9 && worst_edge < 1e-9 && worst_pt < 1e-6;
  return {pass, "1000 random: max residual " + fmt("%.3g", worst_res) + ", max point distance " + fmt("%.3g", worst_pt) +
                    "; " + std::to_string(edge.size()) + " degenerate: max residual " + fmt("%.3g", worst_edge) +
                    " (tol 1e-9)"};
}

Outcome criterion6() {
  std::mt19937_64 rng(606);
  // Derive the readout from brute-force evolution: fit P0 = a + b |<x|y>|^2.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int nfit = 50;
  for (int i = 0; i < nfit; ++i) {
    const auto x = oracle::random_state(3, rng), y = oracle::random_state(3, rng);
    Complex ov = 0.0;
    for (std::size_t k = 0; k < 3; ++k) ov += std::conj(x[k]) * y[k];
    const double o = std::norm(ov);
    const double p0 = oracle::swap_test_p0(oracle::kron(oracle::kron(x, y), {1.0, 0.0, 0.0}), 3, {{0, 1}});
    sx += o, sy += p0, sxx += o * o, sxy += o * p0;
  }
  const double slope = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);
  const double icept = (sy - slope * sx) / nfit;
  const double fit_dev = std::max(std::abs(slope - 4.0 / 9.0), std::abs(icept - 5.0 / 9.0));

  double worst_pair = 0.0;
  const std::array<WirePair, 1> one{WirePair{0, 1}};
  for (int i = 0; i < 100; ++i) {
    const auto a = PureQutrit::normalized({Complex(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng)),
                                           Complex(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng)),
                                           Complex(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng))});
    const auto b = encode(random_angles(rng));
    const std::array<PureQutrit, 3> wires{a, b, PureQutrit{}};
    const double f = swap_test_fidelity(QutritState::product(wires), 2, one).fidelity;
    worst_pair = std::max(worst_pair, std::abs(f - std::norm(inner(a.vector(), b.vector()))));
  }

  // Joint test on 3 pairs: data (latent + 3 trash) random and entangled,
  // references a random 3-qutrit state sigma, ancilla last.
  double worst_joint = 0.0;
  const std::array<WirePair, 3> pairs{WirePair{1, 4}, WirePair{2, 5}, WirePair{3, 6}};
  const std::array<std::size_t, 3> trash{1, 2, 3};
  for (int i = 0; i < 10; ++i) {
    const auto data = oracle::random_state(81, rng), ref = oracle::random_state(27, rng);
    const auto full = oracle::kron(oracle::kron(data, ref), {1.0, 0.0, 0.0});
    const auto s = QutritState::from_amplitudes(full);
    const ComplexMatrix rho = reduced_density_matrix(s, trash);
    Complex tr = 0.0;
    for (std::size_t r = 0; r < 27; ++r)
      for (std::size_t c = 0; c < 27; ++c) tr += std::conj(ref[r]) * rho(r, c) * ref[c];
    const double f = swap_test_fidelity(s, 7, pairs).fidelity;
    worst_joint = std::max(worst_joint, std::abs(f - tr.real()));
  }
  const bool pass = fit_dev < 1e-10 && worst_pair <= 1e-10 && worst_joint <= 1e-9;
  return {pass, "brute-force fit P0 = " + fmt("%.12f", icept) + " + " + fmt("%.12f", slope) +
                    " |<a|b>|^2; 100 pairs max dev " + fmt("%.3g", worst_pair) + " (tol 1e-10); 3-pair joint vs tr(rho sigma) max dev " +
                    fmt("%.3g", worst_joint) + " (tol 1e-9)"};
}

Outcome criterion7() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  double worst = 0.0;
  for (int cfg = 0; cfg < 20; ++cfg) {
    QaeTopology t;
    std::vector<EncodedEvent> batch;
    for (int e = 0; e < 2; ++e) {
      std::vector<MajoranaAngles> a;
      for (std::size_t q = 0; q < t.data_qutrits(); ++q) a.push_back(random_angles(rng));
      batch.push_back(encode_for_model(t, a));
    }
    ParameterVector p(t.num_params());
    for (auto& v : p) v = u(rng);
    EvalOptions opt;
    opt.backend = Backend::full;
    const auto gs = gradient(t, batch, p, GradientMethod::parameter_shift, 1e-4, opt);
    const auto gf = gradient(t, batch, p, GradientMethod::finite_diff, 1e-5, opt);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < gs.size(); ++k) num += (gs[k] - gf[k]) * (gs[k] - gf[k]), den += gs[k] * gs[k];
    worst = std::max(worst, std::sqrt(num) / std::max(std::sqrt(den), 1e-300));
  }
  return {worst <= 1e-6, "20 configs on the 8-qutrit circuit, max relative norm " + fmt("%.3g", worst) + " (tol 1e-6)"};
}

Outcome criterion8() {
  const QaeTopology t;
  int good = 0;
  std::ostringstream det;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.epochs = 10;
    cfg.learning_rate = 0.01;
    cfg.batch_size = 32;
    cfg.mode = FeatureMode::B;
    cfg.f = kPi;
    const auto train_set = encode_events(t, synth_jets(JetKind::qcd_like, 2000, seed), cfg.mode, cfg.f);
    const auto res = train(t, cfg, train_set);
    std::vector<JetEvent> test = synth_jets(JetKind::qcd_like, 500, seed + 100);
    for (JetKind k : {JetKind::two_prong, JetKind::three_prong}) {
      const auto v = synth_jets(k, 500, seed + 100);
      test.insert(test.end(), v.begin(), v.end());
    }
    const auto records = infer(t, res.params, encode_events(t, test, cfg.mode, cfg.f));
    const auto table = auc_table(records);
    double auc2 = 0.0, auc3 = 0.0;
    for (const auto& e : table) (e.signal_label == "two-prong" ? auc2 : auc3) = e.auc;
    const bool decreased = res.history.back().train_cost < res.history.front().train_cost;
    const bool ok = decreased && auc3 > auc2 && auc2 > 0.6 && auc3 > 0.6;
    good += ok;
    det << " seed " << seed << ": cost " << fmt("%.4f", res.history.front().train_cost) << "->"
        << fmt("%.4f", res.history.back().train_cost) << " auc3 " << fmt("%.3f", auc3) << " auc2 "
        << fmt("%.3f", auc2) << (ok ? " ok;" : " no;");
  }
  return {good >= 4, std::to_string(good) + "/5 seeds satisfy all conditions (need 4);" + det.str()};
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + QUTRIT_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("qutrit_acceptance_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Outcome criterion9() {
  const fs::path d = scratch("determinism");
  const auto p = [&](const char* n) { return (d / n).string(); };
  const fs::path log = d / "log.txt";
  bool ok = run_cli("synth --kind qcd-like --n 400 --seed 11 --out " + p("train.csv"), log) == 0 &&
            run_cli("synth --kind three-prong --n 100 --seed 12 --out " + p("test.csv"), log) == 0;
  for (const char* tag : {"a", "b"}) {
    const std::string m = p((std::string("model_") + tag + ".json").c_str());
    ok = ok &&
         run_cli("train --data " + p("train.csv") + " --epochs 3 --seed 5 --model " + m + " --out " +
                     p((std::string("loss_") + tag + ".csv").c_str()),
                 log) == 0 &&
         run_cli("infer --model " + m + " --data " + p("test.csv") + " --out " + p((std::string("scores_") + tag + ".csv").c_str()),
                 log) == 0;
  }
  if (!ok) return {false, "pipeline failed: " + slurp(log)};
  const bool loss = slurp(d / "loss_a.csv") == slurp(d / "loss_b.csv");
  const bool scores = slurp(d / "scores_a.csv") == slurp(d / "scores_b.csv");
  const bool model = slurp(d / "model_a.json") == slurp(d / "model_b.json");
  fs::remove_all(d);
  return {loss && scores && model, std::string("loss CSV ") + (loss ? "identical" : "differs") + ", scores CSV " +
                                       (scores ? "identical" : "differs") + ", model " + (model ? "identical" : "differs")};
}

Outcome criterion10() {
  const fs::path d = scratch("verify");
  const int clean = run_cli("verify", d / "log.txt");
  int mutated_ok = 0;
  for (int seed = 1; seed <= 5; ++seed) mutated_ok += run_cli("verify --mutate-sigma2 " + std::to_string(seed), d / "log.txt") == 3;
  fs::remove_all(d);
  return {clean == 0 && mutated_ok == 5,
          "verify exit " + std::to_string(clean) + "; mutated Sigma_2 exits 3 for " + std::to_string(mutated_ok) + "/5 seeds"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }
  const std::vector<std::function<Outcome()>> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                  criterion6, criterion7, criterion8, criterion9, criterion10};
  if (only < 0 || only > static_cast<int>(all.size())) {
    std::cerr << "no criterion " << only << '\n';
    return 2;
  }
  bool all_pass = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail << " ["
              << fmt("%.1f", secs) << " s]" << std::endl;
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
