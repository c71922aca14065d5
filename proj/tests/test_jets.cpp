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

#include "qutrit/jets.hpp"

#include <gtest/gtest.h>

#include <sstream>

#ifndef QUTRIT_TEST_DATA_DIR
#error "QUTRIT_TEST_DATA_DIR must be defined"
#endif

using namespace qutrit;

namespace {

const std::string kData = QUTRIT_TEST_DATA_DIR;

JetEvent one_jet(double jet_pt, std::vector<JetConstituent> cs) {
  JetEvent j;
  j.id = "t";
  j.jet_pt = jet_pt;
  j.jet_mass = 80.0;
  j.jet_energy = 600.0;
  j.constituents = std::move(cs);
  return j;
}

JetConstituent constituent(double pt, double deta, double dphi, double e = 10.0, double d0 = 0.01, double dz = -0.02) {
  JetConstituent c;
  c.pt = pt;
  c.delta_eta = deta;
  c.delta_phi = dphi;
  c.energy = e;
  c.d0 = d0;
  c.dz = dz;
  return c;
}

bool in_range(const MajoranaAngles& a) {
  return a.theta1 >= 0 && a.theta1 <= kPi && a.theta2 >= 0 && a.theta2 <= kPi && a.phi1 >= 0 && a.phi1 < 2 * kPi &&
         a.phi2 >= 0 && a.phi2 < 2 * kPi;
}

}  // namespace

TEST(base_angles, zero_pt_is_midpoint) {
  const auto c = constituent(0.0, 0.4, -0.3);
  const auto b = base_angles(c, one_jet(500, {c}), kPi);
  EXPECT_EQ(b.theta, kPi / 2);
  EXPECT_EQ(b.phi, 0.0);
}

TEST(base_angles, on_axis_leading_constituent_is_midpoint) {
  const auto c = constituent(500.0, 0.0, 0.0);
  const auto b = base_angles(c, one_jet(500, {c}), kPi);
  EXPECT_EQ(b.theta, kPi / 2);
  EXPECT_EQ(b.phi, 0.0);
}

TEST(base_angles, linear_in_scale) {
  const auto c = constituent(120.0, 0.2, 0.1);
  const auto j = one_jet(500, {c});
  const auto b1 = base_angles(c, j, 1.0), b2 = base_angles(c, j, 2.0);
  EXPECT_NEAR(b2.theta - kPi / 2, 2 * (b1.theta - kPi / 2), 1e-15);
  EXPECT_NEAR(b2.phi, 2 * b1.phi, 1e-15);
}

TEST(base_angles, theta_clamps) {
  const auto c = constituent(500.0, 3.0, 0.0);
  EXPECT_EQ(base_angles(c, one_jet(500, {c}), kPi).theta, kPi);
}

TEST(extended_features, zeros) {
  JetEvent j = one_jet(500, {constituent(0, 0, 0, 0, 0, 0)});
  j.jet_mass = 0.0;
  const auto x = extended_features(j.constituents[0], j, kPi);
  EXPECT_EQ(x.sigma_m, 0.0);
  EXPECT_EQ(x.eps, 0.0);
  EXPECT_EQ(x.rho0, 0.0);
  EXPECT_EQ(x.rhoz, 0.0);
}

TEST(extended_features, energy_term_at_unit_ratio) {
  const auto c = constituent(500.0, 0, 0, 1.25);
  const auto x = extended_features_raw(c, one_jet(500, {c}), 0.5);
  EXPECT_EQ(x.eps, 0.5 * 1.25);
}

TEST(extended_features, mass_term_uses_constituent_mass_when_present) {
  auto c = constituent(250.0, 0, 0);
  const auto j = one_jet(500, {c});
  EXPECT_DOUBLE_EQ(extended_features_raw(c, j, 1.0).sigma_m, 0.5 * (0.0 - 80.0));
  c.mass = 0.14;
  EXPECT_DOUBLE_EQ(extended_features_raw(c, j, 1.0).sigma_m, 0.5 * (0.14 - 80.0));
}

TEST(extended_features, linear_in_scale_and_wrapped) {
  const auto c = constituent(100.0, 0.1, 0.1, 3.0, 0.4, -0.7);
  const auto j = one_jet(400, {c});
  const auto a = extended_features_raw(c, j, 1.0), b = extended_features_raw(c, j, 3.0);
  EXPECT_DOUBLE_EQ(b.eps, 3 * a.eps);
  EXPECT_DOUBLE_EQ(b.rho0, 3 * a.rho0);
  EXPECT_DOUBLE_EQ(b.rhoz, 3 * a.rhoz);
  EXPECT_DOUBLE_EQ(b.sigma_m, 3 * a.sigma_m);
  const auto w = extended_features(c, j, 3.0);
  for (double v : {w.sigma_m, w.eps, w.rho0, w.rhoz}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 2 * kPi);
  }
}

TEST(extended_features, invariant_under_common_pt_rescaling) {
  const auto c = constituent(100.0, 0.1, 0.1, 3.0, 0.4, -0.7);
  const auto j = one_jet(400, {c});
  auto c2 = c;
  c2.pt *= 7.5;
  auto j2 = j;
  j2.jet_pt *= 7.5;
  j2.constituents[0] = c2;
  const auto a = extended_features(c, j, kPi), b = extended_features(c2, j2, kPi);
  EXPECT_NEAR(a.sigma_m, b.sigma_m, 1e-12);
  EXPECT_NEAR(a.eps, b.eps, 1e-12);
  EXPECT_NEAR(a.rho0, b.rho0, 1e-12);
  EXPECT_NEAR(a.rhoz, b.rhoz, 1e-12);
  const auto ba = base_angles(c, j, kPi), bb = base_angles(c2, j2, kPi);
  EXPECT_NEAR(ba.theta, bb.theta, 1e-12);
  EXPECT_NEAR(ba.phi, bb.phi, 1e-12);
}

TEST(encode_event, pads_to_max_particles) {
  const auto j = one_jet(500, {constituent(300, 0.1, 0.1), constituent(200, -0.1, 0.2)});
  const auto a = encode_event(j, FeatureMode::B, kPi, 4);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[2], MajoranaAngles{});
  EXPECT_EQ(a[3], MajoranaAngles{});
  EXPECT_EQ(encode_event(j, FeatureMode::B, kPi, 1).size(), 1u);
}

TEST(encode_event, modes_differ_only_in_azimuths) {
  const auto jets = synth_jets(JetKind::three_prong, 50, 3);
  for (const auto& j : jets) {
    const auto a = encode_event(j, FeatureMode::A, kPi, 4), b = encode_event(j, FeatureMode::B, kPi, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_EQ(a[i].theta1, b[i].theta1);
      EXPECT_EQ(a[i].theta2, b[i].theta2);
    }
  }
}

TEST(encode_event, azimuth_fold_is_continuous_at_zero) {
  const auto j1 = one_jet(500, {constituent(250, 0.0, 1e-9)});
  const auto j2 = one_jet(500, {constituent(250, 0.0, -1e-9)});
  const double t1 = encode_event(j1, FeatureMode::B, kPi, 1)[0].theta2;
  const double t2 = encode_event(j2, FeatureMode::B, kPi, 1)[0].theta2;
  EXPECT_NEAR(t1, kPi / 2, 1e-8);
  EXPECT_NEAR(t1 - t2, 2 * kPi * 0.5 * 1e-9, 1e-15);
}

TEST(encode_event, all_angles_in_range) {
  for (JetKind k : {JetKind::qcd_like, JetKind::two_prong, JetKind::three_prong})
    for (const auto& j : synth_jets(k, 200, 4))
      for (FeatureMode m : {FeatureMode::A, FeatureMode::B})
        for (double f : {0.5, kPi, 10.0})
          for (const auto& a : encode_event(j, m, f, 4)) EXPECT_TRUE(in_range(a));
}

TEST(encode_event, rejects_bad_input) {
  EXPECT_THROW(encode_event(one_jet(500, {}), FeatureMode::A, kPi, 4), InvalidArgument);
  EXPECT_THROW(encode_event(one_jet(0.0, {constituent(1, 0, 0)}), FeatureMode::A, kPi, 4), InvalidArgument);
  EXPECT_THROW(encode_event(one_jet(5.0, {constituent(1, 0, 0)}), FeatureMode::A, kPi, 0), InvalidArgument);
}

TEST(load_events, empty_input) {
  std::istringstream csv(""), jsonl("");
  const auto a = load_events(csv, DataFormat::csv), b = load_events(jsonl, DataFormat::jsonl);
  EXPECT_TRUE(a.events.empty());
  EXPECT_TRUE(a.rejects.empty());
  EXPECT_TRUE(b.events.empty());
  EXPECT_TRUE(b.rejects.empty());
}

TEST(load_events, one_malformed_row) {
  const auto r = load_events(kData + "/one_malformed_of_100.csv", DataFormat::csv);
  EXPECT_EQ(r.events.size(), 99u);
  ASSERT_EQ(r.rejects.size(), 1u);
  EXPECT_EQ(r.rejects[0].row, 59u);  // header is line 1, e57 is line 59
  EXPECT_NE(r.rejects[0].message.find("pt"), std::string::npos);
}

TEST(load_events, canonical_csv_and_jsonl_agree) {
  const auto a = load_events(kData + "/canonical.csv", DataFormat::csv);
  const auto b = load_events(kData + "/canonical.jsonl", DataFormat::jsonl);
  EXPECT_TRUE(a.rejects.empty());
  EXPECT_TRUE(b.rejects.empty());
  ASSERT_EQ(a.events.size(), 3u);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.events[1].label, "three-prong");
  EXPECT_EQ(a.events[0].constituents[1].mass, 0.13957);
  EXPECT_FALSE(a.events[0].constituents[0].mass.has_value());
}

TEST(load_events, round_trip_bit_exact) {
  const auto canon = load_events(kData + "/canonical.csv", DataFormat::csv).events;
  const auto synth = synth_jets(JetKind::two_prong, 20, 9);
  for (const std::vector<JetEvent>* set : {&canon, &synth}) {
    for (DataFormat fmt : {DataFormat::csv, DataFormat::jsonl}) {
      std::stringstream ss;
      write_events(ss, *set, fmt);
      const auto back = load_events(ss, fmt);
      EXPECT_TRUE(back.rejects.empty());
      EXPECT_EQ(back.events, *set);
    }
  }
}

TEST(load_events, limit) {
  const auto r = load_events(kData + "/one_malformed_of_100.csv", DataFormat::csv, 10);
  EXPECT_EQ(r.events.size(), 10u);
  const auto j = load_events(kData + "/canonical.jsonl", DataFormat::jsonl, 2);
  EXPECT_EQ(j.events.size(), 2u);
}

TEST(load_events, schema_errors_reported_with_rows) {
  std::istringstream missing("jet_id,jet_pt\n1,2\n");
  EXPECT_THROW(load_events(missing, DataFormat::csv), DataError);
  std::istringstream jsonl(
      "{\"jet_pt\":1,\"jet_mass\":1,\"jet_energy\":1,\"label\":\"b\",\"constituents\":[{\"pt\":1,\"delta_eta\":0,"
      "\"delta_phi\":0,\"energy\":1,\"d0\":0,\"dz\":0}]}\n"
      "{not json\n"
      "{\"jet_pt\":-1,\"jet_mass\":1,\"jet_energy\":1,\"label\":\"b\",\"constituents\":[]}\n"
      "{\"jet_pt\":1,\"bogus\":1}\n");
  const auto r = load_events(jsonl, DataFormat::jsonl);
  EXPECT_EQ(r.events.size(), 1u);
  ASSERT_EQ(r.rejects.size(), 3u);
  EXPECT_EQ(r.rejects[0].row, 2u);
  EXPECT_EQ(r.rejects[1].row, 3u);
  EXPECT_EQ(r.rejects[2].row, 4u);
}

TEST(load_events, constituents_sorted_by_pt) {
  std::istringstream csv(
      "jet_id,jet_pt,jet_mass,jet_energy,label,pt,delta_eta,delta_phi,energy,d0,dz\n"
      "a,100,10,120,background,10,0,0,10,0,0\n"
      "a,100,10,120,background,70,0,0,70,0,0\n"
      "a,100,10,120,background,20,0,0,20,0,0\n");
  const auto r = load_events(csv, DataFormat::csv);
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.events[0].constituents[0].pt, 70.0);
  EXPECT_EQ(r.events[0].constituents[2].pt, 10.0);
}

TEST(load_events, missing_file) { EXPECT_THROW(load_events("/nonexistent/x.csv", DataFormat::csv), DataError); }

TEST(synth, deterministic_bytes) {
  std::stringstream a, b;
  write_events(a, synth_jets(JetKind::qcd_like, 50, 11), DataFormat::csv);
  write_events(b, synth_jets(JetKind::qcd_like, 50, 11), DataFormat::csv);
  EXPECT_EQ(a.str(), b.str());
  std::stringstream c;
  write_events(c, synth_jets(JetKind::qcd_like, 50, 12), DataFormat::csv);
  EXPECT_NE(a.str(), c.str());
}

TEST(synth, valid_events) {
  for (JetKind k : {JetKind::qcd_like, JetKind::two_prong, JetKind::three_prong})
    for (const auto& j : synth_jets(k, 100, 13)) {
      EXPECT_NO_THROW(validate(j));
      EXPECT_EQ(j.label, jet_kind_label(k));
      for (std::size_t i = 1; i < j.constituents.size(); ++i)
        EXPECT_GE(j.constituents[i - 1].pt, j.constituents[i].pt);
    }
}

TEST(synth, two_prong_wider_than_qcd) {
  auto mean = [](JetKind k) {
    double s = 0;
    for (const auto& j : synth_jets(k, 1000, 21)) s += mean_leading_delta_r(j);
    return s / 1000;
  };
  EXPECT_GT(mean(JetKind::two_prong), mean(JetKind::qcd_like));
}

TEST(synth, three_prong_higher_leading_entropy) {
  auto mean = [](JetKind k) {
    double s = 0;
    for (const auto& j : synth_jets(k, 1000, 22)) s += leading_pt_entropy(j);
    return s / 1000;
  };
  EXPECT_GT(mean(JetKind::three_prong), mean(JetKind::qcd_like));
}

TEST(parsing, enums) {
  EXPECT_EQ(parse_mode("A"), FeatureMode::A);
  EXPECT_THROW(parse_mode("C"), InvalidArgument);
  EXPECT_EQ(parse_jet_kind("three-prong"), JetKind::three_prong);
  EXPECT_THROW(parse_jet_kind("four-prong"), InvalidArgument);
  EXPECT_EQ(format_from_path("x.jsonl"), DataFormat::jsonl);
  EXPECT_THROW(format_from_path("x.txt"), InvalidArgument);
}
