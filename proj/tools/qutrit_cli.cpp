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

// qutrit-qae: train, infer, eval, verify, gates-dump, synth.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error,
// 3 verify fixture failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qutrit/gates.hpp"
#include "qutrit/jets.hpp"
#include "qutrit/metrics.hpp"
#include "qutrit/qae.hpp"
#include "qutrit/verify.hpp"

namespace {

using nlohmann::json;
using namespace qutrit;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerify = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flag values; unset flags fall back to the config file.
struct Flags {
  std::string config;
  std::optional<std::string> data, model, out, mode, grad, shots, kind;
  std::optional<double> scale_f, lr, angle;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs, batch, limit, n, bins, roc_points;
  std::optional<std::uint64_t> mutate_sigma2;
};

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"data",  "model", "out",   "mode",  "scale_f", "seed",
                                             "epochs", "batch", "lr",    "grad",  "shots",   "limit",
                                             "kind",  "n",     "bins",  "roc_points", "angle", "topology",
                                             "train", "synth"};
  return keys;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (std::find(config_keys().begin(), config_keys().end(), k) == config_keys().end()) {
      throw UsageError("config file '" + path + "': unknown key '" + k + "'");
    }
  }
  return j;
}

// Config file merged with flag overrides.
json resolve(const Flags& f) {
  json r = load_config(f.config);
  auto put = [&](const char* key, const auto& opt) {
    if (opt) r[key] = *opt;
  };
  put("data", f.data);
  put("model", f.model);
  put("out", f.out);
  put("mode", f.mode);
  put("grad", f.grad);
  put("shots", f.shots);
  put("kind", f.kind);
  put("scale_f", f.scale_f);
  put("lr", f.lr);
  put("angle", f.angle);
  put("seed", f.seed);
  put("epochs", f.epochs);
  put("batch", f.batch);
  put("limit", f.limit);
  put("n", f.n);
  put("bins", f.bins);
  put("roc_points", f.roc_points);
  return r;
}

template <class T>
std::optional<T> get(const json& r, const char* key) {
  if (!r.contains(key)) return std::nullopt;
  try {
    return r.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("setting '") + key + "': " + e.what());
  }
}

template <class T>
T require(const json& r, const char* key, const char* flag) {
  auto v = get<T>(r, key);
  if (!v) throw UsageError(std::string("missing required setting: ") + flag);
  return *v;
}

void report_rejects(const std::vector<RowError>& rejects, const std::string& path) {
  if (rejects.empty()) return;
  std::cerr << path << ": rejected " << rejects.size() << " row(s)\n";
  for (std::size_t i = 0; i < rejects.size() && i < 20; ++i) {
    std::cerr << "  row " << rejects[i].row << ": " << rejects[i].message << '\n';
  }
  if (rejects.size() > 20) std::cerr << "  ...\n";
}

std::vector<JetEvent> load_jets(const std::string& path, std::size_t limit) {
  auto res = load_events(path, format_from_path(path), limit);
  report_rejects(res.rejects, path);
  if (res.events.empty()) throw UsageError("no usable events in '" + path + "'");
  return std::move(res.events);
}

std::string loss_csv(const std::vector<EpochRecord>& h) {
  std::ostringstream os;
  os << "epoch,train_cost,validation_cost\n";
  for (const auto& e : h) {
    os << e.epoch << ',' << detail::format_double(e.train_cost) << ',' << detail::format_double(e.validation_cost)
       << '\n';
  }
  return os.str();
}

TrainConfig train_config(const json& r) {
  TrainConfig c;
  if (r.contains("train")) c = train_config_from_json(r.at("train"));
  if (auto v = get<std::string>(r, "mode")) c.mode = parse_mode(*v);
  if (auto v = get<double>(r, "scale_f")) c.f = *v;
  if (auto v = get<std::uint64_t>(r, "seed")) c.seed = *v;
  if (auto v = get<std::size_t>(r, "epochs")) c.epochs = *v;
  if (auto v = get<std::size_t>(r, "batch")) c.batch_size = *v;
  if (auto v = get<double>(r, "lr")) c.learning_rate = *v;
  if (auto v = get<std::string>(r, "grad")) c.gradient_method = parse_gradient_method(*v);
  if (r.contains("shots")) c.shots = parse_shots(r.at("shots"));
  c.validate();
  return c;
}

int cmd_train(const Flags& f) {
  const json r = resolve(f);
  const QaeTopology topo = r.contains("topology") ? topology_from_json(r.at("topology")) : QaeTopology{};
  topo.validate();
  const TrainConfig cfg = train_config(r);
  const auto model_path = require<std::string>(r, "model", "--model");
  const std::string loss_path = get<std::string>(r, "out").value_or(model_path + ".loss.csv");

  std::vector<JetEvent> jets;
  if (auto data = get<std::string>(r, "data")) {
    jets = load_jets(*data, get<std::size_t>(r, "limit").value_or(0));
  } else if (r.contains("synth")) {
    const json& s = r.at("synth");
    detail::reject_unknown(s, {"kind", "n", "seed"}, "synth");
    jets = synth_jets(parse_jet_kind(s.value("kind", std::string("qcd-like"))), s.value("n", std::size_t{200}),
                      s.value("seed", std::uint64_t{1}));
  } else {
    throw UsageError("train needs --data or a 'synth' block in the config");
  }

  const auto events = encode_events(topo, jets, cfg.mode, cfg.f);
  const TrainResult res = train(topo, cfg, events);
  if (res.diverged) std::cerr << "train: " << res.diagnostic << '\n';

  Model m;
  m.topology = topo;
  m.mode = cfg.mode;
  m.f = cfg.f;
  m.params = res.params;
  m.train_config = cfg;
  m.loss_history = res.history;
  const std::string loss = loss_csv(res.history);
  save_model(m, model_path);
  write_file_atomic(loss_path, loss);
  std::cout << "trained on " << events.size() << " events, " << res.history.size() - 1 << " epoch(s); cost "
            << res.history.front().train_cost << " -> " << res.history.back().train_cost << " (best validation epoch "
            << res.best_epoch << ")\n";
  return kExitOk;
}

int cmd_infer(const Flags& f) {
  const json r = resolve(f);
  const auto model_path = require<std::string>(r, "model", "--model");
  if (!std::filesystem::exists(model_path)) throw UsageError("model file '" + model_path + "' does not exist");
  const Model m = load_model(model_path);
  if (r.contains("topology") && !(topology_from_json(r.at("topology")) == m.topology)) {
    throw UsageError("configured topology does not match the model file topology " + topology_to_json(m.topology).dump());
  }
  if (auto v = get<std::string>(r, "mode"); v && parse_mode(*v) != m.mode) {
    throw UsageError(std::string("feature mode ") + *v + " does not match the model's mode " + mode_name(m.mode));
  }
  if (auto v = get<double>(r, "scale_f"); v && *v != m.f) {
    throw UsageError("scale factor does not match the model's f = " + detail::format_double(m.f));
  }
  const auto data = require<std::string>(r, "data", "--data");
  const auto out = require<std::string>(r, "out", "--out");
  const auto jets = load_jets(data, get<std::size_t>(r, "limit").value_or(0));
  EvalOptions opt;
  if (r.contains("shots")) opt.readout.shots = parse_shots(r.at("shots"));
  opt.readout.seed = get<std::uint64_t>(r, "seed").value_or(0);
  const auto records = infer(m.topology, m.params, encode_events(m.topology, jets, m.mode, m.f), opt);
  std::ostringstream os;
  write_scores_csv(os, records);
  write_file_atomic(out, os.str());
  std::cout << "scored " << records.size() << " events -> " << out << '\n';
  return kExitOk;
}

std::string stem(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

int cmd_eval(const Flags& f) {
  const json r = resolve(f);
  const auto data = require<std::string>(r, "data", "--data");
  std::ifstream in(data);
  if (!in) throw UsageError("cannot open scores file '" + data + "'");
  const auto scores = read_scores_csv(in);
  report_rejects(scores.rejects, data);
  const auto table = auc_table(scores.records);
  const std::size_t bins = get<std::size_t>(r, "bins").value_or(20);
  const std::size_t points = get<std::size_t>(r, "roc_points").value_or(0);

  std::size_t n_bg = 0;
  std::vector<double> bg;
  for (const auto& rec : scores.records)
    if (rec.label == kBackgroundLabel) bg.push_back(rec.anomaly_score), ++n_bg;

  std::ostringstream rep;
  rep << "AUC vs " << kBackgroundLabel << " (" << n_bg << " events)\n";
  rep << "signal,n_signal,auc\n";
  std::vector<std::pair<std::string, RocCurve>> curves;
  for (const auto& e : table) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", e.auc);
    rep << e.signal_label << ',' << e.n_signal << ',' << buf << '\n';
    std::vector<double> sig;
    for (const auto& rec : scores.records)
      if (rec.label == e.signal_label) sig.push_back(rec.anomaly_score);
    curves.emplace_back(e.signal_label, roc(bg, sig, points));
  }
  std::cout << rep.str();
  if (auto out = get<std::string>(r, "out")) {
    std::ostringstream hist, rocs;
    write_histogram_csv(hist, fidelity_histogram(scores.records, bins));
    write_roc_csv(rocs, curves);
    write_file_atomic(stem(*out) + ".hist.csv", hist.str());
    write_file_atomic(stem(*out) + ".roc.csv", rocs.str());
    write_file_atomic(*out, rep.str());
  }
  return kExitOk;
}

int cmd_verify(const Flags& f) {
  const GeneratorSet gens =
      f.mutate_sigma2 ? mutate_sigma2(GeneratorSet::standard(), *f.mutate_sigma2) : GeneratorSet::standard();
  const VerifyReport rep = run_verify(gens);
  print_report(std::cout, rep);
  return rep.all_passed() ? kExitOk : kExitVerify;
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_gates_dump(const Flags& f) {
  const json r = resolve(f);
  const double angle = get<double>(r, "angle").value_or(kPi / 4);
  json gates = json::array();
  for (const auto& g : gate_catalog(angle)) {
    gates.push_back({{"name", g.name},
                     {"arity", g.arity},
                     {"kind", g.is_generator ? "generator" : "unitary"},
                     {"params", g.params},
                     {"matrix", matrix_json(g.matrix)}});
  }
  const json doc{{"basis_order", "qutrit0_most_significant"}, {"angle", angle}, {"gates", gates}};
  if (auto out = get<std::string>(r, "out")) {
    write_file_atomic(*out, doc.dump(2) + "\n");
  } else {
    std::cout << doc.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_synth(const Flags& f) {
  const json r = resolve(f);
  const auto out = require<std::string>(r, "out", "--out");
  const auto kind = parse_jet_kind(get<std::string>(r, "kind").value_or("qcd-like"));
  const auto n = get<std::size_t>(r, "n").value_or(1000);
  const auto seed = get<std::uint64_t>(r, "seed").value_or(1);
  const auto jets = synth_jets(kind, n, seed);
  std::ostringstream os;
  write_events(os, jets, format_from_path(out));
  write_file_atomic(out, os.str());
  std::cout << "wrote " << jets.size() << " " << jet_kind_label(kind) << " jets -> " << out << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qutrit quantum autoencoder for jet anomaly detection"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* c) {
    c->add_option("--config", flags.config, "JSON config file; flags override its values");
  };
  auto opt_string = [](CLI::App* c, const char* name, std::optional<std::string>& dst, const char* help) {
    c->add_option_function<std::string>(name, [&dst](const std::string& v) { dst = v; }, help);
  };
  auto opt_size = [](CLI::App* c, const char* name, std::optional<std::size_t>& dst, const char* help) {
    c->add_option_function<std::size_t>(name, [&dst](const std::size_t& v) { dst = v; }, help);
  };
  auto opt_double = [](CLI::App* c, const char* name, std::optional<double>& dst, const char* help) {
    c->add_option_function<double>(name, [&dst](const double& v) { dst = v; }, help);
  };
  auto opt_seed = [&](CLI::App* c) {
    c->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { flags.seed = v; }, "RNG seed");
  };

  auto* train = app.add_subcommand("train", "train the encoder, write model JSON and loss CSV");
  common(train);
  opt_string(train, "--data", flags.data, "training events (.csv or .jsonl)");
  opt_string(train, "--model", flags.model, "output model file");
  opt_string(train, "--out", flags.out, "output loss CSV (default: <model>.loss.csv)");
  opt_string(train, "--mode", flags.mode, "feature mode A|B");
  opt_double(train, "--scale-f", flags.scale_f, "angle scale factor f");
  opt_seed(train);
  opt_size(train, "--epochs", flags.epochs, "epochs");
  opt_size(train, "--batch", flags.batch, "mini-batch size");
  opt_double(train, "--lr", flags.lr, "learning rate");
  opt_string(train, "--grad", flags.grad, "gradient method fd|shift");
  opt_string(train, "--shots", flags.shots, "INT or exact");
  opt_size(train, "--limit", flags.limit, "read at most this many events");

  auto* inf = app.add_subcommand("infer", "score events with a trained model");
  common(inf);
  opt_string(inf, "--data", flags.data, "events to score");
  opt_string(inf, "--model", flags.model, "model file");
  opt_string(inf, "--out", flags.out, "output scores CSV");
  opt_string(inf, "--mode", flags.mode, "must match the model");
  opt_double(inf, "--scale-f", flags.scale_f, "must match the model");
  opt_seed(inf);
  opt_string(inf, "--shots", flags.shots, "INT or exact");
  opt_size(inf, "--limit", flags.limit, "read at most this many events");

  auto* ev = app.add_subcommand("eval", "AUC per signal class, histogram and ROC CSVs");
  common(ev);
  opt_string(ev, "--data", flags.data, "scores CSV from infer");
  opt_string(ev, "--out", flags.out, "report path; <stem>.hist.csv and <stem>.roc.csv go alongside");
  opt_size(ev, "--bins", flags.bins, "histogram bins (default 20)");
  opt_size(ev, "--roc-points", flags.roc_points, "subsample ROC curves (default: all points)");

  auto* ver = app.add_subcommand("verify", "analytic fixture suite");
  ver->add_option_function<std::uint64_t>(
         "--mutate-sigma2", [&](const std::uint64_t& v) { flags.mutate_sigma2 = v; }, "perturb Sigma_2 (self-test)")
      ->group("");

  auto* gd = app.add_subcommand("gates-dump", "export the gate catalog as JSON");
  common(gd);
  opt_string(gd, "--out", flags.out, "output JSON (default: stdout)");
  opt_double(gd, "--angle", flags.angle, "angle for parameterized gates (default pi/4)");

  auto* sy = app.add_subcommand("synth", "emit a synthetic jet dataset");
  common(sy);
  opt_string(sy, "--kind", flags.kind, "qcd-like|two-prong|three-prong");
  opt_size(sy, "--n", flags.n, "number of jets");
  opt_seed(sy);
  opt_string(sy, "--out", flags.out, "output file (.csv or .jsonl)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return cmd_train(flags);
    if (*inf) return cmd_infer(flags);
    if (*ev) return cmd_eval(flags);
    if (*ver) return cmd_verify(flags);
    if (*gd) return cmd_gates_dump(flags);
    if (*sy) return cmd_synth(flags);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
