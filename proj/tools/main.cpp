// Copyright 2026 The roboaudio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// robo-challenge: scene simulation, classical front-end, keyword decisions,
// and challenge scoring behind one binary.
//
// Exit codes: 0 success, 2 configuration/parse error, 3 data error. Errors
// are mirrored as one-line JSON objects on stderr.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roboaudio/aec.hpp"
#include "roboaudio/audio.hpp"
#include "roboaudio/doa.hpp"
#include "roboaudio/errors.hpp"
#include "roboaudio/kws.hpp"
#include "roboaudio/manifest.hpp"
#include "roboaudio/metrics.hpp"
#include "roboaudio/rng.hpp"
#include "roboaudio/scene.hpp"
#include "roboaudio/scene_config.hpp"
#include "roboaudio/ssl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace roboaudio;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

void emit_error(const std::string& kind, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

// Config/parse problems exit 2; data problems (missing/degenerate inputs) 3.
int classify_and_report(const std::exception& e) {
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    emit_error("parse", pe->what());
    return kExitConfig;
  }
  if (dynamic_cast<const ParamError*>(&e) != nullptr) {
    emit_error("config", e.what());
    return kExitConfig;
  }
  emit_error("data", e.what());
  return kExitData;
}

// Honors ROBOAUDIO_CONFIG_DIR for bare config names that do not resolve.
std::string resolve_config_path(const std::string& path) {
  if (path.empty() || fs::exists(path)) return path;
  if (const char* dir = std::getenv("ROBOAUDIO_CONFIG_DIR")) {
    const fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

// Manifest paths are relative to the manifest file unless absolute.
std::string resolve_entry_path(const std::string& manifest_path, const std::string& entry_path) {
  const fs::path p(entry_path);
  if (p.is_absolute()) return entry_path;
  return (fs::path(manifest_path).parent_path() / p).string();
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

struct EntryErrorLog {
  std::vector<json> errors;

  void record(const std::string& id, const std::string& kind, const std::string& message) {
    json j;
    j["id"] = id;
    j["error"] = kind;
    j["message"] = message;
    errors.push_back(j);
    std::cerr << j.dump() << "\n";
  }

  void write(const fs::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write error log: " + path.string());
    for (const auto& j : errors) out << j.dump() << "\n";
  }
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string config_path;
  std::string out_dir;
  size_t count = 10;
  uint64_t seed = 0;
};

int run_simulate(const SimulateArgs& args) {
  SimConfig config;
  if (!args.config_path.empty())
    config = SimConfig::from_file(resolve_config_path(args.config_path));
  config.validate();
  fs::create_directories(args.out_dir);

  std::vector<ManifestEntry> manifest;
  std::vector<GroundTruthRecord> records;
  const uint64_t base = splitmix64(args.seed);

  for (size_t i = 0; i < args.count; ++i) {
    const uint64_t spec_seed = base + 2 * i;
    const uint64_t render_seed = base + 2 * i + 1;
    const SceneSpec spec = generate_scene_spec(config, spec_seed);
    SimulatedScene scene = simulate_scene(spec, render_seed);

    // Headroom for 16-bit storage without touching inter-source ratios.
    double peak = 0.0;
    for (const auto& ch : scene.audio.samples)
      for (double v : ch) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
      const double gain = 0.25 / peak;
      for (auto& ch : scene.audio.samples)
        for (double& v : ch) v *= gain;
    }

    char name[32];
    std::snprintf(name, sizeof(name), "scene_%04zu", i);
    const std::string wav_name = std::string(name) + ".wav";
    write_wav((fs::path(args.out_dir) / wav_name).string(), scene.audio);
    manifest.push_back({name, wav_name});

    GroundTruthRecord record;
    record.id = name;
    record.truth = scene.truth;
    record.room_lx = spec.room.lx;
    record.room_ly = spec.room.ly;
    record.room_lz = spec.room.lz;
    record.rt60 = spec.room.rt60;
    record.device_origin = spec.device.pose.origin;
    record.heading_deg = spec.device.pose.heading_deg;
    for (const auto& s : spec.sources) {
      if (s.role == SourceRole::kSpeech || s.role == SourceRole::kKeyword)
        record.speech_positions.push_back(s.position);
      if (s.role == SourceRole::kNoise) record.noise_positions.push_back(s.position);
    }
    records.push_back(std::move(record));
  }

  std::sort(manifest.begin(), manifest.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
  std::sort(records.begin(), records.end(),
            [](const GroundTruthRecord& a, const GroundTruthRecord& b) { return a.id < b.id; });
  write_manifest((fs::path(args.out_dir) / "manifest.jsonl").string(), manifest);
  write_ground_truth((fs::path(args.out_dir) / "ground_truth.jsonl").string(), records);
  return 0;
}

// ---------------------------------------------------------------------------
// frontend

struct FrontendArgs {
  std::string manifest_path;
  std::string out_dir;
  std::string config_path;
  bool no_aec = false;
  bool posteriors = false;
  AecConfig aec;
  // Which AEC flags were given explicitly (flags beat config-file values).
  bool have_filter_len = false, have_block_len = false, have_step = false, have_reg = false;
};

void apply_aec_config_file(FrontendArgs* args) {
  if (args->config_path.empty()) return;
  const IniDoc doc = parse_ini_file(resolve_config_path(args->config_path));
  const auto it = doc.find("aec");
  if (it == doc.end()) return;
  for (const auto& [key, value] : it->second) {
    try {
      if (key == "filter_len") {
        if (!args->have_filter_len) args->aec.filter_len = std::stoul(value);
      } else if (key == "block_len") {
        if (!args->have_block_len) args->aec.block_len = std::stoul(value);
      } else if (key == "step_size") {
        if (!args->have_step) args->aec.step_size = std::stod(value);
      } else if (key == "regularization") {
        if (!args->have_reg) args->aec.regularization = std::stod(value);
      } else {
        throw ParamError("unknown config key [aec] " + key);
      }
    } catch (const ParamError&) {
      throw;
    } catch (const std::exception&) {
      throw ParamError("config [aec] " + key + ": bad value '" + value + "'");
    }
  }
}

int run_frontend(FrontendArgs args) {
  apply_aec_config_file(&args);
  args.aec.validate();
  const auto entries = read_manifest(args.manifest_path);
  fs::create_directories(args.out_dir);

  // Steering uses the rigid device frame only, so pose is irrelevant here.
  DeviceGeometry device{};
  const SteeringGrid grid = SteeringGrid::for_device(device);

  EntryErrorLog log;
  std::vector<LabelRow> doa_rows;
  std::vector<ManifestEntry> posterior_manifest;

  for (const auto& entry : entries) {
    try {
      const MultiChannelAudio audio =
          read_wav(resolve_entry_path(args.manifest_path, entry.path));
      if (audio.channels() != 6 && audio.channels() != 4)
        throw FormatError("expected a 4- or 6-channel recording, got " +
                          std::to_string(audio.channels()) + " channels");

      std::vector<std::vector<double>> mics(audio.samples.begin(), audio.samples.begin() + 4);
      if (!args.no_aec && audio.channels() == 6) {
        const std::vector<std::vector<double>> refs{audio.samples[4], audio.samples[5]};
        for (auto& mic : mics) mic = flms_aec(mic, refs, args.aec).output;
      }

      const DoaDistribution ssl = srp_phat_doa(mics, device, grid);
      DoaDistribution all_ones;
      all_ones.values.fill(1.0);
      const int doa = decide_doa(ssl, all_ones);
      doa_rows.push_back({entry.id, doa});

      const std::vector<double> beamformed = dsbf(mics, device, doa, audio.sample_rate);
      write_wav((fs::path(args.out_dir) / (entry.id + ".wav")).string(),
                MultiChannelAudio::mono(beamformed, audio.sample_rate));

      if (args.posteriors) {
        const PosteriorTrack track = energy_gate_posteriors(beamformed, audio.sample_rate);
        const std::string post_name = entry.id + ".post";
        write_posterior_file((fs::path(args.out_dir) / post_name).string(), track);
        posterior_manifest.push_back({entry.id, post_name});
      }
    } catch (const std::exception& e) {
      log.record(entry.id, "entry", e.what());
    }
  }

  std::sort(doa_rows.begin(), doa_rows.end(),
            [](const LabelRow& a, const LabelRow& b) { return a.id < b.id; });
  write_label_file((fs::path(args.out_dir) / "doa_labels.txt").string(), doa_rows,
                   LabelKind::kSsl);
  if (args.posteriors) {
    std::sort(posterior_manifest.begin(), posterior_manifest.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
    write_manifest((fs::path(args.out_dir) / "posteriors.jsonl").string(), posterior_manifest);
  }
  log.write(fs::path(args.out_dir) / "errors.jsonl");
  return log.errors.empty() ? 0 : kExitData;
}

// ---------------------------------------------------------------------------
// kws-decide

struct KwsDecideArgs {
  std::string manifest_path;
  std::string out_path;
  std::string config_path;
  size_t w_smooth = 30;
  double threshold = 0.5;
  bool have_w_smooth = false, have_threshold = false;
};

void apply_kws_config_file(KwsDecideArgs* args) {
  if (args->config_path.empty()) return;
  const IniDoc doc = parse_ini_file(resolve_config_path(args->config_path));
  const auto it = doc.find("kws");
  if (it == doc.end()) return;
  for (const auto& [key, value] : it->second) {
    try {
      if (key == "w_smooth") {
        if (!args->have_w_smooth) args->w_smooth = std::stoul(value);
      } else if (key == "threshold") {
        if (!args->have_threshold) args->threshold = std::stod(value);
      } else {
        throw ParamError("unknown config key [kws] " + key);
      }
    } catch (const ParamError&) {
      throw;
    } catch (const std::exception&) {
      throw ParamError("config [kws] " + key + ": bad value '" + value + "'");
    }
  }
}

int run_kws_decide(KwsDecideArgs args) {
  apply_kws_config_file(&args);
  if (args.w_smooth < 1) throw ParamError("w_smooth must be at least 1");
  if (!(args.threshold > 0.0 && args.threshold <= 1.0))
    throw ParamError("threshold must be in (0, 1]");

  const auto entries = read_manifest(args.manifest_path);
  EntryErrorLog log;
  std::vector<LabelRow> rows;
  for (const auto& entry : entries) {
    try {
      const PosteriorTrack track =
          read_posterior_file(resolve_entry_path(args.manifest_path, entry.path));
      const KwsDecision decision = decide_keyword(track, args.w_smooth, args.threshold);
      rows.push_back({entry.id, decision.detected ? 1 : 0});
    } catch (const std::exception& e) {
      log.record(entry.id, "entry", e.what());
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const LabelRow& a, const LabelRow& b) { return a.id < b.id; });
  write_label_file(args.out_path, rows, LabelKind::kKws);
  return log.errors.empty() ? 0 : kExitData;
}

// ---------------------------------------------------------------------------
// score

struct ScoreArgs {
  std::string track;
  std::string truth_path;
  std::string labels_path;
  std::string out_path;
  double mae_baseline = 0.0;
  bool have_mae_baseline = false;
};

// Ground-truth records and label rows joined by id; every truth id needs a
// label and stray labels are rejected, both as hard errors.
std::map<std::string, int> join_labels(const std::vector<GroundTruthRecord>& records,
                                       const std::vector<LabelRow>& rows) {
  std::map<std::string, int> by_id;
  for (const auto& row : rows) {
    if (!by_id.emplace(row.id, row.label).second)
      throw ParamError("duplicate label for id '" + row.id + "'");
  }
  std::map<std::string, int> joined;
  for (const auto& r : records) {
    const auto it = by_id.find(r.id);
    if (it == by_id.end()) throw ParamError("missing label for id '" + r.id + "'");
    joined[r.id] = it->second;
    by_id.erase(it);
  }
  if (!by_id.empty())
    throw ParamError("label for unknown id '" + by_id.begin()->first + "'");
  return joined;
}

json kws_score_json(const KwsScore& s) {
  json j;
  j["n_key"] = s.n_key;
  j["n_nonkey"] = s.n_nonkey;
  j["n_fr"] = s.n_fr;
  j["n_fa"] = s.n_fa;
  j["frr"] = round4(s.frr);
  j["far"] = round4(s.far);
  j["score"] = round4(s.score);
  return j;
}

json ssl_score_json(const SslScore& s) {
  json j;
  j["n"] = s.errors.size();
  j["mae"] = round4(s.mae);
  j["acc10"] = round4(s.acc10);
  j["acc7_5"] = round4(s.acc7_5);
  j["acc5"] = round4(s.acc5);
  j["mae_baseline"] = s.mae_baseline;
  j["score"] = round4(s.score);
  return j;
}

int run_score(const ScoreArgs& args) {
  const auto records = read_ground_truth(args.truth_path);
  if (records.empty()) throw ParamError("ground truth is empty");

  json report;
  report["track"] = args.track;

  if (args.track == "kws") {
    const auto labels = read_label_file(args.labels_path, LabelKind::kKws);
    const auto joined = join_labels(records, labels);

    std::vector<bool> truth, pred;
    std::map<std::string, std::pair<std::vector<bool>, std::vector<bool>>> by_scenario;
    for (const auto& r : records) {
      const bool label = joined.at(r.id) == 1;
      truth.push_back(r.truth.keyword_present);
      pred.push_back(label);
      by_scenario[r.truth.scenario_tag].first.push_back(r.truth.keyword_present);
      by_scenario[r.truth.scenario_tag].second.push_back(label);
    }
    report["overall"] = kws_score_json(kws_metrics(truth, pred));

    json scenarios = json::object();
    for (const auto& [tag, pair] : by_scenario) {
      try {
        scenarios[tag] = kws_score_json(kws_metrics(pair.first, pair.second));
      } catch (const UndefinedMetricError&) {
        // A scenario slice can miss one class entirely; report counts only.
        json j;
        j["n"] = pair.first.size();
        j["note"] = "rates undefined: one class absent in this slice";
        scenarios[tag] = j;
      }
    }
    report["per_scenario"] = scenarios;
  } else if (args.track == "ssl") {
    if (!args.have_mae_baseline)
      throw ParamError("--mae-baseline is required for the ssl track");
    const auto labels = read_label_file(args.labels_path, LabelKind::kSsl);
    const auto joined = join_labels(records, labels);

    std::vector<int> truth, pred;
    std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> by_scenario;
    for (const auto& r : records) {
      if (r.truth.speech_doas.empty())
        throw ParamError("record '" + r.id + "' carries no speech DOA");
      const int t = r.truth.speech_doas.front();
      const int p = joined.at(r.id);
      truth.push_back(t);
      pred.push_back(p);
      by_scenario[r.truth.scenario_tag].first.push_back(t);
      by_scenario[r.truth.scenario_tag].second.push_back(p);
    }
    SslScore overall = ssl_metrics(truth, pred, args.mae_baseline);
    report["overall"] = ssl_score_json(overall);

    json scenarios = json::object();
    for (const auto& [tag, pair] : by_scenario)
      scenarios[tag] = ssl_score_json(ssl_metrics(pair.first, pair.second, args.mae_baseline));
    report["per_scenario"] = scenarios;
  } else {
    throw ParamError("track must be 'kws' or 'ssl'");
  }

  const std::string text = report.dump(2) + "\n";
  if (args.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(args.out_path);
    if (!out) throw IoError("cannot write report: " + args.out_path);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-array robot speech toolkit: simulate, process, decide, score"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate labeled six-channel scenes");
  sim_cmd->add_option("--config", sim.config_path, "Scene generator INI (defaults when omitted)");
  sim_cmd->add_option("--count", sim.count, "Number of scenes")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
  sim_cmd->add_option("--out", sim.out_dir, "Output directory")->required();

  FrontendArgs fe;
  auto* fe_cmd = app.add_subcommand("frontend", "Echo cancellation, DOA, and beamforming");
  fe_cmd->add_option("--manifest", fe.manifest_path, "Input manifest (JSON lines)")->required();
  fe_cmd->add_option("--out", fe.out_dir, "Output directory")->required();
  fe_cmd->add_option("--config", fe.config_path, "INI with an [aec] section");
  fe_cmd->add_flag("--no-aec", fe.no_aec, "Skip echo cancellation");
  fe_cmd->add_flag("--posteriors", fe.posteriors,
                   "Also emit energy-gate pseudo-posterior files (demo aid)");
  auto* opt_fl = fe_cmd->add_option("--aec-filter-len", fe.aec.filter_len, "Adaptive taps")
                     ->capture_default_str();
  auto* opt_bl = fe_cmd->add_option("--aec-block-len", fe.aec.block_len, "FFT block size")
                     ->capture_default_str();
  auto* opt_mu = fe_cmd->add_option("--aec-step", fe.aec.step_size, "Normalized step size")
                     ->capture_default_str();
  auto* opt_rg = fe_cmd->add_option("--aec-reg", fe.aec.regularization, "Regularization")
                     ->capture_default_str();

  KwsDecideArgs kd;
  auto* kd_cmd = app.add_subcommand("kws-decide", "Threshold smoothed keyword posteriors");
  kd_cmd->add_option("--manifest", kd.manifest_path, "Posterior-file manifest")->required();
  kd_cmd->add_option("--out", kd.out_path, "Output label file")->required();
  kd_cmd->add_option("--config", kd.config_path, "INI with a [kws] section");
  auto* opt_w = kd_cmd->add_option("--w-smooth", kd.w_smooth, "Smoothing window, frames")
                    ->capture_default_str();
  auto* opt_th = kd_cmd->add_option("--threshold", kd.threshold, "Detection threshold")
                     ->capture_default_str();

  ScoreArgs sc;
  auto* sc_cmd = app.add_subcommand("score", "Challenge metrics from truth and labels");
  sc_cmd->add_option("track", sc.track, "kws or ssl")->required();
  sc_cmd->add_option("--truth", sc.truth_path, "Ground-truth JSON lines")->required();
  sc_cmd->add_option("--labels", sc.labels_path, "Label file")->required();
  sc_cmd->add_option("--out", sc.out_path, "Report path (stdout when omitted)");
  auto* opt_mb = sc_cmd->add_option("--mae-baseline", sc.mae_baseline,
                                    "Baseline MAE for the SSL score");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("cli", e.what());
    return kExitConfig;
  }

  fe.have_filter_len = opt_fl->count() > 0;
  fe.have_block_len = opt_bl->count() > 0;
  fe.have_step = opt_mu->count() > 0;
  fe.have_reg = opt_rg->count() > 0;
  kd.have_w_smooth = opt_w->count() > 0;
  kd.have_threshold = opt_th->count() > 0;
  sc.have_mae_baseline = opt_mb->count() > 0;

  try {
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (fe_cmd->parsed()) return run_frontend(fe);
    if (kd_cmd->parsed()) return run_kws_decide(kd);
    if (sc_cmd->parsed()) return run_score(sc);
  } catch (const std::exception& e) {
    return classify_and_report(e);
  }
  return 0;
}
