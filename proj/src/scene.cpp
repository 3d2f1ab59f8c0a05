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

#include "roboaudio/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roboaudio/errors.hpp"
#include "roboaudio/fft.hpp"

namespace roboaudio {

namespace {

constexpr double kPi = std::numbers::pi;

double mean_square(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

void scale_to_rms(std::vector<double>& x, double rms) {
  const double cur = std::sqrt(mean_square(x));
  if (cur <= 0.0) return;
  const double g = rms / cur;
  for (double& v : x) v *= g;
}

// First-order low-pass / high-pass shaping used by the synthesizers.
std::vector<double> one_pole_lp(const std::vector<double>& x, double fc, double fs) {
  const double a = std::exp(-2.0 * kPi * fc / fs);
  std::vector<double> y(x.size());
  double state = 0.0;
  for (size_t n = 0; n < x.size(); ++n) {
    state = (1.0 - a) * x[n] + a * state;
    y[n] = state;
  }
  return y;
}

std::vector<double> one_pole_hp(const std::vector<double>& x, double fc, double fs) {
  const double a = std::exp(-2.0 * kPi * fc / fs);
  std::vector<double> y(x.size());
  double prev_x = 0.0, prev_y = 0.0;
  for (size_t n = 0; n < x.size(); ++n) {
    prev_y = a * (prev_y + x[n] - prev_x);
    prev_x = x[n];
    y[n] = prev_y;
  }
  return y;
}

// Convolve and truncate/zero-pad to scene_len.
std::vector<double> convolve_to_len(const std::vector<double>& sig, const std::vector<double>& rir,
                                    size_t scene_len) {
  std::vector<double> full = fft_convolve(sig, rir);
  full.resize(scene_len, 0.0);
  return full;
}

bool is_speech_role(SourceRole r) { return r == SourceRole::kSpeech || r == SourceRole::kKeyword; }

LevelKind expected_level_kind(SourceRole r) {
  switch (r) {
    case SourceRole::kSpeech:
    case SourceRole::kKeyword:
      return LevelKind::kReference;
    case SourceRole::kEcho:
      return LevelKind::kSerDb;
    case SourceRole::kNoise:
    case SourceRole::kMech:
      return LevelKind::kSnrDb;
  }
  throw ParamError("unknown source role");
}

}  // namespace

bool SceneSpec::challenge_conformant() const {
  if (!room.challenge_conformant()) return false;
  for (const auto& s : sources) {
    if (s.role == SourceRole::kNoise || is_speech_role(s.role)) {
      const Vec3 c = device.array_center();
      const double dx = s.position[0] - c[0], dy = s.position[1] - c[1],
                   dz = s.position[2] - c[2];
      const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (d < 1.5 || d > 5.0) return false;
    }
    if (s.level.kind != LevelKind::kReference && (s.level.db < -5.0 || s.level.db > 10.0))
      return false;
  }
  return true;
}

std::string scenario_tag_for(bool has_noise, bool has_echo, bool has_mech) {
  if (has_mech && !has_echo)
    throw ParamError("mechanical noise only appears alongside echo in supported scenarios");
  if (has_mech && has_noise)
    throw ParamError("no supported scenario combines noise, echo, and mechanical noise");
  std::string tag = "X";
  if (has_noise) tag += "+Noise";
  if (has_echo) tag += "+Echo";
  if (has_mech) tag += "+Mech";
  return tag;
}

std::vector<double> synthesize_source_signal(SourceRole role, size_t length, int sample_rate,
                                             Rng& rng) {
  if (length == 0) return {};
  const double fs = static_cast<double>(sample_rate);
  std::vector<double> x(length);
  switch (role) {
    case SourceRole::kSpeech:
    case SourceRole::kKeyword: {
      // Syllabic amplitude modulation over telephone-band shaped noise.
      for (double& v : x) v = rng.normal();
      x = one_pole_lp(x, 3800.0, fs);
      x = one_pole_hp(x, 200.0, fs);
      const double syllable_hz = rng.uniform(3.0, 5.0);
      const double phase0 = rng.uniform(0.0, 2.0 * kPi);
      for (size_t n = 0; n < length; ++n) {
        const double env = 0.55 - 0.45 * std::cos(2.0 * kPi * syllable_hz * n / fs + phase0);
        x[n] *= env;
      }
      break;
    }
    case SourceRole::kNoise: {
      for (double& v : x) v = rng.normal();
      x = one_pole_lp(x, 6000.0, fs);
      break;
    }
    case SourceRole::kEcho: {
      // Loudspeaker content: a small tone complex with tremolo plus hiss.
      const double f0 = rng.uniform(180.0, 320.0);
      const double harmonics[4] = {1.0, 2.0, 3.0, 5.0};
      const double gains[4] = {1.0, 0.6, 0.4, 0.25};
      double phases[4];
      for (double& p : phases) p = rng.uniform(0.0, 2.0 * kPi);
      const double trem_hz = rng.uniform(1.0, 3.0);
      for (size_t n = 0; n < length; ++n) {
        double v = 0.0;
        for (int h = 0; h < 4; ++h)
          v += gains[h] * std::sin(2.0 * kPi * f0 * harmonics[h] * n / fs + phases[h]);
        const double trem = 0.75 + 0.25 * std::sin(2.0 * kPi * trem_hz * n / fs);
        x[n] = trem * v + 0.1 * rng.normal();
      }
      break;
    }
    case SourceRole::kMech: {
      // Motor-like hum: low fundamental with decaying harmonics plus hiss.
      const double f0 = rng.uniform(70.0, 120.0);
      double phases[6];
      for (double& p : phases) p = rng.uniform(0.0, 2.0 * kPi);
      for (size_t n = 0; n < length; ++n) {
        double v = 0.0;
        for (int h = 1; h <= 6; ++h)
          v += std::sin(2.0 * kPi * f0 * h * n / fs + phases[h - 1]) / static_cast<double>(h);
        x[n] = v + 0.2 * rng.normal();
      }
      break;
    }
  }
  scale_to_rms(x, 0.1);
  return x;
}

MultiChannelAudio mix_at_ratio(const MultiChannelAudio& target,
                               const MultiChannelAudio& interferer, double ratio_db) {
  target.validate();
  interferer.validate();
  if (target.sample_rate != interferer.sample_rate)
    throw ParamError("mix_at_ratio: sample rates differ");
  if (target.channels() != interferer.channels() || target.length() != interferer.length())
    throw ParamError("mix_at_ratio: shapes differ");
  const double p_t = mean_square(target.samples[0]);
  const double p_i = mean_square(interferer.samples[0]);
  if (p_t <= 0.0) throw DegenerateSignalError("mix_at_ratio: zero-power target");
  if (p_i <= 0.0) throw DegenerateSignalError("mix_at_ratio: zero-power interferer");
  const double scale = std::sqrt(p_t / (p_i * std::pow(10.0, ratio_db / 10.0)));

  MultiChannelAudio out = target;
  for (size_t ch = 0; ch < out.channels(); ++ch)
    for (size_t n = 0; n < out.length(); ++n) out.samples[ch][n] += scale * interferer.samples[ch][n];
  return out;
}

MultiChannelAudio render_source_contribution(const SceneSpec& spec, const SceneSource& source,
                                             double scale, size_t scene_len) {
  RirOptions opts;
  opts.tap_mode = spec.tap_mode;

  MultiChannelAudio out = MultiChannelAudio::robot_layout(scene_len, spec.room.sample_rate);
  std::vector<double> sig = source.signal;
  sig.resize(std::min(sig.size(), scene_len));

  switch (source.role) {
    case SourceRole::kSpeech:
    case SourceRole::kKeyword:
    case SourceRole::kNoise: {
      for (int m = 0; m < 4; ++m) {
        const auto rir = image_method_rir(spec.room, source.position,
                                          spec.device.mic_positions[m], opts);
        auto ch = convolve_to_len(sig, rir, scene_len);
        for (size_t n = 0; n < scene_len; ++n) out.samples[m][n] = scale * ch[n];
      }
      break;
    }
    case SourceRole::kEcho: {
      // The signal splits equally across both loudspeakers; the reference
      // channels carry the source signal itself, untouched by scaling.
      std::vector<double> half = sig;
      for (double& v : half) v *= 0.5;
      for (int ls = 0; ls < 2; ++ls) {
        for (int m = 0; m < 4; ++m) {
          const auto rir = image_method_rir(spec.room, spec.device.loudspeaker_positions[ls],
                                            spec.device.mic_positions[m], opts);
          auto ch = convolve_to_len(half, rir, scene_len);
          for (size_t n = 0; n < scene_len; ++n) out.samples[m][n] += scale * ch[n];
        }
      }
      for (size_t n = 0; n < sig.size(); ++n) {
        out.samples[4][n] = sig[n];
        out.samples[5][n] = sig[n];
      }
      break;
    }
    case SourceRole::kMech: {
      const Vec3 pos = spec.device.mech_source_position();
      for (int m = 0; m < 4; ++m) {
        const auto rir = image_method_rir(spec.room, pos, spec.device.mic_positions[m], opts);
        auto ch = convolve_to_len(sig, rir, scene_len);
        for (size_t n = 0; n < scene_len; ++n) out.samples[m][n] = scale * ch[n];
      }
      break;
    }
  }
  return out;
}

SimulatedScene simulate_scene(const SceneSpec& spec, uint64_t seed) {
  spec.room.validate();
  if (spec.sources.empty()) throw ParamError("scene has no sources");

  int n_speech = 0;
  bool has_noise = false, has_echo = false, has_mech = false;
  for (const auto& s : spec.sources) {
    if (is_speech_role(s.role)) ++n_speech;
    if (s.role == SourceRole::kNoise) has_noise = true;
    if (s.role == SourceRole::kEcho) has_echo = true;
    if (s.role == SourceRole::kMech) has_mech = true;
    if (s.level.kind != expected_level_kind(s.role))
      throw ParamError("source level kind does not match its role");
  }
  if (n_speech != 1) throw ParamError("scene needs exactly one speech or keyword source");
  const std::string tag = scenario_tag_for(has_noise, has_echo, has_mech);

  // Scene length: longest provided signal, else the requested duration.
  size_t scene_len = 0;
  for (const auto& s : spec.sources) scene_len = std::max(scene_len, s.signal.size());
  if (scene_len == 0) {
    if (!(spec.duration_s > 0.0)) throw ParamError("duration_s must be positive");
    scene_len = static_cast<size_t>(std::llround(spec.duration_s * spec.room.sample_rate));
    if (scene_len == 0) throw ParamError("scene duration rounds to zero samples");
  }

  // Fill in synthesized signals; each source gets its own seed stream.
  const uint64_t base = splitmix64(seed);
  std::vector<SceneSource> sources = spec.sources;
  for (size_t i = 0; i < sources.size(); ++i) {
    if (!sources[i].signal.empty()) continue;
    Rng rng(splitmix64(base + i));
    sources[i].signal = synthesize_source_signal(sources[i].role, scene_len,
                                                 spec.room.sample_rate, rng);
  }

  // Unscaled renders first: interferer gains depend on the post-reverberation
  // powers at mic 0.
  std::vector<MultiChannelAudio> renders;
  renders.reserve(sources.size());
  for (const auto& s : sources) renders.push_back(render_source_contribution(spec, s, 1.0, scene_len));

  double p_speech = 0.0;
  for (size_t i = 0; i < sources.size(); ++i)
    if (is_speech_role(sources[i].role)) p_speech = mean_square(renders[i].samples[0]);
  if (p_speech <= 0.0) throw DegenerateSignalError("speech source renders to zero power at mic 0");

  SimulatedScene scene;
  scene.applied_scales.assign(sources.size(), 1.0);
  scene.audio = MultiChannelAudio::robot_layout(scene_len, spec.room.sample_rate);
  scene.truth.scenario_tag = tag;

  for (size_t i = 0; i < sources.size(); ++i) {
    const auto& s = sources[i];
    double scale = 1.0;
    if (s.level.kind != LevelKind::kReference) {
      const double p_i = mean_square(renders[i].samples[0]);
      if (p_i <= 0.0) throw DegenerateSignalError("interferer renders to zero power at mic 0");
      scale = std::sqrt(p_speech / (p_i * std::pow(10.0, s.level.db / 10.0)));
    }
    scene.applied_scales[i] = scale;
    for (size_t ch = 0; ch < 6; ++ch) {
      // Mic channels scale; an echo's reference channels stay raw.
      const double g = ch < 4 ? scale : 1.0;
      for (size_t n = 0; n < scene_len; ++n)
        scene.audio.samples[ch][n] += g * renders[i].samples[ch][n];
    }

    switch (s.role) {
      case SourceRole::kKeyword:
        scene.truth.keyword_present = true;
        [[fallthrough]];
      case SourceRole::kSpeech:
        scene.truth.speech_doas.push_back(azimuth_of(spec.device, s.position));
        break;
      case SourceRole::kNoise:
        scene.truth.noise_doas.push_back(azimuth_of(spec.device, s.position));
        scene.truth.snr_db = s.level.db;
        break;
      case SourceRole::kEcho:
        scene.truth.ser_db = s.level.db;
        break;
      case SourceRole::kMech:
        scene.truth.mech_snr_db = s.level.db;
        break;
    }
  }
  std::sort(scene.truth.speech_doas.begin(), scene.truth.speech_doas.end());
  std::sort(scene.truth.noise_doas.begin(), scene.truth.noise_doas.end());
  return scene;
}

}  // namespace roboaudio
