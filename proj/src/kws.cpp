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

#include "roboaudio/kws.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "roboaudio/errors.hpp"

namespace roboaudio {

void PosteriorTrack::validate() const {
  if (!(frame_hop_ms > 0.0)) throw ParamError("posterior track: frame hop must be positive");
  for (double p : keyword_prob)
    if (!(p >= 0.0 && p <= 1.0)) throw ParamError("posterior track: probability outside [0, 1]");
}

PosteriorTrack smooth_posteriors(const PosteriorTrack& track, size_t w_smooth) {
  if (w_smooth < 1) throw ParamError("w_smooth must be at least 1");
  track.validate();

  // Direct per-frame window sum: tracks are short, and unlike a sliding
  // accumulator this carries no rounding drift across frames (w_smooth = 1 is
  // the exact identity).
  PosteriorTrack out = track;
  for (size_t t = 0; t < track.keyword_prob.size(); ++t) {
    const size_t lo = t + 1 >= w_smooth ? t + 1 - w_smooth : 0;
    double acc = 0.0;
    for (size_t i = lo; i <= t; ++i) acc += track.keyword_prob[i];
    out.keyword_prob[t] = acc / static_cast<double>(t - lo + 1);
  }
  return out;
}

KwsDecision decide_keyword(const PosteriorTrack& track, size_t w_smooth, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ParamError("threshold must be in (0, 1]");
  const PosteriorTrack smoothed = smooth_posteriors(track, w_smooth);

  KwsDecision decision;
  for (size_t t = 0; t < smoothed.keyword_prob.size(); ++t) {
    const double conf = smoothed.keyword_prob[t];
    decision.peak_confidence = std::max(decision.peak_confidence, conf);
    if (!decision.detected && conf > threshold) {
      decision.detected = true;
      decision.trigger_frame = t;
    }
  }
  return decision;
}

PosteriorTrack read_posterior_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open posterior file: " + path);

  PosteriorTrack track;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("#hop_ms=", 0) == 0) {
      const std::string value = line.substr(8);
      try {
        size_t consumed = 0;
        track.frame_hop_ms = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ParseError("bad hop_ms header '" + line + "'", line_no);
      }
      if (!(track.frame_hop_ms > 0.0)) throw ParseError("hop_ms must be positive", line_no);
      continue;
    }
    double p = 0.0;
    try {
      size_t consumed = 0;
      p = std::stod(line, &consumed);
      if (consumed != line.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError("bad posterior value '" + line + "'", line_no);
    }
    if (!(p >= 0.0 && p <= 1.0))
      throw ParseError("posterior " + line + " outside [0, 1]", line_no);
    track.keyword_prob.push_back(p);
  }
  return track;
}

void write_posterior_file(const std::string& path, const PosteriorTrack& track) {
  track.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open posterior file for writing: " + path);
  out.precision(17);
  out << "#hop_ms=" << track.frame_hop_ms << "\n";
  for (double p : track.keyword_prob) out << p << "\n";
  if (!out) throw IoError("failed writing posterior file: " + path);
}

PosteriorTrack energy_gate_posteriors(const std::vector<double>& x, int sample_rate,
                                      size_t frame_len, size_t hop) {
  if (sample_rate <= 0) throw ParamError("energy gate: sample_rate must be positive");
  if (frame_len == 0 || hop == 0) throw ParamError("energy gate: frame_len and hop must be positive");

  PosteriorTrack track;
  track.frame_hop_ms = 1000.0 * static_cast<double>(hop) / static_cast<double>(sample_rate);
  if (x.size() < frame_len) return track;

  const size_t frames = (x.size() - frame_len) / hop + 1;
  std::vector<double> energy(frames, 0.0);
  double mean_energy = 0.0;
  for (size_t t = 0; t < frames; ++t) {
    double acc = 0.0;
    for (size_t i = 0; i < frame_len; ++i) {
      const double v = x[t * hop + i];
      acc += v * v;
    }
    energy[t] = acc;
    mean_energy += acc;
  }
  mean_energy /= static_cast<double>(frames);

  track.keyword_prob.resize(frames);
  for (size_t t = 0; t < frames; ++t) {
    const double denom = energy[t] + mean_energy;
    track.keyword_prob[t] = denom > 0.0 ? energy[t] / denom : 0.0;
  }
  return track;
}

}  // namespace roboaudio
