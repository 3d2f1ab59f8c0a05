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

#include "roboaudio/audio.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "roboaudio/errors.hpp"

namespace roboaudio {

namespace {

constexpr double kScale = 32768.0;

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | p[1] << 8);
}

void put_u32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

bool MultiChannelAudio::has_robot_layout() const {
  if (channels() != 6 || channel_roles.size() != 6) return false;
  for (int i = 0; i < 4; ++i)
    if (channel_roles[i].role != ChannelRole::kMic || channel_roles[i].index != i) return false;
  for (int i = 0; i < 2; ++i)
    if (channel_roles[4 + i].role != ChannelRole::kLoudspeakerRef ||
        channel_roles[4 + i].index != i)
      return false;
  return true;
}

void MultiChannelAudio::validate() const {
  if (sample_rate <= 0) throw ParamError("audio: sample_rate must be positive");
  for (const auto& ch : samples)
    if (ch.size() != length()) throw ParamError("audio: channels must have equal length");
  if (!channel_roles.empty() && channel_roles.size() != channels())
    throw ParamError("audio: channel_roles size must match channel count");
  bool declares_robot = false;
  for (const auto& info : channel_roles)
    if (info.role != ChannelRole::kMono) declares_robot = true;
  if (declares_robot && !has_robot_layout())
    throw ParamError("audio: non-Mono roles must form the six-channel robot layout");
}

MultiChannelAudio MultiChannelAudio::mono(std::vector<double> x, int rate) {
  MultiChannelAudio a;
  a.samples.push_back(std::move(x));
  a.sample_rate = rate;
  a.channel_roles = {ChannelInfo{ChannelRole::kMono, 0}};
  return a;
}

MultiChannelAudio MultiChannelAudio::robot_layout(size_t length, int rate) {
  return robot_layout(std::vector<std::vector<double>>(6, std::vector<double>(length, 0.0)), rate);
}

MultiChannelAudio MultiChannelAudio::robot_layout(std::vector<std::vector<double>> six, int rate) {
  if (six.size() != 6) throw ParamError("robot_layout: expected exactly 6 channels");
  MultiChannelAudio a;
  a.samples = std::move(six);
  a.sample_rate = rate;
  for (int i = 0; i < 4; ++i) a.channel_roles.push_back({ChannelRole::kMic, i});
  for (int i = 0; i < 2; ++i) a.channel_roles.push_back({ChannelRole::kLoudspeakerRef, i});
  a.validate();
  return a;
}

MultiChannelAudio read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("read_wav: cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const size_t n = bytes.size();

  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
    throw FormatError("read_wav: not a RIFF/WAVE file: " + path);

  bool have_fmt = false;
  uint16_t format = 0, num_channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;

  size_t off = 12;
  while (off + 8 <= n) {
    const char* id = bytes.data() + off;
    uint32_t sz = read_u32(p + off + 4);
    size_t body = off + 8;
    if (body + sz > n) throw FormatError("read_wav: truncated chunk in " + path);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (sz < 16) throw FormatError("read_wav: fmt chunk too small in " + path);
      format = read_u16(p + body);
      num_channels = read_u16(p + body + 2);
      rate = read_u32(p + body + 4);
      bits = read_u16(p + body + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_off = body;
      data_len = sz;
    }
    off = body + sz + (sz & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_off == 0) throw FormatError("read_wav: missing fmt or data chunk in " + path);
  if (format != 1) throw UnsupportedFormatError("read_wav: only PCM supported: " + path);
  if (bits != 16) throw UnsupportedFormatError("read_wav: only 16-bit supported: " + path);
  if (num_channels == 0 || rate == 0) throw FormatError("read_wav: bad fmt fields in " + path);

  const size_t frame_bytes = static_cast<size_t>(num_channels) * 2;
  const size_t frames = data_len / frame_bytes;

  MultiChannelAudio audio;
  audio.sample_rate = static_cast<int>(rate);
  audio.samples.assign(num_channels, std::vector<double>(frames));
  const unsigned char* d = p + data_off;
  for (size_t t = 0; t < frames; ++t) {
    for (size_t c = 0; c < num_channels; ++c) {
      int16_t v = static_cast<int16_t>(read_u16(d + (t * num_channels + c) * 2));
      audio.samples[c][t] = static_cast<double>(v) / kScale;
    }
  }
  if (num_channels == 6) {
    for (int i = 0; i < 4; ++i) audio.channel_roles.push_back({ChannelRole::kMic, i});
    for (int i = 0; i < 2; ++i) audio.channel_roles.push_back({ChannelRole::kLoudspeakerRef, i});
  } else {
    audio.channel_roles.assign(num_channels, ChannelInfo{ChannelRole::kMono, 0});
  }
  return audio;
}

void write_wav(const std::string& path, const MultiChannelAudio& audio) {
  audio.validate();
  for (const auto& ch : audio.samples)
    for (double v : ch)
      if (!std::isfinite(v)) throw ParamError("write_wav: samples must be finite");

  const uint16_t channels = static_cast<uint16_t>(audio.channels());
  const uint32_t rate = static_cast<uint32_t>(audio.sample_rate);
  const size_t frames = audio.length();
  const uint32_t data_bytes = static_cast<uint32_t>(frames * channels * 2);

  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  put_u32(out, 36 + data_bytes);
  out.append("WAVE");
  out.append("fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, channels);
  put_u32(out, rate);
  put_u32(out, rate * channels * 2);
  put_u16(out, static_cast<uint16_t>(channels * 2));
  put_u16(out, 16);
  out.append("data");
  put_u32(out, data_bytes);

  for (size_t t = 0; t < frames; ++t) {
    for (size_t c = 0; c < channels; ++c) {
      long q = std::lrint(audio.samples[c][t] * kScale);
      if (q > 32767) q = 32767;
      if (q < -32768) q = -32768;
      put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("write_wav: cannot open " + path + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write_wav: write failed for " + path);
}

}  // namespace roboaudio
