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

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "roboaudio/audio.hpp"
#include "roboaudio/errors.hpp"
#include "test_util.hpp"

using roboaudio::ChannelRole;
using roboaudio::MultiChannelAudio;

namespace {

// Independent byte-level WAV builder so the reader is checked against the
// container spec, not against write_wav.
std::string build_wav(uint16_t format, uint16_t channels, uint32_t rate, uint16_t bits,
                      const std::vector<int16_t>& interleaved) {
  std::string data;
  auto put_u16 = [&](uint16_t v) {
    data.push_back(static_cast<char>(v & 0xff));
    data.push_back(static_cast<char>((v >> 8) & 0xff));
  };
  auto put_u32 = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i) data.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  const uint32_t data_bytes = static_cast<uint32_t>(interleaved.size() * 2);
  data += "RIFF";
  put_u32(36 + data_bytes);
  data += "WAVE";
  data += "fmt ";
  put_u32(16);
  put_u16(format);
  put_u16(channels);
  put_u32(rate);
  put_u32(rate * channels * bits / 8);
  put_u16(static_cast<uint16_t>(channels * bits / 8));
  put_u16(bits);
  data += "data";
  put_u32(data_bytes);
  for (int16_t s : interleaved) put_u16(static_cast<uint16_t>(s));
  return data;
}

}  // namespace

TEST_SUITE("audio") {
  TEST_CASE("round trip stays within one 16-bit quantization step") {
    testutil::TempDir dir;
    auto x = testutil::white_noise(400, 9, 0.2);
    auto audio = MultiChannelAudio::mono(x, 16000);
    const std::string path = dir.file("mono.wav");
    roboaudio::write_wav(path, audio);
    auto back = roboaudio::read_wav(path);
    REQUIRE(back.channels() == 1);
    REQUIRE(back.length() == x.size());
    CHECK(back.sample_rate == 16000);
    CHECK(back.channel_roles.at(0).role == ChannelRole::kMono);
    for (size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back.samples[0][i] - x[i]) <= 1.0 / 32768.0);
  }

  TEST_CASE("writer scales by 32768 with rounding and clamps at full scale") {
    testutil::TempDir dir;
    // 1.0 would map to 32768, one past the int16 maximum: must clamp to 32767.
    std::vector<double> x{0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 1.0 / 32768.0};
    const std::string path = dir.file("clamp.wav");
    roboaudio::write_wav(path, MultiChannelAudio::mono(x, 16000));

    const std::string bytes = testutil::read_bytes(path);
    REQUIRE(bytes.size() == 44 + x.size() * 2);
    auto sample_at = [&](size_t i) {
      const size_t off = 44 + 2 * i;
      return static_cast<int16_t>(static_cast<uint8_t>(bytes[off]) |
                                  (static_cast<uint8_t>(bytes[off + 1]) << 8));
    };
    CHECK(sample_at(0) == 16384);
    CHECK(sample_at(1) == -16384);
    CHECK(sample_at(2) == 32767);   // clamped
    CHECK(sample_at(3) == -32768);  // exactly representable
    CHECK(sample_at(4) == 32767);
    CHECK(sample_at(5) == -32768);
    CHECK(sample_at(6) == 1);
  }

  TEST_CASE("reader deinterleaves and normalizes by 1/32768") {
    testutil::TempDir dir;
    // Two channels, three frames, hand-interleaved.
    std::vector<int16_t> pcm{100, -100, 200, -200, 32767, -32768};
    const std::string path = dir.file("stereo.wav");
    testutil::write_text(path, build_wav(1, 2, 44100, 16, pcm));
    auto audio = roboaudio::read_wav(path);
    REQUIRE(audio.channels() == 2);
    REQUIRE(audio.length() == 3);
    CHECK(audio.sample_rate == 44100);
    CHECK(audio.samples[0][0] == doctest::Approx(100.0 / 32768.0));
    CHECK(audio.samples[1][0] == doctest::Approx(-100.0 / 32768.0));
    CHECK(audio.samples[0][2] == doctest::Approx(32767.0 / 32768.0));
    CHECK(audio.samples[1][2] == doctest::Approx(-1.0));
  }

  TEST_CASE("six-channel files are tagged with the robot layout") {
    testutil::TempDir dir;
    std::vector<int16_t> pcm(6 * 4, 0);
    const std::string path = dir.file("six.wav");
    testutil::write_text(path, build_wav(1, 6, 16000, 16, pcm));
    auto audio = roboaudio::read_wav(path);
    REQUIRE(audio.channels() == 6);
    CHECK(audio.has_robot_layout());
    CHECK(audio.channel_roles[0].role == ChannelRole::kMic);
    CHECK(audio.channel_roles[3].role == ChannelRole::kMic);
    CHECK(audio.channel_roles[3].index == 3);
    CHECK(audio.channel_roles[4].role == ChannelRole::kLoudspeakerRef);
    CHECK(audio.channel_roles[5].index == 1);
  }

  TEST_CASE("robot_layout builders") {
    auto filled = MultiChannelAudio::robot_layout(
        std::vector<std::vector<double>>(6, std::vector<double>(10, 0.1)), 16000);
    CHECK(filled.has_robot_layout());
    filled.validate();

    auto blank = MultiChannelAudio::robot_layout(size_t{32}, 16000);
    CHECK(blank.channels() == 6);
    CHECK(blank.length() == 32);
    CHECK(blank.has_robot_layout());
  }

  TEST_CASE("validate rejects ragged channels and bad rates") {
    MultiChannelAudio ragged;
    ragged.sample_rate = 16000;
    ragged.samples = {{0.0, 0.0}, {0.0}};
    ragged.channel_roles = {{ChannelRole::kMono, 0}, {ChannelRole::kMono, 1}};
    CHECK_THROWS_AS(ragged.validate(), roboaudio::ParamError);

    auto bad_rate = MultiChannelAudio::mono({0.0}, 0);
    CHECK_THROWS_AS(bad_rate.validate(), roboaudio::ParamError);
  }

  TEST_CASE("malformed containers raise FormatError") {
    testutil::TempDir dir;

    SUBCASE("truncated header") {
      const std::string path = dir.file("trunc.wav");
      testutil::write_text(path, "RIFF\x10\x00\x00\x00WAVE");
      CHECK_THROWS_AS(roboaudio::read_wav(path), roboaudio::FormatError);
    }
    SUBCASE("wrong RIFF magic") {
      const std::string path = dir.file("magic.wav");
      auto bytes = build_wav(1, 1, 16000, 16, {0, 0});
      bytes[0] = 'X';
      testutil::write_text(path, bytes);
      CHECK_THROWS_AS(roboaudio::read_wav(path), roboaudio::FormatError);
    }
    SUBCASE("missing data chunk") {
      const std::string path = dir.file("nodata.wav");
      auto bytes = build_wav(1, 1, 16000, 16, {0, 0});
      bytes = bytes.substr(0, 36);  // cut before "data"
      bytes[4] = 28;                // fix RIFF size so the walk terminates cleanly
      testutil::write_text(path, bytes);
      CHECK_THROWS_AS(roboaudio::read_wav(path), roboaudio::FormatError);
    }
  }

  TEST_CASE("unsupported encodings raise UnsupportedFormatError") {
    testutil::TempDir dir;

    SUBCASE("IEEE float format tag") {
      const std::string path = dir.file("float.wav");
      testutil::write_text(path, build_wav(3, 1, 16000, 16, {0, 0}));
      CHECK_THROWS_AS(roboaudio::read_wav(path), roboaudio::UnsupportedFormatError);
    }
    SUBCASE("8-bit samples") {
      const std::string path = dir.file("eight.wav");
      testutil::write_text(path, build_wav(1, 1, 16000, 8, {0, 0}));
      CHECK_THROWS_AS(roboaudio::read_wav(path), roboaudio::UnsupportedFormatError);
    }
  }

  TEST_CASE("missing file raises IoError") {
    CHECK_THROWS_AS(roboaudio::read_wav("/nonexistent/deep/path.wav"), roboaudio::IoError);
  }

  TEST_CASE("reader skips unknown chunks before data") {
    testutil::TempDir dir;
    // Splice a LIST chunk between fmt and data.
    auto bytes = build_wav(1, 1, 16000, 16, {123, -456});
    std::string extra = "LIST";
    extra += std::string(1, 6) + std::string(3, '\0');  // size 6 -> padded to 6 bytes? size=6
    extra += "INFOab";                                   // 6 payload bytes (even, no pad)
    const std::string spliced = bytes.substr(0, 36) + extra + bytes.substr(36);
    std::string fixed = spliced;
    const uint32_t riff_size = static_cast<uint32_t>(fixed.size() - 8);
    for (int i = 0; i < 4; ++i) fixed[4 + i] = static_cast<char>((riff_size >> (8 * i)) & 0xff);
    const std::string path = dir.file("listchunk.wav");
    testutil::write_text(path, fixed);
    auto audio = roboaudio::read_wav(path);
    REQUIRE(audio.length() == 2);
    CHECK(audio.samples[0][0] == doctest::Approx(123.0 / 32768.0));
    CHECK(audio.samples[0][1] == doctest::Approx(-456.0 / 32768.0));
  }

  TEST_CASE("six-channel write/read preserves roles and content") {
    testutil::TempDir dir;
    std::vector<std::vector<double>> six(6);
    for (int c = 0; c < 6; ++c) six[c] = testutil::white_noise(64, static_cast<uint32_t>(20 + c), 0.1);
    auto audio = MultiChannelAudio::robot_layout(six, 16000);
    const std::string path = dir.file("robot.wav");
    roboaudio::write_wav(path, audio);
    auto back = roboaudio::read_wav(path);
    CHECK(back.has_robot_layout());
    for (int c = 0; c < 6; ++c)
      for (size_t i = 0; i < 64; ++i)
        CHECK(std::abs(back.samples[c][i] - six[c][i]) <= 1.0 / 32768.0);
  }
}
