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
#include <vector>

#include "doctest.h"
#include "roboaudio/errors.hpp"
#include "roboaudio/room.hpp"
#include "test_util.hpp"

using roboaudio::DeviceGeometry;
using roboaudio::RirOptions;
using roboaudio::RirTapMode;
using roboaudio::RoomSpec;
using roboaudio::Vec3;

namespace {

double dist3(const Vec3& a, const Vec3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

TEST_SUITE("room") {
  TEST_CASE("free-field rounded tap: 2 m source lands at sample 93 with 1/(4 pi d)") {
    RoomSpec room;
    room.rt60 = 0.0;
    auto h = roboaudio::image_method_rir(room, {1.0, 2.0, 1.5}, {3.0, 2.0, 1.5},
                                         RirOptions{RirTapMode::kRounded});
    const size_t expect_idx = 93;  // round(2 / 343 * 16000)
    REQUIRE(h.size() == expect_idx + 1);
    CHECK(h[expect_idx] == doctest::Approx(1.0 / (8.0 * M_PI)).epsilon(1e-12));
    for (size_t i = 0; i < expect_idx; ++i) CHECK(h[i] == 0.0);
  }

  TEST_CASE("free-field rounded tap index is round(d/c*fs) across placements") {
    RoomSpec room;
    room.rt60 = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Vec3 src{0.5 + 0.17 * k, 1.0 + 0.11 * k, 1.0};
      const Vec3 mic{4.5 - 0.13 * k, 3.5 - 0.07 * k, 1.4};
      const double d = dist3(src, mic);
      auto h = roboaudio::image_method_rir(room, src, mic, RirOptions{RirTapMode::kRounded});
      const auto idx = static_cast<size_t>(std::llround(d / 343.0 * 16000.0));
      REQUIRE(h.size() == idx + 1);
      CHECK(h[idx] == doctest::Approx(1.0 / (4.0 * M_PI * d)).epsilon(1e-12));
    }
  }

  TEST_CASE("free-field interpolated kernel matches the windowed-sinc definition") {
    RoomSpec room;
    room.rt60 = 0.0;
    const Vec3 src{1.0, 1.0, 1.0};
    const Vec3 mic{2.3, 2.7, 1.4};  // fractional delay ~101.56 samples
    const double d = dist3(src, mic);
    const double amp = 1.0 / (4.0 * M_PI * d);
    const double delay = d / 343.0 * 16000.0;
    const int tw = 128;  // 2 * round(0.004 * fs)

    auto h = roboaudio::image_method_rir(room, src, mic, RirOptions{RirTapMode::kInterpolated});
    REQUIRE(h.size() == static_cast<size_t>(std::ceil(delay)) + tw / 2 + 1);

    double dc_sum = 0.0;
    for (size_t t = 0; t < h.size(); ++t) {
      const double x = static_cast<double>(t) - delay;
      double expect = 0.0;
      if (x >= -tw / 2.0 && x <= tw / 2.0) {
        const double win = 0.5 * (1.0 + std::cos(2.0 * M_PI * x / tw));
        const double sinc = x == 0.0 ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
        expect = amp * win * sinc;
      }
      CHECK(std::abs(h[t] - expect) < 1e-12);
      dc_sum += h[t];
    }
    // The kernel integrates to ~1, so the DC gain reproduces the amplitude.
    CHECK(dc_sum == doctest::Approx(amp).epsilon(1e-3));
  }

  TEST_CASE("reverberant RIR is causal and rt60-sized") {
    RoomSpec room;  // 5 x 4 x 3, rt60 0.3
    const Vec3 src{1.2, 1.3, 1.1};
    const Vec3 mic{3.4, 2.6, 1.5};
    auto h = roboaudio::image_method_rir(room, src, mic, RirOptions{RirTapMode::kRounded});
    CHECK(h.size() == static_cast<size_t>(std::ceil(0.3 * 1.25 * 16000.0)));
    const auto direct = static_cast<size_t>(std::llround(dist3(src, mic) / 343.0 * 16000.0));
    for (size_t i = 0; i < direct; ++i) CHECK(h[i] == 0.0);
    CHECK(h[direct] > 0.0);
    // Direct tap dominates any single later tap (it is the shortest path).
    for (size_t i = direct + 1; i < h.size(); ++i) CHECK(h[i] <= h[direct] + 1e-12);
  }

  TEST_CASE("Schroeder decay of a 0.5 s room lands within 20 percent") {
    RoomSpec room;
    room.rt60 = 0.5;
    auto h = roboaudio::image_method_rir(room, {1.5, 1.2, 1.3}, {3.2, 2.9, 1.6},
                                         RirOptions{RirTapMode::kRounded});
    const double t60 = testutil::schroeder_t60(h, 16000.0);
    CHECK(t60 > 0.4);
    CHECK(t60 < 0.6);
  }

  TEST_CASE("hybrid interpolated mode keeps the rounded late tail") {
    // Beyond interp_early_s * c the two modes must agree exactly.
    RoomSpec room;
    room.rt60 = 0.3;
    const Vec3 src{1.2, 1.3, 1.1};
    const Vec3 mic{3.4, 2.6, 1.5};
    auto rounded = roboaudio::image_method_rir(room, src, mic, RirOptions{RirTapMode::kRounded});
    auto interp = roboaudio::image_method_rir(room, src, mic, RirOptions{RirTapMode::kInterpolated});
    REQUIRE(rounded.size() == interp.size());
    // interp_early_s = 0.05 s -> all images beyond 0.05 s + half a kernel are
    // rounded in both modes; the zero-DC output kernel reaches 160 samples
    // back, so equality starts another kernel length later.
    const size_t split = static_cast<size_t>(std::ceil(0.05 * 16000.0)) + 65 + 160;
    double tail_energy = 0.0;
    for (size_t i = split; i < rounded.size(); ++i) {
      CHECK(interp[i] == doctest::Approx(rounded[i]).epsilon(1e-12));
      tail_energy += rounded[i] * rounded[i];
    }
    CHECK(tail_energy > 0.0);  // the comparison covered real content
  }

  TEST_CASE("geometry violations raise GeometryError") {
    RoomSpec room;
    CHECK_THROWS_AS(roboaudio::image_method_rir(room, {-1.0, 1.0, 1.0}, {2.0, 2.0, 1.0}),
                    roboaudio::GeometryError);
    CHECK_THROWS_AS(roboaudio::image_method_rir(room, {1.0, 1.0, 1.0}, {2.0, 5.0, 1.0}),
                    roboaudio::GeometryError);
    CHECK_THROWS_AS(roboaudio::image_method_rir(room, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}),
                    roboaudio::GeometryError);
  }

  TEST_CASE("an rt60 far too small for the volume is rejected") {
    RoomSpec room;
    room.rt60 = 1e-5;  // required absorption exceeds unity
    CHECK_THROWS_AS(roboaudio::image_method_rir(room, {1.0, 1.0, 1.0}, {2.0, 2.0, 1.0}),
                    roboaudio::ParamError);
  }

  TEST_CASE("room conformance flags") {
    CHECK(RoomSpec{5.0, 4.0, 3.0, 0.5}.challenge_conformant());
    CHECK(RoomSpec{3.0, 8.0, 3.0, 0.2}.challenge_conformant());
    CHECK_FALSE(RoomSpec{2.5, 4.0, 3.0, 0.5}.challenge_conformant());
    CHECK_FALSE(RoomSpec{5.0, 9.0, 3.0, 0.5}.challenge_conformant());
    CHECK_FALSE(RoomSpec{5.0, 4.0, 2.8, 0.5}.challenge_conformant());
    CHECK_FALSE(RoomSpec{5.0, 4.0, 3.0, 0.1}.challenge_conformant());
    CHECK_FALSE(RoomSpec{5.0, 4.0, 3.0, 0.9}.challenge_conformant());
    CHECK_FALSE(RoomSpec{5.0, 4.0, 3.0, 0.0}.challenge_conformant());  // free field
  }

  TEST_CASE("place_device reproduces the head and waist dimensions") {
    RoomSpec room;
    const Vec3 origin{2.5, 2.0, 0.5};
    auto dev = roboaudio::place_device(room, origin, 90.0);

    // Heading 90: the device frame coincides with the world frame.
    const double half = 0.037 / 2.0;
    CHECK(dev.mic_positions[0][0] == doctest::Approx(origin[0] + half));
    CHECK(dev.mic_positions[0][1] == doctest::Approx(origin[1] + half));
    CHECK(dev.mic_positions[1][0] == doctest::Approx(origin[0] - half));
    CHECK(dev.mic_positions[1][1] == doctest::Approx(origin[1] + half));
    CHECK(dev.mic_positions[2][1] == doctest::Approx(origin[1] - half));
    CHECK(dev.mic_positions[3][0] == doctest::Approx(origin[0] + half));

    // Adjacent spacing 0.037, diagonal 0.037*sqrt(2), all in one plane.
    CHECK(dist3(dev.mic_positions[0], dev.mic_positions[1]) == doctest::Approx(0.037));
    CHECK(dist3(dev.mic_positions[1], dev.mic_positions[2]) == doctest::Approx(0.037));
    CHECK(dist3(dev.mic_positions[0], dev.mic_positions[2]) ==
          doctest::Approx(0.037 * std::sqrt(2.0)));
    for (int i = 0; i < 4; ++i) CHECK(dev.mic_positions[i][2] == doctest::Approx(origin[2]));

    // Loudspeakers: 0.063 apart, 0.13 below the mic plane.
    CHECK(dist3(dev.loudspeaker_positions[0], dev.loudspeaker_positions[1]) ==
          doctest::Approx(0.063));
    CHECK(dev.loudspeaker_positions[0][2] == doctest::Approx(origin[2] - 0.13));

    // Mechanical source at the center, 0.1 m down.
    auto mech = dev.mech_source_position();
    CHECK(mech[0] == doctest::Approx(origin[0]));
    CHECK(mech[2] == doctest::Approx(origin[2] - 0.1));
  }

  TEST_CASE("heading rotates the array rigidly") {
    RoomSpec room;
    const Vec3 origin{2.5, 2.0, 0.5};
    auto dev = roboaudio::place_device(room, origin, 0.0);
    // Heading 0: local (x, y) maps to world (y, -x); local +y (ahead) -> +x.
    const double half = 0.037 / 2.0;
    CHECK(dev.mic_positions[0][0] == doctest::Approx(origin[0] + half));
    CHECK(dev.mic_positions[0][1] == doctest::Approx(origin[1] - half));
    CHECK(dev.mic_positions[1][0] == doctest::Approx(origin[0] + half));
    CHECK(dev.mic_positions[1][1] == doctest::Approx(origin[1] + half));
    // Rigid: pairwise distances unchanged by the rotation.
    CHECK(dist3(dev.mic_positions[0], dev.mic_positions[1]) == doctest::Approx(0.037));
    CHECK(dist3(dev.loudspeaker_positions[0], dev.loudspeaker_positions[1]) ==
          doctest::Approx(0.063));
  }

  TEST_CASE("place_device rejects poses that push parts outside the room") {
    RoomSpec room;
    // Mech source would sit at z = 0 (not strictly inside).
    CHECK_THROWS_AS(roboaudio::place_device(room, {2.5, 2.0, 0.1}, 90.0),
                    roboaudio::GeometryError);
    CHECK_THROWS_AS(roboaudio::place_device(room, {0.01, 2.0, 0.5}, 90.0),
                    roboaudio::GeometryError);
  }

  TEST_CASE("azimuth_of uses the 90-degrees-is-ahead device convention") {
    RoomSpec room;
    auto dev = roboaudio::place_device(room, {2.5, 2.0, 1.0}, 0.0);
    // Heading 0 = facing world +x: a point ahead reads 90 degrees.
    CHECK(roboaudio::azimuth_of(dev, {4.0, 2.0, 1.0}) == 90);
    // World +y is to the robot's left: 90 further counterclockwise = 180.
    CHECK(roboaudio::azimuth_of(dev, {2.5, 3.5, 1.0}) == 180);
    CHECK(roboaudio::azimuth_of(dev, {1.0, 2.0, 1.0}) == 270);
    // Directly to the right quantizes to 360, never 0.
    CHECK(roboaudio::azimuth_of(dev, {2.5, 0.5, 1.0}) == 360);

    auto dev90 = roboaudio::place_device(room, {2.5, 2.0, 1.0}, 90.0);
    CHECK(roboaudio::azimuth_of(dev90, {2.5, 3.5, 1.0}) == 90);   // ahead
    CHECK(roboaudio::azimuth_of(dev90, {4.0, 2.0, 1.0}) == 360);  // right

    // Elevation does not affect azimuth.
    CHECK(roboaudio::azimuth_of(dev90, {2.5, 3.5, 2.5}) == 90);

    CHECK_THROWS_AS(roboaudio::azimuth_of(dev, {2.5, 2.0, 1.7}), roboaudio::GeometryError);
  }

  TEST_CASE("azimuth_of rounds to the nearest integer degree") {
    RoomSpec room{10.0, 10.0, 3.0, 0.3};
    auto dev = roboaudio::place_device(room, {5.0, 5.0, 1.0}, 90.0);
    // 30.2 degrees world -> rounds to 30.
    const double rad = 30.2 * M_PI / 180.0;
    CHECK(roboaudio::azimuth_of(dev, {5.0 + 2.0 * std::cos(rad), 5.0 + 2.0 * std::sin(rad), 1.0}) ==
          30);
    // 359.7 -> rounds to 360 (via the 0 -> 360 rule).
    const double rad2 = -0.3 * M_PI / 180.0;
    CHECK(roboaudio::azimuth_of(dev,
                                {5.0 + 2.0 * std::cos(rad2), 5.0 + 2.0 * std::sin(rad2), 1.0}) ==
          360);
  }
}
