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
#include <random>
#include <vector>

#include "doctest.h"
#include "roboaudio/errors.hpp"
#include "roboaudio/kws.hpp"
#include "test_util.hpp"

using roboaudio::PosteriorTrack;

namespace {

PosteriorTrack track_of(std::vector<double> probs) {
  PosteriorTrack t;
  t.keyword_prob = std::move(probs);
  return t;
}

}  // namespace

TEST_SUITE("kws") {
  TEST_CASE("smoothing hand example") {
    auto smoothed = roboaudio::smooth_posteriors(track_of({0.0, 0.3, 0.6}), 3);
    REQUIRE(smoothed.keyword_prob.size() == 3);
    CHECK(smoothed.keyword_prob[0] == doctest::Approx(0.0));
    CHECK(smoothed.keyword_prob[1] == doctest::Approx(0.15));
    CHECK(smoothed.keyword_prob[2] == doctest::Approx(0.3));
  }

  TEST_CASE("smoothing matches a brute-force window average") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    std::uniform_int_distribution<int> wdist(1, 40);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> p(200);
      for (double& v : p) v = val(gen);
      const size_t w = static_cast<size_t>(wdist(gen));
      auto got = roboaudio::smooth_posteriors(track_of(p), w);
      for (size_t t = 0; t < p.size(); ++t) {
        const size_t lo = t + 1 >= w ? t + 1 - w : 0;
        double acc = 0.0;
        for (size_t i = lo; i <= t; ++i) acc += p[i];
        const double expect = acc / static_cast<double>(t - lo + 1);
        CHECK(std::abs(got.keyword_prob[t] - expect) < 1e-12);
      }
    }
  }

  TEST_CASE("smoothing keeps values in range and w_smooth=1 is the identity") {
    auto p = track_of({0.2, 0.9, 0.0, 1.0, 0.5});
    auto same = roboaudio::smooth_posteriors(p, 1);
    CHECK(same.keyword_prob == p.keyword_prob);
    auto wide = roboaudio::smooth_posteriors(p, 100);
    for (double v : wide.keyword_prob) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK_THROWS_AS(roboaudio::smooth_posteriors(p, 0), roboaudio::ParamError);
    CHECK_THROWS_AS(roboaudio::smooth_posteriors(track_of({1.5}), 3), roboaudio::ParamError);
  }

  TEST_CASE("decision fires at the first strict threshold crossing") {
    // Smoothed with w=2: 0.1, 0.3, 0.55, 0.75 -> first frame above 0.5 is 2.
    auto d = roboaudio::decide_keyword(track_of({0.1, 0.5, 0.6, 0.9}), 2, 0.5);
    CHECK(d.detected);
    REQUIRE(d.trigger_frame.has_value());
    CHECK(*d.trigger_frame == 2);
    CHECK(d.peak_confidence == doctest::Approx(0.75));

    // Exactly meeting the threshold never fires (strict inequality).
    auto flat = roboaudio::decide_keyword(track_of({0.5, 0.5, 0.5}), 1, 0.5);
    CHECK_FALSE(flat.detected);
    CHECK_FALSE(flat.trigger_frame.has_value());
    CHECK(flat.peak_confidence == doctest::Approx(0.5));
  }

  TEST_CASE("decision is causal: a prefix decides the same way up to its end") {
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    std::vector<double> p(120);
    for (double& v : p) v = val(gen);
    auto full = roboaudio::decide_keyword(track_of(p), 10, 0.6);
    if (full.detected) {
      const size_t cut = *full.trigger_frame + 1;
      auto prefix = roboaudio::decide_keyword(
          track_of(std::vector<double>(p.begin(), p.begin() + static_cast<long>(cut))), 10, 0.6);
      REQUIRE(prefix.detected);
      CHECK(*prefix.trigger_frame == *full.trigger_frame);
    }
    // Frames after the trigger cannot un-fire the decision.
    std::vector<double> extended = p;
    extended.insert(extended.end(), 50, 0.0);
    auto ext = roboaudio::decide_keyword(track_of(extended), 10, 0.6);
    CHECK(ext.detected == full.detected);
    if (full.detected) CHECK(*ext.trigger_frame == *full.trigger_frame);
  }

  TEST_CASE("raising the threshold is monotone in detections") {
    std::mt19937 gen(15);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> p(80);
      for (double& v : p) v = val(gen);
      bool prev = true;
      for (double th : {0.2, 0.4, 0.6, 0.8, 0.95}) {
        const bool det = roboaudio::decide_keyword(track_of(p), 5, th).detected;
        if (!prev) CHECK_FALSE(det);  // once lost at a lower threshold, stays lost
        prev = det;
      }
    }
  }

  TEST_CASE("threshold domain is (0, 1]: 1.0 is legal and never fires") {
    auto ones = track_of(std::vector<double>(50, 1.0));
    auto d = roboaudio::decide_keyword(ones, 5, 1.0);
    CHECK_FALSE(d.detected);
    CHECK(d.peak_confidence == doctest::Approx(1.0));
    CHECK_THROWS_AS(roboaudio::decide_keyword(ones, 5, 0.0), roboaudio::ParamError);
    CHECK_THROWS_AS(roboaudio::decide_keyword(ones, 5, 1.1), roboaudio::ParamError);
    CHECK_THROWS_AS(roboaudio::decide_keyword(ones, 5, -0.2), roboaudio::ParamError);
  }

  TEST_CASE("posterior file round trip") {
    testutil::TempDir dir;
    PosteriorTrack t;
    t.frame_hop_ms = 12.5;
    t.keyword_prob = {0.0, 0.125, 0.5, 0.9, 1.0};
    const std::string path = dir.file("probs.post");
    roboaudio::write_posterior_file(path, t);
    auto back = roboaudio::read_posterior_file(path);
    CHECK(back.frame_hop_ms == 12.5);
    CHECK(back.keyword_prob == t.keyword_prob);
  }

  TEST_CASE("posterior parser: header anywhere, blank lines, CRLF") {
    testutil::TempDir dir;
    const std::string path = dir.file("mixed.post");
    testutil::write_text(path, "0.25\r\n\n#hop_ms=20\n0.75\n");
    auto t = roboaudio::read_posterior_file(path);
    CHECK(t.frame_hop_ms == 20.0);
    REQUIRE(t.keyword_prob.size() == 2);
    CHECK(t.keyword_prob[0] == 0.25);
    CHECK(t.keyword_prob[1] == 0.75);
  }

  TEST_CASE("posterior parser reports the offending line number") {
    testutil::TempDir dir;
    const std::string path = dir.file("bad.post");
    testutil::write_text(path, "0.5\n0.6\nabc\n");
    try {
      roboaudio::read_posterior_file(path);
      FAIL("expected ParseError");
    } catch (const roboaudio::ParseError& e) {
      CHECK(e.line() == 3);
    }

    testutil::write_text(path, "0.5\n1.5\n");
    try {
      roboaudio::read_posterior_file(path);
      FAIL("expected ParseError");
    } catch (const roboaudio::ParseError& e) {
      CHECK(e.line() == 2);
    }

    testutil::write_text(path, "#hop_ms=zero\n");
    CHECK_THROWS_AS(roboaudio::read_posterior_file(path), roboaudio::ParseError);
    testutil::write_text(path, "#hop_ms=-5\n");
    CHECK_THROWS_AS(roboaudio::read_posterior_file(path), roboaudio::ParseError);
  }

  TEST_CASE("empty posterior file is an empty track; missing file is IoError") {
    testutil::TempDir dir;
    const std::string path = dir.file("empty.post");
    testutil::write_text(path, "");
    auto t = roboaudio::read_posterior_file(path);
    CHECK(t.keyword_prob.empty());
    CHECK(t.frame_hop_ms == 10.0);  // default retained
    CHECK_THROWS_AS(roboaudio::read_posterior_file(dir.file("nope.post")), roboaudio::IoError);
  }

  TEST_CASE("energy gate: frame count, range, hop metadata, monotone in energy") {
    auto x = testutil::white_noise(16000, 3, 0.1);
    auto t = roboaudio::energy_gate_posteriors(x);
    CHECK(t.keyword_prob.size() == (16000 - 400) / 160 + 1);  // 98 frames
    CHECK(t.frame_hop_ms == doctest::Approx(10.0));
    for (double p : t.keyword_prob) {
      CHECK(p >= 0.0);
      CHECK(p < 1.0);
    }

    // A loud burst maps to a higher posterior than a quiet stretch.
    std::vector<double> shaped(16000, 0.01);
    for (size_t n = 8000; n < 9600; ++n) shaped[n] = 0.5;
    auto ts = roboaudio::energy_gate_posteriors(shaped);
    const size_t loud_frame = 8400 / 160;  // frame fully inside the burst
    CHECK(ts.keyword_prob[loud_frame] > ts.keyword_prob[0]);
    CHECK(ts.keyword_prob[loud_frame] > 0.5);  // well above the mean-energy midpoint

    // Too-short input yields an empty track, silence a well-defined zero one.
    CHECK(roboaudio::energy_gate_posteriors(std::vector<double>(100, 0.1)).keyword_prob.empty());
    auto silent = roboaudio::energy_gate_posteriors(std::vector<double>(16000, 0.0));
    for (double p : silent.keyword_prob) CHECK(p == 0.0);
  }
}
