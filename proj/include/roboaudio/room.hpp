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

#pragma once

#include <array>
#include <vector>

namespace roboaudio {

using Vec3 = std::array<double, 3>;

// Shoebox room. rt60 == 0 selects free-field mode (direct path only).
// Rooms outside 3..8 m footprint with 3 m height, or rt60 outside
// 0.2..0.8 s, are usable but reported as non-conformant.
struct RoomSpec {
  double lx = 5.0, ly = 4.0, lz = 3.0;
  double rt60 = 0.3;
  int sample_rate = 16000;
  double speed_of_sound = 343.0;

  bool challenge_conformant() const;
  void validate() const;
};

// Head microphone square side and waist loudspeaker spacing of the robot,
// plus the vertical drop from the mic plane down to the loudspeakers.
constexpr double kMicSpacing = 0.037;
constexpr double kLoudspeakerSpacing = 0.063;
constexpr double kLoudspeakerDrop = 0.13;
// Mechanical-noise source sits at the array center, 0.1 m below the mic plane.
constexpr double kMechDrop = 0.1;

struct Pose {
  Vec3 origin{0.0, 0.0, 0.0};  // array center, world coordinates
  double heading_deg = 0.0;    // world azimuth the robot faces
};

// Rigid four-mic square (side 0.037 m) in a horizontal plane with the two
// loudspeakers 0.13 m below. Azimuth convention: 90 degrees is straight
// ahead of the robot, increasing counterclockwise when viewed from above.
struct DeviceGeometry {
  std::array<Vec3, 4> mic_positions;
  std::array<Vec3, 2> loudspeaker_positions;
  Pose pose;

  Vec3 array_center() const { return pose.origin; }
  // Mic offset from the array center in the device frame (90 deg = ahead).
  Vec3 mic_offset_device(int i) const;
  Vec3 mech_source_position() const;
};

// Places the device in the room. Throws GeometryError if any mic or
// loudspeaker would leave the room interior.
DeviceGeometry place_device(const RoomSpec& room, const Vec3& origin, double heading_deg);

// Device-frame azimuth of a world point, quantized to 1..360 (0 maps to 360).
int azimuth_of(const DeviceGeometry& device, const Vec3& point);

enum class RirTapMode {
  kRounded,       // each image lands on the nearest sample
  kInterpolated,  // windowed-sinc fractional-delay kernel per image
};

struct RirOptions {
  RirTapMode tap_mode = RirTapMode::kRounded;
  // Extra tail beyond rt60, as a fraction, so the decay is fully captured.
  double tail_margin = 0.25;
  // In interpolated mode, images arriving within this window get full
  // fractional-delay kernels; the dense late tail lands on nearest samples.
  // Sub-sample timing only matters for the direct path and early reflections
  // (localization cues); the diffuse tail is insensitive to half-sample
  // jitter but dominates the image count.
  double interp_early_s = 0.05;
};

// Shoebox impulse response by mirror-image expansion. Uniform wall
// reflectivity derived from rt60 (Eyring absorption). Direct path arrives at
// distance/c; with rounded taps that is exactly round(d/c*fs) with amplitude
// 1/(4*pi*d). Throws GeometryError for out-of-room or coincident positions.
std::vector<double> image_method_rir(const RoomSpec& room, const Vec3& src, const Vec3& mic,
                                     const RirOptions& opts = {});

}  // namespace roboaudio
