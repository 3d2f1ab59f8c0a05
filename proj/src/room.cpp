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

#include "roboaudio/room.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>
#include <vector>

#include "roboaudio/errors.hpp"

namespace roboaudio {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool inside_room(const RoomSpec& room, const Vec3& p) {
  return p[0] > 0.0 && p[0] < room.lx && p[1] > 0.0 && p[1] < room.ly && p[2] > 0.0 &&
         p[2] < room.lz;
}

// Adds a windowed-sinc fractional-delay tap (total width tw samples) at a
// real-valued delay. sin(pi*(t - delay)) just alternates sign as t steps, and
// the Hann factor advances by a fixed rotation, so the loop needs no
// per-sample trig.
void add_interpolated_tap(std::vector<double>& h, double amp, double delay, int tw) {
  const int lo = std::max(0, static_cast<int>(std::ceil(delay - tw / 2.0)));
  const int hi = std::min(static_cast<int>(h.size()) - 1,
                          static_cast<int>(std::floor(delay + tw / 2.0)));
  if (lo > hi) return;
  const double s0 = std::sin(kPi * delay);  // sin(pi*(t-delay)) = +-s0
  const double step = 2.0 * kPi / tw;
  const double cs = std::cos(step), ss = std::sin(step);
  double c = std::cos((lo - delay) * step), s = std::sin((lo - delay) * step);
  for (int t = lo; t <= hi; ++t) {
    const double x = static_cast<double>(t) - delay;
    const double win = 0.5 * (1.0 + c);
    const double sinc = x == 0.0 ? 1.0 : ((t & 1) ? s0 : -s0) / (kPi * x);
    h[static_cast<size_t>(t)] += amp * win * sinc;
    const double c_next = c * cs - s * ss;
    s = s * cs + c * ss;
    c = c_next;
  }
}

// Continuum model of the image lattice's energy decay, used to pick the wall
// reflectivity. Mirror images have density 1/V; an image at distance d along
// direction u has accumulated about d * g(u) wall hits, with
//   g(u) = |u_x|/lx + |u_y|/ly + |u_z|/lz,
// so with per-hit energy factor exp(-kappa) the backward-integrated tail is
//   EDC(t) ∝ ∫ dΩ exp(-kappa c t g(u)) / g(u).
// Isotropic-field inversions (Sabine, Eyring) assume the mean of g, but the
// late tail is carried by directions grazing the longest axis, so they leave
// the simulated decay measurably slower than requested in elongated rooms.
// Calibrating kappa against the same -5..-25 dB Schroeder fit used to
// validate RIRs keeps the measured decay on target.
class LatticeDecayModel {
 public:
  LatticeDecayModel(const RoomSpec& room) : c_(room.speed_of_sound) {
    constexpr int kNodes = 24;  // midpoint rule per angle, first octant
    const double dims[3] = {room.lx, room.ly, room.lz};
    for (int i = 0; i < kNodes; ++i) {
      const double theta = (i + 0.5) * (kPi / 2.0) / kNodes;
      for (int j = 0; j < kNodes; ++j) {
        const double phi = (j + 0.5) * (kPi / 2.0) / kNodes;
        const double u[3] = {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                             std::cos(theta)};
        g_.push_back(u[0] / dims[0] + u[1] / dims[1] + u[2] / dims[2]);
        w_.push_back(std::sin(theta));
      }
    }
  }

  // Decay-time estimate for a given kappa: least-squares slope of the model
  // EDC (dB vs. seconds) over the -5..-25 dB span, extrapolated to -60 dB,
  // mirroring the Schroeder measurement applied to generated RIRs.
  double t60(double kappa) const {
    const auto level = [&](double t) {
      double acc = 0.0;
      for (size_t i = 0; i < g_.size(); ++i) acc += w_[i] * std::exp(-kappa * c_ * t * g_[i]) / g_[i];
      return 10.0 * std::log10(acc / edc0() + 1e-300);
    };
    const double t5 = solve_level(level, -5.0, kappa);
    const double t25 = solve_level(level, -25.0, kappa);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    constexpr int kFit = 64;
    for (int i = 0; i < kFit; ++i) {
      const double t = t5 + (t25 - t5) * (i + 0.5) / kFit;
      const double y = level(t);
      sx += t;
      sy += y;
      sxx += t * t;
      sxy += t * y;
    }
    const double slope = (kFit * sxy - sx * sy) / (kFit * sxx - sx * sx);
    return -60.0 / slope;
  }

 private:
  double edc0() const {
    double acc = 0.0;
    for (size_t i = 0; i < g_.size(); ++i) acc += w_[i] / g_[i];
    return acc;
  }

  template <typename Level>
  double solve_level(const Level& level, double target, double kappa) const {
    // The mean decay rate bounds the time scale; grow past it if needed.
    double hi = -target / (10.0 * std::log10(std::exp(1.0))) / (kappa * c_ * g_min());
    while (level(hi) > target) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (level(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double g_min() const { return *std::min_element(g_.begin(), g_.end()); }

  double c_;
  std::vector<double> g_, w_;
};

// Per-hit energy attenuation exp(-kappa) calibrated so the model's measured
// decay equals rt60; bisection is safe because t60 falls monotonically in
// kappa. Calibration depends only on (geometry, rt60), so it is cached.
double calibrated_kappa(const RoomSpec& room) {
  using Key = std::tuple<double, double, double, double, double>;
  static std::mutex mu;
  static std::map<Key, double> cache;
  const Key key{room.lx, room.ly, room.lz, room.rt60, room.speed_of_sound};
  {
    std::lock_guard<std::mutex> lock(mu);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  const LatticeDecayModel model(room);
  const double volume = room.lx * room.ly * room.lz;
  const double surface = 2.0 * (room.lx * room.ly + room.lx * room.lz + room.ly * room.lz);
  const double kappa_sabine = 0.161 * volume / (surface * room.rt60);
  double lo = 0.5 * kappa_sabine, hi = kappa_sabine;
  while (model.t60(hi) > room.rt60) hi *= 2.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (model.t60(mid) > room.rt60 ? lo : hi) = mid;
  }
  const double kappa = 0.5 * (lo + hi);

  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, kappa);
  return kappa;
}

}  // namespace

bool RoomSpec::challenge_conformant() const {
  return lx >= 3.0 && lx <= 8.0 && ly >= 3.0 && ly <= 8.0 && lz == 3.0 && rt60 >= 0.2 &&
         rt60 <= 0.8;
}

void RoomSpec::validate() const {
  if (!(lx > 0.0) || !(ly > 0.0) || !(lz > 0.0))
    throw ParamError("room dimensions must be positive");
  if (rt60 < 0.0) throw ParamError("rt60 must be non-negative");
  if (sample_rate <= 0) throw ParamError("sample_rate must be positive");
  if (!(speed_of_sound > 0.0)) throw ParamError("speed_of_sound must be positive");
}

Vec3 DeviceGeometry::mic_offset_device(int i) const {
  // Mic corners at device azimuths 45/135/225/315 deg, half-diagonal radius.
  const double r = kMicSpacing / std::sqrt(2.0);
  const double az = deg2rad(45.0 + 90.0 * static_cast<double>(i));
  return Vec3{r * std::cos(az), r * std::sin(az), 0.0};
}

Vec3 DeviceGeometry::mech_source_position() const {
  return Vec3{pose.origin[0], pose.origin[1], pose.origin[2] - kMechDrop};
}

DeviceGeometry place_device(const RoomSpec& room, const Vec3& origin, double heading_deg) {
  room.validate();
  DeviceGeometry dev;
  dev.pose.origin = origin;
  dev.pose.heading_deg = heading_deg;

  // Device frame: +y is straight ahead (device azimuth 90 deg). Rotating the
  // device frame into the world frame therefore uses (heading - 90) so that
  // the local +y axis lands on the world heading direction.
  const double rot = deg2rad(heading_deg - 90.0);
  const double c = std::cos(rot), s = std::sin(rot);
  auto to_world = [&](const Vec3& local) {
    return Vec3{origin[0] + c * local[0] - s * local[1], origin[1] + s * local[0] + c * local[1],
                origin[2] + local[2]};
  };

  for (int i = 0; i < 4; ++i) dev.mic_positions[i] = to_world(dev.mic_offset_device(i));
  dev.loudspeaker_positions[0] = to_world(Vec3{-kLoudspeakerSpacing / 2.0, 0.0, -kLoudspeakerDrop});
  dev.loudspeaker_positions[1] = to_world(Vec3{kLoudspeakerSpacing / 2.0, 0.0, -kLoudspeakerDrop});

  auto check = [&](const Vec3& p, const char* what) {
    if (!inside_room(room, p)) {
      std::ostringstream os;
      os << what << " at (" << p[0] << ", " << p[1] << ", " << p[2] << ") lies outside the room";
      throw GeometryError(os.str());
    }
  };
  for (int i = 0; i < 4; ++i) check(dev.mic_positions[i], "microphone");
  for (int i = 0; i < 2; ++i) check(dev.loudspeaker_positions[i], "loudspeaker");
  check(dev.mech_source_position(), "mechanical source");
  return dev;
}

int azimuth_of(const DeviceGeometry& device, const Vec3& point) {
  const double dx = point[0] - device.pose.origin[0];
  const double dy = point[1] - device.pose.origin[1];
  if (dx == 0.0 && dy == 0.0) throw GeometryError("point coincides with the array center");
  const double world_deg = std::atan2(dy, dx) * 180.0 / kPi;
  // World azimuth -> device azimuth: subtract the rotation applied when
  // placing the device, i.e. deg - (heading - 90).
  double dev_deg = world_deg - device.pose.heading_deg + 90.0;
  double wrapped = std::fmod(dev_deg, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  int q = static_cast<int>(std::lround(wrapped)) % 360;
  return q == 0 ? 360 : q;
}

std::vector<double> image_method_rir(const RoomSpec& room, const Vec3& src, const Vec3& mic,
                                     const RirOptions& opts) {
  room.validate();
  if (!inside_room(room, src)) throw GeometryError("source lies outside the room");
  if (!inside_room(room, mic)) throw GeometryError("microphone lies outside the room");
  const double d_direct = distance(src, mic);
  if (d_direct < 1e-9) throw GeometryError("source and microphone coincide");

  const double c = room.speed_of_sound;
  const double fs = static_cast<double>(room.sample_rate);

  // Free field: single direct-path tap.
  if (room.rt60 == 0.0) {
    const double amp = 1.0 / (4.0 * kPi * d_direct);
    if (opts.tap_mode == RirTapMode::kRounded) {
      const auto idx = static_cast<size_t>(std::llround(d_direct / c * fs));
      std::vector<double> h(idx + 1, 0.0);
      h[idx] = amp;
      return h;
    }
    // Fractional-delay kernel for the one tap (matches the reverberant path
    // below so free field is the rt60 -> 0 limit of the same renderer).
    const int tw = 2 * static_cast<int>(std::lround(0.004 * fs));
    const double delay = d_direct / c * fs;
    const size_t n = static_cast<size_t>(std::ceil(delay)) + static_cast<size_t>(tw) / 2 + 1;
    std::vector<double> h(n, 0.0);
    add_interpolated_tap(h, amp, delay, tw);
    return h;
  }

  // Uniform wall reflectivity from rt60. Sabine's inversion bounds what a
  // passive surface can absorb; past that the requested decay is unreachable.
  // The actual coefficient is calibrated against the lattice decay model so
  // the Schroeder-measured time of the generated response lands on rt60.
  const double volume = room.lx * room.ly * room.lz;
  const double surface = 2.0 * (room.lx * room.ly + room.lx * room.lz + room.ly * room.lz);
  if (0.161 * volume / (surface * room.rt60) >= 1.0)
    throw ParamError("rt60 too small for this room volume");
  const double beta = std::exp(-0.5 * calibrated_kappa(room));

  const double t_len = room.rt60 * (1.0 + opts.tail_margin);
  const auto n_samples = static_cast<size_t>(std::ceil(t_len * fs));
  std::vector<double> h(n_samples, 0.0);
  const double max_dist = t_len * c;

  const int tw = 2 * static_cast<int>(std::lround(0.004 * fs));
  const int nx = static_cast<int>(std::ceil(max_dist / (2.0 * room.lx))) + 1;
  const int ny = static_cast<int>(std::ceil(max_dist / (2.0 * room.ly))) + 1;
  const int nz = static_cast<int>(std::ceil(max_dist / (2.0 * room.lz))) + 1;
  const double dims[3] = {room.lx, room.ly, room.lz};

  // beta^refl by table: the exponent is bounded by the per-axis hit counts.
  std::vector<double> beta_pow(static_cast<size_t>(2 * (nx + ny + nz)) + 4, 1.0);
  for (size_t r = 1; r < beta_pow.size(); ++r) beta_pow[r] = beta_pow[r - 1] * beta;

  const bool interpolated = opts.tap_mode == RirTapMode::kInterpolated;
  const double interp_dist = opts.interp_early_s * c;

  // Mirror-image expansion: q in {0,1}^3 selects reflection of the source
  // about the lower wall in each axis; (ox,oy,oz) index the lattice of room
  // copies. Per axis the image accumulates |o - q| hits on one wall and |o|
  // on the opposite one, so with uniform reflectivity the amplitude factor
  // is beta raised to the summed count.
  for (int qx = 0; qx <= 1; ++qx) {
    for (int qy = 0; qy <= 1; ++qy) {
      for (int qz = 0; qz <= 1; ++qz) {
        const double img_base[3] = {qx ? -src[0] : src[0], qy ? -src[1] : src[1],
                                    qz ? -src[2] : src[2]};
        const int q[3] = {qx, qy, qz};
        for (int ox = -nx; ox <= nx; ++ox) {
          const double px = img_base[0] + 2.0 * ox * dims[0] - mic[0];
          if (std::abs(px) > max_dist) continue;
          for (int oy = -ny; oy <= ny; ++oy) {
            const double py = img_base[1] + 2.0 * oy * dims[1] - mic[1];
            const double dxy2 = px * px + py * py;
            if (dxy2 > max_dist * max_dist) continue;
            for (int oz = -nz; oz <= nz; ++oz) {
              const double pz = img_base[2] + 2.0 * oz * dims[2] - mic[2];
              const double dist = std::sqrt(dxy2 + pz * pz);
              if (dist > max_dist || dist < 1e-9) continue;
              const int o[3] = {ox, oy, oz};
              int refl = 0;
              for (int axis = 0; axis < 3; ++axis)
                refl += std::abs(o[axis] - q[axis]) + std::abs(o[axis]);
              const double amp = beta_pow[static_cast<size_t>(refl)] / (4.0 * kPi * dist);
              const double delay = dist / c * fs;
              if (interpolated && dist <= interp_dist) {
                add_interpolated_tap(h, amp, delay, tw);
              } else {
                const auto idx = static_cast<size_t>(std::llround(delay));
                if (idx < n_samples) h[idx] += amp;
              }
            }
          }
        }
      }
    }
  }

  // Image amplitudes are all positive, so the dense late taps add coherently
  // at low frequency — the classic image-method DC buildup, which flattens
  // the broadband energy decay far below the requested rt60. A causal
  // zero-DC kernel (unit tap minus a trailing smoothed average, ~100 Hz
  // corner) removes the buildup while leaving every sample before and at the
  // direct-path tap bit-exact.
  const int dc_len = std::max(1, static_cast<int>(std::lround(0.01 * fs)));
  std::vector<double> avg(static_cast<size_t>(dc_len));
  double avg_sum = 0.0;
  for (int m = 1; m <= dc_len; ++m) {
    avg[static_cast<size_t>(m - 1)] = 0.5 * (1.0 - std::cos(2.0 * kPi * m / (dc_len + 1)));
    avg_sum += avg[static_cast<size_t>(m - 1)];
  }
  for (double& v : avg) v /= avg_sum;
  std::vector<double> filtered(n_samples);
  for (size_t n = 0; n < n_samples; ++n) {
    double acc = h[n];
    const int reach = std::min<int>(dc_len, static_cast<int>(n));
    for (int m = 1; m <= reach; ++m) acc -= avg[static_cast<size_t>(m - 1)] * h[n - static_cast<size_t>(m)];
    filtered[n] = acc;
  }
  return filtered;
}

}  // namespace roboaudio
