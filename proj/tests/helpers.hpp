#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "ffdpat/operators.hpp"
#include "ffdpat/phantom.hpp"
#include "ffdpat/wave.hpp"

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("ffdpat_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

/// 64 x 64 solver grid (spacing 0.05) around a 21 x 21 source grid on
/// [-0.5, 0.5]^2; T = 0.6.
struct Small {
  ffdpat::GridSpec solver{64, 64, -1.55, -1.55, 0.05, 0.05};
  ffdpat::GridSpec source = ffdpat::GridSpec::centered(21, 0.5);
  double t_final = 0.6;
  double support = 0.4;

  [[nodiscard]] ffdpat::SoundSpeedMap flat(double c0 = 1.0) const {
    return ffdpat::SoundSpeedMap::constant(solver, c0);
  }
  [[nodiscard]] ffdpat::SoundSpeedMap ring() const {
    ffdpat::SoundSpeedSpec s;
    s.ring_radius = 0.3;
    s.ring_width = 0.08;
    return ffdpat::render_sound_speed(s, solver);
  }
  [[nodiscard]] ffdpat::WaveOperator wave(const ffdpat::SoundSpeedMap& c) const {
    return {c, ffdpat::WaveConfig::with_defaults(solver, source, t_final, c)};
  }
  [[nodiscard]] ffdpat::SinogramSpec spec(std::size_t n_angles = 48) const {
    return ffdpat::SinogramSpec::covering(n_angles, 1.5, 0.05);
  }
  [[nodiscard]] ffdpat::ScalarField2D bump(double cx = 0.0, double cy = 0.0) const {
    ffdpat::PhantomSpec p{ffdpat::PhantomKind::smooth_bumps,
                          {{cx, cy, support - std::hypot(cx, cy), 1.0}}, source, support};
    return ffdpat::render_phantom(p);
  }
  [[nodiscard]] ffdpat::FfdOperator op(const ffdpat::SoundSpeedMap& c, bool strip,
                                       std::size_t n_angles = 48) const {
    const auto sp = spec(n_angles);
    const auto w = wave(c);
    const double r = ffdpat::propagation_radius(support, w);
    return {w, sp, strip ? ffdpat::Mask::strip(sp, 0.2) : ffdpat::Mask::full(sp), r};
  }
};

}  // namespace testing
