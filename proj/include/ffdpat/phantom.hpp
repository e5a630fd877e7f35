#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ffdpat/field.hpp"
#include "ffdpat/wave.hpp"
#include "ffdpat/xray.hpp"

namespace ffdpat {

enum class PhantomKind { discs, smooth_bumps, vessel_like };

std::string_view to_string(PhantomKind k);
PhantomKind parse_phantom_kind(std::string_view name);

/// One phantom component. Its shape follows PhantomSpec::kind:
///  - discs:        disc of radius `size` blurred by a Gaussian of width `sigma`
///                  (radial erf profile)
///  - smooth_bumps: amplitude * (1 - r^2 / size^2)^4 inside radius `size`
///  - vessel_like:  bar of half-length `size`, half-width `half_width`, rotated
///                  by `angle`, blurred by `sigma` (product of 1D erf profiles)
struct PhantomComponent {
  double cx = 0.0;
  double cy = 0.0;
  double size = 0.1;
  double amplitude = 1.0;
  double sigma = 0.0;
  double half_width = 0.0;
  double angle = 0.0;

  bool operator==(const PhantomComponent&) const = default;
};

struct PhantomSpec {
  PhantomKind kind = PhantomKind::discs;
  std::vector<PhantomComponent> components;
  GridSpec grid;
  /// Radius a of the disc D_a that must contain every component.
  double support_radius = 1.0;

  /// Throws InvalidArgument for bad parameters or a component leaving D_a.
  void validate() const;
};

/// Blurred components are cut off this many sigmas beyond their edge, where
/// the erf tail is about 1e-10 of the amplitude.
inline constexpr double kBlurCutoff = 6.5;

/// Radius of the smallest origin-centred disc holding the component.
double effective_radius(PhantomKind kind, const PhantomComponent& c);

/// Sum of the rendered components on spec.grid.
ScalarField2D render_phantom(const PhantomSpec& spec);

/// Largest |value| at nodes outside D_radius.
double max_outside(const ScalarField2D& f, double radius);

/// Smooth-disc arrangement standing in for the published raster phantom;
/// everything lies inside radius 0.9.
std::vector<PhantomComponent> lookalike_components();

enum class SoundSpeedKind { constant, trapping_radial };

std::string_view to_string(SoundSpeedKind k);
SoundSpeedKind parse_sound_speed_kind(std::string_view name);

/// Depressed-ring profile c0 (1 - A exp(-(|r| - rho)^2 / (2 w^2))), cut off to
/// c0 beyond rho + kRingCutoff * w (where the dip is below 3e-11 of c0).
struct SoundSpeedSpec {
  SoundSpeedKind kind = SoundSpeedKind::trapping_radial;
  double c0 = 1.0;
  double amplitude = 0.3;
  double ring_radius = 0.5;
  double ring_width = 0.15;

  bool operator==(const SoundSpeedSpec&) const = default;

  void validate() const;
  /// Radius beyond which the speed equals c0 (0 for constant speed).
  [[nodiscard]] double support_radius() const;
};

inline constexpr double kRingCutoff = 7.0;

SoundSpeedMap render_sound_speed(const SoundSpeedSpec& spec, const GridSpec& grid);

struct NoisyData {
  Sinogram noisy;
  /// ||noise|| / ||G||.
  double achieved_rel_error = 0.0;
  /// Standard deviation that was used.
  double sigma = 0.0;
};

/// Adds i.i.d. Gaussian noise with standard deviation
/// std_fraction * mean(G) (arithmetic mean of all samples).
///
/// Generator: for sample index n (row-major) draw the 64-bit words
/// u = splitmix64(seed + (2n + 1) * 0x9E3779B97F4A7C15) and
/// v = splitmix64(seed + (2n + 2) * 0x9E3779B97F4A7C15), map them to
/// (0, 1] via ((x >> 11) + 1) * 2^-53 and apply Box-Muller
/// sqrt(-2 ln u) cos(2 pi v). Output depends only on (seed, n).
NoisyData add_noise(const Sinogram& g, double std_fraction, std::uint64_t seed);

/// splitmix64 finaliser applied to x.
std::uint64_t splitmix64(std::uint64_t x);

/// Standard normal deviate number n of stream `seed` (see add_noise).
double gaussian_deviate(std::uint64_t seed, std::uint64_t n);

}  // namespace ffdpat
