#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "ffdpat/field.hpp"

namespace ffdpat {

/// Parallel-beam geometry. Angle theta has direction (cos, sin); detector
/// bin k sits at offset offset_0 + k * d_offset along that direction.
struct SinogramSpec {
  std::vector<double> angles;
  std::size_t n_offsets = 0;
  double offset_0 = 0.0;
  double d_offset = 1.0;

  /// n_angles equispaced angles in [0, pi) and n_offsets bins from offset_0.
  static SinogramSpec uniform(std::size_t n_angles, std::size_t n_offsets, double offset_0,
                              double d_offset);
  /// Bins symmetric about zero covering [-half_width, half_width].
  static SinogramSpec covering(std::size_t n_angles, double half_width, double d_offset);

  [[nodiscard]] std::size_t n_angles() const { return angles.size(); }
  [[nodiscard]] std::size_t size() const { return angles.size() * n_offsets; }
  [[nodiscard]] double offset(std::size_t k) const {
    return offset_0 + static_cast<double>(k) * d_offset;
  }
  [[nodiscard]] double offset_max() const { return offset(n_offsets - 1); }

  /// Quadrature weight of each angle on the full circle: every sample in
  /// [0, pi) also stands for its antipode, so uniform angles get 2 pi / n.
  [[nodiscard]] std::vector<double> angle_weights() const;

  void validate() const;
  [[nodiscard]] bool matches(const SinogramSpec& other) const;
};

class Sinogram {
 public:
  Sinogram() = default;
  explicit Sinogram(SinogramSpec spec);
  Sinogram(SinogramSpec spec, std::vector<double> values);

  [[nodiscard]] const SinogramSpec& spec() const { return spec_; }
  [[nodiscard]] std::size_t n_angles() const { return spec_.n_angles(); }
  [[nodiscard]] std::size_t n_offsets() const { return spec_.n_offsets; }

  double& operator()(std::size_t a, std::size_t k) { return values_[a * spec_.n_offsets + k]; }
  double operator()(std::size_t a, std::size_t k) const {
    return values_[a * spec_.n_offsets + k];
  }
  [[nodiscard]] std::span<double> row(std::size_t a) {
    return {values_.data() + a * spec_.n_offsets, spec_.n_offsets};
  }
  [[nodiscard]] std::span<const double> row(std::size_t a) const {
    return {values_.data() + a * spec_.n_offsets, spec_.n_offsets};
  }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  Sinogram& operator+=(const Sinogram& other);
  Sinogram& operator-=(const Sinogram& other);
  Sinogram& operator*=(double s);
  void axpy(double a, const Sinogram& x);

 private:
  SinogramSpec spec_;
  std::vector<double> values_;
};

Sinogram operator-(Sinogram a, const Sinogram& b);
Sinogram operator+(Sinogram a, const Sinogram& b);
Sinogram operator*(double s, Sinogram a);

/// Weighted inner product sum w_theta * d_offset * G1 * G2.
double sino_inner(const Sinogram& a, const Sinogram& b);
double sino_norm(const Sinogram& a);  // unweighted l2

/// Line integrals of f: each line xi*theta + s*theta_perp is sampled at
/// s = j * min(dx, dy) / 2 with bilinear interpolation; samples outside the
/// grid contribute zero. `coverage_radius` is the radius of the disc holding
/// the support of f (defaults to the grid's corner radius); the detector must
/// cover [-r, r] or ClippingError is thrown.
Sinogram radon(const ScalarField2D& f, const SinogramSpec& spec,
               std::optional<double> coverage_radius = std::nullopt);

/// Exact transpose of radon():  <radon f, G>_sino == <f, backproject G>_grid.
ScalarField2D backproject(const Sinogram& g, const GridSpec& grid,
                          std::optional<double> coverage_radius = std::nullopt);

/// Band-limited ramp filter |omega| / (4 pi) applied along the offset axis of
/// each angle (zero padded to a power of two >= 2 n_offsets).
/// `apodize` multiplies by a cosine window that vanishes at Nyquist.
Sinogram ramp_filter(const Sinogram& g, bool apodize = false);

/// Filtered backprojection backproject(ramp_filter(g)).
ScalarField2D fbp(const Sinogram& g, const GridSpec& grid,
                  std::optional<double> coverage_radius = std::nullopt, bool apodize = false);

/// SNO1 binary format.
void write_sno(const std::filesystem::path& path, const Sinogram& g);
Sinogram read_sno(const std::filesystem::path& path);

}  // namespace ffdpat
