#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ffdpat/field.hpp"
#include "ffdpat/wave.hpp"
#include "ffdpat/xray.hpp"

namespace ffdpat {

/// Binary visibility chi_M on the sinogram: 1 where data are measured.
class Mask {
 public:
  static Mask full(const SinogramSpec& spec);
  /// Zero exactly where |offset| <= half_width, for every angle.
  static Mask strip(const SinogramSpec& spec, double half_width);
  /// Values must all be 0 or 1.
  static Mask from_sinogram(const Sinogram& s);

  [[nodiscard]] const SinogramSpec& spec() const { return values_.spec(); }
  [[nodiscard]] std::optional<double> strip_half_width() const { return strip_half_width_; }
  [[nodiscard]] const Sinogram& as_sinogram() const { return values_; }

  [[nodiscard]] Sinogram apply(Sinogram g) const;
  void apply_inplace(Sinogram& g) const;

 private:
  explicit Mask(Sinogram values, std::optional<double> half_width)
      : values_(std::move(values)), strip_half_width_(half_width) {}
  Sinogram values_;
  std::optional<double> strip_half_width_;
};

/// Radius that the final-time pressure of a source supported in the disc of
/// radius `source_radius` cannot leave: source_radius + c_max * T.
double propagation_radius(double source_radius, const WaveOperator& wave);

/// A = chi_M X W_T. `data_radius` is the support radius of W_T h handed to
/// the projector's clipping check (see propagation_radius).
/// Immutable; apply/adjoint may run concurrently.
class FfdOperator {
 public:
  FfdOperator(WaveOperator wave, SinogramSpec spec, Mask mask, double data_radius);

  [[nodiscard]] const WaveOperator& wave() const { return wave_; }
  [[nodiscard]] const SinogramSpec& spec() const { return spec_; }
  [[nodiscard]] const Mask& mask() const { return mask_; }
  [[nodiscard]] const GridSpec& source_grid() const { return wave_.config().source_grid; }
  [[nodiscard]] double data_radius() const { return data_radius_; }

  /// X W_T h (no mask).
  [[nodiscard]] Sinogram apply_unmasked(const ScalarField2D& h) const;
  /// chi_M X W_T h.
  [[nodiscard]] Sinogram apply(const ScalarField2D& h) const;
  /// W_T^* X^* chi_M G.
  [[nodiscard]] ScalarField2D adjoint(const Sinogram& g) const;
  /// W_T^* X^* chi_M Lambda chi_M R: the adjoint of A under <Lambda ., .>.
  [[nodiscard]] ScalarField2D preconditioned_adjoint(const Sinogram& r) const;

  /// Masked data-space residual chi_M (X W_T h - G).
  [[nodiscard]] Sinogram residual(const ScalarField2D& h, const Sinogram& g) const;
  /// W_T^* X^* chi_M Lambda chi_M (X W_T h - G).
  [[nodiscard]] ScalarField2D preconditioned_residual(const ScalarField2D& h,
                                                      const Sinogram& g) const;
  /// N h = W_T^* X^* chi_M Lambda chi_M X W_T h.
  [[nodiscard]] ScalarField2D normal(const ScalarField2D& h) const;

 private:
  void check_sinogram(const Sinogram& g) const;

  WaveOperator wave_;
  SinogramSpec spec_;
  Mask mask_;
  double data_radius_;
};

struct ConditioningReport {
  double largest = 0.0;   // Ritz estimate of the top of the spectrum of N
  double smallest = 0.0;  // and of its bottom
  double condition = 0.0; // largest / smallest (inf when smallest <= 0)
  int iterations = 0;
};

/// Matrix-free spectral bounds of the preconditioned normal operator: power
/// iteration on N, then on (largest * I - N). Random start from `seed`.
ConditioningReport estimate_conditioning(const FfdOperator& op, int iterations = 50,
                                         std::uint64_t seed = 7);

}  // namespace ffdpat
