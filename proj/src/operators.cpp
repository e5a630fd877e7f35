#include "ffdpat/operators.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "ffdpat/error.hpp"

namespace ffdpat {

Mask Mask::full(const SinogramSpec& spec) {
  Sinogram s(spec);
  std::fill(s.values().begin(), s.values().end(), 1.0);
  return Mask(std::move(s), std::nullopt);
}

Mask Mask::strip(const SinogramSpec& spec, double half_width) {
  if (!(half_width >= 0.0)) throw InvalidArgument("strip half width must be non-negative");
  Sinogram s(spec);
  for (std::size_t a = 0; a < spec.n_angles(); ++a) {
    for (std::size_t k = 0; k < spec.n_offsets; ++k) {
      s(a, k) = std::abs(spec.offset(k)) <= half_width ? 0.0 : 1.0;
    }
  }
  return Mask(std::move(s), half_width);
}

Mask Mask::from_sinogram(const Sinogram& s) {
  for (double v : s.values()) {
    if (v != 0.0 && v != 1.0) throw InvalidArgument("mask values must be 0 or 1");
  }
  return Mask(s, std::nullopt);
}

Sinogram Mask::apply(Sinogram g) const {
  apply_inplace(g);
  return g;
}

void Mask::apply_inplace(Sinogram& g) const {
  if (!g.spec().matches(values_.spec())) {
    throw GridMismatchError("mask and sinogram geometries differ");
  }
  auto v = g.values();
  const auto m = values_.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (m[k] == 0.0) v[k] = 0.0;
  }
}

double propagation_radius(double source_radius, const WaveOperator& wave) {
  return source_radius + wave.sound_speed().max_speed() * wave.config().t_final;
}

FfdOperator::FfdOperator(WaveOperator wave, SinogramSpec spec, Mask mask, double data_radius)
    : wave_(std::move(wave)), spec_(std::move(spec)), mask_(std::move(mask)),
      data_radius_(data_radius) {
  spec_.validate();
  if (!mask_.spec().matches(spec_)) {
    throw GridMismatchError("mask geometry does not match the sinogram spec");
  }
  if (!(data_radius_ > 0.0)) throw InvalidArgument("data radius must be positive");
  const double r = data_radius_;
  if (spec_.offset_0 > -r + 1e-9 * std::max(1.0, r) ||
      spec_.offset_max() < r - 1e-9 * std::max(1.0, r)) {
    throw ClippingError("detector range does not cover the data radius");
  }
}

void FfdOperator::check_sinogram(const Sinogram& g) const {
  if (!g.spec().matches(spec_)) throw GridMismatchError("sinogram does not match the operator");
}

Sinogram FfdOperator::apply_unmasked(const ScalarField2D& h) const {
  return radon(wave_.forward(h), spec_, data_radius_);
}

Sinogram FfdOperator::apply(const ScalarField2D& h) const {
  return mask_.apply(apply_unmasked(h));
}

ScalarField2D FfdOperator::adjoint(const Sinogram& g) const {
  check_sinogram(g);
  const GridSpec& solver = wave_.config().solver_grid;
  return wave_.adjoint(backproject(mask_.apply(g), solver, data_radius_));
}

ScalarField2D FfdOperator::preconditioned_adjoint(const Sinogram& r) const {
  check_sinogram(r);
  const Sinogram filtered = mask_.apply(ramp_filter(mask_.apply(r)));
  return wave_.adjoint(backproject(filtered, wave_.config().solver_grid, data_radius_));
}

Sinogram FfdOperator::residual(const ScalarField2D& h, const Sinogram& g) const {
  check_sinogram(g);
  Sinogram r = apply_unmasked(h);
  r -= g;
  mask_.apply_inplace(r);
  return r;
}

ScalarField2D FfdOperator::preconditioned_residual(const ScalarField2D& h,
                                                   const Sinogram& g) const {
  return preconditioned_adjoint(residual(h, g));
}

ScalarField2D FfdOperator::normal(const ScalarField2D& h) const {
  return preconditioned_adjoint(apply(h));
}

ConditioningReport estimate_conditioning(const FfdOperator& op, int iterations,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ScalarField2D v(op.source_grid());
  for (double& x : v.values()) x = gauss(rng);

  auto normalise = [](ScalarField2D& x) {
    const double n = norm(x);
    if (n > 0.0) x *= 1.0 / n;
  };
  normalise(v);
  ScalarField2D start = v;

  ConditioningReport report;
  report.iterations = iterations;
  double largest = 0.0;
  for (int it = 0; it < iterations; ++it) {
    ScalarField2D w = op.normal(v);
    largest = dot(v, w);  // Rayleigh quotient, v normalised
    normalise(w);
    v = std::move(w);
  }
  report.largest = largest;

  v = start;
  double shifted = 0.0;
  for (int it = 0; it < iterations; ++it) {
    ScalarField2D w = largest * v;
    w -= op.normal(v);
    shifted = dot(v, w);
    normalise(w);
    v = std::move(w);
  }
  report.smallest = largest - shifted;
  report.condition = report.smallest > 0.0 ? report.largest / report.smallest
                                           : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace ffdpat
