#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ffdpat/field.hpp"

namespace ffdpat {

/// Sound speed c(r) on the solver grid. Outside `interior_radius` the map
/// must equal `background` (the constant far-field speed c0).
class SoundSpeedMap {
 public:
  SoundSpeedMap(ScalarField2D speed, double background, double interior_radius);
  static SoundSpeedMap constant(const GridSpec& grid, double c0);

  [[nodiscard]] const ScalarField2D& field() const { return speed_; }
  [[nodiscard]] const GridSpec& grid() const { return speed_.grid(); }
  [[nodiscard]] double background() const { return background_; }
  [[nodiscard]] double interior_radius() const { return interior_radius_; }
  [[nodiscard]] double max_speed() const;
  [[nodiscard]] double min_speed() const;
  [[nodiscard]] double mean_speed() const;

 private:
  ScalarField2D speed_;
  double background_;
  double interior_radius_;
};

struct WaveConfig {
  double dt = 0.0;
  double t_final = 0.0;
  /// Reference speed of the k-space sinc correction.
  double c0_ref = 0.0;
  GridSpec solver_grid;
  /// Support region V of the initial pressure.
  GridSpec source_grid;
  double cfl = 0.3;

  /// dt = cfl * min(dx, dy) / max(c), shrunk so t_final / dt is an integer;
  /// c0_ref = spatial mean of c over the solver grid.
  static WaveConfig with_defaults(const GridSpec& solver_grid, const GridSpec& source_grid,
                                  double t_final, const SoundSpeedMap& c, double cfl = 0.3);

  [[nodiscard]] std::size_t steps() const;
};

/// Pressure at two consecutive time levels, p^n and p^{n-1}.
struct WaveState {
  ScalarField2D now;
  ScalarField2D prev;
};

/// Initial-to-final-time operator of the variable-speed wave equation
///
///   (d_t^2 - c^2 Lap) p = 0,   (p, d_t p)|_{t=0} = (h, 0),
///
/// discretised with the second-order k-space scheme
///
///   p^{n+1} = 2 p^n - p^{n-1} + c^2 dt^2 L p^n,
///   L = F^-1 [ -|k|^2 sinc^2(c0_ref |k| dt / 2) ] F,
///
/// which is exact in time when c == c0_ref. The spectral Laplacian acts on a
/// periodic grid that extends the solver grid with zeros up to an FFT-friendly
/// size; the state never reaches that padding for the intended geometries.
///
/// adjoint() is the exact transpose of forward() under the grid inner
/// product: the backward recursion of the same scheme in the variable
/// c^2 q (so the dot test holds to round-off, for any c).
///
/// Instances are immutable and may be shared between threads.
class WaveOperator {
 public:
  WaveOperator(SoundSpeedMap c, WaveConfig cfg);

  [[nodiscard]] const WaveConfig& config() const;
  [[nodiscard]] const SoundSpeedMap& sound_speed() const;

  /// W_T h: source grid -> solver grid.
  [[nodiscard]] ScalarField2D forward(const ScalarField2D& h) const;
  /// W_T^* g: solver grid -> source grid.
  [[nodiscard]] ScalarField2D adjoint(const ScalarField2D& g) const;

  /// Runs n_steps >= 1 steps from (h, 0) and returns (p^n, p^{n-1}) on the
  /// solver grid. h may live on the source or the solver grid.
  [[nodiscard]] WaveState propagate(const ScalarField2D& h, std::size_t n_steps) const;

  /// Inverts `propagate`: steps the same recursion backwards from
  /// (p^n, p^{n-1}) to p^0. Result on the solver grid.
  [[nodiscard]] ScalarField2D reverse(const WaveState& state, std::size_t n_steps) const;

  /// Discrete acoustic energy between two consecutive snapshots,
  ///   1/2 [ ||(p_now - p_prev)/dt||^2_{1/c^2} + <grad_k p_now, grad_k p_prev> ] dx dy,
  /// the quantity the leapfrog recursion conserves exactly.
  [[nodiscard]] double energy(const ScalarField2D& p_now, const ScalarField2D& p_prev) const;

  /// Energy after each of n_steps steps starting from (h, 0).
  [[nodiscard]] std::vector<double> energy_history(const ScalarField2D& h,
                                                   std::size_t n_steps) const;

  /// Side length of the internal periodic FFT grid (x, y).
  [[nodiscard]] std::pair<std::size_t, std::size_t> fft_shape() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// max |p| within `cells` nodes of the grid edge, divided by max |p|.
double boundary_strip_ratio(const ScalarField2D& p, std::size_t cells = 2);

}  // namespace ffdpat
