#pragma once

#include <span>
#include <vector>

#include "ffdpat/field.hpp"
#include "ffdpat/xray.hpp"

namespace ffdpat {

/// Weights of the two translated copies; w_minus + w_plus must equal 1.
class SplitWeights {
 public:
  SplitWeights() = default;
  SplitWeights(double w_minus, double w_plus);
  [[nodiscard]] double minus() const { return w_minus_; }
  [[nodiscard]] double plus() const { return w_plus_; }

 private:
  double w_minus_ = 0.5;
  double w_plus_ = 0.5;
};

/// Linear interpolation of a uniformly sampled profile; zero outside it.
double sample_profile(std::span<const double> profile, double offset_0, double d_offset,
                      double xi);

/// 1/2 [Rh(xi - c0 t) + Rh(xi + c0 t)] for one uniformly sampled profile.
std::vector<double> split_predict(std::span<const double> profile, double offset_0,
                                  double d_offset, double c0, double t);
/// Row-wise split_predict.
Sinogram split_predict(const Sinogram& rh, double c0, double t);

/// Closed-form constant-speed inversion of final-time projection data G:
/// H(theta, xi) = 2 sum_sigma w_sigma G(theta, xi + sigma c0 t) on |xi| <= a
/// (zero elsewhere), followed by filtered backprojection onto `grid`.
/// Throws HypothesisError if c0 t < a and ClippingError if the detector does
/// not reach a + c0 t.
ScalarField2D closed_form_reconstruct(const Sinogram& g, double c0, double t, double a,
                                   const SplitWeights& w, const GridSpec& grid);

/// The intermediate H of closed_form_reconstruct (already multiplied by 2).
Sinogram closed_form_projections(const Sinogram& g, double c0, double t, double a,
                              const SplitWeights& w);

/// Chord lengths amplitude * 2 sqrt(r^2 - d^2) of the disc centred at
/// (cx, cy), d being the distance from the line to the centre.
Sinogram analytic_disc_sinogram(double cx, double cy, double radius, const SinogramSpec& spec,
                                double amplitude = 1.0);

}  // namespace ffdpat
