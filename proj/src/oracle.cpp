#include "ffdpat/oracle.hpp"

#include <cmath>
#include <limits>

#include "ffdpat/error.hpp"

namespace ffdpat {

SplitWeights::SplitWeights(double w_minus, double w_plus) : w_minus_(w_minus), w_plus_(w_plus) {
  if (!std::isfinite(w_minus) || !std::isfinite(w_plus) ||
      std::abs(w_minus + w_plus - 1.0) > 2.0 * std::numeric_limits<double>::epsilon()) {
    throw InvalidArgument("split weights must sum to 1");
  }
}

double sample_profile(std::span<const double> profile, double offset_0, double d_offset,
                      double xi) {
  const double u = (xi - offset_0) / d_offset;
  const double last = static_cast<double>(profile.size()) - 1.0;
  if (!(u >= 0.0) || u > last) return 0.0;
  const double fl = std::floor(u);
  const auto k = static_cast<std::size_t>(fl);
  if (k + 1 >= profile.size()) return profile[k];
  const double t = u - fl;
  return (1.0 - t) * profile[k] + t * profile[k + 1];
}

std::vector<double> split_predict(std::span<const double> profile, double offset_0,
                                  double d_offset, double c0, double t) {
  std::vector<double> out(profile.begin(), profile.end());
  const double shift = c0 * t;
  if (shift == 0.0) return out;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double xi = offset_0 + static_cast<double>(k) * d_offset;
    out[k] = 0.5 * (sample_profile(profile, offset_0, d_offset, xi - shift) +
                    sample_profile(profile, offset_0, d_offset, xi + shift));
  }
  return out;
}

Sinogram split_predict(const Sinogram& rh, double c0, double t) {
  Sinogram out(rh.spec());
  const auto& spec = rh.spec();
#pragma omp parallel for schedule(static)
  for (std::size_t a = 0; a < rh.n_angles(); ++a) {
    const auto row = split_predict(rh.row(a), spec.offset_0, spec.d_offset, c0, t);
    std::copy(row.begin(), row.end(), out.row(a).begin());
  }
  return out;
}

Sinogram closed_form_projections(const Sinogram& g, double c0, double t, double a,
                              const SplitWeights& w) {
  if (!(a > 0.0) || !(c0 > 0.0) || !(t > 0.0)) {
    throw InvalidArgument("support radius, speed and time must be positive");
  }
  const double shift = c0 * t;
  if (shift < a) {
    throw HypothesisError("c0 * T = " + std::to_string(shift) +
                          " is below the support radius; the translated copies overlap");
  }
  const auto& spec = g.spec();
  const double reach = a + shift;
  const double tol = 1e-9 * reach;
  if (spec.offset_0 > -reach + tol || spec.offset_max() < reach - tol) {
    throw ClippingError("detector does not reach a + c0 T");
  }
  Sinogram h(spec);
#pragma omp parallel for schedule(static)
  for (std::size_t ia = 0; ia < g.n_angles(); ++ia) {
    const auto row = g.row(ia);
    for (std::size_t k = 0; k < spec.n_offsets; ++k) {
      const double xi = spec.offset(k);
      if (std::abs(xi) > a) continue;
      h(ia, k) = 2.0 * (w.minus() * sample_profile(row, spec.offset_0, spec.d_offset, xi - shift) +
                        w.plus() * sample_profile(row, spec.offset_0, spec.d_offset, xi + shift));
    }
  }
  return h;
}

ScalarField2D closed_form_reconstruct(const Sinogram& g, double c0, double t, double a,
                                   const SplitWeights& w, const GridSpec& grid) {
  return fbp(closed_form_projections(g, c0, t, a, w), grid);
}

Sinogram analytic_disc_sinogram(double cx, double cy, double radius, const SinogramSpec& spec,
                                double amplitude) {
  if (!(radius > 0.0)) throw InvalidArgument("disc radius must be positive");
  spec.validate();
  Sinogram out(spec);
  for (std::size_t a = 0; a < spec.n_angles(); ++a) {
    const double proj = cx * std::cos(spec.angles[a]) + cy * std::sin(spec.angles[a]);
    for (std::size_t k = 0; k < spec.n_offsets; ++k) {
      const double d = spec.offset(k) - proj;
      const double q = radius * radius - d * d;
      if (q > 0.0) out(a, k) = amplitude * 2.0 * std::sqrt(q);
    }
  }
  return out;
}

}  // namespace ffdpat
