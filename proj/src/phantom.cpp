#include "ffdpat/phantom.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ffdpat/error.hpp"

namespace ffdpat {

std::string_view to_string(PhantomKind k) {
  switch (k) {
    case PhantomKind::discs: return "discs";
    case PhantomKind::smooth_bumps: return "smooth_bumps";
    case PhantomKind::vessel_like: return "vessel_like";
  }
  return "unknown";
}

PhantomKind parse_phantom_kind(std::string_view name) {
  for (auto k : {PhantomKind::discs, PhantomKind::smooth_bumps, PhantomKind::vessel_like}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidArgument("unknown phantom kind '" + std::string(name) + "'");
}

double effective_radius(PhantomKind kind, const PhantomComponent& c) {
  const double centre = std::hypot(c.cx, c.cy);
  const double blur = kBlurCutoff * c.sigma;
  switch (kind) {
    case PhantomKind::discs: return centre + c.size + blur;
    case PhantomKind::smooth_bumps: return centre + c.size;
    case PhantomKind::vessel_like: return centre + std::hypot(c.size + blur, c.half_width + blur);
  }
  return centre;
}

void PhantomSpec::validate() const {
  grid.validate();
  if (!(support_radius > 0.0)) throw InvalidArgument("phantom support radius must be positive");
  for (std::size_t n = 0; n < components.size(); ++n) {
    const auto& c = components[n];
    const std::string tag = "phantom component " + std::to_string(n);
    if (!std::isfinite(c.cx) || !std::isfinite(c.cy) || !std::isfinite(c.amplitude) ||
        !std::isfinite(c.angle)) {
      throw InvalidArgument(tag + " has non-finite parameters");
    }
    if (!(c.size > 0.0)) throw InvalidArgument(tag + ": size must be positive");
    if (!(c.sigma >= 0.0)) throw InvalidArgument(tag + ": sigma must be non-negative");
    if (kind == PhantomKind::vessel_like && !(c.half_width > 0.0)) {
      throw InvalidArgument(tag + ": half_width must be positive");
    }
    const double r = effective_radius(kind, c);
    if (r > support_radius * (1.0 + 1e-12)) {
      throw InvalidArgument(tag + " reaches radius " + std::to_string(r) +
                            ", outside the support disc of radius " +
                            std::to_string(support_radius));
    }
  }
}

namespace {

/// Indicator of [-half, half] convolved with a Gaussian of width sigma.
double blurred_box(double t, double half, double sigma) {
  t = std::abs(t);
  if (sigma == 0.0) return t <= half ? 1.0 : 0.0;
  if (t > half + kBlurCutoff * sigma) return 0.0;
  const double s = std::numbers::sqrt2 * sigma;
  return 0.5 * (std::erf((half - t) / s) + std::erf((half + t) / s));
}

/// Radial profile of a blurred disc. The even form in r keeps it smooth at the
/// centre even when the radius is comparable to sigma.
double blurred_disc(double r, double radius, double sigma) { return blurred_box(r, radius, sigma); }

double component_value(PhantomKind kind, const PhantomComponent& c, double x, double y) {
  const double ux = x - c.cx;
  const double uy = y - c.cy;
  switch (kind) {
    case PhantomKind::discs: return c.amplitude * blurred_disc(std::hypot(ux, uy), c.size, c.sigma);
    case PhantomKind::smooth_bumps: {
      const double q = 1.0 - (ux * ux + uy * uy) / (c.size * c.size);
      return q > 0.0 ? c.amplitude * q * q * q * q : 0.0;
    }
    case PhantomKind::vessel_like: {
      const double ca = std::cos(c.angle);
      const double sa = std::sin(c.angle);
      const double along = ca * ux + sa * uy;
      const double across = -sa * ux + ca * uy;
      return c.amplitude * blurred_box(along, c.size, c.sigma) *
             blurred_box(across, c.half_width, c.sigma);
    }
  }
  return 0.0;
}

}  // namespace

ScalarField2D render_phantom(const PhantomSpec& spec) {
  spec.validate();
  ScalarField2D f(spec.grid);
  const auto& g = spec.grid;
  for (const auto& c : spec.components) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      for (std::size_t i = 0; i < g.nx; ++i) {
        f(i, j) += component_value(spec.kind, c, g.x(i), g.y(j));
      }
    }
  }
  return f;
}

double max_outside(const ScalarField2D& f, double radius) {
  const auto& g = f.grid();
  double m = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      if (std::hypot(g.x(i), g.y(j)) > radius) m = std::max(m, std::abs(f(i, j)));
    }
  }
  return m;
}

std::vector<PhantomComponent> lookalike_components() {
  // cx, cy, radius, amplitude, sigma
  return {
      {0.00, 0.00, 0.35, 0.6, 0.04},
      {-0.22, 0.20, 0.12, 0.8, 0.04},
      {0.22, 0.18, 0.10, 1.0, 0.04},
      {0.08, -0.25, 0.12, 0.7, 0.04},
      {-0.50, -0.20, 0.07, 1.0, 0.04},
      {0.50, -0.25, 0.06, 1.0, 0.04},
  };
}

std::string_view to_string(SoundSpeedKind k) {
  switch (k) {
    case SoundSpeedKind::constant: return "constant";
    case SoundSpeedKind::trapping_radial: return "trapping_radial";
  }
  return "unknown";
}

SoundSpeedKind parse_sound_speed_kind(std::string_view name) {
  for (auto k : {SoundSpeedKind::constant, SoundSpeedKind::trapping_radial}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidArgument("unknown sound speed kind '" + std::string(name) + "'");
}

void SoundSpeedSpec::validate() const {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw InvalidArgument("c0 must be positive");
  if (kind == SoundSpeedKind::constant) return;
  if (!(amplitude >= 0.0)) throw InvalidArgument("ring amplitude must be non-negative");
  if (!(amplitude < 1.0)) {
    throw InvalidArgument("ring amplitude must be below 1 (the speed would be non-positive)");
  }
  if (!(ring_radius >= 0.0) || !std::isfinite(ring_radius)) {
    throw InvalidArgument("ring radius must be non-negative");
  }
  if (!(ring_width > 0.0) || !std::isfinite(ring_width)) {
    throw InvalidArgument("ring width must be positive");
  }
}

double SoundSpeedSpec::support_radius() const {
  if (kind == SoundSpeedKind::constant) return 0.0;
  return ring_radius + kRingCutoff * ring_width;
}

SoundSpeedMap render_sound_speed(const SoundSpeedSpec& spec, const GridSpec& grid) {
  spec.validate();
  grid.validate();
  if (spec.kind == SoundSpeedKind::constant) return SoundSpeedMap::constant(grid, spec.c0);
  ScalarField2D c(grid);
  const double cut = spec.support_radius();
  const double w2 = 2.0 * spec.ring_width * spec.ring_width;
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double r = std::hypot(grid.x(i), grid.y(j));
      if (r > cut) {
        c(i, j) = spec.c0;
      } else {
        const double d = r - spec.ring_radius;
        c(i, j) = spec.c0 * (1.0 - spec.amplitude * std::exp(-d * d / w2));
      }
    }
  }
  return {std::move(c), spec.c0, cut};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double gaussian_deviate(std::uint64_t seed, std::uint64_t n) {
  constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
  constexpr double unit = 0x1.0p-53;
  const std::uint64_t a = splitmix64(seed + (2 * n + 1) * golden);
  const std::uint64_t b = splitmix64(seed + (2 * n + 2) * golden);
  const double u = static_cast<double>((a >> 11) + 1) * unit;
  const double v = static_cast<double>((b >> 11) + 1) * unit;
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

NoisyData add_noise(const Sinogram& g, double std_fraction, std::uint64_t seed) {
  if (!(std_fraction >= 0.0) || !std::isfinite(std_fraction)) {
    throw InvalidArgument("noise fraction must be non-negative");
  }
  NoisyData out{g, 0.0, 0.0};
  if (std_fraction == 0.0 || g.values().empty()) return out;
  double sum = 0.0;
  for (double v : g.values()) sum += v;
  const double mean = sum / static_cast<double>(g.values().size());
  out.sigma = std_fraction * std::abs(mean);
  double noise2 = 0.0;
  auto values = out.noisy.values();
  for (std::size_t n = 0; n < values.size(); ++n) {
    const double e = out.sigma * gaussian_deviate(seed, n);
    values[n] += e;
    noise2 += e * e;
  }
  const double gn = sino_norm(g);
  out.achieved_rel_error = gn > 0.0 ? std::sqrt(noise2) / gn : 0.0;
  return out;
}

}  // namespace ffdpat
