#include "ffdpat/xray.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "ffdpat/detail/binary_io.hpp"
#include "ffdpat/detail/fft.hpp"
#include "ffdpat/error.hpp"

namespace ffdpat {

SinogramSpec SinogramSpec::uniform(std::size_t n_angles, std::size_t n_offsets, double offset_0,
                                   double d_offset) {
  SinogramSpec spec;
  spec.angles.resize(n_angles);
  for (std::size_t a = 0; a < n_angles; ++a) {
    spec.angles[a] = std::numbers::pi * static_cast<double>(a) / static_cast<double>(n_angles);
  }
  spec.n_offsets = n_offsets;
  spec.offset_0 = offset_0;
  spec.d_offset = d_offset;
  spec.validate();
  return spec;
}

SinogramSpec SinogramSpec::covering(std::size_t n_angles, double half_width, double d_offset) {
  if (!(half_width > 0.0) || !(d_offset > 0.0)) {
    throw InvalidArgument("detector half width and spacing must be positive");
  }
  const auto half_bins = static_cast<std::size_t>(std::ceil(half_width / d_offset - 1e-9));
  return uniform(n_angles, 2 * half_bins + 1, -static_cast<double>(half_bins) * d_offset,
                 d_offset);
}

std::vector<double> SinogramSpec::angle_weights() const {
  const std::size_t n = angles.size();
  std::vector<double> w(n);
  const double pi = std::numbers::pi;
  for (std::size_t a = 0; a < n; ++a) {
    const double next = a + 1 < n ? angles[a + 1] : angles[0] + pi;
    const double prev = a > 0 ? angles[a - 1] : angles[n - 1] - pi;
    // Half the gap on each side, doubled for the antipodal copy.
    w[a] = next - prev;
  }
  return w;
}

void SinogramSpec::validate() const {
  if (angles.empty() || n_offsets == 0) {
    throw InvalidArgument("sinogram needs at least one angle and one offset");
  }
  if (!(d_offset > 0.0) || !std::isfinite(d_offset) || !std::isfinite(offset_0)) {
    throw InvalidArgument("detector spacing must be positive and finite");
  }
  for (std::size_t a = 0; a < angles.size(); ++a) {
    if (!(angles[a] >= 0.0) || !(angles[a] < std::numbers::pi)) {
      throw InvalidArgument("angles must lie in [0, pi)");
    }
    if (a > 0 && !(angles[a] > angles[a - 1])) {
      throw InvalidArgument("angles must be strictly increasing");
    }
  }
}

bool SinogramSpec::matches(const SinogramSpec& other) const {
  if (n_offsets != other.n_offsets || angles.size() != other.angles.size()) return false;
  const double tol = 1e-12 * std::max(1.0, std::abs(d_offset));
  if (std::abs(offset_0 - other.offset_0) > tol || std::abs(d_offset - other.d_offset) > tol) {
    return false;
  }
  for (std::size_t a = 0; a < angles.size(); ++a) {
    if (std::abs(angles[a] - other.angles[a]) > 1e-12) return false;
  }
  return true;
}

Sinogram::Sinogram(SinogramSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  values_.assign(spec_.size(), 0.0);
}

Sinogram::Sinogram(SinogramSpec spec, std::vector<double> values)
    : spec_(std::move(spec)), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size()) {
    throw InvalidArgument("sinogram value count does not match its spec");
  }
}

namespace {

void require_same_spec(const Sinogram& a, const Sinogram& b) {
  if (!a.spec().matches(b.spec())) throw GridMismatchError("sinograms have different geometry");
}

}  // namespace

Sinogram& Sinogram::operator+=(const Sinogram& other) {
  require_same_spec(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Sinogram& Sinogram::operator-=(const Sinogram& other) {
  require_same_spec(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Sinogram& Sinogram::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void Sinogram::axpy(double a, const Sinogram& x) {
  require_same_spec(*this, x);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * x.values_[k];
}

Sinogram operator-(Sinogram a, const Sinogram& b) { return a -= b; }
Sinogram operator+(Sinogram a, const Sinogram& b) { return a += b; }
Sinogram operator*(double s, Sinogram a) { return a *= s; }

double sino_inner(const Sinogram& a, const Sinogram& b) {
  require_same_spec(a, b);
  const auto w = a.spec().angle_weights();
  double total = 0.0;
  for (std::size_t i = 0; i < a.n_angles(); ++i) {
    const auto ra = a.row(i);
    const auto rb = b.row(i);
    double row_sum = 0.0;
    for (std::size_t k = 0; k < ra.size(); ++k) row_sum += ra[k] * rb[k];
    total += w[i] * row_sum;
  }
  return total * a.spec().d_offset;
}

double sino_norm(const Sinogram& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

namespace {

/// Visits the bilinear stencil of every sample of one line. Shared by the
/// projector and its transpose so the two are adjoint by construction.
class RayWalker {
 public:
  explicit RayWalker(const GridSpec& g)
      : nx_(g.nx), ny_(g.ny), ox_(g.origin_x), oy_(g.origin_y), dx_(g.dx), dy_(g.dy),
        step_(0.5 * std::min(g.dx, g.dy)) {
    if (nx_ < 2 || ny_ < 2) throw InvalidArgument("projection grid needs >= 2 nodes per axis");
  }

  [[nodiscard]] double step() const { return step_; }

  /// visit(index_of_lower_left_node, w00, w10, w01, w11) for the samples of
  /// the line that lie inside the grid and within `radius` of the origin.
  template <typename Visit>
  void walk(double cos_t, double sin_t, double xi, double radius, Visit&& visit) const {
    if (std::abs(xi) > radius) return;
    const double x0 = xi * cos_t;
    const double y0 = xi * sin_t;
    const double half_chord = std::sqrt(radius * radius - xi * xi);
    double lo = -half_chord;
    double hi = half_chord;
    // x(s) = x0 - s sin, y(s) = y0 + s cos
    if (!clip(x0, -sin_t, ox_, ox_ + static_cast<double>(nx_ - 1) * dx_, lo, hi)) return;
    if (!clip(y0, cos_t, oy_, oy_ + static_cast<double>(ny_ - 1) * dy_, lo, hi)) return;
    const auto j_lo = static_cast<long long>(std::ceil(lo / step_));
    const auto j_hi = static_cast<long long>(std::floor(hi / step_));
    const double umax = static_cast<double>(nx_ - 1);
    const double vmax = static_cast<double>(ny_ - 1);
    const double u0 = (x0 - ox_) / dx_;
    const double v0 = (y0 - oy_) / dy_;
    const double du = -step_ * sin_t / dx_;
    const double dv = step_ * cos_t / dy_;
    for (long long j = j_lo; j <= j_hi; ++j) {
      const auto jd = static_cast<double>(j);
      double u = u0 + jd * du;
      double v = v0 + jd * dv;
      if (u < -1e-9 || v < -1e-9 || u > umax + 1e-9 || v > vmax + 1e-9) continue;
      u = std::clamp(u, 0.0, umax);
      v = std::clamp(v, 0.0, vmax);
      const std::size_t i0 = std::min(static_cast<std::size_t>(u), nx_ - 2);
      const std::size_t k0 = std::min(static_cast<std::size_t>(v), ny_ - 2);
      const double fx = u - static_cast<double>(i0);
      const double fy = v - static_cast<double>(k0);
      visit(k0 * nx_ + i0, (1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy);
    }
  }

  [[nodiscard]] std::size_t nx() const { return nx_; }

 private:
  static bool clip(double p0, double slope, double pmin, double pmax, double& lo, double& hi) {
    if (std::abs(slope) < 1e-14) return p0 >= pmin && p0 <= pmax;
    double a = (pmin - p0) / slope;
    double b = (pmax - p0) / slope;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    return lo <= hi;
  }

  std::size_t nx_, ny_;
  double ox_, oy_, dx_, dy_, step_;
};

void check_coverage(const SinogramSpec& spec, const GridSpec& grid,
                    std::optional<double> coverage_radius) {
  const double r = coverage_radius.value_or(grid.corner_radius());
  const double tol = 1e-9 * std::max(1.0, r);
  if (spec.offset_0 > -r + tol || spec.offset_max() < r - tol) {
    throw ClippingError("detector range [" + std::to_string(spec.offset_0) + ", " +
                        std::to_string(spec.offset_max()) +
                        "] does not cover the support radius " + std::to_string(r));
  }
}

}  // namespace

Sinogram radon(const ScalarField2D& f, const SinogramSpec& spec,
               std::optional<double> coverage_radius) {
  spec.validate();
  check_coverage(spec, f.grid(), coverage_radius);
  const RayWalker walker(f.grid());
  const double radius = coverage_radius.value_or(f.grid().corner_radius());
  const std::size_t nx = walker.nx();
  const double h = walker.step();
  const double* data = f.values().data();
  Sinogram out(spec);
  const auto n_angles = static_cast<long long>(spec.n_angles());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long a = 0; a < n_angles; ++a) {
    const double theta = spec.angles[static_cast<std::size_t>(a)];
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto row = out.row(static_cast<std::size_t>(a));
    for (std::size_t k = 0; k < spec.n_offsets; ++k) {
      double sum = 0.0;
      walker.walk(c, s, spec.offset(k), radius,
                  [&](std::size_t idx, double w00, double w10, double w01, double w11) {
                    sum += w00 * data[idx] + w10 * data[idx + 1] + w01 * data[idx + nx] +
                           w11 * data[idx + nx + 1];
                  });
      row[k] = h * sum;
    }
  }
  return out;
}

ScalarField2D backproject(const Sinogram& g, const GridSpec& grid,
                          std::optional<double> coverage_radius) {
  grid.validate();
  const SinogramSpec& spec = g.spec();
  check_coverage(spec, grid, coverage_radius);
  const RayWalker walker(grid);
  const double radius = coverage_radius.value_or(grid.corner_radius());
  const std::size_t nx = walker.nx();
  const auto weights = spec.angle_weights();
  const double scale = walker.step() * spec.d_offset / grid.cell_area();

  // Fixed angle chunks, reduced in order, keep the result independent of
  // the thread count.
  const std::size_t n_angles = spec.n_angles();
  const std::size_t n_chunks = std::min<std::size_t>(16, n_angles);
  std::vector<std::vector<double>> partial(n_chunks, std::vector<double>(grid.size(), 0.0));
#pragma omp parallel for schedule(static)
  for (long long ci = 0; ci < static_cast<long long>(n_chunks); ++ci) {
    const auto chunk = static_cast<std::size_t>(ci);
    double* acc = partial[chunk].data();
    const std::size_t a_begin = chunk * n_angles / n_chunks;
    const std::size_t a_end = (chunk + 1) * n_angles / n_chunks;
    for (std::size_t a = a_begin; a < a_end; ++a) {
      const double c = std::cos(spec.angles[a]);
      const double s = std::sin(spec.angles[a]);
      const auto row = g.row(a);
      for (std::size_t k = 0; k < spec.n_offsets; ++k) {
        const double coef = row[k] * weights[a] * scale;
        if (coef == 0.0) continue;
        walker.walk(c, s, spec.offset(k), radius,
                    [&](std::size_t idx, double w00, double w10, double w01, double w11) {
                      acc[idx] += coef * w00;
                      acc[idx + 1] += coef * w10;
                      acc[idx + nx] += coef * w01;
                      acc[idx + nx + 1] += coef * w11;
                    });
      }
    }
  }
  ScalarField2D out(grid);
  auto values = out.values();
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += p[k];
  }
  return out;
}

Sinogram ramp_filter(const Sinogram& g, bool apodize) {
  const SinogramSpec& spec = g.spec();
  const std::size_t n = spec.n_offsets;
  const std::size_t n_pad = std::bit_ceil(2 * n);
  const std::size_t half = n_pad / 2 + 1;
  std::vector<double> multiplier(half);
  const double pi = std::numbers::pi;
  for (std::size_t k = 0; k < half; ++k) {
    const double omega = 2.0 * pi * static_cast<double>(k) /
                         (static_cast<double>(n_pad) * spec.d_offset);
    double m = omega / (4.0 * pi);
    if (apodize) m *= std::cos(pi * static_cast<double>(k) / static_cast<double>(n_pad));
    multiplier[k] = m / static_cast<double>(n_pad);
  }
  const detail::Plan1D plan(n_pad);
  Sinogram out(spec);
  const auto n_angles = static_cast<long long>(spec.n_angles());
#pragma omp parallel
  {
    auto buf = detail::alloc_real(n_pad);
    auto spectrum = detail::alloc_complex(half);
#pragma omp for schedule(static)
    for (long long a = 0; a < n_angles; ++a) {
      const auto row = g.row(static_cast<std::size_t>(a));
      std::fill_n(buf.get(), n_pad, 0.0);
      std::copy(row.begin(), row.end(), buf.get());
      plan.r2c(buf.get(), spectrum.get());
      for (std::size_t k = 0; k < half; ++k) {
        spectrum[k][0] *= multiplier[k];
        spectrum[k][1] *= multiplier[k];
      }
      plan.c2r(spectrum.get(), buf.get());
      auto dst = out.row(static_cast<std::size_t>(a));
      std::copy_n(buf.get(), n, dst.begin());
    }
  }
  return out;
}

ScalarField2D fbp(const Sinogram& g, const GridSpec& grid, std::optional<double> coverage_radius,
                  bool apodize) {
  return backproject(ramp_filter(g, apodize), grid, coverage_radius);
}

void write_sno(const std::filesystem::path& path, const Sinogram& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  const SinogramSpec& s = g.spec();
  os.write("SNO1", 4);
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(s.n_angles()));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(s.n_offsets));
  detail::write_le(os, s.offset_0);
  detail::write_le(os, s.d_offset);
  for (double a : s.angles) detail::write_le(os, a);
  for (double v : g.values()) detail::write_le(os, v);
  if (!os) throw IoError("write failed for " + path.string());
}

Sinogram read_sno(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  detail::expect_magic(is, "SNO1");
  SinogramSpec s;
  const auto n_angles = detail::read_le<std::uint32_t>(is);
  s.n_offsets = detail::read_le<std::uint32_t>(is);
  s.offset_0 = detail::read_le<double>(is);
  s.d_offset = detail::read_le<double>(is);
  s.angles.resize(n_angles);
  for (double& a : s.angles) a = detail::read_le<double>(is);
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw IoError(path.string() + ": corrupt header: " + e.what());
  }
  std::vector<double> values(s.size());
  for (double& v : values) {
    v = detail::read_le<double>(is);
    if (!std::isfinite(v)) throw IoError(path.string() + ": non-finite values");
  }
  return Sinogram(std::move(s), std::move(values));
}

}  // namespace ffdpat
