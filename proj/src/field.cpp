#include "ffdpat/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "ffdpat/detail/binary_io.hpp"
#include "ffdpat/error.hpp"

namespace ffdpat {

namespace {

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

void require_same_grid(const ScalarField2D& a, const ScalarField2D& b) {
  if (!a.grid().matches(b.grid())) {
    throw GridMismatchError("fields live on different grids");
  }
}

}  // namespace

GridSpec GridSpec::centered(std::size_t n, double half_width) {
  if (n < 2 || !(half_width > 0.0)) {
    throw InvalidArgument("centered grid needs n >= 2 and half_width > 0");
  }
  const double h = 2.0 * half_width / static_cast<double>(n - 1);
  return GridSpec{n, n, -half_width, -half_width, h, h};
}

double GridSpec::corner_radius() const {
  double r = 0.0;
  for (double cx : {x(0), x_max()}) {
    for (double cy : {y(0), y_max()}) {
      r = std::max(r, std::hypot(cx, cy));
    }
  }
  return r;
}

void GridSpec::validate() const {
  if (nx == 0 || ny == 0) {
    throw InvalidArgument("grid must have at least one sample per axis");
  }
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw InvalidArgument("grid spacings must be positive and finite");
  }
  if (!std::isfinite(origin_x) || !std::isfinite(origin_y)) {
    throw InvalidArgument("grid origin must be finite");
  }
}

bool GridSpec::matches(const GridSpec& other) const {
  constexpr double tol = 1e-12;
  const double scale = std::max(dx, dy);
  return nx == other.nx && ny == other.ny && close_rel(dx, other.dx, tol) &&
         close_rel(dy, other.dy, tol) && std::abs(origin_x - other.origin_x) <= tol * scale &&
         std::abs(origin_y - other.origin_y) <= tol * scale;
}

ScalarField2D::ScalarField2D(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  values_.assign(grid_.size(), 0.0);
}

ScalarField2D::ScalarField2D(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("value count " + std::to_string(values_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
  }
}

ScalarField2D& ScalarField2D::operator+=(const ScalarField2D& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ScalarField2D& ScalarField2D::operator-=(const ScalarField2D& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ScalarField2D& ScalarField2D::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void ScalarField2D::axpy(double a, const ScalarField2D& x) {
  require_same_grid(*this, x);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * x.values_[k];
}

bool ScalarField2D::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b) { return a += b; }
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b) { return a -= b; }
ScalarField2D operator*(double s, ScalarField2D a) { return a *= s; }

double dot(const ScalarField2D& a, const ScalarField2D& b) {
  require_same_grid(a, b);
  const auto av = a.values();
  const auto bv = b.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < av.size(); ++k) sum += av[k] * bv[k];
  return sum;
}

double inner(const ScalarField2D& a, const ScalarField2D& b) {
  return dot(a, b) * a.grid().cell_area();
}

double norm(const ScalarField2D& a) { return std::sqrt(dot(a, a)); }

double max_abs(const ScalarField2D& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double relative_l2_error(const ScalarField2D& estimate, const ScalarField2D& truth) {
  require_same_grid(estimate, truth);
  const double denom = norm(truth);
  const double num = norm(estimate - truth);
  if (denom == 0.0) {
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return num / denom;
}

std::pair<std::size_t, std::size_t> node_offset(const GridSpec& inner_grid,
                                                const GridSpec& outer) {
  inner_grid.validate();
  outer.validate();
  if (!close_rel(inner_grid.dx, outer.dx, 1e-12) || !close_rel(inner_grid.dy, outer.dy, 1e-12)) {
    throw GridMismatchError("grid spacings differ");
  }
  const double fi = (inner_grid.origin_x - outer.origin_x) / outer.dx;
  const double fj = (inner_grid.origin_y - outer.origin_y) / outer.dy;
  const double ri = std::round(fi);
  const double rj = std::round(fj);
  if (std::abs(fi - ri) > 1e-6 || std::abs(fj - rj) > 1e-6) {
    throw GridMismatchError("grid nodes are not aligned");
  }
  if (ri < 0.0 || rj < 0.0 ||
      static_cast<std::size_t>(ri) + inner_grid.nx > outer.nx ||
      static_cast<std::size_t>(rj) + inner_grid.ny > outer.ny) {
    throw GridMismatchError("grid extent does not fit inside the target grid");
  }
  return {static_cast<std::size_t>(ri), static_cast<std::size_t>(rj)};
}

ScalarField2D embed(const ScalarField2D& f, const GridSpec& target) {
  const auto [i0, j0] = node_offset(f.grid(), target);
  ScalarField2D out(target);
  for (std::size_t j = 0; j < f.ny(); ++j) {
    for (std::size_t i = 0; i < f.nx(); ++i) {
      out(i0 + i, j0 + j) = f(i, j);
    }
  }
  return out;
}

ScalarField2D restrict_to(const ScalarField2D& f, const GridSpec& target) {
  const auto [i0, j0] = node_offset(target, f.grid());
  ScalarField2D out(target);
  for (std::size_t j = 0; j < target.ny; ++j) {
    for (std::size_t i = 0; i < target.nx; ++i) {
      out(i, j) = f(i0 + i, j0 + j);
    }
  }
  return out;
}

double gradient_energy(const ScalarField2D& f) {
  const std::size_t nx = f.nx();
  const std::size_t ny = f.ny();
  double sum = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double gx = i + 1 < nx ? f(i + 1, j) - f(i, j) : 0.0;
      const double gy = j + 1 < ny ? f(i, j + 1) - f(i, j) : 0.0;
      sum += gx * gx + gy * gy;
    }
  }
  return 0.5 * sum * f.grid().cell_area();
}

ScalarField2D gradient_normal(const ScalarField2D& f) {
  const std::size_t nx = f.nx();
  const std::size_t ny = f.ny();
  ScalarField2D out(f.grid());
  // D^T g at node i collects g_{i-1} - g_i, with g vanishing past the edges.
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double gx = i + 1 < nx ? f(i + 1, j) - f(i, j) : 0.0;
      const double gx_prev = i > 0 ? f(i, j) - f(i - 1, j) : 0.0;
      const double gy = j + 1 < ny ? f(i, j + 1) - f(i, j) : 0.0;
      const double gy_prev = j > 0 ? f(i, j) - f(i, j - 1) : 0.0;
      out(i, j) = (gx_prev - gx) + (gy_prev - gy);
    }
  }
  return out;
}

void write_f2d(const std::filesystem::path& path, const ScalarField2D& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write("F2D1", 4);
  const GridSpec& g = f.grid();
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.nx));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.ny));
  detail::write_le(os, g.origin_x);
  detail::write_le(os, g.origin_y);
  detail::write_le(os, g.dx);
  detail::write_le(os, g.dy);
  for (double v : f.values()) detail::write_le(os, v);
  if (!os) throw IoError("write failed for " + path.string());
}

ScalarField2D read_f2d(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  detail::expect_magic(is, "F2D1");
  GridSpec g;
  g.nx = detail::read_le<std::uint32_t>(is);
  g.ny = detail::read_le<std::uint32_t>(is);
  g.origin_x = detail::read_le<double>(is);
  g.origin_y = detail::read_le<double>(is);
  g.dx = detail::read_le<double>(is);
  g.dy = detail::read_le<double>(is);
  try {
    g.validate();
  } catch (const InvalidArgument& e) {
    throw IoError(path.string() + ": corrupt header: " + e.what());
  }
  std::vector<double> values(g.size());
  for (double& v : values) v = detail::read_le<double>(is);
  ScalarField2D f(g, std::move(values));
  if (!f.all_finite()) throw IoError(path.string() + ": non-finite values");
  return f;
}

}  // namespace ffdpat
