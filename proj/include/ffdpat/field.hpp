#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace ffdpat {

/// Node-centred uniform grid. Sample (i, j) sits at
/// (origin_x + i*dx, origin_y + j*dy); storage is row-major with y outer.
struct GridSpec {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double dx = 1.0;
  double dy = 1.0;

  /// n x n nodes spanning [-half_width, half_width] in both directions.
  static GridSpec centered(std::size_t n, double half_width);

  [[nodiscard]] std::size_t size() const { return nx * ny; }
  [[nodiscard]] double x(std::size_t i) const { return origin_x + static_cast<double>(i) * dx; }
  [[nodiscard]] double y(std::size_t j) const { return origin_y + static_cast<double>(j) * dy; }
  [[nodiscard]] double x_max() const { return x(nx - 1); }
  [[nodiscard]] double y_max() const { return y(ny - 1); }
  [[nodiscard]] double cell_area() const { return dx * dy; }
  /// Largest distance from the physical origin to any corner node.
  [[nodiscard]] double corner_radius() const;

  /// Throws InvalidArgument unless nx, ny >= 1 and dx, dy > 0 (finite).
  void validate() const;

  /// Same sample counts; origins and spacings equal to 1e-12 relative.
  [[nodiscard]] bool matches(const GridSpec& other) const;
};

class ScalarField2D {
 public:
  ScalarField2D() = default;
  explicit ScalarField2D(const GridSpec& grid);
  ScalarField2D(const GridSpec& grid, std::vector<double> values);

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] std::size_t nx() const { return grid_.nx; }
  [[nodiscard]] std::size_t ny() const { return grid_.ny; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return values_[j * grid_.nx + i]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[j * grid_.nx + i]; }

  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  ScalarField2D& operator+=(const ScalarField2D& other);
  ScalarField2D& operator-=(const ScalarField2D& other);
  ScalarField2D& operator*=(double s);
  /// this += a * x
  void axpy(double a, const ScalarField2D& x);

  [[nodiscard]] bool all_finite() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator*(double s, ScalarField2D a);

/// Unweighted sum of products.
double dot(const ScalarField2D& a, const ScalarField2D& b);
/// L2 inner product with cell-area weights.
double inner(const ScalarField2D& a, const ScalarField2D& b);
double norm(const ScalarField2D& a);
double max_abs(const ScalarField2D& a);
/// ||estimate - truth|| / ||truth||; 0 when both vanish.
double relative_l2_error(const ScalarField2D& estimate, const ScalarField2D& truth);

/// Zero-pads f into target. The grids must share spacing and f's nodes must
/// be a subset of target's nodes.
ScalarField2D embed(const ScalarField2D& f, const GridSpec& target);

/// Samples f on target, the exact adjoint of embed.
ScalarField2D restrict_to(const ScalarField2D& f, const GridSpec& target);

/// Node offset (i0, j0) of `inner` inside `outer`; throws GridMismatchError.
std::pair<std::size_t, std::size_t> node_offset(const GridSpec& inner, const GridSpec& outer);

/// R(f) = 1/2 sum |D f|^2 dx dy with D the forward difference between
/// neighbouring nodes (index units) and zero flux across the high edges.
double gradient_energy(const ScalarField2D& f);

/// D^T D f, i.e. minus the Neumann 5-point Laplacian in index units.
ScalarField2D gradient_normal(const ScalarField2D& f);

/// F2D1 binary format (little-endian, row-major, y outer).
void write_f2d(const std::filesystem::path& path, const ScalarField2D& f);
ScalarField2D read_f2d(const std::filesystem::path& path);

}  // namespace ffdpat
