#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ffdpat/error.hpp"
#include "ffdpat/oracle.hpp"
#include "ffdpat/phantom.hpp"
#include "ffdpat/selftest.hpp"
#include "ffdpat/xray.hpp"
#include "helpers.hpp"

using namespace ffdpat;

namespace {

const GridSpec kGrid = GridSpec::centered(201, 1.0);

ScalarField2D bump_on(const GridSpec& g, double cx, double cy, double r) {
  return render_phantom({PhantomKind::smooth_bumps, {{cx, cy, r, 1.0}}, g, 1.0});
}

double row_rel_error(const Sinogram& a, const Sinogram& b, std::size_t row) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < a.n_offsets(); ++k) {
    num += (a(row, k) - b(row, k)) * (a(row, k) - b(row, k));
    den += b(row, k) * b(row, k);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("sinogram spec") {
  const auto spec = SinogramSpec::covering(10, 3.0, 0.01);
  CHECK(spec.n_offsets == 601);
  CHECK(spec.offset_0 == doctest::Approx(-3.0));
  CHECK(spec.offset_max() == doctest::Approx(3.0));
  double sum = 0.0;
  for (double w : spec.angle_weights()) sum += w;
  CHECK(sum == doctest::Approx(2.0 * std::numbers::pi));
  SinogramSpec bad = spec;
  bad.angles[3] = bad.angles[2];
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = spec;
  bad.angles.back() = std::numbers::pi;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("radon of zero is zero") {
  const auto spec = SinogramSpec::covering(8, 1.5, 0.01);
  CHECK(sino_norm(radon(ScalarField2D(kGrid), spec)) == 0.0);
}

double worst_disc_error(const GridSpec& g, double r) {
  const auto spec = SinogramSpec::covering(24, 1.5, g.dx);
  const Sinogram measured =
      radon(render_phantom({PhantomKind::discs, {{0.0, 0.0, r, 1.0, 0.0}}, g, 1.0}), spec);
  const Sinogram exact = analytic_disc_sinogram(0.0, 0.0, r, spec);
  double worst = 0.0;
  for (std::size_t a = 0; a < spec.n_angles(); ++a) {
    worst = std::max(worst, row_rel_error(measured, exact, a));
  }
  return worst;
}

TEST_CASE("radon of a disc indicator matches chord lengths") {
  CHECK(worst_disc_error(kGrid, 0.8) <= 0.01);
  // the staircase error is first order in dx / r
  const double coarse = worst_disc_error(kGrid, 0.5);
  const double fine = worst_disc_error(GridSpec::centered(401, 1.0), 0.5);
  CHECK(fine <= 0.6 * coarse);
  CHECK(fine <= 0.01);
}

TEST_CASE("radon conserves mass per angle") {
  const auto spec = SinogramSpec::covering(36, 1.5, 0.01);
  const ScalarField2D f = bump_on(kGrid, 0.2, -0.1, 0.6);
  double mass = 0.0;
  for (double v : f.values()) mass += v;
  mass *= kGrid.cell_area();
  const Sinogram g = radon(f, spec);
  for (std::size_t a = 0; a < spec.n_angles(); ++a) {
    double m = 0.0;
    for (double v : g.row(a)) m += v;
    CHECK(std::abs(m * spec.d_offset - mass) <= 5e-3 * mass);
  }
}

TEST_CASE("radon rejects a detector that clips the support") {
  const auto narrow = SinogramSpec::covering(8, 1.0, 0.01);
  CHECK_THROWS_AS(radon(ScalarField2D(kGrid), narrow), ClippingError);
  CHECK_NOTHROW(radon(ScalarField2D(kGrid), narrow, 1.0));
  CHECK_THROWS_AS(backproject(Sinogram(narrow), kGrid), ClippingError);
}

TEST_CASE("backprojection is the exact transpose") {
  const GridSpec g{40, 33, -1.0, -0.8, 0.05, 0.05};
  const auto spec = SinogramSpec::covering(30, 1.4, 0.04);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    worst = std::max(worst, radon_dot_test(g, spec, seed));
  }
  CHECK(worst <= 1e-12);
  CHECK(max_abs(backproject(Sinogram(spec), g, 1.4)) == 0.0);

  Sinogram ones(spec);
  for (double& v : ones.values()) v = 1.0;
  const ScalarField2D b = backproject(ones, g, 1.4);
  for (std::size_t j = 1; j + 1 < g.ny; ++j) {
    for (std::size_t i = 1; i + 1 < g.nx; ++i) CHECK(b(i, j) > 0.0);
  }
}

TEST_CASE("ramp filter") {
  SUBCASE("zero") {
    CHECK(sino_norm(ramp_filter(Sinogram(SinogramSpec::covering(4, 1.0, 0.01)))) == 0.0);
  }
  SUBCASE("sinusoid is an eigenfunction away from the edges") {
    const auto spec = SinogramSpec::uniform(2, 1024, 0.0, 0.01);
    const double w0 = 2.0 * std::numbers::pi * 16.0 / (1024 * 0.01);
    Sinogram g(spec);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t k = 0; k < spec.n_offsets; ++k) g(a, k) = std::cos(w0 * spec.offset(k));
    }
    const Sinogram f = ramp_filter(g);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 256; k < 768; ++k) {
      const double expect = w0 / (4.0 * std::numbers::pi) * g(0, k);
      num += (f(0, k) - expect) * (f(0, k) - expect);
      den += expect * expect;
    }
    CHECK(std::sqrt(num / den) <= 0.01);
  }
  SUBCASE("self-adjoint and positive semidefinite") {
    const auto spec = SinogramSpec::covering(12, 1.0, 0.02);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Sinogram a = random_sinogram(spec, seed);
      const Sinogram b = random_sinogram(spec, seed + 100);
      const double ab = sino_inner(ramp_filter(a), b);
      const double ba = sino_inner(a, ramp_filter(b));
      CHECK(std::abs(ab - ba) <= 1e-10 * std::sqrt(sino_inner(a, a) * sino_inner(b, b)));
      CHECK(sino_inner(ramp_filter(a), a) >= 0.0);
    }
  }
  SUBCASE("apodized filter is damped") {
    const auto spec = SinogramSpec::covering(3, 1.0, 0.02);
    const Sinogram a = random_sinogram(spec, 3);
    CHECK(sino_inner(ramp_filter(a, true), a) < sino_inner(ramp_filter(a), a));
  }
}

TEST_CASE("filtered backprojection") {
  const ScalarField2D bump = bump_on(kGrid, 0.1, -0.2, 0.6);
  const auto spec = SinogramSpec::covering(400, 1.45, 0.01);
  const double fine = relative_l2_error(fbp(radon(bump, spec), kGrid), bump);
  CHECK(fine <= 0.03);

  const GridSpec coarse_grid = GridSpec::centered(101, 1.0);
  const ScalarField2D coarse_bump = bump_on(coarse_grid, 0.1, -0.2, 0.6);
  const auto coarse_spec = SinogramSpec::covering(200, 1.45, 0.02);
  const double coarse =
      relative_l2_error(fbp(radon(coarse_bump, coarse_spec), coarse_grid), coarse_bump);
  CHECK(fine < coarse);

  CHECK(max_abs(fbp(Sinogram(spec), kGrid)) == 0.0);
  const Sinogram a = random_sinogram(coarse_spec, 1);
  const Sinogram b = random_sinogram(coarse_spec, 2);
  CHECK(relative_l2_error(fbp(a + 3.0 * b, coarse_grid),
                          fbp(a, coarse_grid) + 3.0 * fbp(b, coarse_grid)) <= 1e-12);
}

TEST_CASE("symmetries of the projections") {
  const auto spec = SinogramSpec::covering(60, 1.45, 0.01);
  SUBCASE("radially symmetric phantom gives the same profile at every angle") {
    const Sinogram g = radon(bump_on(kGrid, 0.0, 0.0, 0.7), spec);
    double peak = 0.0;
    for (double v : g.values()) peak = std::max(peak, std::abs(v));
    double dev = 0.0;
    for (std::size_t a = 1; a < spec.n_angles(); ++a) {
      for (std::size_t k = 0; k < spec.n_offsets; ++k) {
        dev = std::max(dev, std::abs(g(a, k) - g(0, k)));
      }
    }
    CHECK(dev <= 0.01 * peak);
  }
  SUBCASE("point-reflection symmetry gives even profiles") {
    ScalarField2D f = bump_on(kGrid, 0.3, 0.2, 0.4);
    f += bump_on(kGrid, -0.3, -0.2, 0.4);
    const Sinogram g = radon(f, spec);
    double peak = 0.0;
    double dev = 0.0;
    const std::size_t n = spec.n_offsets;
    for (std::size_t a = 0; a < spec.n_angles(); ++a) {
      for (std::size_t k = 0; k < n; ++k) {
        peak = std::max(peak, std::abs(g(a, k)));
        dev = std::max(dev, std::abs(g(a, k) - g(a, n - 1 - k)));
      }
    }
    CHECK(dev <= 1e-3 * peak);
  }
}

TEST_CASE("SNO1 round trip is bit exact") {
  testing::TempDir dir("sno");
  const auto spec = SinogramSpec::covering(7, 0.5, 0.1);
  const Sinogram g = random_sinogram(spec, 9);
  write_sno(dir.path / "g.sno", g);
  const Sinogram r = read_sno(dir.path / "g.sno");
  CHECK(r.spec().angles == spec.angles);
  CHECK(r.spec().offset_0 == spec.offset_0);
  CHECK(std::equal(r.values().begin(), r.values().end(), g.values().begin()));
  std::filesystem::resize_file(dir.path / "g.sno", 40);
  CHECK_THROWS_AS(read_sno(dir.path / "g.sno"), IoError);
}
