#include <doctest.h>

#include <cmath>

#include "ffdpat/error.hpp"
#include "ffdpat/experiment.hpp"
#include "ffdpat/selftest.hpp"
#include "ffdpat/wave.hpp"
#include "helpers.hpp"

using namespace ffdpat;

TEST_CASE("sound speed map checks") {
  const testing::Small s;
  CHECK_THROWS_AS(SoundSpeedMap::constant(s.solver, 0.0), InvalidArgument);
  ScalarField2D c(s.solver);
  for (double& v : c.values()) v = 1.0;
  c(0, 0) = 1.1;
  CHECK_THROWS_AS(SoundSpeedMap(c, 1.0, 0.5), InvalidArgument);
  c(0, 0) = -1.0;
  CHECK_THROWS_AS(SoundSpeedMap(c, 1.0, 10.0), InvalidArgument);
  const SoundSpeedMap ring = s.ring();
  CHECK(ring.max_speed() == doctest::Approx(1.0));
  CHECK(ring.min_speed() < 0.75);
}

TEST_CASE("wave config defaults and validation") {
  const testing::Small s;
  const auto c = s.flat(1.5);
  const WaveConfig cfg = WaveConfig::with_defaults(s.solver, s.source, s.t_final, c);
  CHECK(cfg.dt <= 0.3 * 0.05 / 1.5 + 1e-15);
  CHECK(std::abs(static_cast<double>(cfg.steps()) * cfg.dt - s.t_final) <= 1e-9 * s.t_final);
  CHECK(cfg.c0_ref == doctest::Approx(1.5));

  WaveConfig bad = cfg;
  bad.dt = 2.0 * cfg.dt;
  bad.t_final = 2.0 * s.t_final;
  CHECK_THROWS_AS(WaveOperator(c, bad), CflError);
  bad = cfg;
  bad.t_final = s.t_final + 0.3 * cfg.dt;
  CHECK_THROWS_AS(WaveOperator(c, bad), InvalidArgument);
  bad = cfg;
  bad.source_grid = GridSpec::centered(20, 0.5);
  CHECK_THROWS_AS(WaveOperator(c, bad), GridMismatchError);
  CHECK_THROWS_AS(WaveOperator(SoundSpeedMap::constant(s.source, 1.0), cfg), GridMismatchError);
}

TEST_CASE("forward and adjoint basics") {
  const testing::Small s;
  const WaveOperator w = s.wave(s.ring());
  CHECK(max_abs(w.forward(ScalarField2D(s.source))) == 0.0);
  CHECK(max_abs(w.adjoint(ScalarField2D(s.solver))) == 0.0);
  const ScalarField2D h = random_field(s.source, 1);
  const ScalarField2D g = random_field(s.solver, 2);
  CHECK(relative_l2_error(w.forward(2.0 * h), 2.0 * w.forward(h)) <= 1e-12);
  const ScalarField2D h2 = random_field(s.source, 3);
  CHECK(relative_l2_error(w.forward(h + h2), w.forward(h) + w.forward(h2)) <= 1e-12);
  const ScalarField2D g2 = random_field(s.solver, 4);
  CHECK(relative_l2_error(w.adjoint(g + (-0.5) * g2), w.adjoint(g) + (-0.5) * w.adjoint(g2)) <=
        1e-12);
}

TEST_CASE("adjoint dot test, 20 pairs per speed") {
  const testing::Small s;
  for (const auto& c : {s.flat(), s.ring()}) {
    const WaveOperator w = s.wave(c);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      worst = std::max(worst, wave_dot_test(w, seed));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("energy") {
  const testing::Small s;
  const WaveOperator w = s.wave(s.flat());
  const ScalarField2D z(s.solver);
  CHECK(w.energy(z, z) == 0.0);
  const WaveState st = w.propagate(s.bump(), 5);
  CHECK(w.energy(2.0 * st.now, 2.0 * st.prev) ==
        doctest::Approx(4.0 * w.energy(st.now, st.prev)).epsilon(1e-13));
  CHECK(w.energy(st.now, st.prev) > 0.0);
  CHECK(energy_drift(w, s.bump()) <= 1e-3);
  // the leapfrog energy is conserved for variable speed too
  CHECK(energy_drift(s.wave(s.ring()), s.bump(0.1, 0.0)) <= 1e-3);
}

TEST_CASE("time reversal recovers the initial pressure") {
  const testing::Small s;
  for (const auto& c : {s.flat(), s.ring()}) {
    CHECK(time_reversal_error(s.wave(c), s.bump(0.05, -0.05)) <= 1e-9);
  }
}

TEST_CASE("constant speed split property in the Radon domain") {
  const testing::Small s;
  const WaveOperator w = s.wave(s.flat());
  CHECK(split_property_error(w, s.bump(), s.spec(32), 1.0) <= 1e-2);
}

TEST_CASE("propagate matches forward and accepts both grids") {
  const testing::Small s;
  const WaveOperator w = s.wave(s.ring());
  const ScalarField2D h = s.bump();
  const WaveState a = w.propagate(h, w.config().steps());
  const WaveState b = w.propagate(embed(h, s.solver), w.config().steps());
  CHECK(relative_l2_error(a.now, w.forward(h)) == 0.0);
  CHECK(relative_l2_error(a.now, b.now) == 0.0);
}

TEST_CASE("desk geometry stays clear of the periodic boundary") {
  const auto cfg = ExperimentConfig::preset("desk");
  const Experiment exp(cfg);
  const ScalarField2D p = exp.wave().forward(render_phantom(cfg.phantom_spec()));
  CHECK(boundary_strip_ratio(p) <= kWrapGuard);
}
