#include "ffdpat/selftest.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "ffdpat/oracle.hpp"
#include "ffdpat/phantom.hpp"
#include "ffdpat/recon.hpp"

namespace ffdpat {

ScalarField2D random_field(const GridSpec& grid, std::uint64_t seed) {
  ScalarField2D f(grid);
  auto v = f.values();
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = gaussian_deviate(seed, n);
  return f;
}

Sinogram random_sinogram(const SinogramSpec& spec, std::uint64_t seed) {
  Sinogram g(spec);
  auto v = g.values();
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = gaussian_deviate(seed, n);
  return g;
}

namespace {

double detector_reach(const SinogramSpec& spec) {
  return std::min(-spec.offset_0, spec.offset_max());
}

double relative_gap(double lhs, double rhs, double scale) {
  return scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs);
}

}  // namespace

double radon_dot_test(const GridSpec& grid, const SinogramSpec& spec, std::uint64_t seed) {
  const ScalarField2D f = random_field(grid, seed);
  const Sinogram g = random_sinogram(spec, seed ^ 0x5bd1e995ULL);
  const double reach = detector_reach(spec);
  const double lhs = sino_inner(radon(f, spec, reach), g);
  const double rhs = inner(f, backproject(g, grid, reach));
  return relative_gap(lhs, rhs, std::sqrt(inner(f, f) * sino_inner(g, g)));
}

double wave_dot_test(const WaveOperator& wave, std::uint64_t seed, double adjoint_scale) {
  const auto& cfg = wave.config();
  const ScalarField2D h = random_field(cfg.source_grid, seed);
  const ScalarField2D g = random_field(cfg.solver_grid, seed ^ 0x5bd1e995ULL);
  const double lhs = dot(wave.forward(h), g);
  const double rhs = adjoint_scale * dot(h, wave.adjoint(g));
  return relative_gap(lhs, rhs, norm(h) * norm(g));
}

double operator_dot_test(const FfdOperator& op, std::uint64_t seed, double adjoint_scale) {
  const ScalarField2D h = random_field(op.source_grid(), seed);
  const Sinogram g = random_sinogram(op.spec(), seed ^ 0x5bd1e995ULL);
  const double lhs = sino_inner(op.apply(h), g);
  const double rhs = adjoint_scale * inner(h, op.adjoint(g));
  return relative_gap(lhs, rhs, std::sqrt(inner(h, h) * sino_inner(g, g)));
}

double energy_drift(const WaveOperator& wave, const ScalarField2D& h) {
  const auto hist = wave.energy_history(h, wave.config().steps());
  double worst = 0.0;
  for (double e : hist) worst = std::max(worst, std::abs(e - hist.front()));
  return hist.front() > 0.0 ? worst / hist.front() : worst;
}

double time_reversal_error(const WaveOperator& wave, const ScalarField2D& h) {
  const std::size_t n = wave.config().steps();
  const ScalarField2D back = wave.reverse(wave.propagate(h, n), n);
  return relative_l2_error(back, embed(h, wave.config().solver_grid));
}

double split_property_error(const WaveOperator& wave, const ScalarField2D& h,
                            const SinogramSpec& spec, double c0) {
  const double reach = detector_reach(spec);
  const Sinogram measured = radon(wave.forward(h), spec, reach);
  const Sinogram predicted = split_predict(radon(h, spec, reach), c0, wave.config().t_final);
  double worst = 0.0;
  for (std::size_t a = 0; a < spec.n_angles(); ++a) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < spec.n_offsets; ++k) {
      const double d = measured(a, k) - predicted(a, k);
      num += d * d;
      den += predicted(a, k) * predicted(a, k);
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  return worst;
}

double prox_optimality_residual(const ScalarField2D& f, double tau) {
  const ScalarField2D h = prox_gradient_energy(f, tau);
  ScalarField2D r = h - f;
  r.axpy(tau, gradient_normal(h));
  return norm(r) / norm(f);
}

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options) {
  std::vector<SelftestCheck> out;
  auto record = [&out](std::string name, double value, double threshold) {
    out.push_back({std::move(name), value, threshold, value <= threshold});
  };
  const double scale = options.corrupt_adjoint ? 1.0 + 1e-6 : 1.0;

  // 64 x 64 solver grid with spacing 0.05, 21 x 21 source grid on [-0.5, 0.5]^2.
  const GridSpec solver{64, 64, -1.55, -1.55, 0.05, 0.05};
  const GridSpec source = GridSpec::centered(21, 0.5);
  const double t_final = 0.6;
  const double support = 0.4;
  const SinogramSpec spec = SinogramSpec::covering(64, 1.5, 0.05);

  const SoundSpeedMap flat = SoundSpeedMap::constant(solver, 1.0);
  const WaveOperator wave_flat(flat, WaveConfig::with_defaults(solver, source, t_final, flat));
  SoundSpeedSpec ring;
  ring.ring_radius = 0.3;
  ring.ring_width = 0.08;
  const SoundSpeedMap trapped = render_sound_speed(ring, solver);
  const WaveOperator wave_ring(trapped, WaveConfig::with_defaults(solver, source, t_final, trapped));

  PhantomSpec bump_spec{PhantomKind::smooth_bumps, {{0.0, 0.0, support, 1.0}}, source, support};
  const ScalarField2D bump = render_phantom(bump_spec);

  double worst = 0.0;
  for (std::uint64_t s = 1; s <= 4; ++s) worst = std::max(worst, radon_dot_test(solver, spec, s));
  record("radon/backproject dot test", worst, 1e-12);

  worst = 0.0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    worst = std::max(worst, wave_dot_test(wave_flat, s, scale));
  }
  record("wave dot test, constant speed", worst, 1e-10);
  worst = 0.0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    worst = std::max(worst, wave_dot_test(wave_ring, s, scale));
  }
  record("wave dot test, trapping speed", worst, 1e-10);

  const double radius = propagation_radius(support, wave_ring);
  const FfdOperator op(wave_ring, spec, Mask::strip(spec, support), radius);
  worst = 0.0;
  for (std::uint64_t s = 1; s <= 3; ++s) worst = std::max(worst, operator_dot_test(op, s, scale));
  record("composed operator dot test", worst, 1e-10);

  record("energy drift, constant speed", energy_drift(wave_flat, bump), 1e-3);
  record("time reversal round trip", time_reversal_error(wave_ring, bump), 1e-9);
  record("split property, worst angle", split_property_error(wave_flat, bump, spec, 1.0), 1e-2);

  PhantomSpec blob_spec{PhantomKind::smooth_bumps, {{0.1, -0.1, 0.9, 1.0}}, solver, 1.2};
  const ScalarField2D blob = render_phantom(blob_spec);
  record("filtered backprojection round trip",
         relative_l2_error(fbp(radon(blob, spec, 1.2), solver, 1.2), blob), 0.05);

  record("prox optimality residual", prox_optimality_residual(random_field(solver, 11), 0.7),
         1e-10);

  const Sinogram data = op.apply(bump);
  ReconConfig rc;
  rc.max_iters = 5;
  rc.lambda = 0.0;
  const ReconResult lw = landweber_one_step(op, data, rc);
  const ReconResult px = proximal_one_step(op, data, rc);
  record("proximal (lambda = 0) vs Landweber", relative_l2_error(px.h_final, lw.h_final), 1e-14);
  return out;
}

bool print_report(std::ostream& os, const std::vector<SelftestCheck>& checks) {
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    os << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(38) << c.name
       << std::scientific << std::setprecision(3) << c.value << "  (limit " << c.threshold
       << ")\n";
  }
  os << std::defaultfloat;
  return all;
}

}  // namespace ffdpat
