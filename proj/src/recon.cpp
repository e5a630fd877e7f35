#include "ffdpat/recon.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>

#include "ffdpat/detail/fft.hpp"
#include "ffdpat/error.hpp"

namespace ffdpat {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::landweber_one_step: return "landweber_one_step";
    case Algorithm::proximal_one_step: return "proximal_one_step";
    case Algorithm::proximal_two_step: return "proximal_two_step";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::landweber_one_step, Algorithm::proximal_one_step,
                 Algorithm::proximal_two_step}) {
    if (name == to_string(a)) return a;
  }
  throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

void ReconConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw InvalidArgument("step size must be positive");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lambda must be non-negative");
  }
  if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
  if (!(stop_tol >= 0.0)) throw InvalidArgument("stop_tol must be non-negative");
}

void write_iterations_csv(const std::filesystem::path& path, const ReconResult& result) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << "iter,objective,rel_l2_error,wall_ms\n";
  os.precision(17);
  for (int k = 0; k < result.iterations; ++k) {
    const auto i = static_cast<std::size_t>(k);
    os << k + 1 << ',' << result.objective[i] << ',';
    if (!result.rel_error.empty()) os << result.rel_error[i];
    os << ',' << result.wall_ms[i] << '\n';
  }
  if (!os) throw IoError("write failed for " + path.string());
}

ScalarField2D prox_gradient_energy(const ScalarField2D& f, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("tau must be non-negative");
  if (tau == 0.0) return f;
  const std::size_t nx = f.nx();
  const std::size_t ny = f.ny();
  const detail::DctPlan2D plan(nx, ny);
  auto a = detail::alloc_real(nx * ny);
  auto b = detail::alloc_real(nx * ny);
  std::copy(f.values().begin(), f.values().end(), a.get());
  plan.dct(a.get(), b.get());
  const double pi = std::numbers::pi;
  std::vector<double> ex(nx);
  std::vector<double> ey(ny);
  for (std::size_t i = 0; i < nx; ++i) {
    ex[i] = 2.0 - 2.0 * std::cos(pi * static_cast<double>(i) / static_cast<double>(nx));
  }
  for (std::size_t j = 0; j < ny; ++j) {
    ey[j] = 2.0 - 2.0 * std::cos(pi * static_cast<double>(j) / static_cast<double>(ny));
  }
  const double norm_factor = 1.0 / (4.0 * static_cast<double>(nx * ny));
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      b[j * nx + i] *= norm_factor / (1.0 + tau * (ex[i] + ey[j]));
    }
  }
  plan.idct(b.get(), a.get());
  ScalarField2D h(f.grid());
  std::copy_n(a.get(), nx * ny, h.values().begin());
  return h;
}

double tikhonov_objective(const FfdOperator& op, const ScalarField2D& h, const Sinogram& g,
                          double lambda) {
  const Sinogram r = op.residual(h, g);
  return 0.5 * sino_inner(ramp_filter(r), r) + lambda * gradient_energy(h);
}

namespace {

/// Smooth data term: returns its value at h and, if grad != nullptr, its
/// L2 gradient.
using DataTerm = std::function<double(const ScalarField2D& h, ScalarField2D* grad)>;

ReconResult forward_backward(const DataTerm& data, const GridSpec& grid, double lambda,
                             const ReconConfig& cfg) {
  cfg.validate();
  if (cfg.truth && !cfg.truth->grid().matches(grid)) {
    throw GridMismatchError("ground truth does not live on the source grid");
  }
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  ReconResult result;
  ScalarField2D h(grid);
  ScalarField2D grad(grid);
  double objective = data(h, &grad);
  const double limit = 1e6 * norm(grad);

  for (int k = 0; k < cfg.max_iters; ++k) {
    const bool need_grad = k + 1 < cfg.max_iters;
    double step = cfg.step_size;
    ScalarField2D h_next;
    ScalarField2D grad_next(grid);
    double objective_next = 0.0;
    for (int halving = 0;; ++halving) {
      ScalarField2D z = h;
      z.axpy(-step, grad);
      h_next = prox_gradient_energy(z, step * lambda);
      objective_next = data(h_next, need_grad || cfg.stop_tol > 0.0 ? &grad_next : nullptr) +
                       lambda * gradient_energy(h_next);
      if (!cfg.line_search || objective_next <= objective || halving >= 30) break;
      step *= 0.5;
    }
    const double size = norm(h_next);
    if (!h_next.all_finite() || !std::isfinite(objective_next) || size > limit) {
      throw DivergenceError("iterate norm " + std::to_string(size) + " exceeds " +
                            std::to_string(limit) + " at iteration " + std::to_string(k + 1));
    }
    const double change = size > 0.0 ? norm(h_next - h) / size : 0.0;
    h = std::move(h_next);
    grad = std::move(grad_next);
    objective = objective_next;

    result.objective.push_back(objective);
    if (cfg.truth) result.rel_error.push_back(relative_l2_error(h, *cfg.truth));
    result.wall_ms.push_back(
        std::chrono::duration<double, std::milli>(clock::now() - t0).count());
    result.iterations = k + 1;
    if (cfg.stop_tol > 0.0 && change < cfg.stop_tol) break;
  }
  result.h_final = std::move(h);
  return result;
}

DataTerm one_step_data_term(const FfdOperator& op, const Sinogram& g) {
  return [&op, &g](const ScalarField2D& h, ScalarField2D* grad) {
    const Sinogram r = op.residual(h, g);
    const Sinogram lr = ramp_filter(r);
    if (grad != nullptr) *grad = op.adjoint(lr);
    return 0.5 * sino_inner(lr, r);
  };
}

}  // namespace

ReconResult landweber_one_step(const FfdOperator& op, const Sinogram& g, const ReconConfig& cfg) {
  return forward_backward(one_step_data_term(op, g), op.source_grid(), 0.0, cfg);
}

ReconResult proximal_one_step(const FfdOperator& op, const Sinogram& g, const ReconConfig& cfg) {
  return forward_backward(one_step_data_term(op, g), op.source_grid(), cfg.lambda, cfg);
}

ScalarField2D two_step_pressure(const WaveOperator& wave, const Sinogram& g, double data_radius) {
  return fbp(g, wave.config().solver_grid, data_radius);
}

ReconResult proximal_two_step(const WaveOperator& wave, const Sinogram& g,
                              const ReconConfig& cfg, double data_radius) {
  const ScalarField2D pressure = two_step_pressure(wave, g, data_radius);
  DataTerm data = [&wave, &pressure](const ScalarField2D& h, ScalarField2D* grad) {
    ScalarField2D r = wave.forward(h);
    r -= pressure;
    if (grad != nullptr) *grad = wave.adjoint(r);
    return 0.5 * inner(r, r);
  };
  return forward_backward(data, wave.config().source_grid, cfg.lambda, cfg);
}

ReconResult reconstruct(const FfdOperator& op, const Sinogram& g, const ReconConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::landweber_one_step: return landweber_one_step(op, g, cfg);
    case Algorithm::proximal_one_step: return proximal_one_step(op, g, cfg);
    case Algorithm::proximal_two_step:
      return proximal_two_step(op.wave(), g, cfg, op.data_radius());
  }
  throw InvalidArgument("unknown algorithm");
}

}  // namespace ffdpat
