#include "ffdpat/wave.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "ffdpat/detail/fft.hpp"
#include "ffdpat/error.hpp"

namespace ffdpat {

SoundSpeedMap::SoundSpeedMap(ScalarField2D speed, double background, double interior_radius)
    : speed_(std::move(speed)), background_(background), interior_radius_(interior_radius) {
  if (!(background_ > 0.0) || !std::isfinite(background_)) {
    throw InvalidArgument("background sound speed must be positive");
  }
  if (!(interior_radius_ >= 0.0)) {
    throw InvalidArgument("interior radius must be non-negative");
  }
  const GridSpec& g = speed_.grid();
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double c = speed_(i, j);
      if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidArgument("sound speed must be positive and finite everywhere");
      }
      if (std::hypot(g.x(i), g.y(j)) > interior_radius_ &&
          std::abs(c - background_) > 1e-9 * background_) {
        throw InvalidArgument("sound speed differs from the background outside radius " +
                              std::to_string(interior_radius_));
      }
    }
  }
}

SoundSpeedMap SoundSpeedMap::constant(const GridSpec& grid, double c0) {
  ScalarField2D f(grid);
  std::fill(f.values().begin(), f.values().end(), c0);
  return SoundSpeedMap(std::move(f), c0, 0.0);
}

double SoundSpeedMap::max_speed() const {
  const auto v = speed_.values();
  return *std::max_element(v.begin(), v.end());
}

double SoundSpeedMap::min_speed() const {
  const auto v = speed_.values();
  return *std::min_element(v.begin(), v.end());
}

double SoundSpeedMap::mean_speed() const {
  double sum = 0.0;
  for (double c : speed_.values()) sum += c;
  return sum / static_cast<double>(speed_.size());
}

WaveConfig WaveConfig::with_defaults(const GridSpec& solver_grid, const GridSpec& source_grid,
                                     double t_final, const SoundSpeedMap& c, double cfl) {
  if (!(t_final > 0.0)) throw InvalidArgument("final time must be positive");
  WaveConfig cfg;
  cfg.solver_grid = solver_grid;
  cfg.source_grid = source_grid;
  cfg.t_final = t_final;
  cfg.cfl = cfl;
  const double dt_max = cfl * std::min(solver_grid.dx, solver_grid.dy) / c.max_speed();
  const auto n = static_cast<std::size_t>(std::ceil(t_final / dt_max - 1e-9));
  cfg.dt = t_final / static_cast<double>(std::max<std::size_t>(n, 1));
  cfg.c0_ref = c.mean_speed();
  return cfg;
}

std::size_t WaveConfig::steps() const {
  return static_cast<std::size_t>(std::llround(t_final / dt));
}

struct WaveOperator::Impl {
  SoundSpeedMap c;
  WaveConfig cfg;
  std::size_t steps = 0;
  std::size_t mx = 0, my = 0;  // padded FFT grid
  std::size_t src_i0 = 0, src_j0 = 0;
  std::vector<double> c2dt2;      // c^2 dt^2 on the padded grid
  std::vector<double> multiplier; // L symbol incl. 1/(mx my)
  detail::Plan2D plan;

  Impl(SoundSpeedMap c_, WaveConfig cfg_) : c(std::move(c_)), cfg(std::move(cfg_)) {}

  [[nodiscard]] std::size_t padded_size() const { return mx * my; }

  struct Workspace {
    detail::RealBuffer a, b, c, lap;
    detail::ComplexBuffer spectrum;
  };

  [[nodiscard]] Workspace workspace() const {
    const std::size_t n = padded_size();
    Workspace ws{detail::alloc_real(n), detail::alloc_real(n), detail::alloc_real(n),
                 detail::alloc_real(n), detail::alloc_complex(plan.spectrum_size())};
    std::fill_n(ws.a.get(), n, 0.0);
    std::fill_n(ws.b.get(), n, 0.0);
    std::fill_n(ws.c.get(), n, 0.0);
    return ws;
  }

  /// out = L in (in is preserved by FFTW's out-of-place r2c).
  void apply_laplacian(double* in, double* out, fftw_complex* spectrum) const {
    plan.r2c(in, spectrum);
    const std::size_t ns = plan.spectrum_size();
    for (std::size_t k = 0; k < ns; ++k) {
      spectrum[k][0] *= multiplier[k];
      spectrum[k][1] *= multiplier[k];
    }
    plan.c2r(spectrum, out);
  }

  void load_solver_field(const ScalarField2D& f, double* dst) const {
    std::fill_n(dst, padded_size(), 0.0);
    const GridSpec& g = cfg.solver_grid;
    for (std::size_t j = 0; j < g.ny; ++j) {
      std::copy_n(&f.values()[j * g.nx], g.nx, dst + j * mx);
    }
  }

  [[nodiscard]] ScalarField2D store_solver_field(const double* src) const {
    const GridSpec& g = cfg.solver_grid;
    ScalarField2D f(g);
    for (std::size_t j = 0; j < g.ny; ++j) {
      std::copy_n(src + j * mx, g.nx, &f.values()[j * g.nx]);
    }
    return f;
  }

  [[nodiscard]] ScalarField2D to_solver_grid(const ScalarField2D& h) const {
    if (h.grid().matches(cfg.solver_grid)) return h;
    if (!h.grid().matches(cfg.source_grid)) {
      throw GridMismatchError("initial pressure must live on the source or solver grid");
    }
    return embed(h, cfg.solver_grid);
  }

  using StepHook = std::function<void(std::size_t, const double*, const double*)>;

  /// Runs the recursion; on return ws.a = p^n, ws.b = p^{n-1}.
  void run(const ScalarField2D& p0, std::size_t n_steps, Workspace& ws,
           const StepHook& hook = {}) const {
    const std::size_t n = padded_size();
    double* prev = ws.b.get();
    double* now = ws.a.get();
    double* next = ws.c.get();
    double* lap = ws.lap.get();
    load_solver_field(p0, prev);
    apply_laplacian(prev, lap, ws.spectrum.get());
    for (std::size_t k = 0; k < n; ++k) now[k] = prev[k] + 0.5 * c2dt2[k] * lap[k];
    if (hook) hook(1, now, prev);
    for (std::size_t step = 1; step < n_steps; ++step) {
      apply_laplacian(now, lap, ws.spectrum.get());
      for (std::size_t k = 0; k < n; ++k) {
        next[k] = 2.0 * now[k] - prev[k] + c2dt2[k] * lap[k];
      }
      std::swap(prev, now);
      std::swap(now, next);
      if (hook) hook(step + 1, now, prev);
    }
    if (now != ws.a.get() || prev != ws.b.get()) {
      const std::vector<double> keep_now(now, now + n);
      const std::vector<double> keep_prev(prev, prev + n);
      std::copy(keep_now.begin(), keep_now.end(), ws.a.get());
      std::copy(keep_prev.begin(), keep_prev.end(), ws.b.get());
    }
  }

  [[nodiscard]] double energy_padded(const double* now, const double* prev, Workspace& ws) const {
    // kinetic term plus -<p_now, L p_prev>; FFTW wants a mutable input.
    const std::size_t n = padded_size();
    std::copy_n(prev, n, ws.c.get());
    apply_laplacian(ws.c.get(), ws.lap.get(), ws.spectrum.get());
    double kinetic = 0.0;
    double potential = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = now[k] - prev[k];
      kinetic += d * d / c2dt2[k];
      potential -= now[k] * ws.lap.get()[k];
    }
    return 0.5 * (kinetic + potential) * cfg.solver_grid.cell_area();
  }
};

WaveOperator::WaveOperator(SoundSpeedMap c, WaveConfig cfg) {
  auto impl = std::make_shared<Impl>(std::move(c), std::move(cfg));
  const WaveConfig& w = impl->cfg;
  w.solver_grid.validate();
  w.source_grid.validate();
  if (!impl->c.grid().matches(w.solver_grid)) {
    throw GridMismatchError("sound speed map must live on the solver grid");
  }
  if (w.solver_grid.nx < 2 || w.solver_grid.ny < 2) {
    throw InvalidArgument("solver grid needs at least 2 nodes per axis");
  }
  std::tie(impl->src_i0, impl->src_j0) = node_offset(w.source_grid, w.solver_grid);
  if (!(w.dt > 0.0) || !(w.t_final > 0.0)) {
    throw InvalidArgument("dt and t_final must be positive");
  }
  const std::size_t steps = w.steps();
  if (steps == 0 ||
      std::abs(static_cast<double>(steps) * w.dt - w.t_final) > 1e-9 * w.t_final) {
    throw InvalidArgument("t_final must be an integer multiple of dt");
  }
  impl->steps = steps;
  if (!(w.c0_ref > 0.0)) throw InvalidArgument("k-space reference speed must be positive");
  const double dt_max =
      w.cfl * std::min(w.solver_grid.dx, w.solver_grid.dy) / impl->c.max_speed();
  if (w.dt > dt_max * (1.0 + 1e-12)) {
    throw CflError("dt = " + std::to_string(w.dt) + " exceeds the stability bound " +
                   std::to_string(dt_max));
  }

  impl->mx = detail::fft_friendly_size(w.solver_grid.nx);
  impl->my = detail::fft_friendly_size(w.solver_grid.ny);
  const std::size_t mx = impl->mx;
  const std::size_t my = impl->my;

  const double bg = impl->c.background();
  impl->c2dt2.assign(mx * my, bg * bg * w.dt * w.dt);
  const ScalarField2D& speed = impl->c.field();
  for (std::size_t j = 0; j < w.solver_grid.ny; ++j) {
    for (std::size_t i = 0; i < w.solver_grid.nx; ++i) {
      const double cij = speed(i, j);
      impl->c2dt2[j * mx + i] = cij * cij * w.dt * w.dt;
    }
  }

  const std::size_t hx = mx / 2 + 1;
  impl->multiplier.resize(my * hx);
  const double two_pi = 2.0 * std::numbers::pi;
  const double scale = 1.0 / static_cast<double>(mx * my);
  for (std::size_t j = 0; j < my; ++j) {
    const double jj = j <= my / 2 ? static_cast<double>(j)
                                  : static_cast<double>(j) - static_cast<double>(my);
    const double ky = two_pi * jj / (static_cast<double>(my) * w.solver_grid.dy);
    for (std::size_t i = 0; i < hx; ++i) {
      const double kx = two_pi * static_cast<double>(i) / (static_cast<double>(mx) * w.solver_grid.dx);
      const double k2 = kx * kx + ky * ky;
      const double arg = 0.5 * w.c0_ref * std::sqrt(k2) * w.dt;
      const double sinc = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
      impl->multiplier[j * hx + i] = -k2 * sinc * sinc * scale;
    }
  }
  impl->plan = detail::Plan2D(mx, my);
  impl_ = std::move(impl);
}

const WaveConfig& WaveOperator::config() const { return impl_->cfg; }
const SoundSpeedMap& WaveOperator::sound_speed() const { return impl_->c; }

std::pair<std::size_t, std::size_t> WaveOperator::fft_shape() const {
  return {impl_->mx, impl_->my};
}

ScalarField2D WaveOperator::forward(const ScalarField2D& h) const {
  if (!h.grid().matches(impl_->cfg.source_grid)) {
    throw GridMismatchError("forward expects a field on the source grid");
  }
  return propagate(h, impl_->steps).now;
}

WaveState WaveOperator::propagate(const ScalarField2D& h, std::size_t n_steps) const {
  if (n_steps == 0) throw InvalidArgument("propagate needs at least one step");
  const Impl& im = *impl_;
  auto ws = im.workspace();
  im.run(im.to_solver_grid(h), n_steps, ws);
  return {im.store_solver_field(ws.a.get()), im.store_solver_field(ws.b.get())};
}

ScalarField2D WaveOperator::adjoint(const ScalarField2D& g) const {
  const Impl& im = *impl_;
  if (!g.grid().matches(im.cfg.solver_grid)) {
    throw GridMismatchError("adjoint expects a field on the solver grid");
  }
  const std::size_t n = im.padded_size();
  auto ws = im.workspace();
  double* a = ws.a.get();
  double* b = ws.b.get();
  double* tmp = ws.c.get();
  double* lap = ws.lap.get();
  im.load_solver_field(g, a);
  // Transposed step: (a, b) <- ((2 + L C) a + b, -a).
  for (std::size_t step = 1; step < im.steps; ++step) {
    for (std::size_t k = 0; k < n; ++k) tmp[k] = im.c2dt2[k] * a[k];
    im.apply_laplacian(tmp, lap, ws.spectrum.get());
    for (std::size_t k = 0; k < n; ++k) {
      const double a_new = 2.0 * a[k] + lap[k] + b[k];
      b[k] = -a[k];
      a[k] = a_new;
    }
  }
  // Transposed start-up step p^1 = (1 + C L / 2) p^0.
  for (std::size_t k = 0; k < n; ++k) tmp[k] = im.c2dt2[k] * a[k];
  im.apply_laplacian(tmp, lap, ws.spectrum.get());
  for (std::size_t k = 0; k < n; ++k) a[k] = a[k] + 0.5 * lap[k] + b[k];
  return restrict_to(im.store_solver_field(a), im.cfg.source_grid);
}

ScalarField2D WaveOperator::reverse(const WaveState& state, std::size_t n_steps) const {
  const Impl& im = *impl_;
  if (!state.now.grid().matches(im.cfg.solver_grid) ||
      !state.prev.grid().matches(im.cfg.solver_grid)) {
    throw GridMismatchError("reverse expects snapshots on the solver grid");
  }
  if (n_steps == 0) throw InvalidArgument("reverse needs at least one step");
  const std::size_t n = im.padded_size();
  auto ws = im.workspace();
  double* hi = ws.a.get();   // p^{m+1}
  double* lo = ws.b.get();   // p^m
  double* out = ws.c.get();
  double* lap = ws.lap.get();
  im.load_solver_field(state.now, hi);
  im.load_solver_field(state.prev, lo);
  for (std::size_t m = n_steps - 1; m >= 1; --m) {
    im.apply_laplacian(lo, lap, ws.spectrum.get());
    for (std::size_t k = 0; k < n; ++k) out[k] = 2.0 * lo[k] - hi[k] + im.c2dt2[k] * lap[k];
    std::swap(hi, lo);
    std::swap(lo, out);
  }
  return im.store_solver_field(lo);
}

double WaveOperator::energy(const ScalarField2D& p_now, const ScalarField2D& p_prev) const {
  const Impl& im = *impl_;
  if (!p_now.grid().matches(im.cfg.solver_grid) || !p_prev.grid().matches(im.cfg.solver_grid)) {
    throw GridMismatchError("energy expects snapshots on the solver grid");
  }
  auto ws = im.workspace();
  im.load_solver_field(p_now, ws.a.get());
  im.load_solver_field(p_prev, ws.b.get());
  return im.energy_padded(ws.a.get(), ws.b.get(), ws);
}

std::vector<double> WaveOperator::energy_history(const ScalarField2D& h,
                                                 std::size_t n_steps) const {
  const Impl& im = *impl_;
  auto ws = im.workspace();
  auto scratch = im.workspace();
  std::vector<double> history;
  history.reserve(n_steps);
  im.run(im.to_solver_grid(h), n_steps, ws,
         [&](std::size_t, const double* now, const double* prev) {
           history.push_back(im.energy_padded(now, prev, scratch));
         });
  return history;
}

double boundary_strip_ratio(const ScalarField2D& p, std::size_t cells) {
  const std::size_t nx = p.nx();
  const std::size_t ny = p.ny();
  double strip = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (i < cells || j < cells || i + cells >= nx || j + cells >= ny) {
        strip = std::max(strip, std::abs(p(i, j)));
      }
    }
  }
  const double peak = max_abs(p);
  return peak == 0.0 ? 0.0 : strip / peak;
}

}  // namespace ffdpat
