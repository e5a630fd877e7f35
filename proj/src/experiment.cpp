#include "ffdpat/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "ffdpat/error.hpp"

namespace ffdpat {

namespace {

WaveOperator make_wave(const ExperimentConfig& cfg, SoundSpeedMap c) {
  WaveConfig wc = WaveConfig::with_defaults(cfg.solver_grid(), cfg.source_grid(), cfg.t_final, c,
                                            cfg.cfl);
  if (cfg.dt > 0.0) wc.dt = cfg.dt;
  if (cfg.c0_ref > 0.0) wc.c0_ref = cfg.c0_ref;
  return {std::move(c), wc};
}

Mask make_mask(const ExperimentConfig& cfg, const SinogramSpec& spec) {
  switch (cfg.mask_type) {
    case MaskType::full: return Mask::full(spec);
    case MaskType::strip: return Mask::strip(spec, cfg.mask_half_width);
    case MaskType::file: {
      Mask m = Mask::from_sinogram(read_sno(cfg.mask_file));
      if (!m.spec().matches(spec)) {
        throw ConfigError("mask file " + cfg.mask_file + " does not match the detector geometry");
      }
      return m;
    }
  }
  throw ConfigError("unknown mask type");
}

FfdOperator make_operator(const ExperimentConfig& cfg, SoundSpeedMap c) {
  WaveOperator wave = make_wave(cfg, std::move(c));
  const SinogramSpec spec = cfg.sinogram_spec();
  Mask mask = make_mask(cfg, spec);
  const double radius = propagation_radius(cfg.phantom_support_radius, wave);
  return {std::move(wave), spec, std::move(mask), radius};
}

const ExperimentConfig& validated(const ExperimentConfig& cfg) {
  cfg.validate();
  return cfg;
}

std::filesystem::path prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw IoError("write failed for " + path.string());
}

}  // namespace

Experiment::Experiment(ExperimentConfig cfg)
    : cfg_(std::move(cfg)),
      op_(make_operator(validated(cfg_),
                        render_sound_speed(cfg_.sound_speed, cfg_.solver_grid()))) {}

FfdOperator Experiment::constant_speed_operator() const {
  const ScalarField2D inside = restrict_to(wave().sound_speed().field(), cfg_.source_grid());
  double sum = 0.0;
  for (double v : inside.values()) sum += v;
  const double mean = sum / static_cast<double>(inside.size());
  return make_operator(cfg_, SoundSpeedMap::constant(cfg_.solver_grid(), mean));
}

Simulation simulate(const Experiment& exp) {
  const auto& cfg = exp.config();
  Simulation s;
  s.h_true = render_phantom(cfg.phantom_spec());
  s.pressure = exp.wave().forward(s.h_true);
  s.wrap_ratio = boundary_strip_ratio(s.pressure);
  if (s.wrap_ratio > kWrapGuard) {
    throw ConfigError("pressure reaches the solver boundary (edge/peak ratio " +
                      std::to_string(s.wrap_ratio) + "); enlarge the solver grid");
  }
  const Sinogram projections = radon(s.pressure, exp.sinogram_spec(), exp.op().data_radius());
  NoisyData noisy = add_noise(projections, cfg.noise_std_fraction, cfg.noise_seed);
  s.noise_sigma = noisy.sigma;
  s.noise_rel_error = noisy.achieved_rel_error;
  s.clean = exp.mask().apply(projections);
  s.noisy = exp.mask().apply(std::move(noisy.noisy));
  return s;
}

ReconResult reconstruct(const Experiment& exp, const Sinogram& data,
                        const std::optional<ScalarField2D>& truth) {
  ReconConfig rc = exp.config().recon_config();
  rc.truth = truth;
  if (exp.config().assume_constant_speed) {
    return reconstruct(exp.constant_speed_operator(), data, rc);
  }
  return reconstruct(exp.op(), data, rc);
}

void write_pgm16(const std::filesystem::path& path, const ScalarField2D& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  const auto v = f.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double low = v.empty() ? 0.0 : *lo;
  const double range = v.empty() ? 0.0 : *hi - *lo;
  os << "P5\n" << f.nx() << ' ' << f.ny() << "\n65535\n";
  for (std::size_t jj = f.ny(); jj-- > 0;) {
    for (std::size_t i = 0; i < f.nx(); ++i) {
      const double t = range > 0.0 ? (f(i, jj) - low) / range : 0.0;
      const auto q = static_cast<std::uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
      const char bytes[2] = {static_cast<char>(q >> 8), static_cast<char>(q & 0xFF)};
      os.write(bytes, 2);
    }
  }
  if (!os) throw IoError("write failed for " + path.string());
}

SimulateReport cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  const Experiment exp(cfg);
  const Simulation s = simulate(exp);
  const auto dir = prepare_dir(out_dir);
  write_f2d(dir / "h_true.f2d", s.h_true);
  write_f2d(dir / "pressure_T.f2d", s.pressure);
  write_f2d(dir / "sound_speed.f2d", exp.wave().sound_speed().field());
  write_sno(dir / "sinogram_clean.sno", s.clean);
  write_sno(dir / "sinogram_noisy.sno", s.noisy);
  write_sno(dir / "mask.sno", exp.mask().as_sinogram());
  write_text(dir / "config.txt", cfg.serialize());

  const auto& wc = exp.wave().config();
  nlohmann::ordered_json m;
  m["config"] = cfg.serialize();
  m["wave"] = {{"dt", wc.dt},
               {"steps", wc.steps()},
               {"c0_ref", wc.c0_ref},
               {"fft_shape", {exp.wave().fft_shape().first, exp.wave().fft_shape().second}}};
  m["sinogram"] = {{"n_angles", exp.sinogram_spec().n_angles()},
                   {"n_offsets", exp.sinogram_spec().n_offsets},
                   {"offset_0", exp.sinogram_spec().offset_0},
                   {"d_offset", exp.sinogram_spec().d_offset}};
  m["data_radius"] = exp.op().data_radius();
  m["noise"] = {{"std_fraction", cfg.noise_std_fraction},
                {"seed", cfg.noise_seed},
                {"sigma", s.noise_sigma},
                {"achieved_rel_error", s.noise_rel_error}};
  m["wrap_ratio"] = s.wrap_ratio;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
  return {s.noise_rel_error, s.wrap_ratio};
}

ReconstructReport cmd_reconstruct(const ExperimentConfig& cfg,
                                  const std::filesystem::path& data_dir,
                                  const std::filesystem::path& out_dir) {
  const Experiment exp(cfg);
  const Sinogram data = read_sno(data_dir / "sinogram_noisy.sno");
  if (!data.spec().matches(exp.sinogram_spec())) {
    throw ConfigError("data in " + data_dir.string() + " do not match the configured detector");
  }
  std::optional<ScalarField2D> truth;
  if (std::filesystem::exists(data_dir / "h_true.f2d")) {
    truth = read_f2d(data_dir / "h_true.f2d");
  }
  const ReconResult r = reconstruct(exp, data, truth);
  const auto dir = prepare_dir(out_dir);
  write_f2d(dir / "recon.f2d", r.h_final);
  write_iterations_csv(dir / "iterations.csv", r);
  write_pgm16(dir / "recon.pgm", r.h_final);
  ReconstructReport rep;
  rep.iterations = r.iterations;
  rep.final_objective = r.objective.back();
  if (!r.rel_error.empty()) rep.final_rel_error = r.rel_error.back();
  return rep;
}

EvaluateReport cmd_evaluate(const std::filesystem::path& recon_path,
                            const std::filesystem::path& truth_path,
                            const std::filesystem::path& out_dir) {
  const ScalarField2D recon = read_f2d(recon_path);
  const ScalarField2D truth = read_f2d(truth_path);
  if (!recon.grid().matches(truth.grid())) {
    throw GridMismatchError("reconstruction and truth live on different grids");
  }
  const ScalarField2D diff = recon - truth;
  EvaluateReport rep{relative_l2_error(recon, truth), max_abs(diff)};
  if (!out_dir.empty()) write_pgm16(prepare_dir(out_dir) / "difference.pgm", diff);
  return rep;
}

}  // namespace ffdpat
