#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "ffdpat/config.hpp"
#include "ffdpat/operators.hpp"
#include "ffdpat/phantom.hpp"
#include "ffdpat/recon.hpp"

namespace ffdpat {

/// Boundary-strip amplitude (relative to the peak) above which the periodic
/// solver domain is considered too small.
inline constexpr double kWrapGuard = 1e-6;

/// Operators and geometry assembled from a validated config.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg);

  [[nodiscard]] const ExperimentConfig& config() const { return cfg_; }
  [[nodiscard]] const FfdOperator& op() const { return op_; }
  [[nodiscard]] const WaveOperator& wave() const { return op_.wave(); }
  [[nodiscard]] const SinogramSpec& sinogram_spec() const { return op_.spec(); }
  [[nodiscard]] const Mask& mask() const { return op_.mask(); }

  /// Same geometry with the sound speed replaced by its mean over the
  /// source grid.
  [[nodiscard]] FfdOperator constant_speed_operator() const;

 private:
  ExperimentConfig cfg_;
  FfdOperator op_;
};

struct Simulation {
  ScalarField2D h_true;
  ScalarField2D pressure;
  Sinogram clean;  // chi_M X W_T h
  Sinogram noisy;  // chi_M (X W_T h + noise)
  double noise_sigma = 0.0;
  double noise_rel_error = 0.0;  // ||noise|| / ||X W_T h||, before masking
  double wrap_ratio = 0.0;
};

/// Renders the phantom, propagates it, projects, adds noise and masks.
/// Throws ConfigError when the wrap-around guard trips.
Simulation simulate(const Experiment& exp);

/// Runs the configured algorithm on `data`; the true speed unless
/// cfg.assume_constant_speed.
ReconResult reconstruct(const Experiment& exp, const Sinogram& data,
                        const std::optional<ScalarField2D>& truth);

/// 16-bit binary PGM, min-max scaled, first row = largest y.
void write_pgm16(const std::filesystem::path& path, const ScalarField2D& f);

struct SimulateReport {
  double noise_rel_error = 0.0;
  double wrap_ratio = 0.0;
};

/// Writes h_true.f2d, pressure_T.f2d, sound_speed.f2d, sinogram_clean.sno,
/// sinogram_noisy.sno, mask.sno, config.txt and manifest.json into out_dir.
SimulateReport cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

struct ReconstructReport {
  int iterations = 0;
  double final_objective = 0.0;
  std::optional<double> final_rel_error;
};

/// Reads sinogram_noisy.sno (and h_true.f2d if present) from data_dir and
/// writes recon.f2d, iterations.csv and recon.pgm into out_dir.
ReconstructReport cmd_reconstruct(const ExperimentConfig& cfg,
                                  const std::filesystem::path& data_dir,
                                  const std::filesystem::path& out_dir);

struct EvaluateReport {
  double rel_l2_error = 0.0;
  double max_abs_error = 0.0;
};

/// Compares two fields on the same grid; writes difference.pgm into out_dir
/// when it is non-empty.
EvaluateReport cmd_evaluate(const std::filesystem::path& recon_path,
                            const std::filesystem::path& truth_path,
                            const std::filesystem::path& out_dir);

}  // namespace ffdpat
