#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ffdpat/field.hpp"
#include "ffdpat/phantom.hpp"
#include "ffdpat/recon.hpp"
#include "ffdpat/xray.hpp"

namespace ffdpat {

enum class MaskType { full, strip, file };

std::string_view to_string(MaskType t);
MaskType parse_mask_type(std::string_view name);

/// Everything one simulate/reconstruct run needs. Text form: one
/// `section.key = value` per line, `#` comments, optional double quotes
/// around values. Unknown or repeated keys are errors. Phantom components
/// are indexed lines
///
///   phantom.component.N = cx cy size amplitude sigma half_width angle
///
/// and, when present, replace the base component list as a whole.
struct ExperimentConfig {
  std::size_t source_n = 101;
  double source_half_width = 1.0;
  std::size_t solver_n = 301;
  double solver_half_width = 3.0;

  PhantomKind phantom_kind = PhantomKind::discs;
  double phantom_support_radius = 1.0;
  std::vector<PhantomComponent> phantom_components;

  SoundSpeedSpec sound_speed;

  double t_final = 2.0;
  double cfl = 0.3;
  double dt = 0.0;      // 0: derive from cfl
  double c0_ref = 0.0;  // 0: spatial mean of c

  std::size_t n_angles = 200;
  double detector_half_width = 3.0;
  double d_offset = 0.0;  // 0: solver spacing

  MaskType mask_type = MaskType::strip;
  double mask_half_width = 1.0;
  std::string mask_file;

  double noise_std_fraction = 0.2;
  std::uint64_t noise_seed = 1;

  Algorithm algorithm = Algorithm::proximal_one_step;
  double step_size = 0.2;
  double lambda = 0.5;
  int max_iters = 30;
  double stop_tol = 0.0;
  bool line_search = false;
  /// Reconstruct with the constant speed equal to the mean of c over the
  /// source grid instead of the true map (model-mismatch control).
  bool assume_constant_speed = false;

  std::string output_dir = "out";

  /// "paper" or "desk".
  static ExperimentConfig preset(std::string_view scale);
  /// Applies the assignments in `text` on top of `base`.
  static ExperimentConfig parse(std::string_view text, const ExperimentConfig& base);
  static ExperimentConfig load(const std::filesystem::path& path, const ExperimentConfig& base);
  [[nodiscard]] std::string serialize() const;

  /// Cross-field checks; throws ConfigError.
  void validate() const;

  [[nodiscard]] GridSpec source_grid() const;
  [[nodiscard]] GridSpec solver_grid() const;
  [[nodiscard]] SinogramSpec sinogram_spec() const;
  [[nodiscard]] PhantomSpec phantom_spec() const;
  [[nodiscard]] ReconConfig recon_config() const;

  bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace ffdpat
