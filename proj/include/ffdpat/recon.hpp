#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffdpat/field.hpp"
#include "ffdpat/operators.hpp"

namespace ffdpat {

enum class Algorithm { landweber_one_step, proximal_one_step, proximal_two_step };

std::string_view to_string(Algorithm a);
/// Throws InvalidArgument for unknown names.
Algorithm parse_algorithm(std::string_view name);

struct ReconConfig {
  Algorithm algorithm = Algorithm::proximal_one_step;
  double step_size = 0.2;
  double lambda = 0.5;
  int max_iters = 60;
  /// Stop once ||h_{k+1} - h_k|| / ||h_{k+1}|| < stop_tol (0 runs the full budget).
  double stop_tol = 0.0;
  /// Halve the step until the objective decreases.
  bool line_search = false;
  /// When set, relative L2 errors against it are recorded.
  std::optional<ScalarField2D> truth;

  void validate() const;
};

/// Row k (0-based) describes iterate h_{k+1}.
struct ReconResult {
  ScalarField2D h_final;
  std::vector<double> objective;
  std::vector<double> rel_error;  // empty when no truth was given
  std::vector<double> wall_ms;    // cumulative
  int iterations = 0;
};

/// iter,objective,rel_l2_error,wall_ms
void write_iterations_csv(const std::filesystem::path& path, const ReconResult& result);

/// argmin_h 1/2 ||h - f||^2 + tau * gradient_energy(h), i.e. the solution of
/// (I + tau D^T D) h = f, diagonalised by the 2D DCT-II (Neumann modes).
ScalarField2D prox_gradient_energy(const ScalarField2D& f, double tau);

/// 1/2 <Lambda r, r> + lambda * gradient_energy(h) with r = chi_M (X W_T h - G).
double tikhonov_objective(const FfdOperator& op, const ScalarField2D& h, const Sinogram& g,
                          double lambda);

/// h_{k+1} = h_k - s W^* X^* Lambda (A h_k - G), from h_0 = 0. Ignores cfg.lambda.
ReconResult landweber_one_step(const FfdOperator& op, const Sinogram& g, const ReconConfig& cfg);

/// h_{k+1} = prox_{s lambda R}(h_k - s W^* X^* Lambda (A h_k - G)).
ReconResult proximal_one_step(const FfdOperator& op, const Sinogram& g, const ReconConfig& cfg);

/// Final-time pressure estimate g = X^-1 G (filtered backprojection onto the
/// solver grid) used by the two-step method.
ScalarField2D two_step_pressure(const WaveOperator& wave, const Sinogram& g, double data_radius);

/// Step 1: g = X^-1 G. Step 2: h_{k+1} = prox_{s lambda R}(h_k - s W^*(W h_k - g)).
ReconResult proximal_two_step(const WaveOperator& wave, const Sinogram& g,
                              const ReconConfig& cfg, double data_radius);

/// Dispatches on cfg.algorithm.
ReconResult reconstruct(const FfdOperator& op, const Sinogram& g, const ReconConfig& cfg);

}  // namespace ffdpat
