#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ffdpat/field.hpp"
#include "ffdpat/operators.hpp"
#include "ffdpat/wave.hpp"
#include "ffdpat/xray.hpp"

namespace ffdpat {

/// Fields of standard normal values (the add_noise generator).
ScalarField2D random_field(const GridSpec& grid, std::uint64_t seed);
Sinogram random_sinogram(const SinogramSpec& spec, std::uint64_t seed);

/// |<radon f, G>_sino - <f, backproject G>_grid| / (|f| |G|) for random f, G.
double radon_dot_test(const GridSpec& grid, const SinogramSpec& spec, std::uint64_t seed);

/// |<W h, g> - <h, W^* g>| / (|h| |g|) for random h, g (unweighted sums).
/// `adjoint_scale` multiplies the adjoint output (fault injection).
double wave_dot_test(const WaveOperator& wave, std::uint64_t seed, double adjoint_scale = 1.0);

/// Same for the composed operator, with the sinogram and grid inner products.
double operator_dot_test(const FfdOperator& op, std::uint64_t seed, double adjoint_scale = 1.0);

/// max_n |E_n - E_0| / E_0 over a full forward run from (h, 0).
double energy_drift(const WaveOperator& wave, const ScalarField2D& h);

/// Relative L2 distance between embed(h) and the backward run of the
/// forward run of h.
double time_reversal_error(const WaveOperator& wave, const ScalarField2D& h);

/// Worst per-angle relative L2 error between radon(W h) and the split
/// prediction from radon(h); `c0` is the (constant) speed of `wave`.
double split_property_error(const WaveOperator& wave, const ScalarField2D& h,
                            const SinogramSpec& spec, double c0);

/// |h - f + tau D^T D h| / |f| for h = prox(f, tau).
double prox_optimality_residual(const ScalarField2D& f, double tau);

struct SelftestCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct SelftestOptions {
  /// Scales every adjoint output in the dot tests by (1 + 1e-6).
  bool corrupt_adjoint = false;
};

/// Small-scale battery (64 x 64 solver grid). Never throws for failing
/// checks; they are reported.
std::vector<SelftestCheck> run_selftest(const SelftestOptions& options = {});

/// One line per check; returns true if all passed.
bool print_report(std::ostream& os, const std::vector<SelftestCheck>& checks);

}  // namespace ffdpat
