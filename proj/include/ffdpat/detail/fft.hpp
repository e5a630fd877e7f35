#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>

namespace ffdpat::detail {

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

using RealBuffer = std::unique_ptr<double[], FftwDeleter>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

RealBuffer alloc_real(std::size_t n);
ComplexBuffer alloc_complex(std::size_t n);

/// Owning FFTW plan. Plans are created under a global lock (FFTW's planner
/// is not re-entrant) and executed through the new-array interface, so one
/// plan can serve concurrent callers with their own buffers.
class Plan {
 public:
  Plan() = default;
  explicit Plan(fftw_plan p) : plan_(p, &fftw_destroy_plan) {}
  [[nodiscard]] fftw_plan get() const { return plan_.get(); }

 private:
  std::shared_ptr<fftw_plan_s> plan_;
};

/// 2D real <-> half-complex transforms of an ny x nx row-major array.
struct Plan2D {
  std::size_t nx = 0, ny = 0;
  Plan forward, backward;
  Plan2D() = default;
  Plan2D(std::size_t nx, std::size_t ny);
  [[nodiscard]] std::size_t spectrum_size() const { return ny * (nx / 2 + 1); }
  void r2c(double* in, fftw_complex* out) const;
  /// Destroys `in`.
  void c2r(fftw_complex* in, double* out) const;
};

/// Batched 1D real <-> half-complex transforms of length n.
struct Plan1D {
  std::size_t n = 0;
  Plan forward, backward;
  Plan1D() = default;
  explicit Plan1D(std::size_t n);
  void r2c(double* in, fftw_complex* out) const;
  void c2r(fftw_complex* in, double* out) const;
};

/// 2D DCT-II (forward) / DCT-III (inverse) pair; unnormalised, the round
/// trip scales by 4 nx ny.
struct DctPlan2D {
  std::size_t nx = 0, ny = 0;
  Plan forward, backward;
  DctPlan2D() = default;
  DctPlan2D(std::size_t nx, std::size_t ny);
  void dct(double* in, double* out) const;
  void idct(double* in, double* out) const;
};

/// Smallest even 2^a 3^b 5^c >= n.
std::size_t fft_friendly_size(std::size_t n);

}  // namespace ffdpat::detail
