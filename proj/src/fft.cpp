#include "ffdpat/detail/fft.hpp"

#include <mutex>
#include <new>

namespace ffdpat::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealBuffer alloc_real(std::size_t n) {
  auto* p = fftw_alloc_real(n == 0 ? 1 : n);
  if (p == nullptr) throw std::bad_alloc();
  return RealBuffer(p);
}

ComplexBuffer alloc_complex(std::size_t n) {
  auto* p = fftw_alloc_complex(n == 0 ? 1 : n);
  if (p == nullptr) throw std::bad_alloc();
  return ComplexBuffer(p);
}

Plan2D::Plan2D(std::size_t nx_, std::size_t ny_) : nx(nx_), ny(ny_) {
  auto r = alloc_real(nx * ny);
  auto c = alloc_complex(spectrum_size());
  std::lock_guard lock(planner_mutex());
  const int n0 = static_cast<int>(ny);
  const int n1 = static_cast<int>(nx);
  forward = Plan(fftw_plan_dft_r2c_2d(n0, n1, r.get(), c.get(), FFTW_ESTIMATE));
  backward = Plan(fftw_plan_dft_c2r_2d(n0, n1, c.get(), r.get(), FFTW_ESTIMATE));
}

void Plan2D::r2c(double* in, fftw_complex* out) const {
  fftw_execute_dft_r2c(forward.get(), in, out);
}

void Plan2D::c2r(fftw_complex* in, double* out) const {
  fftw_execute_dft_c2r(backward.get(), in, out);
}

Plan1D::Plan1D(std::size_t n_) : n(n_) {
  auto r = alloc_real(n);
  auto c = alloc_complex(n / 2 + 1);
  std::lock_guard lock(planner_mutex());
  forward = Plan(fftw_plan_dft_r2c_1d(static_cast<int>(n), r.get(), c.get(), FFTW_ESTIMATE));
  backward = Plan(fftw_plan_dft_c2r_1d(static_cast<int>(n), c.get(), r.get(), FFTW_ESTIMATE));
}

void Plan1D::r2c(double* in, fftw_complex* out) const {
  fftw_execute_dft_r2c(forward.get(), in, out);
}

void Plan1D::c2r(fftw_complex* in, double* out) const {
  fftw_execute_dft_c2r(backward.get(), in, out);
}

DctPlan2D::DctPlan2D(std::size_t nx_, std::size_t ny_) : nx(nx_), ny(ny_) {
  auto a = alloc_real(nx * ny);
  auto b = alloc_real(nx * ny);
  std::lock_guard lock(planner_mutex());
  const int n0 = static_cast<int>(ny);
  const int n1 = static_cast<int>(nx);
  forward = Plan(fftw_plan_r2r_2d(n0, n1, a.get(), b.get(), FFTW_REDFT10, FFTW_REDFT10,
                                  FFTW_ESTIMATE));
  backward = Plan(fftw_plan_r2r_2d(n0, n1, a.get(), b.get(), FFTW_REDFT01, FFTW_REDFT01,
                                   FFTW_ESTIMATE));
}

void DctPlan2D::dct(double* in, double* out) const { fftw_execute_r2r(forward.get(), in, out); }

void DctPlan2D::idct(double* in, double* out) const {
  fftw_execute_r2r(backward.get(), in, out);
}

std::size_t fft_friendly_size(std::size_t n) {
  auto smooth = [](std::size_t m) {
    for (std::size_t p : {2u, 3u, 5u}) {
      while (m % p == 0) m /= p;
    }
    return m == 1;
  };
  std::size_t m = n < 2 ? 2 : n;
  while (m % 2 != 0 || !smooth(m)) ++m;
  return m;
}

}  // namespace ffdpat::detail
