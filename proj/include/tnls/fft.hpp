#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

#include "tnls/torus_lattice.hpp"

namespace tnls {

using cplx = std::complex<double>;

// Allocator returning FFTW-aligned memory so cached plans can run on any buffer.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() noexcept = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n);
  void deallocate(T* p, std::size_t) noexcept;
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

void* fftw_aligned_alloc(std::size_t bytes);
void fftw_aligned_free(void* p) noexcept;

template <class T>
T* FftwAllocator<T>::allocate(std::size_t n) {
  void* p = fftw_aligned_alloc(n * sizeof(T));
  if (p == nullptr && n != 0) throw std::bad_alloc();
  return static_cast<T*>(p);
}

template <class T>
void FftwAllocator<T>::deallocate(T* p, std::size_t) noexcept {
  fftw_aligned_free(p);
}

using ComplexArray = std::vector<cplx, FftwAllocator<cplx>>;

// In-place unnormalized 4D transforms (row-major, last axis fastest).
// forward: sum_x u(x) e^{-i k x}; backward: sum_k c(k) e^{+i k x}.
// Plans are created with FFTW_ESTIMATE, so results are reproducible run to run.
void fft_forward_inplace(const Index4& grid, ComplexArray& data);
void fft_backward_inplace(const Index4& grid, ComplexArray& data);

}  // namespace tnls
