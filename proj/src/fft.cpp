#include "fft.hpp"

#include <mutex>
#include <new>
#include <stdexcept>

#include <fftw3.h>

namespace gmax::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftBuffer::FftBuffer(std::size_t size)
    : ptr_(reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * size))), size_(size) {
  if (ptr_ == nullptr) throw std::bad_alloc();
}

FftBuffer::~FftBuffer() {
  if (ptr_ != nullptr) fftw_free(ptr_);
}

FftBuffer::FftBuffer(FftBuffer&& other) noexcept : ptr_(other.ptr_), size_(other.size_) {
  other.ptr_ = nullptr;
  other.size_ = 0;
}

ForwardFft::ForwardFft(std::size_t size) : size_(size), plan_(nullptr) {
  FftBuffer scratch(size);
  std::lock_guard lock(planner_mutex());
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data().data());
  plan_ = fftw_plan_dft_1d(static_cast<int>(size), p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  if (plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
}

ForwardFft::~ForwardFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void ForwardFft::execute(FftBuffer& buffer) const {
  if (buffer.size() != size_) throw std::invalid_argument("FFT buffer length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(buffer.data().data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_), p, p);
}

}  // namespace gmax::detail
