#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace gmax::detail {

/// Aligned complex buffer owned through fftw_malloc.
class FftBuffer {
 public:
  explicit FftBuffer(std::size_t size);
  ~FftBuffer();
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;
  FftBuffer(FftBuffer&& other) noexcept;
  FftBuffer& operator=(FftBuffer&&) = delete;

  std::span<std::complex<double>> data() noexcept { return {ptr_, size_}; }
  std::size_t size() const noexcept { return size_; }

 private:
  std::complex<double>* ptr_;
  std::size_t size_;
};

/// In-place forward complex DFT of fixed length. Planning is serialized;
/// execution is thread-safe on distinct buffers of the same alignment.
class ForwardFft {
 public:
  explicit ForwardFft(std::size_t size);
  ~ForwardFft();
  ForwardFft(const ForwardFft&) = delete;
  ForwardFft& operator=(const ForwardFft&) = delete;

  std::size_t size() const noexcept { return size_; }
  void execute(FftBuffer& buffer) const;

 private:
  std::size_t size_;
  void* plan_;
};

}  // namespace gmax::detail
