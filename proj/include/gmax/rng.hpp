#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace gmax {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The output block is a pure function of (key, counter), so independent
/// streams are obtained by fixing the key to the user seed and reserving one
/// counter word pair for the stream index.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  static Block generate(Block counter, std::array<std::uint32_t, 2> key) noexcept;
};

/// Stream of standard normal variates keyed by (seed, stream index).
///
/// Normals are produced in pairs by the Box-Muller transform from two
/// 53-bit uniforms per Philox block. The sequence depends only on the key,
/// never on which thread consumes it.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  double next() noexcept;
  void fill(std::span<double> out) noexcept;

  /// Uniform on (0,1], 53-bit resolution. Consumes a fresh block.
  double next_uniform() noexcept;

 private:
  Philox4x32::Block next_block() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gmax
