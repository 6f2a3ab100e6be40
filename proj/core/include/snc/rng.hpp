#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace snc {

/// Philox4x32-10 counter-based block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// One random stream: key = seed, counter words 2 and 3 fixed to
/// (process, replication), words 0-1 a 64-bit block index. Distinct
/// (process, replication) pairs never share a counter, so streams are
/// independent and reproducible. Satisfies UniformRandomBitGenerator.
class PhiloxStream {
 public:
  using result_type = std::uint32_t;

  PhiloxStream(std::uint64_t seed, std::uint32_t process, std::uint32_t replication);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint32_t process_;
  std::uint32_t replication_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  unsigned pos_ = 4;
};

}  // namespace snc
