#pragma once

#include <array>
#include <cstdint>

namespace pbp {

// Identifies one independent substream. The same (master_seed, stream_id)
// always yields the same numbers, whatever thread consumes them.
struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(Key key) : key_(key) {}

  Counter operator()(Counter counter) const noexcept;

 private:
  Key key_;
};

/// Sequential reader over one substream. The master seed is the Philox key;
/// the counter is (block index, stream id), so substreams never overlap.
class RandomStream {
 public:
  explicit RandomStream(RngSpec spec, std::uint64_t first_block = 0);

  /// Uniform on (0, 1], 53-bit resolution.
  double uniform() noexcept;
  /// Standard normal by Box-Muller; consumes one Philox block per pair.
  double normal() noexcept;

  std::uint64_t next_u64() noexcept;

 private:
  void refill() noexcept;

  Philox4x32 engine_;
  std::uint64_t stream_id_;
  std::uint64_t block_;
  std::array<std::uint64_t, 2> words_{};
  int word_index_ = 2;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pbp
