#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace levytrans {

// 64-bit mixing finalizer (splitmix64). Used to derive independent stream
// keys from (master seed, context label, indices) so that every Monte Carlo
// cell owns a replayable generator regardless of scheduling order.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine64(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ (0x9e3779b97f4a7c15ULL + b + (a << 6) + (a >> 2)));
}

constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char ch : label) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic substream of a master seed. Streams with distinct ids are
// independent for Monte Carlo purposes; the same (seed, id) pair always
// reproduces the same sequence on every platform.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_(master_seed),
        id_(stream_id),
        engine_(combine64(mix64(master_seed), mix64(stream_id))) {}

  // Child stream derived from this stream's identity, not its state.
  RngStream substream(std::uint64_t child_index) const {
    return RngStream(master_, combine64(id_, child_index));
  }
  RngStream substream(std::string_view label, std::uint64_t index) const {
    return RngStream(master_, combine64(combine64(id_, hash_label(label)), index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1]: strictly positive so U^(-1/alpha) is always finite.
  double next_uniform_open_closed() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double next_uniform_closed_open() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Exponential waiting time with the given rate.
  double next_exponential(double rate) {
    return -std::log(next_uniform_open_closed()) / rate;
  }

  std::uint64_t master_seed() const noexcept { return master_; }
  std::uint64_t stream_id() const noexcept { return id_; }

 private:
  std::uint64_t master_;
  std::uint64_t id_;
  std::mt19937_64 engine_;
};

inline RngStream stream_for(std::uint64_t master_seed, std::string_view label,
                            std::uint64_t index) {
  return RngStream(master_seed, combine64(hash_label(label), index));
}

}  // namespace levytrans
