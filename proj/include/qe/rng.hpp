#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace qe {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// A named, seedable random stream. Child streams are derived from the
/// parent's key and a label or index, never from the parent's state, so
/// consumers can draw in any order and still see identical sequences.
class Stream {
 public:
  Stream(std::uint64_t seed, std::string_view label)
      : seed_(seed), label_(label), key_(detail::splitmix64(seed ^ detail::splitmix64(detail::fnv1a(label)))),
        engine_(key_) {}

  Stream derive(std::string_view sublabel) const { return Stream(seed_, label_ + "/" + std::string(sublabel)); }
  Stream derive(std::uint64_t index) const { return derive("#" + std::to_string(index)); }

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

  std::mt19937_64& engine() { return engine_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  /// Standard complex Gaussian: E|z|^2 = 1.
  std::complex<double> complex_normal() {
    constexpr double s = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::string label_;
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace qe
