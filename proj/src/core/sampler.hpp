#pragma once

// Inverse-CDF sampling from a walk output distribution.
//
// The draws are pseudo-random stand-ins for single-photon detection events:
// every stream is reproducible from (distribution, seed, count), which is the
// point of a software model of the generator, not a source of entropy.

#include <cstdint>
#include <string>
#include <vector>

#include "prng.hpp"
#include "walk.hpp"

namespace qwrng {

class Sampler {
 public:
  Sampler(const Distribution& dist, std::uint64_t seed);

  /// Cumulative probabilities in ascending position order; last entry is 1.
  const std::vector<double>& cdf() const noexcept { return cdf_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t outcomes() const noexcept { return cdf_.size(); }
  const Prng& prng() const noexcept { return prng_; }

  /// Outcome index k stands for position -n + 2k.
  std::uint32_t next();

 private:
  std::vector<double> cdf_;
  std::uint64_t seed_;
  Prng prng_;
};

inline Sampler build_sampler(const Distribution& dist, std::uint64_t seed) {
  return Sampler(dist, seed);
}

struct SampleStream {
  std::vector<std::uint32_t> outcomes;
  std::size_t n_outcomes = 0;

  std::size_t count() const noexcept { return outcomes.size(); }
  /// Occurrences of each index in [0, n_outcomes).
  std::vector<std::uint64_t> histogram() const;
};

SampleStream draw(Sampler& sampler, std::size_t count);

/// ceil(log2(n_outcomes)); n_outcomes must be at least 2.
unsigned field_width(std::size_t n_outcomes);

/// Each index as a big-endian field of field_width(n_outcomes) bits, one bit
/// per element. Bit-level uniformity only holds for a uniform distribution
/// over a power-of-two number of outcomes.
std::vector<std::uint8_t> encode_bits(const SampleStream& stream, std::size_t n_outcomes);
SampleStream decode_bits(const std::vector<std::uint8_t>& bits, std::size_t n_outcomes);

struct PackedBits {
  std::vector<std::uint8_t> bytes;  // MSB-first, final byte zero-padded
  unsigned padding = 0;
};
PackedBits pack_bits(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> unpack_bits(const PackedBits& packed);

enum class SampleFormat { Indices, Bits };

/// Indices: one decimal index per line. Bits: packed bytes at `path` plus a
/// one-line header in `path + ".hdr"` recording the padding length.
void write_samples(const std::string& path, const SampleStream& stream, SampleFormat format);

/// Reads either format; bit files are recognized by their ".hdr" sidecar.
/// For index files `n_outcomes` bounds the accepted indices.
SampleStream read_samples(const std::string& path, std::size_t n_outcomes);

std::string sidecar_path(const std::string& path);

}  // namespace qwrng
