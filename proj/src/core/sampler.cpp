#include "sampler.hpp"

#include <algorithm>
#include <filesystem>
#include <string_view>

#include "text.hpp"

namespace qwrng {

Sampler::Sampler(const Distribution& dist, std::uint64_t seed) : seed_(seed), prng_(seed) {
  cdf_.reserve(dist.sites());
  double acc = 0.0;
  for (double p : dist.probs()) {
    acc += p;
    cdf_.push_back(acc);
  }
  // Pin the tail at exactly 1 from the last site with positive mass, so
  // round-off can never hand draws to trailing zero-probability sites.
  std::size_t last = cdf_.size() - 1;
  while (last > 0 && dist.probs()[last] == 0.0) --last;
  std::fill(cdf_.begin() + static_cast<std::ptrdiff_t>(last), cdf_.end(), 1.0);
}

std::uint32_t Sampler::next() {
  const double u = prng_.uniform01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  // u < 1 = cdf.back(), so it never reaches end().
  return static_cast<std::uint32_t>(it - cdf_.begin());
}

std::vector<std::uint64_t> SampleStream::histogram() const {
  std::vector<std::uint64_t> h(n_outcomes, 0);
  for (auto k : outcomes) {
    if (k >= n_outcomes) throw Error(ErrorKind::OutOfRange, "sample index out of range");
    ++h[k];
  }
  return h;
}

SampleStream draw(Sampler& sampler, std::size_t count) {
  if (count < 1) throw Error(ErrorKind::Precondition, "sample count must be positive");
  SampleStream s;
  s.n_outcomes = sampler.outcomes();
  s.outcomes.resize(count);
  for (auto& k : s.outcomes) k = sampler.next();
  return s;
}

unsigned field_width(std::size_t n_outcomes) {
  if (n_outcomes < 2) throw Error(ErrorKind::Domain, "need at least two outcomes");
  unsigned w = 0;
  while ((std::size_t{1} << w) < n_outcomes) ++w;
  return w;
}

std::vector<std::uint8_t> encode_bits(const SampleStream& stream, std::size_t n_outcomes) {
  const unsigned w = field_width(n_outcomes);
  std::vector<std::uint8_t> bits;
  bits.reserve(stream.count() * w);
  for (auto k : stream.outcomes) {
    if (k >= n_outcomes) {
      throw Error(ErrorKind::OutOfRange, "index " + std::to_string(k) + " not below " +
                                             std::to_string(n_outcomes));
    }
    for (unsigned b = w; b-- > 0;) bits.push_back(static_cast<std::uint8_t>((k >> b) & 1U));
  }
  return bits;
}

SampleStream decode_bits(const std::vector<std::uint8_t>& bits, std::size_t n_outcomes) {
  const unsigned w = field_width(n_outcomes);
  if (bits.size() % w != 0) {
    throw Error(ErrorKind::Parse, "bit count is not a multiple of the field width");
  }
  SampleStream s;
  s.n_outcomes = n_outcomes;
  s.outcomes.reserve(bits.size() / w);
  for (std::size_t i = 0; i < bits.size(); i += w) {
    std::uint32_t k = 0;
    for (unsigned b = 0; b < w; ++b) k = (k << 1) | (bits[i + b] & 1U);
    if (k >= n_outcomes) {
      throw Error(ErrorKind::OutOfRange, "decoded index " + std::to_string(k) +
                                             " not below " + std::to_string(n_outcomes));
    }
    s.outcomes.push_back(k);
  }
  return s;
}

PackedBits pack_bits(const std::vector<std::uint8_t>& bits) {
  PackedBits p;
  p.bytes.assign((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) p.bytes[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
  }
  p.padding = static_cast<unsigned>(p.bytes.size() * 8 - bits.size());
  return p;
}

std::vector<std::uint8_t> unpack_bits(const PackedBits& packed) {
  if (packed.padding > 7 || (packed.bytes.empty() && packed.padding != 0)) {
    throw Error(ErrorKind::Parse, "invalid padding length");
  }
  const std::size_t n = packed.bytes.size() * 8 - packed.padding;
  std::vector<std::uint8_t> bits(n);
  for (std::size_t i = 0; i < n; ++i) {
    bits[i] = static_cast<std::uint8_t>((packed.bytes[i / 8] >> (7 - i % 8)) & 1U);
  }
  return bits;
}

std::string sidecar_path(const std::string& path) { return path + ".hdr"; }

void write_samples(const std::string& path, const SampleStream& stream, SampleFormat format) {
  if (format == SampleFormat::Indices) {
    std::string out;
    out.reserve(stream.count() * 2);
    for (auto k : stream.outcomes) {
      out += std::to_string(k);
      out += '\n';
    }
    text::write_file(path, out);
    return;
  }
  const auto bits = encode_bits(stream, stream.n_outcomes);
  const auto packed = pack_bits(bits);
  text::write_file(path, std::string_view(reinterpret_cast<const char*>(packed.bytes.data()),
                                          packed.bytes.size()));
  text::write_file(sidecar_path(path),
                   "padding=" + std::to_string(packed.padding) +
                       " bits=" + std::to_string(bits.size()) +
                       " width=" + std::to_string(field_width(stream.n_outcomes)) +
                       " outcomes=" + std::to_string(stream.n_outcomes) + "\n");
}

SampleStream read_samples(const std::string& path, std::size_t n_outcomes) {
  const std::string hdr = sidecar_path(path);
  if (std::filesystem::exists(hdr)) {
    long long padding = -1;
    long long nbits = -1;
    long long outcomes = -1;
    const std::string header = text::read_file(hdr);
    for (auto field : text::split(text::trim(header), ' ')) {
      const auto eq = field.find('=');
      if (eq == std::string_view::npos) throw Error(ErrorKind::Parse, "malformed sample header");
      const auto key = field.substr(0, eq);
      const auto val = field.substr(eq + 1);
      if (key == "padding") padding = text::parse_int(val, "padding");
      else if (key == "bits") nbits = text::parse_int(val, "bit count");
      else if (key == "outcomes") outcomes = text::parse_int(val, "outcome count");
    }
    if (padding < 0 || nbits < 0 || outcomes < 2) {
      throw Error(ErrorKind::Parse, "sample header is missing fields");
    }
    if (static_cast<std::size_t>(outcomes) != n_outcomes) {
      throw Error(ErrorKind::SupportMismatch,
                  "sample file has " + std::to_string(outcomes) + " outcomes, expected " +
                      std::to_string(n_outcomes));
    }
    const std::string raw = text::read_file(path);
    PackedBits packed{{raw.begin(), raw.end()}, static_cast<unsigned>(padding)};
    const auto bits = unpack_bits(packed);
    if (bits.size() != static_cast<std::size_t>(nbits)) {
      throw Error(ErrorKind::Parse, "bit file length disagrees with its header");
    }
    return decode_bits(bits, n_outcomes);
  }

  SampleStream s;
  s.n_outcomes = n_outcomes;
  int line_no = 0;
  const std::string body = text::read_file(path);
  for (auto line : text::lines(body)) {
    ++line_no;
    line = text::trim(line);
    if (line.empty()) continue;
    const auto k = text::parse_int(line, "sample index");
    if (k < 0 || static_cast<std::size_t>(k) >= n_outcomes) {
      throw Error(ErrorKind::OutOfRange, "line " + std::to_string(line_no) + ": index " +
                                             std::to_string(k) + " outside [0, " +
                                             std::to_string(n_outcomes - 1) + "]");
    }
    s.outcomes.push_back(static_cast<std::uint32_t>(k));
  }
  if (s.outcomes.empty()) throw Error(ErrorKind::Parse, "sample file is empty");
  return s;
}

}  // namespace qwrng
