#include <cmath>
#include <filesystem>
#include <random>

#include "analysis.hpp"
#include "doctest.h"
#include "sampler.hpp"
#include "targets.hpp"

using namespace qwrng;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qwrng_test_sampler_" + name)).string();
}

}  // namespace

TEST_CASE("sampler cdf") {
  const auto s = build_sampler(uniform_target(4), 1);
  const std::vector<double> expected{0.2, 0.4, 0.6, 0.8, 1.0};
  REQUIRE(s.cdf().size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(s.cdf()[k] - expected[k]) <= 1e-15);
  CHECK(s.cdf().back() == 1.0);

  const auto point = build_sampler(Distribution(3, {0.0, 0.0, 1.0, 0.0}), 1);
  CHECK(point.cdf() == std::vector<double>{0.0, 0.0, 1.0, 1.0});
}

TEST_CASE("sampler state is a function of the seed") {
  CHECK(build_sampler(uniform_target(4), 77).prng() == build_sampler(uniform_target(4), 77).prng());
  CHECK_FALSE(build_sampler(uniform_target(4), 77).prng() ==
              build_sampler(uniform_target(4), 78).prng());
}

TEST_CASE("degenerate distribution always yields its single site") {
  auto s = build_sampler(Distribution(3, {0.0, 0.0, 1.0, 0.0}), 5);
  const auto stream = draw(s, 10000);
  for (auto k : stream.outcomes) REQUIRE(k == 2);
}

TEST_CASE("trailing zero-probability sites are never drawn") {
  // 0.1 * 3 + 0.7 sums to 1 - 1ulp-ish; the last site must stay unreachable.
  auto s = build_sampler(Distribution(4, {0.1, 0.1, 0.1, 0.7, 0.0}), 6);
  const auto h = draw(s, 200000).histogram();
  CHECK(h[4] == 0);
}

TEST_CASE("same seed and count give the same stream") {
  auto a = build_sampler(gaussian_target(6, 0.0, 2.0), 123);
  auto b = build_sampler(gaussian_target(6, 0.0, 2.0), 123);
  CHECK(draw(a, 5000).outcomes == draw(b, 5000).outcomes);
  CHECK(a.prng() == b.prng());
}

TEST_CASE("count must be positive") {
  auto s = build_sampler(uniform_target(2), 1);
  CHECK_THROWS_AS(draw(s, 0), Error);
}

TEST_CASE("million-draw uniform frequencies") {
  const auto target = uniform_target(4);
  auto s = build_sampler(target, 2024);
  const auto h = draw(s, 1000000).histogram();
  for (auto c : h) CHECK(std::abs(static_cast<double>(c) / 1e6 - 0.2) <= 0.002);
  // df = 4, alpha = 0.01 critical value.
  CHECK(chi_square_test(h, target).statistic < 13.276704135987622);
}

TEST_CASE("empirical frequencies stay within five binomial sigmas") {
  const auto target = gaussian_target(6, 0.5, 1.7);
  auto s = build_sampler(target, 99);
  const double n = 1e6;
  const auto h = draw(s, 1000000).histogram();
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double p = target.probs()[k];
    CHECK(std::abs(static_cast<double>(h[k]) - n * p) <= 5.0 * std::sqrt(n * p * (1 - p)) + 1e-9);
  }
}

TEST_CASE("bit encoding examples") {
  SampleStream four{{0, 1, 2, 3}, 4};
  CHECK(encode_bits(four, 4) == std::vector<std::uint8_t>{0, 0, 0, 1, 1, 0, 1, 1});
  SampleStream five{{4}, 5};
  CHECK(encode_bits(five, 5) == std::vector<std::uint8_t>{1, 0, 0});
  SampleStream bad{{5}, 5};
  CHECK_THROWS_AS(encode_bits(bad, 5), Error);
  CHECK(field_width(2) == 1);
  CHECK(field_width(8) == 3);
  CHECK(field_width(9) == 4);
  CHECK_THROWS_AS(field_width(1), Error);
}

TEST_CASE("decode inverts encode, and packing inverts unpacking") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 200; ++i) {
    const std::size_t outcomes = 2 + rng() % 30;
    SampleStream s;
    s.n_outcomes = outcomes;
    const std::size_t len = 1 + rng() % 50;
    for (std::size_t j = 0; j < len; ++j) s.outcomes.push_back(static_cast<std::uint32_t>(rng() % outcomes));
    const auto bits = encode_bits(s, outcomes);
    CHECK(decode_bits(bits, outcomes).outcomes == s.outcomes);
    const auto packed = pack_bits(bits);
    CHECK(packed.padding < 8);
    CHECK(packed.bytes.size() * 8 - packed.padding == bits.size());
    CHECK(unpack_bits(packed) == bits);
  }
}

TEST_CASE("sample files round-trip in both formats") {
  auto s = build_sampler(uniform_target(4), 3);
  const auto stream = draw(s, 1001);
  const auto idx = temp_path("indices.txt");
  write_samples(idx, stream, SampleFormat::Indices);
  CHECK(read_samples(idx, 5).outcomes == stream.outcomes);

  const auto bin = temp_path("bits.bin");
  write_samples(bin, stream, SampleFormat::Bits);
  CHECK(std::filesystem::file_size(bin) == (1001 * 3 + 7) / 8);
  CHECK(read_samples(bin, 5).outcomes == stream.outcomes);
  CHECK_THROWS_AS(read_samples(bin, 9), Error);

  std::filesystem::remove(idx);
  std::filesystem::remove(bin);
  std::filesystem::remove(sidecar_path(bin));
}

TEST_CASE("index files with out-of-range entries are rejected") {
  const auto path = temp_path("bad.txt");
  {
    SampleStream s{{0, 1, 7}, 8};
    write_samples(path, s, SampleFormat::Indices);
  }
  CHECK_THROWS_AS(read_samples(path, 5), Error);
  std::filesystem::remove(path);
}
