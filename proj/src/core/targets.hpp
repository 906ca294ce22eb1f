#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "walk.hpp"

namespace qwrng {

struct UniformTarget {};
struct GaussianTarget {
  double mu = 0.0;
  double sigma = 2.0;
};
struct FileTarget {
  std::string path;
};

struct TargetSpec {
  std::variant<UniformTarget, GaussianTarget, FileTarget> kind;
  int steps = 0;
};

/// Parses "uniform", "gaussian:MU,SIGMA" or "file:PATH".
TargetSpec parse_target_spec(std::string_view text, int steps);
Distribution make_target(const TargetSpec& spec);

Distribution uniform_target(int steps);

/// Density exp(-(m - mu)^2 / (2 sigma^2)) sampled at the n+1 sites, normalized.
Distribution gaussian_target(int steps, double mu, double sigma);

/// Relative tolerance on the probability sum of user-supplied targets.
inline constexpr double kTargetSumTol = 1e-6;

/// Reads "position,probability" rows (header optional) covering exactly the
/// n+1 sites. A sum within 1e-6 of one is renormalized exactly.
Distribution load_target(std::string_view csv, int steps);

/// Header "position,probability" then one row per site, 17 significant digits.
std::string format_distribution_csv(const Distribution& dist);

}  // namespace qwrng
