#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "walk.hpp"

namespace qwrng {

struct ChiSquareReport {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  /// Fewer than 5 observations per site on average; the chi-square
  /// approximation is unreliable.
  bool low_count = false;
};

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double regularized_gamma_q(double a, double x);

/// Upper-tail probability of a chi-square variate with `dof` degrees of freedom.
double chi_square_p_value(double statistic, int dof);

/// Pearson goodness of fit against N * T(m). Counts are keyed by position;
/// absent positions count as zero.
ChiSquareReport chi_square_test(const std::map<int, std::uint64_t>& counts,
                                const Distribution& target);
/// Same, with counts indexed by outcome (index k is position -n + 2k).
ChiSquareReport chi_square_test(const std::vector<std::uint64_t>& counts,
                                const Distribution& target);

struct EntropyReport {
  double shannon_bits = 0.0;
  double min_entropy_bits = 0.0;
};

EntropyReport entropy_report(const Distribution& dist);

/// Empirical distribution of a histogram over the n+1 sites.
Distribution empirical_distribution(const std::vector<std::uint64_t>& counts, int steps);

// Half-wave-plate model: a plate at angle phi rotates polarization by 2 phi,
// so theta = 2 phi and r = cos^2(theta).
double ratio_to_theta_deg(double r);
double theta_deg_to_ratio(double theta_deg);

/// Rounds every plate angle phi = theta / 2 to a multiple of the resolution
/// (kept inside [0, 45] degrees) and maps back to r.
CoinSchedule quantize_schedule(const CoinSchedule& schedule, double hwp_resolution_deg);

inline constexpr double kDefaultHwpResolutionDeg = 0.25;

struct RobustnessPoint {
  double magnitude;
  double mean_fidelity;
  double min_fidelity;
  double std_error;  // of mean_fidelity
};

struct RobustnessCurve {
  std::vector<RobustnessPoint> points;
};

/// For each magnitude d, `trials` copies of the schedule with every r shifted
/// by independent uniform noise in [-d, d] (clamped to [0, 1]) are simulated
/// and scored against the target. Trial i draws its noise from a substream
/// seeded by (seed, i) and reuses it, scaled, across magnitudes.
RobustnessCurve robustness_sweep(const CoinSchedule& schedule, const WalkState& initial,
                                 const Distribution& target,
                                 const std::vector<double>& magnitudes, int trials,
                                 std::uint64_t seed);

std::string format_robustness_csv(const RobustnessCurve& curve);

}  // namespace qwrng
