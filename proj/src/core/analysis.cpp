#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <thread>

#include "prng.hpp"
#include "text.hpp"
#include "trainer.hpp"

namespace qwrng {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 1000;

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by the Legendre continued fraction (modified Lentz), x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw Error(ErrorKind::Domain, "incomplete gamma needs a > 0 and x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chi_square_p_value(double statistic, int dof) {
  if (dof < 1) throw Error(ErrorKind::Domain, "chi-square needs dof >= 1");
  return std::clamp(regularized_gamma_q(0.5 * dof, 0.5 * statistic), 0.0, 1.0);
}

ChiSquareReport chi_square_test(const std::vector<std::uint64_t>& counts,
                                const Distribution& target) {
  if (counts.size() != target.sites()) {
    throw Error(ErrorKind::SupportMismatch,
                "counts cover " + std::to_string(counts.size()) + " sites, target " +
                    std::to_string(target.sites()));
  }
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw Error(ErrorKind::Precondition, "no observations");

  ChiSquareReport rep;
  rep.dof = static_cast<int>(target.sites()) - 1;
  if (rep.dof < 1) throw Error(ErrorKind::Domain, "chi-square needs at least two sites");
  const double n = static_cast<double>(total);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double expected = n * target.probs()[k];
    const double observed = static_cast<double>(counts[k]);
    if (expected == 0.0) {
      if (counts[k] != 0) {
        throw Error(ErrorKind::Domain, "observations at position " +
                                           std::to_string(target.position(k)) +
                                           " where the target has zero probability");
      }
      continue;
    }
    rep.statistic += (observed - expected) * (observed - expected) / expected;
  }
  rep.p_value = chi_square_p_value(rep.statistic, rep.dof);
  rep.low_count = total < 5 * target.sites();
  return rep;
}

ChiSquareReport chi_square_test(const std::map<int, std::uint64_t>& counts,
                                const Distribution& target) {
  std::vector<std::uint64_t> by_index(target.sites(), 0);
  for (const auto& [m, c] : counts) {
    if (!target.on_support(m)) {
      throw Error(ErrorKind::SupportMismatch,
                  "count at position " + std::to_string(m) + " off the target support");
    }
    by_index[static_cast<std::size_t>((m + target.steps()) / 2)] = c;
  }
  return chi_square_test(by_index, target);
}

EntropyReport entropy_report(const Distribution& dist) {
  EntropyReport rep;
  double pmax = 0.0;
  for (double p : dist.probs()) {
    if (p > 0.0) rep.shannon_bits -= p * std::log2(p);
    pmax = std::max(pmax, p);
  }
  // -log2(1) is -0.0; report a clean zero.
  rep.min_entropy_bits = pmax >= 1.0 ? 0.0 : -std::log2(pmax);
  rep.shannon_bits = std::max(rep.shannon_bits, 0.0);
  return rep;
}

Distribution empirical_distribution(const std::vector<std::uint64_t>& counts, int steps) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw Error(ErrorKind::Precondition, "no observations");
  std::vector<double> p(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    p[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  return Distribution(steps, std::move(p));
}

double ratio_to_theta_deg(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::Domain, "coin ratio outside [0, 1]");
  return std::acos(std::sqrt(r)) * 180.0 / std::numbers::pi;
}

double theta_deg_to_ratio(double theta_deg) {
  const double c = std::cos(theta_deg * std::numbers::pi / 180.0);
  return std::clamp(c * c, 0.0, 1.0);
}

CoinSchedule quantize_schedule(const CoinSchedule& schedule, double hwp_resolution_deg) {
  if (!(hwp_resolution_deg > 0.0) || !std::isfinite(hwp_resolution_deg)) {
    throw Error(ErrorKind::Domain, "wave-plate resolution must be positive");
  }
  StepGrid out = schedule.grid();
  out.for_each([&](int t, int m, double r) {
    const double phi = ratio_to_theta_deg(r) / 2.0;
    const double phi_q =
        std::clamp(std::round(phi / hwp_resolution_deg) * hwp_resolution_deg, 0.0, 45.0);
    out.at(t, m) = theta_deg_to_ratio(2.0 * phi_q);
  });
  return CoinSchedule(std::move(out));
}

RobustnessCurve robustness_sweep(const CoinSchedule& schedule, const WalkState& initial,
                                 const Distribution& target,
                                 const std::vector<double>& magnitudes, int trials,
                                 std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::Precondition, "need at least one trial");
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    if (!(magnitudes[i] >= 0.0) || (i > 0 && !(magnitudes[i] > magnitudes[i - 1]))) {
      throw Error(ErrorKind::Precondition,
                  "magnitudes must be non-negative and strictly increasing");
    }
  }
  if (target.steps() != schedule.steps()) {
    throw Error(ErrorKind::SupportMismatch, "target and schedule lengths differ");
  }

  const auto n_trials = static_cast<std::size_t>(trials);
  // fid[i * trials + j]: magnitude i, trial j.
  std::vector<double> fid(magnitudes.size() * n_trials);
  auto run_trials = [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      Prng prng(splitmix64(seed ^ splitmix64(j)));
      StepGrid noise(schedule.steps(), 0.0);
      noise.for_each([&](int t, int m, double) { noise.at(t, m) = prng.uniform(-1.0, 1.0); });
      for (std::size_t i = 0; i < magnitudes.size(); ++i) {
        StepGrid g = schedule.grid();
        g.for_each([&](int t, int m, double r) {
          g.at(t, m) = std::clamp(r + magnitudes[i] * noise.at(t, m), 0.0, 1.0);
        });
        const auto out = measure(run_walk(initial, CoinSchedule(std::move(g))));
        fid[i * n_trials + j] = fidelity(out, target);
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, n_trials);
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, run_trials, n_trials * w / workers,
                              n_trials * (w + 1) / workers));
  }
  for (auto& j : jobs) j.get();

  RobustnessCurve curve;
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    double sum = 0.0;
    double lo = 1.0;
    for (std::size_t j = 0; j < n_trials; ++j) {
      sum += fid[i * n_trials + j];
      lo = std::min(lo, fid[i * n_trials + j]);
    }
    const double mean = sum / static_cast<double>(n_trials);
    double ss = 0.0;
    for (std::size_t j = 0; j < n_trials; ++j) {
      const double d = fid[i * n_trials + j] - mean;
      ss += d * d;
    }
    const double se = n_trials > 1 ? std::sqrt(ss / static_cast<double>(n_trials - 1) /
                                               static_cast<double>(n_trials))
                                   : 0.0;
    curve.points.push_back({magnitudes[i], mean, lo, se});
  }
  return curve;
}

std::string format_robustness_csv(const RobustnessCurve& curve) {
  std::string out = "magnitude,mean_fidelity,min_fidelity\n";
  for (const auto& p : curve.points) {
    out += text::format_double(p.magnitude) + ',' + text::format_double(p.mean_fidelity) +
           ',' + text::format_double(p.min_fidelity) + '\n';
  }
  return out;
}

}  // namespace qwrng
