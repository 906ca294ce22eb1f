#pragma once

// Coined discrete-time quantum walk on the 1D integer lattice.
//
// Conventions used throughout the library:
//   * coin basis order is (L, R);
//   * the shift is coin-preserving: the L component at x moves to x-1 and the
//     R component moves to x+1;
//   * a trainable coin is the real matrix [[sqrt(r), sqrt(1-r)],
//     [sqrt(1-r), -sqrt(r)]] parameterized by the bias ratio r = cos^2(theta).

#include <array>
#include <complex>
#include <map>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "grid.hpp"

namespace qwrng {

using Complex = std::complex<double>;

inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kInputNormTol = 1e-9;

struct CoinParams {
  double theta = std::numbers::pi / 4;
  double xi = -std::numbers::pi / 2;
  double zeta = -std::numbers::pi / 2;
  double beta = std::numbers::pi / 2;
};

struct CoinMatrix {
  // Row-major (L, R) x (L, R).
  std::array<Complex, 4> entries{};

  Complex operator()(int row, int col) const { return entries[2 * row + col]; }
  Complex& operator()(int row, int col) { return entries[2 * row + col]; }

  /// max |(C^dagger C - I)_ij|
  double unitarity_defect() const;
};

struct CoinVector {
  Complex left;
  Complex right;

  double norm2() const { return std::norm(left) + std::norm(right); }
  bool operator==(const CoinVector&) const = default;
};

/// Walker amplitudes at a given step, keyed by occupied position.
class WalkState {
 public:
  using Amplitudes = std::map<int, CoinVector>;

  /// Validates support parity/bounds and normalization (within 1e-9).
  WalkState(int step, Amplitudes amplitudes);

  int step() const noexcept { return step_; }
  const Amplitudes& amplitudes() const noexcept { return amplitudes_; }
  double norm2() const;

  /// Amplitudes at x, zero if x is unoccupied.
  CoinVector at(int x) const;

 private:
  struct Unchecked {};
  WalkState(Unchecked, int step, Amplitudes amplitudes)
      : step_(step), amplitudes_(std::move(amplitudes)) {}

  friend WalkState apply_coin_layer(const WalkState&, const std::map<int, double>&);
  friend WalkState apply_shift(const WalkState&);

  int step_ = 0;
  Amplitudes amplitudes_;
};

/// Bias ratios r in [0, 1], one per (step, position) reachable by the walk.
class CoinSchedule {
 public:
  /// Throws Domain if any ratio is outside [0, 1] or not finite.
  explicit CoinSchedule(StepGrid ratios);

  static CoinSchedule constant(int steps, double r);

  /// Builds from explicit (step, position, r) triples. The key set must be
  /// exactly the reachable one, without duplicates; otherwise ScheduleShape.
  static CoinSchedule from_entries(int steps,
                                   const std::vector<std::tuple<int, int, double>>& entries);

  int steps() const noexcept { return ratios_.steps(); }
  std::size_t size() const noexcept { return ratios_.size(); }
  double ratio(int t, int m) const { return ratios_.at(t, m); }
  const StepGrid& grid() const noexcept { return ratios_; }

  /// Ratios of step t keyed by position.
  std::map<int, double> layer(int t) const;

  bool operator==(const CoinSchedule&) const = default;

 private:
  StepGrid ratios_;
};

/// Probabilities over the n+1 sites {-n, -n+2, ..., n} reached after n steps.
class Distribution {
 public:
  /// probs[k] is the probability of position -steps + 2k. Throws on wrong
  /// length, entries outside [0, 1], or a sum further than 1e-9 from one.
  Distribution(int steps, std::vector<double> probs);

  int steps() const noexcept { return steps_; }
  std::size_t sites() const noexcept { return probs_.size(); }
  const std::vector<double>& probs() const noexcept { return probs_; }

  int position(std::size_t k) const noexcept { return -steps_ + 2 * static_cast<int>(k); }
  bool on_support(int m) const noexcept;
  /// Probability at m; zero for any position off the support.
  double at(int m) const;

  bool operator==(const Distribution&) const = default;

 private:
  int steps_;
  std::vector<double> probs_;
};

CoinMatrix coin_matrix_general(const CoinParams& params);
CoinMatrix coin_matrix_from_ratio(double r);

WalkState initial_state(const CoinVector& coin);

WalkState apply_coin_layer(const WalkState& state, const std::map<int, double>& ratios);
WalkState apply_shift(const WalkState& state);
WalkState step(const WalkState& state, const std::map<int, double>& ratios);

/// Runs schedule.steps() coin+shift steps from a step-0 walker at the origin.
WalkState run_walk(const WalkState& initial, const CoinSchedule& schedule);

Distribution measure(const WalkState& state);

/// Shorthand for measure(run_walk(initial_state(coin), schedule)).
Distribution simulate(const CoinSchedule& schedule, const CoinVector& coin);

}  // namespace qwrng
