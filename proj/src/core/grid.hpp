#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "error.hpp"

namespace qwrng {

/// Triangular table with one value per (step t, position m) where the walker
/// can sit right before step t: 1 <= t <= steps, |m| <= t-1, m = t-1 (mod 2).
/// Row t-1 holds t values ordered by ascending position.
class StepGrid {
 public:
  StepGrid() = default;
  StepGrid(int steps, double fill) : steps_(steps) {
    if (steps < 0) {
      throw Error(ErrorKind::Domain, "step count must be non-negative");
    }
    rows_.reserve(static_cast<std::size_t>(steps));
    for (int t = 1; t <= steps; ++t) {
      rows_.emplace_back(static_cast<std::size_t>(t), fill);
    }
  }

  int steps() const noexcept { return steps_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(steps_) * (steps_ + 1) / 2;
  }

  static bool valid_key(int steps, int t, int m) noexcept {
    if (t < 1 || t > steps) return false;
    if (m < -(t - 1) || m > t - 1) return false;
    return ((m + t - 1) % 2) == 0;
  }
  bool contains(int t, int m) const noexcept { return valid_key(steps_, t, m); }

  double at(int t, int m) const { return rows_[row(t)][col(t, m)]; }
  double& at(int t, int m) { return rows_[row(t)][col(t, m)]; }

  /// Values of step t, ascending in position (first entry is m = -(t-1)).
  const std::vector<double>& layer(int t) const { return rows_[row(t)]; }

  static int position_of(int t, std::size_t k) noexcept {
    return -(t - 1) + 2 * static_cast<int>(k);
  }

  /// Visits every key in (step, position) order.
  void for_each(const std::function<void(int t, int m, double v)>& f) const {
    for (int t = 1; t <= steps_; ++t) {
      const auto& r = rows_[static_cast<std::size_t>(t - 1)];
      for (std::size_t k = 0; k < r.size(); ++k) f(t, position_of(t, k), r[k]);
    }
  }

  bool operator==(const StepGrid&) const = default;

 private:
  std::size_t row(int t) const {
    if (t < 1 || t > steps_) {
      throw Error(ErrorKind::OutOfRange,
                  "step " + std::to_string(t) + " outside [1, " +
                      std::to_string(steps_) + "]");
    }
    return static_cast<std::size_t>(t - 1);
  }
  std::size_t col(int t, int m) const {
    if (!valid_key(steps_, t, m)) {
      throw Error(ErrorKind::OutOfRange, "no entry at step " + std::to_string(t) +
                                             ", position " + std::to_string(m));
    }
    return static_cast<std::size_t>((m + t - 1) / 2);
  }

  int steps_ = 0;
  std::vector<std::vector<double>> rows_;
};

}  // namespace qwrng
