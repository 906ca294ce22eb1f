#include "walk.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace qwrng {

double CoinMatrix::unitarity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Complex acc = std::conj((*this)(0, i)) * (*this)(0, j) +
                    std::conj((*this)(1, i)) * (*this)(1, j);
      if (i == j) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

WalkState::WalkState(int step, Amplitudes amplitudes)
    : step_(step), amplitudes_(std::move(amplitudes)) {
  if (step_ < 0) throw Error(ErrorKind::Domain, "walk step must be non-negative");
  for (const auto& [x, c] : amplitudes_) {
    if (std::abs(x) > step_ || ((x + step_) % 2) != 0) {
      throw Error(ErrorKind::OutOfRange,
                  "position " + std::to_string(x) + " unreachable at step " +
                      std::to_string(step_));
    }
    if (!std::isfinite(c.left.real()) || !std::isfinite(c.left.imag()) ||
        !std::isfinite(c.right.real()) || !std::isfinite(c.right.imag())) {
      throw Error(ErrorKind::Domain, "non-finite amplitude at " + std::to_string(x));
    }
  }
  if (std::abs(norm2() - 1.0) > kInputNormTol) {
    throw Error(ErrorKind::Normalization, "walk state is not normalized");
  }
}

double WalkState::norm2() const {
  double s = 0.0;
  for (const auto& [x, c] : amplitudes_) s += c.norm2();
  return s;
}

CoinVector WalkState::at(int x) const {
  auto it = amplitudes_.find(x);
  return it == amplitudes_.end() ? CoinVector{} : it->second;
}

CoinSchedule::CoinSchedule(StepGrid ratios) : ratios_(std::move(ratios)) {
  ratios_.for_each([](int t, int m, double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw Error(ErrorKind::Domain, "coin ratio at step " + std::to_string(t) +
                                         ", position " + std::to_string(m) +
                                         " outside [0, 1]");
    }
  });
}

CoinSchedule CoinSchedule::constant(int steps, double r) {
  return CoinSchedule(StepGrid(steps, r));
}

CoinSchedule CoinSchedule::from_entries(
    int steps, const std::vector<std::tuple<int, int, double>>& entries) {
  if (steps < 0) throw Error(ErrorKind::ScheduleShape, "negative step count");
  StepGrid grid(steps, 0.0);
  std::set<std::pair<int, int>> seen;
  for (const auto& [t, m, r] : entries) {
    if (!grid.contains(t, m)) {
      throw Error(ErrorKind::ScheduleShape, "unexpected schedule entry at step " +
                                                std::to_string(t) + ", position " +
                                                std::to_string(m));
    }
    if (!seen.emplace(t, m).second) {
      throw Error(ErrorKind::ScheduleShape, "duplicate schedule entry at step " +
                                                std::to_string(t) + ", position " +
                                                std::to_string(m));
    }
    grid.at(t, m) = r;
  }
  if (seen.size() != grid.size()) {
    throw Error(ErrorKind::ScheduleShape,
                "schedule has " + std::to_string(seen.size()) + " entries, expected " +
                    std::to_string(grid.size()));
  }
  return CoinSchedule(std::move(grid));
}

std::map<int, double> CoinSchedule::layer(int t) const {
  std::map<int, double> out;
  const auto& row = ratios_.layer(t);
  for (std::size_t k = 0; k < row.size(); ++k) {
    out.emplace(StepGrid::position_of(t, k), row[k]);
  }
  return out;
}

Distribution::Distribution(int steps, std::vector<double> probs)
    : steps_(steps), probs_(std::move(probs)) {
  if (steps_ < 0) throw Error(ErrorKind::Domain, "step count must be non-negative");
  if (probs_.size() != static_cast<std::size_t>(steps_) + 1) {
    throw Error(ErrorKind::SupportMismatch,
                "distribution over " + std::to_string(steps_) + " steps needs " +
                    std::to_string(steps_ + 1) + " sites, got " +
                    std::to_string(probs_.size()));
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::Domain, "probability outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kInputNormTol) {
    throw Error(ErrorKind::Normalization,
                "probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

bool Distribution::on_support(int m) const noexcept {
  return std::abs(m) <= steps_ && ((m + steps_) % 2) == 0;
}

double Distribution::at(int m) const {
  if (!on_support(m)) return 0.0;
  return probs_[static_cast<std::size_t>((m + steps_) / 2)];
}

CoinMatrix coin_matrix_general(const CoinParams& p) {
  if (!(p.theta >= 0.0 && p.theta <= std::numbers::pi / 2)) {
    throw Error(ErrorKind::Domain, "theta must lie in [0, pi/2]");
  }
  const Complex global = std::polar(1.0, p.beta);
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  CoinMatrix m;
  m(0, 0) = global * std::polar(c, p.xi);
  m(0, 1) = global * std::polar(s, p.zeta);
  m(1, 0) = -global * std::polar(s, -p.zeta);
  m(1, 1) = global * std::polar(c, -p.xi);
  return m;
}

CoinMatrix coin_matrix_from_ratio(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw Error(ErrorKind::Domain, "coin ratio must lie in [0, 1]");
  }
  const double a = std::sqrt(r);
  const double b = std::sqrt(1.0 - r);
  CoinMatrix m;
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = b;
  m(1, 1) = -a;
  return m;
}

WalkState initial_state(const CoinVector& coin) {
  return WalkState(0, {{0, coin}});
}

WalkState apply_coin_layer(const WalkState& state, const std::map<int, double>& ratios) {
  WalkState::Amplitudes out;
  for (const auto& [x, c] : state.amplitudes()) {
    auto it = ratios.find(x);
    if (it == ratios.end()) {
      throw Error(ErrorKind::MissingRatio,
                  "no coin ratio for occupied position " + std::to_string(x));
    }
    const CoinMatrix m = coin_matrix_from_ratio(it->second);
    out.emplace(x, CoinVector{m(0, 0) * c.left + m(0, 1) * c.right,
                              m(1, 0) * c.left + m(1, 1) * c.right});
  }
  return WalkState(WalkState::Unchecked{}, state.step(), std::move(out));
}

WalkState apply_shift(const WalkState& state) {
  WalkState::Amplitudes out;
  for (const auto& [x, c] : state.amplitudes()) {
    if (c.left != 0.0) out[x - 1].left += c.left;
    if (c.right != 0.0) out[x + 1].right += c.right;
  }
  return WalkState(WalkState::Unchecked{}, state.step() + 1, std::move(out));
}

WalkState step(const WalkState& state, const std::map<int, double>& ratios) {
  return apply_shift(apply_coin_layer(state, ratios));
}

WalkState run_walk(const WalkState& initial, const CoinSchedule& schedule) {
  if (initial.step() != 0) {
    throw Error(ErrorKind::Precondition, "walk must start at step 0");
  }
  WalkState state = initial;
  for (int t = 1; t <= schedule.steps(); ++t) state = step(state, schedule.layer(t));
  return state;
}

Distribution measure(const WalkState& state) {
  const int n = state.step();
  std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);
  for (const auto& [x, c] : state.amplitudes()) {
    // |amp|^2 can overshoot 1 by an ulp for a fully localized walker.
    probs[static_cast<std::size_t>((x + n) / 2)] = std::min(c.norm2(), 1.0);
  }
  return Distribution(n, std::move(probs));
}

Distribution simulate(const CoinSchedule& schedule, const CoinVector& coin) {
  return measure(run_walk(initial_state(coin), schedule));
}

}  // namespace qwrng
