#include "oracle.hpp"

#include <cmath>

namespace qwrng::oracle {

int basis_index(int steps, int x, int coin) { return 2 * (x + steps) + coin; }

DenseUnitary step_unitary(const CoinSchedule& schedule, int t) {
  const int n = schedule.steps();
  const int dim = 2 * (2 * n + 1);
  DenseUnitary coin = DenseUnitary::Identity(dim, dim);
  for (int m = -(t - 1); m <= t - 1; m += 2) {
    const double r = schedule.ratio(t, m);
    const int l = basis_index(n, m, 0);
    coin(l, l) = std::sqrt(r);
    coin(l, l + 1) = std::sqrt(1.0 - r);
    coin(l + 1, l) = std::sqrt(1.0 - r);
    coin(l + 1, l + 1) = -std::sqrt(r);
  }
  DenseUnitary shift = DenseUnitary::Zero(dim, dim);
  const int span = 2 * n + 1;
  for (int x = -n; x <= n; ++x) {
    const int left_to = ((x - 1 + n) % span + span) % span - n;
    const int right_to = ((x + 1 + n) % span + span) % span - n;
    shift(basis_index(n, left_to, 0), basis_index(n, x, 0)) = 1.0;
    shift(basis_index(n, right_to, 1), basis_index(n, x, 1)) = 1.0;
  }
  return shift * coin;
}

DenseUnitary walk_unitary(const CoinSchedule& schedule) {
  const int dim = 2 * (2 * schedule.steps() + 1);
  DenseUnitary u = DenseUnitary::Identity(dim, dim);
  for (int t = 1; t <= schedule.steps(); ++t) u = step_unitary(schedule, t) * u;
  return u;
}

Distribution dense_walk(const CoinSchedule& schedule, const CoinVector& initial) {
  const int n = schedule.steps();
  if (n > kMaxDenseSteps) {
    throw Error(ErrorKind::Size, "dense oracle supports at most 10 steps");
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * (2 * n + 1));
  psi(basis_index(n, 0, 0)) = initial.left;
  psi(basis_index(n, 0, 1)) = initial.right;
  psi = walk_unitary(schedule) * psi;

  std::vector<double> probs;
  for (int x = -n; x <= n; x += 2) {
    probs.push_back(std::min(
        1.0, std::norm(psi(basis_index(n, x, 0))) + std::norm(psi(basis_index(n, x, 1)))));
  }
  return Distribution(n, std::move(probs));
}

GradientGrid fd_gradient(const CoinSchedule& schedule, const WalkState& initial,
                         const Distribution& target, double h) {
  const CoinVector coin = initial.at(0);
  auto loss_at = [&](const StepGrid& g) {
    const Distribution p = dense_walk(CoinSchedule(g), coin);
    double acc = 0.0;
    for (std::size_t k = 0; k < p.sites(); ++k) {
      const double d = target.probs()[k] - p.probs()[k];
      acc += d * d;
    }
    return 0.5 * acc;
  };
  StepGrid out(schedule.steps(), 0.0);
  schedule.grid().for_each([&](int t, int m, double r) {
    auto shifted = [&](double dr) {
      StepGrid g = schedule.grid();
      g.at(t, m) = r + dr;
      return loss_at(g);
    };
    double d;
    if (r - h < 0.0) {
      d = (-3.0 * shifted(0.0) + 4.0 * shifted(h) - shifted(2.0 * h)) / (2.0 * h);
    } else if (r + h > 1.0) {
      d = (3.0 * shifted(0.0) - 4.0 * shifted(-h) + shifted(-2.0 * h)) / (2.0 * h);
    } else {
      d = (shifted(h) - shifted(-h)) / (2.0 * h);
    }
    out.at(t, m) = d;
  });
  return GradientGrid(std::move(out));
}

}  // namespace qwrng::oracle
