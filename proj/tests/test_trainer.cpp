#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "targets.hpp"
#include "trainer.hpp"

using namespace qwrng;

namespace {

CoinSchedule random_schedule(std::mt19937_64& rng, int steps, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  StepGrid g(steps, 0.0);
  g.for_each([&](int t, int m, double) { g.at(t, m) = u(rng); });
  return CoinSchedule(g);
}

CoinVector random_coin(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CoinVector c{{g(rng), g(rng)}, {g(rng), g(rng)}};
  const double n = std::sqrt(c.norm2());
  return {c.left / n, c.right / n};
}

Distribution random_distribution(std::mt19937_64& rng, int steps) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(static_cast<std::size_t>(steps) + 1);
  double s = 0.0;
  for (auto& v : p) s += (v = u(rng));
  for (auto& v : p) v /= s;
  return Distribution(steps, p);
}

const CoinVector kCircLeft{1.0 / std::sqrt(2.0), Complex(0.0, 1.0 / std::sqrt(2.0))};

}  // namespace

TEST_CASE("loss examples") {
  const Distribution y(1, {1.0, 0.0});
  const Distribution t(1, {0.5, 0.5});
  CHECK(loss(t, t) == 0.0);
  CHECK(loss(y, y) == 0.0);
  CHECK(loss(y, t) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(loss(y, uniform_target(2)), Error);
}

TEST_CASE("fidelity examples") {
  const Distribution t(1, {1.0, 0.0});
  CHECK(fidelity(t, t) == 1.0);
  CHECK(fidelity(Distribution(1, {0.0, 1.0}), t) == 0.0);
  CHECK(fidelity(Distribution(1, {0.5, 0.5}), t) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK_THROWS_AS(fidelity(t, uniform_target(4)), Error);
}

TEST_CASE("fidelity bounds and symmetry") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 6;
    const auto a = random_distribution(rng, n);
    const auto b = random_distribution(rng, n);
    const double f = fidelity(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(f == fidelity(b, a));
    CHECK(std::abs(fidelity(a, a) - 1.0) <= 1e-12);
  }
}

TEST_CASE("one-step gradient") {
  const auto g = gradient(CoinSchedule::constant(1, 0.3), initial_state({1.0, 0.0}),
                          uniform_target(1));
  CHECK(g.at(1, 0) == doctest::Approx(-0.4).epsilon(1e-14));
}

TEST_CASE("gradient vanishes when the output already equals the target") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 20; ++i) {
    const auto sched = random_schedule(rng, 5);
    const auto coin = random_coin(rng);
    const auto g = gradient(sched, initial_state(coin), simulate(sched, coin));
    CHECK(g.max_abs() <= 1e-14);
  }
}

TEST_CASE("adjoint gradient matches central differences") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 6;
    const auto sched = random_schedule(rng, n, 0.01, 0.99);
    const auto init = initial_state(random_coin(rng));
    const auto target = random_distribution(rng, n);
    const auto exact = gradient(sched, init, target);
    const auto fd = oracle::fd_gradient(sched, init, target, 1e-5);
    sched.grid().for_each([&](int t, int m, double) {
      REQUIRE(std::abs(exact.at(t, m) - fd.at(t, m)) <= 1e-6);
    });
  }
}

TEST_CASE("negative gradient is a descent direction") {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 100; ++i) {
    const auto sched = random_schedule(rng, 4, 0.05, 0.95);
    const auto coin = random_coin(rng);
    const auto init = initial_state(coin);
    const auto target = random_distribution(rng, 4);
    const auto g = gradient(sched, init, target);
    if (g.max_abs() == 0.0) continue;
    // Two-sided difference of L along -g / |g|.
    double norm = 0.0;
    g.grid().for_each([&](int, int, double v) { norm += v * v; });
    norm = std::sqrt(norm);
    const double h = 1e-6;
    auto moved = [&](double s) {
      StepGrid x = sched.grid();
      x.for_each([&](int t, int m, double r) { x.at(t, m) = r - s * g.at(t, m) / norm; });
      return loss(simulate(CoinSchedule(x), coin), target);
    };
    CHECK((moved(h) - moved(-h)) / (2 * h) < 0.0);
  }
}

TEST_CASE("update examples") {
  const auto s = CoinSchedule::constant(1, 0.3);
  const GradientGrid g(StepGrid(1, -0.4));
  CHECK(apply_update(s, g, 0.1).ratio(1, 0) == doctest::Approx(0.34).epsilon(1e-15));

  const GradientGrid push(StepGrid(1, -0.5));
  CHECK(apply_update(CoinSchedule::constant(1, 0.99), push, 0.1, 0.0).ratio(1, 0) == 1.0);
  CHECK(apply_update(CoinSchedule::constant(1, 0.99), push, 0.1, 0.01).ratio(1, 0) == 0.99);

  const GradientGrid zero(StepGrid(3, 0.0));
  const auto r = CoinSchedule::constant(3, 0.42);
  CHECK(apply_update(r, zero, 0.7) == r);

  CHECK_THROWS_AS(apply_update(r, g, 0.1), Error);
  CHECK_THROWS_AS(apply_update(s, g, 1.5), Error);
  CHECK_THROWS_AS(apply_update(s, g, 0.0), Error);
}

TEST_CASE("config validation") {
  TrainConfig c;
  CHECK_NOTHROW(validate(c));
  c.eta = 1.5;
  CHECK_THROWS_AS(validate(c), Error);
  c = {};
  c.eta = 1.0;
  CHECK_NOTHROW(validate(c));
  c.max_iters = 0;
  CHECK_THROWS_AS(validate(c), Error);
  c = {};
  c.fidelity_goal = 0.0;
  CHECK_THROWS_AS(validate(c), Error);
  c = {};
  c.init = ConstantInit{1.2};
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("training reaches the ballistic corner") {
  Distribution corner(4, {1.0, 0.0, 0.0, 0.0, 0.0});
  TrainConfig c;
  c.max_iters = 2000;
  const auto rep = train(initial_state({1.0, 0.0}), corner, c);
  CHECK(rep.converged);
  CHECK(rep.iterations.back().fidelity >= 0.999);
  // Only the ratios on the walker's path matter; those must approach 1.
  for (int t = 1; t <= 4; ++t) CHECK(rep.final_schedule.ratio(t, -(t - 1)) > 0.99);
}

TEST_CASE("training trace bookkeeping") {
  TrainConfig c;
  c.max_iters = 7;
  c.fidelity_goal = 1.0;
  c.loss_tol = 0.0;
  const auto rep = train(initial_state(kCircLeft), uniform_target(4), c);
  CHECK_FALSE(rep.converged);
  REQUIRE(rep.iterations.size() == 8);
  for (std::size_t i = 0; i < rep.iterations.size(); ++i) {
    CHECK(rep.iterations[i].iteration == static_cast<int>(i));
    CHECK(rep.iterations[i].loss >= 0.0);
    CHECK(rep.iterations[i].fidelity >= 0.0);
    CHECK(rep.iterations[i].fidelity <= 1.0);
  }
  // Iteration 0 is the unbiased Hadamard walk.
  CHECK(rep.iterations[0].fidelity ==
        fidelity(simulate(CoinSchedule::constant(4, 0.5), kCircLeft), uniform_target(4)));
  CHECK(rep.output == simulate(rep.final_schedule, kCircLeft));
}

TEST_CASE("training is deterministic and random init depends on the seed") {
  TrainConfig c;
  c.init = RandomInit{99};
  c.max_iters = 60;
  const auto a = train(initial_state(kCircLeft), gaussian_target(4, 0.0, 2.0), c);
  const auto b = train(initial_state(kCircLeft), gaussian_target(4, 0.0, 2.0), c);
  CHECK(a.iterations == b.iterations);
  CHECK(a.final_schedule == b.final_schedule);

  CHECK(initial_schedule(4, RandomInit{1}) == initial_schedule(4, RandomInit{1}));
  CHECK_FALSE(initial_schedule(4, RandomInit{1}) == initial_schedule(4, RandomInit{2}));
  const auto margin = initial_schedule(6, RandomInit{5}, 0.1);
  margin.grid().for_each([](int, int, double r) {
    CHECK(r >= 0.1);
    CHECK(r <= 0.9);
  });
}

TEST_CASE("every schedule visited in training is valid") {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 20; ++i) {
    const auto coin = random_coin(rng);
    const auto target = random_distribution(rng, 4);
    auto sched = initial_schedule(4, RandomInit{static_cast<std::uint64_t>(i)});
    for (int it = 0; it < 50; ++it) {
      const auto g = gradient(sched, initial_state(coin), target);
      sched = apply_update(sched, g, 1.0);
      sched.grid().for_each([](int, int, double r) { REQUIRE((r >= 0.0 && r <= 1.0)); });
      REQUIRE(sched.size() == 10);
    }
  }
}

TEST_CASE("multistart picks the best seed, lowest seed on ties") {
  TrainConfig c;
  c.max_iters = 40;
  const auto init = initial_state(kCircLeft);
  const auto target = gaussian_target(4, 0.0, 2.0);
  const std::vector<std::uint64_t> seeds{5, 3, 8};
  const auto best = train_multistart(init, target, c, seeds);
  double top = 0.0;
  for (auto s : seeds) {
    TrainConfig one = c;
    one.init = RandomInit{s};
    top = std::max(top, train(init, target, one).iterations.back().fidelity);
  }
  CHECK(best.iterations.back().fidelity == top);

  // Duplicate seeds tie exactly; the result must equal a single run.
  const auto tie = train_multistart(init, target, c, {7, 7});
  TrainConfig seven = c;
  seven.init = RandomInit{7};
  CHECK(tie.iterations == train(init, target, seven).iterations);
}
