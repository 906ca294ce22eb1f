#include "trainer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "prng.hpp"

namespace qwrng {
namespace {

constexpr double kSqrtFloor = 1e-12;

void require_same_support(const Distribution& a, const Distribution& b) {
  if (a.steps() != b.steps()) {
    throw Error(ErrorKind::SupportMismatch,
                "distributions over " + std::to_string(a.steps()) + " and " +
                    std::to_string(b.steps()) + " steps");
  }
}

struct Layer {
  std::vector<CoinVector> before;  // t entries, positions -(t-1)..(t-1)
  std::vector<double> ratios;
};

}  // namespace

GradientGrid::GradientGrid(StepGrid values) : values_(std::move(values)) {
  values_.for_each([](int t, int m, double v) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::Domain, "non-finite gradient at step " + std::to_string(t) +
                                         ", position " + std::to_string(m));
    }
  });
}

double GradientGrid::max_abs() const {
  double worst = 0.0;
  values_.for_each([&](int, int, double v) { worst = std::max(worst, std::abs(v)); });
  return worst;
}

double loss(const Distribution& output, const Distribution& target) {
  require_same_support(output, target);
  double acc = 0.0;
  for (std::size_t k = 0; k < output.sites(); ++k) {
    const double d = target.probs()[k] - output.probs()[k];
    acc += d * d;
  }
  return 0.5 * acc;
}

double fidelity(const Distribution& y, const Distribution& target) {
  require_same_support(y, target);
  double overlap = 0.0;
  double norm = 0.0;
  for (std::size_t k = 0; k < y.sites(); ++k) {
    const double a = y.probs()[k];
    const double b = target.probs()[k];
    const double hi = std::max(a, b);
    overlap += a * b;
    norm += hi * hi;
  }
  return overlap / norm;
}

Evaluation evaluate(const CoinSchedule& schedule, const WalkState& initial,
                    const Distribution& target) {
  if (initial.step() != 0) {
    throw Error(ErrorKind::Precondition, "walk must start at step 0");
  }
  const int n = schedule.steps();
  if (target.steps() != n) {
    throw Error(ErrorKind::SupportMismatch,
                "target covers " + std::to_string(target.steps()) +
                    " steps but the schedule has " + std::to_string(n));
  }

  // Forward sweep over dense per-step arrays; index k <-> position -t + 2k.
  std::vector<Layer> layers(static_cast<std::size_t>(n));
  std::vector<CoinVector> psi{initial.at(0)};
  for (int t = 1; t <= n; ++t) {
    Layer& layer = layers[static_cast<std::size_t>(t - 1)];
    layer.before = psi;
    layer.ratios = schedule.grid().layer(t);
    std::vector<CoinVector> next(static_cast<std::size_t>(t) + 1);
    for (std::size_t k = 0; k < psi.size(); ++k) {
      const double s = std::sqrt(layer.ratios[k]);
      const double c = std::sqrt(1.0 - layer.ratios[k]);
      const CoinVector& v = psi[k];
      next[k].left = s * v.left + c * v.right;
      next[k + 1].right = c * v.left - s * v.right;
    }
    psi = std::move(next);
  }

  std::vector<double> probs(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) probs[k] = std::min(psi[k].norm2(), 1.0);
  Distribution output(n, probs);
  const double value = loss(output, target);

  // Reverse sweep.
  std::vector<CoinVector> adj(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double w = probs[k] - target.probs()[k];
    adj[k] = {w * psi[k].left, w * psi[k].right};
  }
  StepGrid grad(n, 0.0);
  for (int t = n; t >= 1; --t) {
    const Layer& layer = layers[static_cast<std::size_t>(t - 1)];
    std::vector<CoinVector> prev(static_cast<std::size_t>(t));
    for (std::size_t k = 0; k < prev.size(); ++k) {
      // Undo the shift: coined L at k went to k, coined R at k went to k+1.
      const Complex mu_l = adj[k].left;
      const Complex mu_r = adj[k + 1].right;
      const double r = layer.ratios[k];
      const double s = std::sqrt(r);
      const double c = std::sqrt(1.0 - r);
      const double ds = 0.5 / std::sqrt(std::max(r, kSqrtFloor));
      const double dc = -0.5 / std::sqrt(std::max(1.0 - r, kSqrtFloor));
      const CoinVector& v = layer.before[k];
      const Complex dl = ds * v.left + dc * v.right;
      const Complex dr = dc * v.left - ds * v.right;
      grad.at(t, StepGrid::position_of(t, k)) =
          2.0 * (std::conj(mu_l) * dl + std::conj(mu_r) * dr).real();
      // The coin is real symmetric, so its adjoint is itself.
      prev[k] = {s * mu_l + c * mu_r, c * mu_l - s * mu_r};
    }
    adj = std::move(prev);
  }

  return Evaluation{std::move(output), value, GradientGrid(std::move(grad))};
}

GradientGrid gradient(const CoinSchedule& schedule, const WalkState& initial,
                      const Distribution& target) {
  return evaluate(schedule, initial, target).gradient;
}

CoinSchedule apply_update(const CoinSchedule& schedule, const GradientGrid& grad,
                          double eta, double clamp_margin) {
  if (grad.steps() != schedule.steps()) {
    throw Error(ErrorKind::KeyMismatch, "gradient and schedule have different key sets");
  }
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorKind::Domain, "learning rate eta must be in (0, 1]");
  }
  if (!(clamp_margin >= 0.0 && clamp_margin <= 0.5)) {
    throw Error(ErrorKind::Domain, "clamp margin must be in [0, 0.5]");
  }
  StepGrid next = schedule.grid();
  next.for_each([&](int t, int m, double r) {
    next.at(t, m) = std::clamp(r - eta * grad.at(t, m), clamp_margin, 1.0 - clamp_margin);
  });
  return CoinSchedule(std::move(next));
}

void validate(const TrainConfig& config) {
  if (!(config.eta > 0.0 && config.eta <= 1.0)) {
    throw Error(ErrorKind::Domain, "learning rate eta must be in (0, 1]");
  }
  if (config.max_iters < 1) {
    throw Error(ErrorKind::Domain, "max_iters must be positive");
  }
  if (!(config.fidelity_goal > 0.0 && config.fidelity_goal <= 1.0)) {
    throw Error(ErrorKind::Domain, "fidelity goal must be in (0, 1]");
  }
  if (!(config.loss_tol >= 0.0)) {
    throw Error(ErrorKind::Domain, "loss tolerance must be non-negative");
  }
  if (!(config.clamp_margin >= 0.0 && config.clamp_margin <= 0.5)) {
    throw Error(ErrorKind::Domain, "clamp margin must be in [0, 0.5]");
  }
  if (const auto* c = std::get_if<ConstantInit>(&config.init)) {
    if (!(c->r0 >= 0.0 && c->r0 <= 1.0)) {
      throw Error(ErrorKind::Domain, "initial ratio must be in [0, 1]");
    }
  }
}

CoinSchedule initial_schedule(int steps, const ScheduleInit& init, double clamp_margin) {
  if (const auto* c = std::get_if<ConstantInit>(&init)) {
    return CoinSchedule::constant(steps, c->r0);
  }
  Prng prng(std::get<RandomInit>(init).seed);
  StepGrid grid(steps, 0.0);
  grid.for_each([&](int t, int m, double) {
    grid.at(t, m) = prng.uniform(clamp_margin, 1.0 - clamp_margin);
  });
  return CoinSchedule(std::move(grid));
}

int TrainReport::first_iteration_reaching(double goal) const {
  for (const auto& e : iterations) {
    if (e.fidelity >= goal) return e.iteration;
  }
  return -1;
}

TrainReport train(const WalkState& initial, const Distribution& target,
                  const TrainConfig& config) {
  validate(config);
  if (target.steps() < 1) {
    throw Error(ErrorKind::Domain, "target must cover at least one step");
  }
  CoinSchedule schedule = initial_schedule(target.steps(), config.init, config.clamp_margin);
  std::vector<TraceEntry> trace;
  for (int iter = 0;; ++iter) {
    Evaluation eval = evaluate(schedule, initial, target);
    const double f = fidelity(eval.output, target);
    trace.push_back({iter, eval.loss, f});
    const bool done = f >= config.fidelity_goal || eval.loss <= config.loss_tol;
    if (done || iter == config.max_iters) {
      return TrainReport{std::move(trace), std::move(schedule), done, std::move(eval.output)};
    }
    schedule = apply_update(schedule, eval.gradient, config.eta, config.clamp_margin);
  }
}

TrainReport train_multistart(const WalkState& initial, const Distribution& target,
                             const TrainConfig& config,
                             const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw Error(ErrorKind::Precondition, "no seeds given");
  validate(config);
  std::vector<std::future<TrainReport>> runs;
  runs.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    TrainConfig c = config;
    c.init = RandomInit{seed};
    runs.push_back(std::async(std::launch::async,
                              [&initial, &target, c] { return train(initial, target, c); }));
  }
  std::vector<TrainReport> reports;
  reports.reserve(runs.size());
  for (auto& r : runs) reports.push_back(r.get());

  std::size_t best = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const double fi = reports[i].iterations.back().fidelity;
    const double fb = reports[best].iterations.back().fidelity;
    if (fi > fb || (fi == fb && seeds[i] < seeds[best])) best = i;
  }
  return std::move(reports[best]);
}

}  // namespace qwrng
