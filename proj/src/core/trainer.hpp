#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "walk.hpp"

namespace qwrng {

/// dL/dr for every entry of a CoinSchedule, same key set.
class GradientGrid {
 public:
  explicit GradientGrid(StepGrid values);

  int steps() const noexcept { return values_.steps(); }
  double at(int t, int m) const { return values_.at(t, m); }
  const StepGrid& grid() const noexcept { return values_; }
  /// max |entry|
  double max_abs() const;

 private:
  StepGrid values_;
};

/// L = 1/2 sum_j (T_j - P_j)^2
double loss(const Distribution& output, const Distribution& target);

/// sum_m y(m) T(m) / sum_m max(y(m), T(m))^2
double fidelity(const Distribution& y, const Distribution& target);

struct Evaluation {
  Distribution output;
  double loss;
  GradientGrid gradient;
};

/// Forward walk plus one reverse (adjoint) sweep giving every dL/dr at once.
///
/// The walk is linear in the amplitudes, psi_t = S C_t psi_{t-1}, so with
/// g = (P - T) * psi_n on the final sites, dL/dr = 2 Re <lambda_t, dC_t/dr psi_{t-1}>
/// where lambda_t is g pulled back through the later (unitary, real) layers.
/// d sqrt(r)/dr diverges at r in {0, 1}; there the derivative is evaluated with
/// the square-root argument floored at 1e-12.
Evaluation evaluate(const CoinSchedule& schedule, const WalkState& initial,
                    const Distribution& target);

GradientGrid gradient(const CoinSchedule& schedule, const WalkState& initial,
                      const Distribution& target);

/// r <- clamp(r - eta * dL/dr, margin, 1 - margin)
CoinSchedule apply_update(const CoinSchedule& schedule, const GradientGrid& grad,
                          double eta, double clamp_margin = 0.0);

struct ConstantInit {
  double r0 = 0.5;
};
struct RandomInit {
  std::uint64_t seed = 0;
};
using ScheduleInit = std::variant<ConstantInit, RandomInit>;

struct TrainConfig {
  double eta = 0.1;
  int max_iters = 500;
  double fidelity_goal = 0.999;
  double loss_tol = 1e-8;
  ScheduleInit init = ConstantInit{};
  double clamp_margin = 0.0;
};

/// Throws Domain describing the first invalid field.
void validate(const TrainConfig& config);

CoinSchedule initial_schedule(int steps, const ScheduleInit& init, double clamp_margin = 0.0);

struct TraceEntry {
  int iteration;
  double loss;
  double fidelity;

  bool operator==(const TraceEntry&) const = default;
};

struct TrainReport {
  std::vector<TraceEntry> iterations;
  CoinSchedule final_schedule;
  bool converged;
  Distribution output;

  /// First iteration whose fidelity reached `goal`, or -1.
  int first_iteration_reaching(double goal) const;
};

/// Gradient descent from config.init. Entry 0 of the trace is the initial
/// schedule; entry i follows the i-th update. Stops as soon as the fidelity
/// reaches fidelity_goal or the loss drops to loss_tol (converged), or after
/// max_iters updates (not converged).
TrainReport train(const WalkState& initial, const Distribution& target,
                  const TrainConfig& config);

/// Trains once per seed with RandomInit, concurrently, and returns the report
/// with the highest final fidelity; ties go to the lowest seed.
TrainReport train_multistart(const WalkState& initial, const Distribution& target,
                             const TrainConfig& config,
                             const std::vector<std::uint64_t>& seeds);

}  // namespace qwrng
