// qwrng command-line tool. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 usage/validation/IO error, 2 training did not
// converge (artifacts are still written).

#include <cstdint>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwrng/qwrng.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(qwrng_status s) {
  if (s != QWRNG_OK) throw Failure(qwrng_last_error());
}

struct ScheduleDeleter {
  void operator()(qwrng_schedule* p) const { qwrng_schedule_free(p); }
};
struct DistributionDeleter {
  void operator()(qwrng_distribution* p) const { qwrng_distribution_free(p); }
};
struct ReportDeleter {
  void operator()(qwrng_train_report* p) const { qwrng_train_report_free(p); }
};
struct SamplerDeleter {
  void operator()(qwrng_sampler* p) const { qwrng_sampler_free(p); }
};
using Schedule = std::unique_ptr<qwrng_schedule, ScheduleDeleter>;
using Dist = std::unique_ptr<qwrng_distribution, DistributionDeleter>;
using Report = std::unique_ptr<qwrng_train_report, ReportDeleter>;
using Sampler = std::unique_ptr<qwrng_sampler, SamplerDeleter>;

Schedule read_schedule(const std::string& path) {
  qwrng_schedule* s = nullptr;
  check(qwrng_schedule_read(path.c_str(), &s));
  return Schedule(s);
}

Dist make_target(const std::string& spec, int steps) {
  qwrng_distribution* d = nullptr;
  check(qwrng_target_create(spec.c_str(), steps, &d));
  return Dist(d);
}

Dist simulate(const qwrng_schedule* s, const qwrng_coin& coin) {
  qwrng_distribution* d = nullptr;
  check(qwrng_simulate(s, &coin, &d));
  return Dist(d);
}

qwrng_coin parse_coin(const std::string& text) {
  qwrng_coin c{};
  check(qwrng_coin_parse(text.c_str(), &c));
  return c;
}

double fidelity(const qwrng_distribution* y, const qwrng_distribution* t) {
  double f = 0.0;
  check(qwrng_fidelity(y, t, &f));
  return f;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& contents) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw Failure("cannot open '" + path + "' for writing");
  const bool ok = std::fwrite(contents.data(), 1, contents.size(), f) == contents.size();
  if (std::fclose(f) != 0 || !ok) throw Failure("failed writing '" + path + "'");
}

// "const:R0" or "rand:SEED"
void apply_init(const std::string& spec, qwrng_train_config& cfg) {
  try {
    if (spec.rfind("const:", 0) == 0) {
      std::size_t used = 0;
      cfg.init_kind = QWRNG_INIT_CONSTANT;
      cfg.init_ratio = std::stod(spec.substr(6), &used);
      if (used != spec.size() - 6) throw std::invalid_argument(spec);
      return;
    }
    if (spec.rfind("rand:", 0) == 0) {
      std::size_t used = 0;
      cfg.init_kind = QWRNG_INIT_RANDOM;
      cfg.init_seed = std::stoull(spec.substr(5), &used);
      if (used != spec.size() - 5) throw std::invalid_argument(spec);
      return;
    }
  } catch (const std::logic_error&) {
  }
  throw Failure("invalid --init '" + spec + "' (expected const:R0 or rand:SEED)");
}

struct TrainArgs {
  int steps = 0;
  std::string target = "uniform";
  std::string initial = "circ-left";
  std::string init = "const:0.5";
  std::string out;
  std::string log;
  qwrng_train_config cfg{};
};

int run_train(const TrainArgs& a) {
  qwrng_train_config cfg = a.cfg;
  apply_init(a.init, cfg);
  check(qwrng_train_config_validate(&cfg));
  const qwrng_coin coin = parse_coin(a.initial);
  const Dist target = make_target(a.target, a.steps);

  qwrng_train_report* raw = nullptr;
  check(qwrng_train(&coin, target.get(), &cfg, &raw));
  const Report report(raw);

  qwrng_schedule* s = nullptr;
  check(qwrng_train_report_schedule(report.get(), &s));
  const Schedule schedule(s);
  check(qwrng_schedule_write(schedule.get(), a.out.c_str()));
  if (!a.log.empty()) check(qwrng_train_report_write_trace(report.get(), a.log.c_str()));

  const std::size_t n = qwrng_train_report_length(report.get());
  int iter = 0;
  double loss = 0.0;
  double fid = 0.0;
  check(qwrng_train_report_entry(report.get(), n - 1, &iter, &loss, &fid));
  if (!qwrng_train_report_converged(report.get())) {
    std::fprintf(stderr, "warning: not converged after %d iterations (fidelity %s)\n", iter,
                 fmt(fid).c_str());
    return kExitNotConverged;
  }
  std::printf("converged after %d iterations: loss %s, fidelity %s\n", iter, fmt(loss).c_str(),
              fmt(fid).c_str());
  return kExitOk;
}

struct SimulateArgs {
  std::string schedule;
  std::string initial = "circ-left";
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  const qwrng_coin coin = parse_coin(a.initial);
  const Schedule schedule = read_schedule(a.schedule);
  const Dist dist = simulate(schedule.get(), coin);
  check(qwrng_distribution_write_csv(dist.get(), a.out.c_str()));
  return kExitOk;
}

struct SampleArgs {
  std::string schedule;
  std::string initial = "circ-left";
  long long count = 0;
  std::uint64_t seed = 0;
  std::string format = "indices";
  std::string out;
};

int run_sample(const SampleArgs& a) {
  if (a.count < 1) throw Failure("--count must be at least 1");
  qwrng_sample_format format;
  if (a.format == "indices") {
    format = QWRNG_FORMAT_INDICES;
  } else if (a.format == "bits") {
    format = QWRNG_FORMAT_BITS;
  } else {
    throw Failure("--format must be 'indices' or 'bits'");
  }
  const qwrng_coin coin = parse_coin(a.initial);
  const Schedule schedule = read_schedule(a.schedule);
  const Dist dist = simulate(schedule.get(), coin);
  qwrng_sampler* raw = nullptr;
  check(qwrng_sampler_create(dist.get(), a.seed, &raw));
  const Sampler sampler(raw);
  check(qwrng_sampler_write(sampler.get(), static_cast<std::size_t>(a.count), format,
                            a.out.c_str()));
  return kExitOk;
}

struct AnalyzeArgs {
  std::string samples;
  std::string target = "uniform";
  int steps = 0;
  std::string schedule;
  std::string initial = "circ-left";
  double quantize_deg = 0.0;
  double alpha = 0.01;
  std::string out;
};

int run_analyze(const AnalyzeArgs& a) {
  Schedule schedule;
  int steps = a.steps;
  if (!a.schedule.empty()) {
    schedule = read_schedule(a.schedule);
    const int n = qwrng_schedule_steps(schedule.get());
    if (steps != 0 && steps != n) throw Failure("--steps disagrees with the schedule");
    steps = n;
  }
  if (steps < 1) throw Failure("analyze needs --steps or --schedule");
  if (a.quantize_deg != 0.0 && !schedule) throw Failure("--quantize-deg requires --schedule");

  const Dist target = make_target(a.target, steps);
  const auto sites = static_cast<std::size_t>(steps) + 1;
  std::vector<std::uint64_t> counts(sites);
  check(qwrng_samples_histogram(a.samples.c_str(), sites, counts.data()));
  std::uint64_t total = 0;
  for (auto c : counts) total += c;

  qwrng_chi_square chi{};
  check(qwrng_chi_square_test(counts.data(), counts.size(), target.get(), &chi));
  if (chi.low_count) {
    std::fprintf(stderr, "warning: fewer than 5 samples per site; chi-square is unreliable\n");
  }

  std::vector<double> freq(sites);
  for (std::size_t k = 0; k < sites; ++k) {
    freq[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  qwrng_distribution* raw = nullptr;
  check(qwrng_distribution_create(steps, freq.data(), freq.size(), &raw));
  const Dist empirical(raw);
  double shannon = 0.0;
  double min_entropy = 0.0;
  check(qwrng_entropy(empirical.get(), &shannon, &min_entropy));

  std::ostringstream out;
  out << "metric,value\n";
  out << "sample_count," << total << '\n';
  out << "chi_square_statistic," << fmt(chi.statistic) << '\n';
  out << "chi_square_dof," << chi.dof << '\n';
  out << "chi_square_p_value," << fmt(chi.p_value) << '\n';
  out << "alpha," << fmt(a.alpha) << '\n';
  out << "chi_square_rejected," << (chi.p_value < a.alpha ? 1 : 0) << '\n';
  out << "shannon_bits," << fmt(shannon) << '\n';
  out << "min_entropy_bits," << fmt(min_entropy) << '\n';
  out << "empirical_fidelity," << fmt(fidelity(empirical.get(), target.get())) << '\n';

  if (schedule && a.quantize_deg != 0.0) {
    const qwrng_coin coin = parse_coin(a.initial);
    qwrng_schedule* q = nullptr;
    check(qwrng_schedule_quantize(schedule.get(), a.quantize_deg, &q));
    const Schedule quantized(q);
    const double f_exact = fidelity(simulate(schedule.get(), coin).get(), target.get());
    const double f_quant = fidelity(simulate(quantized.get(), coin).get(), target.get());
    out << "quantize_deg," << fmt(a.quantize_deg) << '\n';
    out << "schedule_fidelity," << fmt(f_exact) << '\n';
    out << "quantized_fidelity," << fmt(f_quant) << '\n';
    out << "quantized_fidelity_delta," << fmt(f_exact - f_quant) << '\n';
  }
  write_text(a.out, out.str());
  return kExitOk;
}

struct RobustnessArgs {
  std::string schedule;
  std::string initial = "circ-left";
  std::string target = "uniform";
  std::vector<double> magnitudes{0.0, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05};
  int trials = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_robustness(const RobustnessArgs& a) {
  const qwrng_coin coin = parse_coin(a.initial);
  const Schedule schedule = read_schedule(a.schedule);
  const Dist target = make_target(a.target, qwrng_schedule_steps(schedule.get()));
  check(qwrng_robustness_sweep(schedule.get(), &coin, target.get(), a.magnitudes.data(),
                               a.magnitudes.size(), a.trials, a.seed, a.out.c_str()));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trainable quantum-walk random number generator"};
  app.require_subcommand(1);

  TrainArgs train;
  qwrng_train_config_default(&train.cfg);
  auto* t = app.add_subcommand("train", "Fit coin ratios to a target distribution");
  t->add_option("--steps", train.steps, "Walk length n")->required();
  t->add_option("--target", train.target, "uniform | gaussian:MU,SIGMA | file:PATH")
      ->capture_default_str();
  t->add_option("--eta", train.cfg.eta, "Learning rate in (0, 1]")->capture_default_str();
  t->add_option("--max-iters", train.cfg.max_iters)->capture_default_str();
  t->add_option("--fidelity-goal", train.cfg.fidelity_goal)->capture_default_str();
  t->add_option("--loss-tol", train.cfg.loss_tol)->capture_default_str();
  t->add_option("--clamp-margin", train.cfg.clamp_margin)->capture_default_str();
  t->add_option("--init", train.init, "const:R0 | rand:SEED")->capture_default_str();
  t->add_option("--initial", train.initial, "Initial coin state")->capture_default_str();
  t->add_option("--out", train.out, "Schedule file to write")->required();
  t->add_option("--log", train.log, "Per-iteration trace CSV");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Write the exact output distribution");
  s->add_option("--schedule", sim.schedule)->required();
  s->add_option("--initial", sim.initial, "L | R | circ-left | circ-right | custom:...")
      ->capture_default_str();
  s->add_option("--out", sim.out)->required();

  SampleArgs smp;
  auto* sa = app.add_subcommand("sample", "Draw seeded outcomes from the trained walk");
  sa->add_option("--schedule", smp.schedule)->required();
  sa->add_option("--initial", smp.initial)->capture_default_str();
  sa->add_option("--count", smp.count)->required();
  sa->add_option("--seed", smp.seed)->capture_default_str();
  sa->add_option("--format", smp.format, "indices | bits")->capture_default_str();
  sa->add_option("--out", smp.out)->required();

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Chi-square, entropy and quantization report");
  a->add_option("--samples", an.samples)->required();
  a->add_option("--target", an.target)->capture_default_str();
  a->add_option("--steps", an.steps, "Walk length when no schedule is given");
  a->add_option("--schedule", an.schedule);
  a->add_option("--initial", an.initial)->capture_default_str();
  a->add_option("--quantize-deg", an.quantize_deg, "Half-wave-plate resolution in degrees");
  a->add_option("--alpha", an.alpha)->capture_default_str();
  a->add_option("--out", an.out)->required();

  RobustnessArgs rb;
  auto* r = app.add_subcommand("robustness", "Fidelity under random coin-ratio errors");
  r->add_option("--schedule", rb.schedule)->required();
  r->add_option("--initial", rb.initial)->capture_default_str();
  r->add_option("--target", rb.target)->capture_default_str();
  r->add_option("--magnitudes", rb.magnitudes)->delimiter(',')->capture_default_str();
  r->add_option("--trials", rb.trials)->capture_default_str();
  r->add_option("--seed", rb.seed)->capture_default_str();
  r->add_option("--out", rb.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }

  try {
    if (*t) return run_train(train);
    if (*s) return run_simulate(sim);
    if (*sa) return run_sample(smp);
    if (*a) return run_analyze(an);
    if (*r) return run_robustness(rb);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
