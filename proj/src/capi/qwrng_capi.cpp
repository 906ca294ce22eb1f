#include "qwrng/qwrng.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <string_view>

#include "analysis.hpp"
#include "sampler.hpp"
#include "schedule_io.hpp"
#include "targets.hpp"
#include "text.hpp"
#include "trainer.hpp"
#include "walk.hpp"

struct qwrng_schedule {
  qwrng::CoinSchedule value;
};
struct qwrng_distribution {
  qwrng::Distribution value;
};
struct qwrng_train_report {
  qwrng::TrainReport value;
};
struct qwrng_sampler {
  qwrng::Sampler value;
};

namespace {

thread_local std::string g_last_error;

qwrng_status fail(qwrng_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

qwrng_status status_of(qwrng::ErrorKind k) {
  using qwrng::ErrorKind;
  switch (k) {
    case ErrorKind::Domain: return QWRNG_ERR_DOMAIN;
    case ErrorKind::Normalization: return QWRNG_ERR_NORMALIZATION;
    case ErrorKind::MissingRatio:
    case ErrorKind::ScheduleShape:
    case ErrorKind::KeyMismatch: return QWRNG_ERR_SHAPE;
    case ErrorKind::SupportMismatch: return QWRNG_ERR_SUPPORT;
    case ErrorKind::Parse: return QWRNG_ERR_PARSE;
    case ErrorKind::Io: return QWRNG_ERR_IO;
    case ErrorKind::OutOfRange: return QWRNG_ERR_OUT_OF_RANGE;
    case ErrorKind::Precondition:
    case ErrorKind::Size: return QWRNG_ERR_INVALID_ARGUMENT;
  }
  return QWRNG_ERR_INTERNAL;
}

// Runs f, translating exceptions into status codes.
template <typename F>
qwrng_status guarded(F&& f) {
  try {
    f();
    return QWRNG_OK;
  } catch (const qwrng::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QWRNG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QWRNG_ERR_INTERNAL, e.what());
  }
}

#define QWRNG_REQUIRE(ptr)                                                          \
  do {                                                                              \
    if ((ptr) == nullptr) return fail(QWRNG_ERR_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

qwrng::CoinVector to_core(const qwrng_coin& c) {
  return {{c.left_re, c.left_im}, {c.right_re, c.right_im}};
}

qwrng::WalkState initial_of(const qwrng_coin* c) { return qwrng::initial_state(to_core(*c)); }

qwrng::TrainConfig to_core(const qwrng_train_config& c) {
  qwrng::TrainConfig out;
  out.eta = c.eta;
  out.max_iters = c.max_iters;
  out.fidelity_goal = c.fidelity_goal;
  out.loss_tol = c.loss_tol;
  out.clamp_margin = c.clamp_margin;
  if (c.init_kind == QWRNG_INIT_CONSTANT) {
    out.init = qwrng::ConstantInit{c.init_ratio};
  } else if (c.init_kind == QWRNG_INIT_RANDOM) {
    out.init = qwrng::RandomInit{c.init_seed};
  } else {
    throw qwrng::Error(qwrng::ErrorKind::Precondition, "unknown initialization kind");
  }
  return out;
}

}  // namespace

extern "C" {

const char* qwrng_version(void) { return "1.0.0"; }

const char* qwrng_last_error(void) { return g_last_error.c_str(); }

const char* qwrng_status_name(qwrng_status status) {
  switch (status) {
    case QWRNG_OK: return "ok";
    case QWRNG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QWRNG_ERR_DOMAIN: return "domain error";
    case QWRNG_ERR_NORMALIZATION: return "normalization error";
    case QWRNG_ERR_SHAPE: return "shape error";
    case QWRNG_ERR_SUPPORT: return "support mismatch";
    case QWRNG_ERR_PARSE: return "parse error";
    case QWRNG_ERR_IO: return "I/O error";
    case QWRNG_ERR_OUT_OF_RANGE: return "out of range";
    case QWRNG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

qwrng_status qwrng_coin_parse(const char* text, qwrng_coin* out) {
  QWRNG_REQUIRE(text);
  QWRNG_REQUIRE(out);
  return guarded([&] {
    const std::string_view s(text);
    const double h = 1.0 / std::sqrt(2.0);
    qwrng_coin c{};
    if (s == "L") {
      c = {1, 0, 0, 0};
    } else if (s == "R") {
      c = {0, 0, 1, 0};
    } else if (s == "circ-left") {
      c = {h, 0, 0, h};
    } else if (s == "circ-right") {
      c = {h, 0, 0, -h};
    } else if (s.starts_with("custom:")) {
      const auto f = qwrng::text::split(s.substr(7), ',');
      if (f.size() != 4) {
        throw qwrng::Error(qwrng::ErrorKind::Parse,
                           "custom state must be 'custom:aL_re,aL_im,aR_re,aR_im'");
      }
      c = {qwrng::text::parse_double(f[0], "amplitude"),
           qwrng::text::parse_double(f[1], "amplitude"),
           qwrng::text::parse_double(f[2], "amplitude"),
           qwrng::text::parse_double(f[3], "amplitude")};
    } else {
      throw qwrng::Error(qwrng::ErrorKind::Parse,
                         "unknown initial state '" + std::string(s) +
                             "' (expected L, R, circ-left, circ-right or custom:...)");
    }
    qwrng::initial_state(to_core(c));  // validates normalization
    *out = c;
  });
}

qwrng_status qwrng_schedule_create_constant(int steps, double r, qwrng_schedule** out) {
  QWRNG_REQUIRE(out);
  return guarded([&] {
    *out = new qwrng_schedule{qwrng::CoinSchedule::constant(steps, r)};
  });
}

qwrng_status qwrng_schedule_read(const char* path, qwrng_schedule** out) {
  QWRNG_REQUIRE(path);
  QWRNG_REQUIRE(out);
  return guarded([&] { *out = new qwrng_schedule{qwrng::read_schedule_file(path)}; });
}

qwrng_status qwrng_schedule_write(const qwrng_schedule* s, const char* path) {
  QWRNG_REQUIRE(s);
  QWRNG_REQUIRE(path);
  return guarded([&] { qwrng::write_schedule_file(path, s->value); });
}

int qwrng_schedule_steps(const qwrng_schedule* s) { return s ? s->value.steps() : -1; }

qwrng_status qwrng_schedule_get(const qwrng_schedule* s, int step, int position, double* r) {
  QWRNG_REQUIRE(s);
  QWRNG_REQUIRE(r);
  return guarded([&] { *r = s->value.ratio(step, position); });
}

qwrng_status qwrng_schedule_set(qwrng_schedule* s, int step, int position, double r) {
  QWRNG_REQUIRE(s);
  return guarded([&] {
    qwrng::StepGrid g = s->value.grid();
    g.at(step, position) = r;
    s->value = qwrng::CoinSchedule(std::move(g));
  });
}

qwrng_status qwrng_schedule_quantize(const qwrng_schedule* s, double resolution_deg,
                                     qwrng_schedule** out) {
  QWRNG_REQUIRE(s);
  QWRNG_REQUIRE(out);
  return guarded([&] {
    *out = new qwrng_schedule{qwrng::quantize_schedule(s->value, resolution_deg)};
  });
}

void qwrng_schedule_free(qwrng_schedule* s) { delete s; }

qwrng_status qwrng_target_create(const char* spec, int steps, qwrng_distribution** out) {
  QWRNG_REQUIRE(spec);
  QWRNG_REQUIRE(out);
  return guarded([&] {
    *out = new qwrng_distribution{qwrng::make_target(qwrng::parse_target_spec(spec, steps))};
  });
}

qwrng_status qwrng_distribution_create(int steps, const double* probs, size_t n_probs,
                                       qwrng_distribution** out) {
  QWRNG_REQUIRE(probs);
  QWRNG_REQUIRE(out);
  return guarded([&] {
    *out = new qwrng_distribution{
        qwrng::Distribution(steps, std::vector<double>(probs, probs + n_probs))};
  });
}

qwrng_status qwrng_simulate(const qwrng_schedule* s, const qwrng_coin* coin,
                            qwrng_distribution** out) {
  QWRNG_REQUIRE(s);
  QWRNG_REQUIRE(coin);
  QWRNG_REQUIRE(out);
  return guarded([&] {
    *out = new qwrng_distribution{qwrng::simulate(s->value, to_core(*coin))};
  });
}

int qwrng_distribution_steps(const qwrng_distribution* d) { return d ? d->value.steps() : -1; }

qwrng_status qwrng_distribution_prob(const qwrng_distribution* d, int position, double* p) {
  QWRNG_REQUIRE(d);
  QWRNG_REQUIRE(p);
  *p = d->value.at(position);
  return QWRNG_OK;
}

qwrng_status qwrng_distribution_write_csv(const qwrng_distribution* d, const char* path) {
  QWRNG_REQUIRE(d);
  QWRNG_REQUIRE(path);
  return guarded(
      [&] { qwrng::text::write_file(path, qwrng::format_distribution_csv(d->value)); });
}

qwrng_status qwrng_fidelity(const qwrng_distribution* y, const qwrng_distribution* t,
                            double* out) {
  QWRNG_REQUIRE(y);
  QWRNG_REQUIRE(t);
  QWRNG_REQUIRE(out);
  return guarded([&] { *out = qwrng::fidelity(y->value, t->value); });
}

qwrng_status qwrng_loss(const qwrng_distribution* y, const qwrng_distribution* t, double* out) {
  QWRNG_REQUIRE(y);
  QWRNG_REQUIRE(t);
  QWRNG_REQUIRE(out);
  return guarded([&] { *out = qwrng::loss(y->value, t->value); });
}

qwrng_status qwrng_entropy(const qwrng_distribution* d, double* shannon_bits,
                           double* min_entropy_bits) {
  QWRNG_REQUIRE(d);
  QWRNG_REQUIRE(shannon_bits);
  QWRNG_REQUIRE(min_entropy_bits);
  const auto rep = qwrng::entropy_report(d->value);
  *shannon_bits = rep.shannon_bits;
  *min_entropy_bits = rep.min_entropy_bits;
  return QWRNG_OK;
}

void qwrng_distribution_free(qwrng_distribution* d) { delete d; }

void qwrng_train_config_default(qwrng_train_config* cfg) {
  if (cfg == nullptr) return;
  const qwrng::TrainConfig d;
  cfg->eta = d.eta;
  cfg->max_iters = d.max_iters;
  cfg->fidelity_goal = d.fidelity_goal;
  cfg->loss_tol = d.loss_tol;
  cfg->init_kind = QWRNG_INIT_CONSTANT;
  cfg->init_ratio = std::get<qwrng::ConstantInit>(d.init).r0;
  cfg->init_seed = 0;
  cfg->clamp_margin = d.clamp_margin;
}

qwrng_status qwrng_train_config_validate(const qwrng_train_config* cfg) {
  QWRNG_REQUIRE(cfg);
  return guarded([&] { qwrng::validate(to_core(*cfg)); });
}

qwrng_status qwrng_train(const qwrng_coin* coin, const qwrng_distribution* target,
                         const qwrng_train_config* cfg, qwrng_train_report** out) {
  QWRNG_REQUIRE(coin);
  QWRNG_REQUIRE(target);
  QWRNG_REQUIRE(cfg);
  QWRNG_REQUIRE(out);
  return guarded([&] {
    *out = new qwrng_train_report{
        qwrng::train(initial_of(coin), target->value, to_core(*cfg))};
  });
}

int qwrng_train_report_converged(const qwrng_train_report* r) {
  return r && r->value.converged ? 1 : 0;
}

size_t qwrng_train_report_length(const qwrng_train_report* r) {
  return r ? r->value.iterations.size() : 0;
}

qwrng_status qwrng_train_report_entry(const qwrng_train_report* r, size_t i, int* iteration,
                                      double* loss, double* fidelity) {
  QWRNG_REQUIRE(r);
  if (i >= r->value.iterations.size()) {
    return fail(QWRNG_ERR_OUT_OF_RANGE, "trace index out of range");
  }
  const auto& e = r->value.iterations[i];
  if (iteration) *iteration = e.iteration;
  if (loss) *loss = e.loss;
  if (fidelity) *fidelity = e.fidelity;
  return QWRNG_OK;
}

qwrng_status qwrng_train_report_schedule(const qwrng_train_report* r, qwrng_schedule** out) {
  QWRNG_REQUIRE(r);
  QWRNG_REQUIRE(out);
  return guarded([&] { *out = new qwrng_schedule{r->value.final_schedule}; });
}

qwrng_status qwrng_train_report_write_trace(const qwrng_train_report* r, const char* path) {
  QWRNG_REQUIRE(r);
  QWRNG_REQUIRE(path);
  return guarded(
      [&] { qwrng::text::write_file(path, qwrng::format_trace_csv(r->value.iterations)); });
}

void qwrng_train_report_free(qwrng_train_report* r) { delete r; }

qwrng_status qwrng_sampler_create(const qwrng_distribution* d, uint64_t seed,
                                  qwrng_sampler** out) {
  QWRNG_REQUIRE(d);
  QWRNG_REQUIRE(out);
  return guarded([&] { *out = new qwrng_sampler{qwrng::Sampler(d->value, seed)}; });
}

qwrng_status qwrng_sampler_draw(qwrng_sampler* s, size_t count, uint32_t* out) {
  QWRNG_REQUIRE(s);
  QWRNG_REQUIRE(out);
  if (count == 0) return fail(QWRNG_ERR_INVALID_ARGUMENT, "sample count must be positive");
  for (size_t i = 0; i < count; ++i) out[i] = s->value.next();
  return QWRNG_OK;
}

qwrng_status qwrng_sampler_write(qwrng_sampler* s, size_t count, qwrng_sample_format format,
                                 const char* path) {
  QWRNG_REQUIRE(s);
  QWRNG_REQUIRE(path);
  if (format != QWRNG_FORMAT_INDICES && format != QWRNG_FORMAT_BITS) {
    return fail(QWRNG_ERR_INVALID_ARGUMENT, "unknown sample format");
  }
  return guarded([&] {
    const auto stream = qwrng::draw(s->value, count);
    qwrng::write_samples(path, stream,
                         format == QWRNG_FORMAT_BITS ? qwrng::SampleFormat::Bits
                                                     : qwrng::SampleFormat::Indices);
  });
}

void qwrng_sampler_free(qwrng_sampler* s) { delete s; }

qwrng_status qwrng_samples_histogram(const char* path, size_t n_outcomes, uint64_t* counts) {
  QWRNG_REQUIRE(path);
  QWRNG_REQUIRE(counts);
  return guarded([&] {
    const auto h = qwrng::read_samples(path, n_outcomes).histogram();
    std::copy(h.begin(), h.end(), counts);
  });
}

qwrng_status qwrng_chi_square_test(const uint64_t* counts, size_t n_counts,
                                   const qwrng_distribution* target, qwrng_chi_square* out) {
  QWRNG_REQUIRE(counts);
  QWRNG_REQUIRE(target);
  QWRNG_REQUIRE(out);
  return guarded([&] {
    const auto rep = qwrng::chi_square_test(
        std::vector<std::uint64_t>(counts, counts + n_counts), target->value);
    *out = {rep.statistic, rep.dof, rep.p_value, rep.low_count ? 1 : 0};
  });
}

qwrng_status qwrng_robustness_sweep(const qwrng_schedule* s, const qwrng_coin* coin,
                                    const qwrng_distribution* target, const double* magnitudes,
                                    size_t n_magnitudes, int trials, uint64_t seed,
                                    const char* csv_path) {
  QWRNG_REQUIRE(s);
  QWRNG_REQUIRE(coin);
  QWRNG_REQUIRE(target);
  QWRNG_REQUIRE(magnitudes);
  QWRNG_REQUIRE(csv_path);
  return guarded([&] {
    const auto curve = qwrng::robustness_sweep(
        s->value, initial_of(coin), target->value,
        std::vector<double>(magnitudes, magnitudes + n_magnitudes), trials, seed);
    qwrng::text::write_file(csv_path, qwrng::format_robustness_csv(curve));
  });
}

}  // extern "C"
