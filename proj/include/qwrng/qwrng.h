/*
 * qwrng: trainable discrete-time quantum walks as shaped random-number sources.
 *
 * C interface over the C++ core. Objects are opaque handles created by
 * qwrng_*_create / qwrng_*_read / qwrng_train and released with the matching
 * qwrng_*_free. Every fallible call returns a qwrng_status; on failure a
 * one-line message is available from qwrng_last_error() on the same thread.
 * Output parameters are written only on success.
 *
 * Walk conventions: coin basis (L, R); L moves to x-1, R to x+1; the coin at
 * (step t, position m) is [[sqrt(r), sqrt(1-r)], [sqrt(1-r), -sqrt(r)]].
 * Outcome index k of an n-step walk is position -n + 2k.
 */
#ifndef QWRNG_QWRNG_H
#define QWRNG_QWRNG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define QWRNG_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define QWRNG_API __attribute__((visibility("default")))
#else
#  define QWRNG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qwrng_status {
  QWRNG_OK = 0,
  QWRNG_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad enum, bad flag value */
  QWRNG_ERR_DOMAIN = 2,
  QWRNG_ERR_NORMALIZATION = 3,
  QWRNG_ERR_SHAPE = 4,   /* schedule/gradient key set mismatch, missing ratio */
  QWRNG_ERR_SUPPORT = 5, /* distributions or counts over different sites */
  QWRNG_ERR_PARSE = 6,
  QWRNG_ERR_IO = 7,
  QWRNG_ERR_OUT_OF_RANGE = 8,
  QWRNG_ERR_INTERNAL = 9
} qwrng_status;

typedef struct qwrng_schedule qwrng_schedule;
typedef struct qwrng_distribution qwrng_distribution;
typedef struct qwrng_train_report qwrng_train_report;
typedef struct qwrng_sampler qwrng_sampler;

/* Initial coin amplitudes (alpha_L, alpha_R) of a walker at the origin. */
typedef struct qwrng_coin {
  double left_re, left_im;
  double right_re, right_im;
} qwrng_coin;

QWRNG_API const char* qwrng_version(void);
QWRNG_API const char* qwrng_last_error(void);
QWRNG_API const char* qwrng_status_name(qwrng_status status);

/* "L" = (1,0), "R" = (0,1), "circ-left" = (1, i)/sqrt2, "circ-right" = (1, -i)/sqrt2,
 * or "custom:aL_re,aL_im,aR_re,aR_im" (must be normalized within 1e-9). */
QWRNG_API qwrng_status qwrng_coin_parse(const char* text, qwrng_coin* out);

/* ---- schedules ---- */
QWRNG_API qwrng_status qwrng_schedule_create_constant(int steps, double r, qwrng_schedule** out);
QWRNG_API qwrng_status qwrng_schedule_read(const char* path, qwrng_schedule** out);
QWRNG_API qwrng_status qwrng_schedule_write(const qwrng_schedule* s, const char* path);
QWRNG_API int qwrng_schedule_steps(const qwrng_schedule* s);
QWRNG_API qwrng_status qwrng_schedule_get(const qwrng_schedule* s, int step, int position,
                                          double* r);
QWRNG_API qwrng_status qwrng_schedule_set(qwrng_schedule* s, int step, int position, double r);
/* Rounds half-wave-plate angles to multiples of resolution_deg. */
QWRNG_API qwrng_status qwrng_schedule_quantize(const qwrng_schedule* s, double resolution_deg,
                                               qwrng_schedule** out);
QWRNG_API void qwrng_schedule_free(qwrng_schedule* s);

/* ---- distributions ---- */
/* spec: "uniform", "gaussian:MU,SIGMA" or "file:PATH" (position,probability CSV). */
QWRNG_API qwrng_status qwrng_target_create(const char* spec, int steps, qwrng_distribution** out);
/* probs[k] belongs to position -steps + 2k; n_probs must be steps + 1. */
QWRNG_API qwrng_status qwrng_distribution_create(int steps, const double* probs, size_t n_probs,
                                                 qwrng_distribution** out);
QWRNG_API qwrng_status qwrng_simulate(const qwrng_schedule* s, const qwrng_coin* coin,
                                      qwrng_distribution** out);
QWRNG_API int qwrng_distribution_steps(const qwrng_distribution* d);
QWRNG_API qwrng_status qwrng_distribution_prob(const qwrng_distribution* d, int position,
                                               double* p);
QWRNG_API qwrng_status qwrng_distribution_write_csv(const qwrng_distribution* d,
                                                    const char* path);
QWRNG_API qwrng_status qwrng_fidelity(const qwrng_distribution* y, const qwrng_distribution* t,
                                      double* out);
QWRNG_API qwrng_status qwrng_loss(const qwrng_distribution* y, const qwrng_distribution* t,
                                  double* out);
QWRNG_API qwrng_status qwrng_entropy(const qwrng_distribution* d, double* shannon_bits,
                                     double* min_entropy_bits);
QWRNG_API void qwrng_distribution_free(qwrng_distribution* d);

/* ---- training ---- */
typedef enum qwrng_init_kind { QWRNG_INIT_CONSTANT = 0, QWRNG_INIT_RANDOM = 1 } qwrng_init_kind;

typedef struct qwrng_train_config {
  double eta;           /* (0, 1], default 0.1 */
  int max_iters;        /* default 500 */
  double fidelity_goal; /* (0, 1], default 0.999 */
  double loss_tol;      /* >= 0, default 1e-8 */
  int init_kind;        /* qwrng_init_kind */
  double init_ratio;    /* QWRNG_INIT_CONSTANT, default 0.5 */
  uint64_t init_seed;   /* QWRNG_INIT_RANDOM */
  double clamp_margin;  /* default 0 */
} qwrng_train_config;

QWRNG_API void qwrng_train_config_default(qwrng_train_config* cfg);
QWRNG_API qwrng_status qwrng_train_config_validate(const qwrng_train_config* cfg);

/* Non-convergence is not an error: QWRNG_OK with converged == 0. */
QWRNG_API qwrng_status qwrng_train(const qwrng_coin* coin, const qwrng_distribution* target,
                                   const qwrng_train_config* cfg, qwrng_train_report** out);
QWRNG_API int qwrng_train_report_converged(const qwrng_train_report* r);
QWRNG_API size_t qwrng_train_report_length(const qwrng_train_report* r);
QWRNG_API qwrng_status qwrng_train_report_entry(const qwrng_train_report* r, size_t i,
                                                int* iteration, double* loss, double* fidelity);
QWRNG_API qwrng_status qwrng_train_report_schedule(const qwrng_train_report* r,
                                                   qwrng_schedule** out);
QWRNG_API qwrng_status qwrng_train_report_write_trace(const qwrng_train_report* r,
                                                      const char* path);
QWRNG_API void qwrng_train_report_free(qwrng_train_report* r);

/* ---- sampling ---- */
typedef enum qwrng_sample_format {
  QWRNG_FORMAT_INDICES = 0, /* one decimal index per line */
  QWRNG_FORMAT_BITS = 1     /* packed bits + "<path>.hdr" one-line sidecar */
} qwrng_sample_format;

QWRNG_API qwrng_status qwrng_sampler_create(const qwrng_distribution* d, uint64_t seed,
                                            qwrng_sampler** out);
/* Writes `count` outcome indices into out[0..count). */
QWRNG_API qwrng_status qwrng_sampler_draw(qwrng_sampler* s, size_t count, uint32_t* out);
/* Draws `count` outcomes and writes them to path in the given format. */
QWRNG_API qwrng_status qwrng_sampler_write(qwrng_sampler* s, size_t count,
                                           qwrng_sample_format format, const char* path);
QWRNG_API void qwrng_sampler_free(qwrng_sampler* s);

/* Histogram of a sample file (either format) over n_outcomes indices. */
QWRNG_API qwrng_status qwrng_samples_histogram(const char* path, size_t n_outcomes,
                                               uint64_t* counts);

/* ---- analysis ---- */
typedef struct qwrng_chi_square {
  double statistic;
  int dof;
  double p_value;
  int low_count; /* fewer than 5 observations per site */
} qwrng_chi_square;

QWRNG_API qwrng_status qwrng_chi_square_test(const uint64_t* counts, size_t n_counts,
                                             const qwrng_distribution* target,
                                             qwrng_chi_square* out);
/* Writes "magnitude,mean_fidelity,min_fidelity" CSV. */
QWRNG_API qwrng_status qwrng_robustness_sweep(const qwrng_schedule* s, const qwrng_coin* coin,
                                              const qwrng_distribution* target,
                                              const double* magnitudes, size_t n_magnitudes,
                                              int trials, uint64_t seed, const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* QWRNG_QWRNG_H */
