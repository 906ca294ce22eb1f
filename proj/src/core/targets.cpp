#include "targets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "text.hpp"

namespace qwrng {
namespace {

constexpr std::string_view kHeader = "position,probability";

void require_steps(int steps) {
  if (steps < 1) throw Error(ErrorKind::Domain, "target needs at least one step");
}

}  // namespace

TargetSpec parse_target_spec(std::string_view text, int steps) {
  if (text == "uniform") return {UniformTarget{}, steps};
  if (text.starts_with("gaussian:")) {
    const auto fields = text::split(text.substr(9), ',');
    if (fields.size() != 2) {
      throw Error(ErrorKind::Parse, "gaussian target must be 'gaussian:MU,SIGMA'");
    }
    return {GaussianTarget{text::parse_double(fields[0], "gaussian mean"),
                           text::parse_double(fields[1], "gaussian sigma")},
            steps};
  }
  if (text.starts_with("file:") && text.size() > 5) {
    return {FileTarget{std::string(text.substr(5))}, steps};
  }
  throw Error(ErrorKind::Parse, "unknown target '" + std::string(text) +
                                    "' (expected uniform, gaussian:MU,SIGMA or file:PATH)");
}

Distribution make_target(const TargetSpec& spec) {
  return std::visit(
      [&](const auto& k) -> Distribution {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, UniformTarget>) {
          return uniform_target(spec.steps);
        } else if constexpr (std::is_same_v<K, GaussianTarget>) {
          return gaussian_target(spec.steps, k.mu, k.sigma);
        } else {
          return load_target(text::read_file(k.path), spec.steps);
        }
      },
      spec.kind);
}

Distribution uniform_target(int steps) {
  require_steps(steps);
  return Distribution(steps, std::vector<double>(static_cast<std::size_t>(steps) + 1,
                                                 1.0 / (steps + 1)));
}

Distribution gaussian_target(int steps, double mu, double sigma) {
  require_steps(steps);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::Domain, "gaussian sigma must be positive and finite");
  }
  if (!std::isfinite(mu)) throw Error(ErrorKind::Domain, "gaussian mean must be finite");
  std::vector<double> d2(static_cast<std::size_t>(steps) + 1);
  for (std::size_t k = 0; k < d2.size(); ++k) {
    const double d = (-steps + 2.0 * static_cast<double>(k)) - mu;
    d2[k] = d * d;
  }
  // Shift by the nearest site so the largest weight is exp(0) = 1.
  const double nearest = *std::min_element(d2.begin(), d2.end());
  std::vector<double> p(d2.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < d2.size(); ++k) {
    p[k] = std::exp(-(d2[k] - nearest) / (2.0 * sigma * sigma));
    sum += p[k];
  }
  for (double& v : p) v /= sum;
  return Distribution(steps, std::move(p));
}

Distribution load_target(std::string_view csv, int steps) {
  require_steps(steps);
  std::vector<double> p(static_cast<std::size_t>(steps) + 1,
                        std::numeric_limits<double>::quiet_NaN());
  std::size_t seen = 0;
  bool first = true;
  int line_no = 0;
  for (auto raw : text::lines(csv)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    if (first && line == kHeader) {
      first = false;
      continue;
    }
    first = false;
    const auto fields = text::split(line, ',');
    if (fields.size() != 2) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) +
                                        ": expected 'position,probability'");
    }
    const auto m = text::parse_int(fields[0], "position");
    const double prob = text::parse_double(fields[1], "probability");
    if (std::llabs(m) > steps || ((m + steps) % 2) != 0) {
      throw Error(ErrorKind::SupportMismatch,
                  "position " + std::to_string(m) + " is not reachable in " +
                      std::to_string(steps) + " steps");
    }
    if (!(prob >= 0.0 && prob <= 1.0 + kTargetSumTol)) {
      throw Error(ErrorKind::Domain, "line " + std::to_string(line_no) +
                                         ": probability outside [0, 1]");
    }
    auto& slot = p[static_cast<std::size_t>((m + steps) / 2)];
    if (!std::isnan(slot)) {
      throw Error(ErrorKind::SupportMismatch, "duplicate position " + std::to_string(m));
    }
    slot = prob;
    ++seen;
  }
  if (seen != p.size()) {
    throw Error(ErrorKind::SupportMismatch,
                "target lists " + std::to_string(seen) + " of " +
                    std::to_string(p.size()) + " sites");
  }
  double sum = 0.0;
  for (double v : p) sum += v;
  if (std::abs(sum - 1.0) > kTargetSumTol) {
    throw Error(ErrorKind::Normalization,
                "target probabilities sum to " + text::format_double(sum));
  }
  for (double& v : p) v /= sum;
  return Distribution(steps, std::move(p));
}

std::string format_distribution_csv(const Distribution& dist) {
  std::string out(kHeader);
  out += '\n';
  for (std::size_t k = 0; k < dist.sites(); ++k) {
    out += std::to_string(dist.position(k));
    out += ',';
    out += text::format_double(dist.probs()[k]);
    out += '\n';
  }
  return out;
}

}  // namespace qwrng
