#include "schedule_io.hpp"

#include <tuple>

#include "text.hpp"

namespace qwrng {

std::string format_schedule(const CoinSchedule& schedule) {
  std::string out = "steps=" + std::to_string(schedule.steps()) + "\n";
  schedule.grid().for_each([&](int t, int m, double r) {
    out += std::to_string(t) + ',' + std::to_string(m) + ',' + text::format_double(r) + '\n';
  });
  return out;
}

CoinSchedule parse_schedule(std::string_view contents) {
  const auto all = text::lines(contents);
  std::size_t i = 0;
  while (i < all.size() && text::trim(all[i]).empty()) ++i;
  if (i == all.size()) throw Error(ErrorKind::Parse, "schedule file is empty");
  const auto header = text::trim(all[i]);
  if (!header.starts_with("steps=")) {
    throw Error(ErrorKind::Parse, "schedule file must start with 'steps=<n>'");
  }
  const auto n = text::parse_int(header.substr(6), "step count");
  if (n < 0 || n > 100000) throw Error(ErrorKind::Parse, "step count out of range");

  std::vector<std::tuple<int, int, double>> entries;
  for (++i; i < all.size(); ++i) {
    const auto line = text::trim(all[i]);
    if (line.empty()) continue;
    const auto f = text::split(line, ',');
    if (f.size() != 3) {
      throw Error(ErrorKind::Parse,
                  "schedule line " + std::to_string(i + 1) + ": expected 'step,position,r'");
    }
    entries.emplace_back(static_cast<int>(text::parse_int(f[0], "step")),
                         static_cast<int>(text::parse_int(f[1], "position")),
                         text::parse_double(f[2], "coin ratio"));
  }
  return CoinSchedule::from_entries(static_cast<int>(n), entries);
}

CoinSchedule read_schedule_file(const std::string& path) {
  return parse_schedule(text::read_file(path));
}

void write_schedule_file(const std::string& path, const CoinSchedule& schedule) {
  text::write_file(path, format_schedule(schedule));
}

std::string format_trace_csv(const std::vector<TraceEntry>& trace) {
  std::string out = "iteration,loss,fidelity\n";
  for (const auto& e : trace) {
    out += std::to_string(e.iteration) + ',' + text::format_double(e.loss) + ',' +
           text::format_double(e.fidelity) + '\n';
  }
  return out;
}

}  // namespace qwrng
