#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "trainer.hpp"
#include "walk.hpp"

namespace qwrng {

/// "steps=<n>" then one "step,position,r" row per entry in (step, position)
/// order, r with 17 significant digits.
std::string format_schedule(const CoinSchedule& schedule);
/// Inverse of format_schedule; rows may come in any order.
CoinSchedule parse_schedule(std::string_view text);

CoinSchedule read_schedule_file(const std::string& path);
void write_schedule_file(const std::string& path, const CoinSchedule& schedule);

/// "iteration,loss,fidelity" header plus one row per trace entry.
std::string format_trace_csv(const std::vector<TraceEntry>& trace);

}  // namespace qwrng
