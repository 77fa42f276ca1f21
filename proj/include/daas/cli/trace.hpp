#pragma once

#include <istream>
#include <string>
#include <vector>

#include "daas/core/events.hpp"

namespace daas::cli {

// Parses a newline-delimited trace. Throws Error{Schema} naming the line
// ("/line/N") for malformed or unknown records.
std::vector<MissionEvent> read_trace(std::istream& in);
std::vector<MissionEvent> read_trace_file(const std::string& path);
std::vector<MissionEvent> parse_trace_lines(const std::vector<std::string>& lines);

}  // namespace daas::cli
