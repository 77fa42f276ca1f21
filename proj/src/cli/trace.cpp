#include "daas/cli/trace.hpp"

#include <fstream>
#include <sstream>

#include "daas/core/error.hpp"
#include "daas/core/wire.hpp"

namespace daas::cli {

namespace {

MissionEvent parse_line(const std::string& line, std::size_t number) {
  const std::string where = "/line/" + std::to_string(number);
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("malformed record: ") + e.what(), where);
  }
  try {
    return event_from_json(j);
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, e.what(), where + e.path());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, e.what(), where);
  }
}

}  // namespace

std::vector<MissionEvent> read_trace(std::istream& in) {
  std::vector<MissionEvent> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    out.push_back(parse_line(line, number));
  }
  return out;
}

std::vector<MissionEvent> read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open trace file '" + path + "'");
  return read_trace(in);
}

std::vector<MissionEvent> parse_trace_lines(const std::vector<std::string>& lines) {
  std::vector<MissionEvent> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) out.push_back(parse_line(lines[i], i + 1));
  return out;
}

}  // namespace daas::cli
