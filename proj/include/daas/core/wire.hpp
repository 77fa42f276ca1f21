#pragma once

// Canonical wire format: JSON with snake_case keys, positions as
// {"x","y","z"} objects and enums as lowercase strings.

#include <string>

#include <json.hpp>

#include "daas/core/events.hpp"
#include "daas/core/types.hpp"

namespace daas {

using Json = nlohmann::json;

Json position_to_json(const Position3& p);
Position3 position_from_json(const Json& j, const std::string& path = "");

void to_json(Json& j, const Waypoint& wp);
void from_json(const Json& j, Waypoint& wp);
void to_json(Json& j, const NavigationBatch& b);
void from_json(const Json& j, NavigationBatch& b);
void to_json(Json& j, const TelemetryEvent& e);
void from_json(const Json& j, TelemetryEvent& e);
void to_json(Json& j, const StatStreamEvent& e);
void from_json(const Json& j, StatStreamEvent& e);

// Tagged event records: {"type": "...", ...}.
Json event_to_json(const MissionEvent& e);
MissionEvent event_from_json(const Json& j);

// One compact line, no trailing newline. Byte-stable for equal events.
std::string serialize_event(const MissionEvent& e);

// Field accessors that raise Error{Schema} with the offending path.
namespace wire {

const Json& require(const Json& j, const std::string& key, const std::string& path);
double number(const Json& j, const std::string& key, const std::string& path);
double number_or(const Json& j, const std::string& key, double fallback, const std::string& path);
std::string string(const Json& j, const std::string& key, const std::string& path);
std::string string_or(const Json& j, const std::string& key, const std::string& fallback, const std::string& path);
bool boolean_or(const Json& j, const std::string& key, bool fallback, const std::string& path);
std::string join(const std::string& path, const std::string& key);
std::string join(const std::string& path, std::size_t index);

}  // namespace wire

}  // namespace daas
