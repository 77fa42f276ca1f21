#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace daas {

enum class ErrorCode : std::uint8_t {
  Validation,
  NotFound,
  Rejected,
  DuplicateId,
  IllegalTransition,
  Configuration,
  Schema,
  NotDeployed,
  Placement,
  NotReady,
};

const char* to_string(ErrorCode code);

// Single exception type for the runtime. `path` carries a JSON-pointer-like
// field path for schema errors and is empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string path = {})
      : std::runtime_error(message), code_(code), path_(std::move(path)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorCode code_;
  std::string path_;
};

}  // namespace daas
