#include "sqg/errors.hpp"

#include <sstream>

namespace sqg {

namespace {

std::string diverged_message(long step, double time) {
  std::ostringstream os;
  os.precision(17);
  os << "simulation diverged at step " << step << " (t = " << time << ")";
  return os.str();
}

}  // namespace

DivergedError::DivergedError(long step, double time)
    : Error(diverged_message(step, time)), step_(step), time_(time) {}

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error("config field '" + field + "': " + message), field_(std::move(field)) {}

SnapshotError::SnapshotError(Kind kind, const std::string& message)
    : Error(message), kind_(kind) {}

}  // namespace sqg
