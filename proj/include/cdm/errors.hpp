#pragma once

#include <stdexcept>
#include <string>

namespace cdm {

/// Bad arguments: dimension mismatch, empty color set, malformed config.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& m) : std::runtime_error(m) {}
};

/// Geometric degeneracy that the caller asked us not to tolerate
/// (e.g. a flat simplex passed to a raw insphere).
struct degeneracy_error : std::runtime_error {
  explicit degeneracy_error(const std::string& m) : std::runtime_error(m) {}
};

/// Input exceeds the documented oracle scale.
struct scale_error : std::runtime_error {
  explicit scale_error(const std::string& m) : std::runtime_error(m) {}
};

/// Too few points for the requested construction.
struct size_error : std::runtime_error {
  explicit size_error(const std::string& m) : std::runtime_error(m) {}
};

/// Periodic cover too small: the 3^k replication disagrees with 5^k.
struct replication_error : std::runtime_error {
  explicit replication_error(const std::string& m) : std::runtime_error(m) {}
};

/// Malformed data file.
struct data_error : std::runtime_error {
  explicit data_error(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace cdm
