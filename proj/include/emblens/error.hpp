#pragma once

#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace emblens {

/// Raised for invalid input and unrecoverable pipeline failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collects non-fatal warnings. Safe to share between worker threads.
class Diagnostics {
 public:
  void warn(std::string message);
  std::vector<std::string> warnings() const;
  bool empty() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> warnings_;
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

}  // namespace emblens
