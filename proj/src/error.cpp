#include "emblens/error.hpp"

namespace emblens {

void Diagnostics::warn(std::string message) {
  std::lock_guard lock(mutex_);
  warnings_.push_back(std::move(message));
}

std::vector<std::string> Diagnostics::warnings() const {
  std::lock_guard lock(mutex_);
  return warnings_;
}

bool Diagnostics::empty() const {
  std::lock_guard lock(mutex_);
  return warnings_.empty();
}

}  // namespace emblens
