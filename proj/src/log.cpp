#include "soundscape/log.hpp"

#include <iostream>
#include <mutex>

namespace soundscape::log {

namespace {

std::mutex mutex;
Handler handler;  // guarded by mutex

void to_stderr(Level level, const std::string& message) {
  std::cerr << (level == Level::error ? "error: " : "warning: ") << message << "\n";
}

void emit(Level level, const std::string& message) {
  std::lock_guard lock(mutex);
  if (handler)
    handler(level, message);
  else
    to_stderr(level, message);
}

}  // namespace

void set_handler(Handler h) {
  std::lock_guard lock(mutex);
  handler = std::move(h);
}

void warn(const std::string& message) { emit(Level::warning, message); }
void error(const std::string& message) { emit(Level::error, message); }

}  // namespace soundscape::log
