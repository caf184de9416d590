#pragma once

#include <functional>
#include <string>

namespace soundscape::log {

enum class Level { warning, error };

using Handler = std::function<void(Level, const std::string&)>;

/// Replaces the message sink (default: stderr). Pass nullptr to restore the
/// default. Used by the CLI and by tests that capture warnings.
void set_handler(Handler handler);

void warn(const std::string& message);
void error(const std::string& message);

}  // namespace soundscape::log
