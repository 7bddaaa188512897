#pragma once

#include <functional>
#include <string>

namespace gicselect {

using WarningHandler = std::function<void(const std::string&)>;

// Installs a process-wide warning sink; the default writes to stderr.
// Passing an empty handler silences warnings.
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace gicselect
