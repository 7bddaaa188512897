#include <gicselect/log.hpp>

#include <iostream>
#include <mutex>

namespace gicselect {

namespace {

std::mutex g_mutex;
WarningHandler g_handler = [](const std::string& message) {
    std::cerr << "warning: " << message << '\n';
};

}  // namespace

void set_warning_handler(WarningHandler handler)
{
    std::lock_guard lock(g_mutex);
    g_handler = std::move(handler);
}

void warn(const std::string& message)
{
    std::lock_guard lock(g_mutex);
    if (g_handler) g_handler(message);
}

}  // namespace gicselect
