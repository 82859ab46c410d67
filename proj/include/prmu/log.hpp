#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace prmu {

using WarningHandler = std::function<void(const std::string&)>;

namespace detail {
inline WarningHandler& warning_handler()
{
    static WarningHandler handler = [](const std::string& msg) {
        std::cerr << "warning: " << msg << '\n';
    };
    return handler;
}
}  // namespace detail

/// Replaces the process-wide warning sink; returns the previous one.
/// Install handlers before starting worker threads.
inline WarningHandler set_warning_handler(WarningHandler handler)
{
    return std::exchange(detail::warning_handler(), std::move(handler));
}

inline void warn(const std::string& message)
{
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    if (auto& handler = detail::warning_handler()) {
        handler(message);
    }
}

}  // namespace prmu
