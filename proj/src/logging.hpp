#pragma once

#include <functional>
#include <string>

namespace epifit {

using LogSink = std::function<void(const std::string&)>;

// Replaces the process-wide log sink; an empty function restores the
// default (stderr). Machine-readable outputs never go through the sink.
void set_log_sink(LogSink sink);

void log_info(const std::string& line);
void log_warn(const std::string& line);

} // namespace epifit
