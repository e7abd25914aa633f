#include "logging.hpp"

#include <cstdio>
#include <mutex>
#include <utility>

namespace epifit {

namespace {

std::mutex g_mutex;
LogSink g_sink;

void emit(const char* level, const std::string& line)
{
    std::lock_guard<std::mutex> lock(g_mutex);
    if (g_sink) {
        g_sink(std::string(level) + line);
    } else {
        std::fprintf(stderr, "%s%s\n", level, line.c_str());
    }
}

} // namespace

void set_log_sink(LogSink sink)
{
    std::lock_guard<std::mutex> lock(g_mutex);
    g_sink = std::move(sink);
}

void log_info(const std::string& line)
{
    emit("", line);
}

void log_warn(const std::string& line)
{
    emit("warning: ", line);
}

} // namespace epifit
