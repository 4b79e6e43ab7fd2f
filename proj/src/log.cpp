#include "mpft/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <string>

namespace mpft::log {
namespace {

std::atomic<Level> g_level{Level::Warn};
std::mutex g_mutex;
Sink g_sink;

void emit(Level lvl, std::string_view msg) {
  if (lvl < g_level.load()) return;
  std::lock_guard lock(g_mutex);
  if (g_sink) {
    g_sink(lvl, msg);
    return;
  }
  static constexpr const char* kNames[] = {"debug", "info", "warn"};
  std::cerr << "[mpft " << kNames[static_cast<int>(lvl)] << "] " << msg << '\n';
}

}  // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

void set_sink(Sink sink) {
  std::lock_guard lock(g_mutex);
  g_sink = std::move(sink);
}

void debug(std::string_view msg) { emit(Level::Debug, msg); }
void info(std::string_view msg) { emit(Level::Info, msg); }
void warn(std::string_view msg) { emit(Level::Warn, msg); }

}  // namespace mpft::log
