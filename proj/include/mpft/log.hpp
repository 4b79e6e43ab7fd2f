#pragma once

#include <functional>
#include <string_view>

namespace mpft::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Off = 3 };

using Sink = std::function<void(Level, std::string_view)>;

/// Messages below this level are dropped. Defaults to Warn.
void set_level(Level level);
Level level();

/// Replaces the output sink (stderr by default). Pass nullptr to restore.
void set_sink(Sink sink);

void debug(std::string_view msg);
void info(std::string_view msg);
void warn(std::string_view msg);

}  // namespace mpft::log
