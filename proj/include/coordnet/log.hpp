#pragma once

#include <string_view>

namespace coordnet::log {

enum class Level { Quiet = 0, Warn = 1, Info = 2 };

void set_level(Level level);
Level level();
void warn(std::string_view message);
void info(std::string_view message);

}  // namespace coordnet::log
