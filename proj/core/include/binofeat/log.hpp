#pragma once

#include <string>

namespace binofeat {

// Verbosity is read once from the BINOFEAT_LOG environment variable:
// 0 = quiet (default), 1 = info, 2 = debug.
int log_level();

void log_info(const std::string& msg);
void log_debug(const std::string& msg);
void log_warn(const std::string& msg);  // always printed

}  // namespace binofeat
