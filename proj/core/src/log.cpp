#include "binofeat/log.hpp"

#include <cstdio>
#include <cstdlib>

namespace binofeat {

int log_level() {
  static int level = [] {
    const char* env = std::getenv("BINOFEAT_LOG");
    if (!env) return 0;
    return std::atoi(env);
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[binofeat] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::fprintf(stderr, "[binofeat:debug] %s\n", msg.c_str());
}

void log_warn(const std::string& msg) {
  std::fprintf(stderr, "[binofeat:warn] %s\n", msg.c_str());
}

}  // namespace binofeat
