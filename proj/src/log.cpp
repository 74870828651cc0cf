#include "regpath/log.hpp"

#include <atomic>
#include <iostream>

namespace regpath {

namespace {
std::atomic<bool> g_quiet{false};
}

void set_quiet(bool q) { g_quiet = q; }
bool quiet() { return g_quiet; }

void log_info(std::string_view msg) {
  if (!g_quiet) std::clog << msg << '\n';
}

void log_warning(std::string_view msg) {
  if (!g_quiet) std::clog << "warning: " << msg << '\n';
}

}  // namespace regpath
