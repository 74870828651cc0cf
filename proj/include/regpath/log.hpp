#pragma once

#include <string_view>

namespace regpath {

// Minimal stderr logging. Library code only warns; the CLI may silence it.
void set_quiet(bool quiet);
bool quiet();
void log_info(std::string_view msg);
void log_warning(std::string_view msg);

}  // namespace regpath
