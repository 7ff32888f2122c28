#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metric_center {

/// Runs one `metric-center` invocation. `args` excludes the program name.
/// Returns 0 on success, 1 when a checked property fails, 2 on usage or
/// input errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metric_center
