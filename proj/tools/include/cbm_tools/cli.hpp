#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cbm {

/// Entry point of the `cbm` tool. Returns 0 on success, 2 for usage and
/// configuration errors, 1 for failures during a run.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbm
