#pragma once

namespace scpp {

// Full command-line entry point. Returns 0 on success, 2 on ingest errors,
// 3 on configuration errors.
int run_cli(int argc, const char* const* argv);

}  // namespace scpp
