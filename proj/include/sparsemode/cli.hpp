#pragma once

namespace sparsemode {

// Parses argv and runs one subcommand (generate, fit, reconstruct, eval,
// sweep). Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical
// failure. Logs go to stderr; machine-readable results to stdout or files.
int run(int argc, const char* const* argv);

}  // namespace sparsemode
