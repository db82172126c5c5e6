#pragma once

namespace dsrec {

/// Full command-line entry point. Exit codes: 0 success, 1 usage error,
/// 2 data error, 3 internal error.
int run_cli(int argc, const char* const* argv);

}  // namespace dsrec
