#pragma once

#include <iosfwd>

namespace harmap::cli {

/// Exit codes: 0 success, 1 validation error or bad usage, 2 internal error.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;
inline constexpr int kInternal = 2;

/// Entry point of the `harmap` tool. Subcommands: blowup, minimize,
/// verify {q-bounds, pi-bounds, poincare, gradient}, boundary-gen, decay,
/// residual. Every run writes `run.json` into the output directory.
int run(int argc, const char* const* argv);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace harmap::cli
