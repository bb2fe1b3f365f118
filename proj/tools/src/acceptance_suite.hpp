#pragma once

#include <cstdio>

namespace qtoa::cli {

/// Runs the eight acceptance criteria, writing one PASS/FAIL line per criterion
/// (criterion 4 has two parts) with indented detail lines. Returns the number of failures.
int run_acceptance_suite(std::FILE* out);

}  // namespace qtoa::cli
