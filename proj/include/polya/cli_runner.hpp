#pragma once

#include <string>
#include <vector>

#include "polya/ul.hpp"

namespace polya {

inline constexpr const char* kVersion = "0.1.0";

// The five closed-form-checked limit specs every suite-wide verification
// (moment recursion, fixed point, tail bounds) runs over.
struct NamedSpec {
  std::string name;
  ULSpec spec;
};

std::vector<NamedSpec> reference_suite();

// Runs one driver invocation, args being argv[1..]. Every subcommand reads a
// JSON config, seeds all randomness from (--seed, stream index), writes its
// CSV/JSON artifacts plus a manifest into --out, and returns the exit code:
// 0 all assertions passed, 1 an assertion failed, 2 bad configuration,
// 3 internal failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace polya
