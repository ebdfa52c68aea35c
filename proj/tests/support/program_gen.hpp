#pragma once

#include <cstdint>
#include <string>

#include "accd/ddsl/ast.hpp"
#include "accd/util/rng.hpp"

namespace accd::testing {

/// Random program over the full grammar. Not necessarily valid for validate(); only
/// syntactically well formed.
ddsl::Program random_program(util::Rng& rng);

/// Renders a program with random whitespace, block comments, and the optional ';'
/// before '}' dropped. parse() of the result must equal the input program.
std::string noisy_render(const ddsl::Program& p, util::Rng& rng);

}  // namespace accd::testing
