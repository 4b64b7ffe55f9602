#pragma once

#include <string_view>

#include "nf/functional.hpp"

namespace nf {

/// Malformed input to build(); message carries the character offset.
struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

/// Construct the canonical Functional from a position-space expression.
///
/// Grammar (documented in docs/grammar.md):
///   expr     := [sign] addend { ('+'|'-') addend }
///   addend   := { coef ['*'] } integral
///   integral := 'int[' sum ']'
///   sum      := [sign] product { ('+'|'-') product }
///   product  := power { ['*'] power }
///   power    := primary [ '^' nat ]
///   primary  := 'lap' ['^' nat] '(' field ')'
///             | 'grad(' field ').grad(' field ')'
///             | field | '(' sum ')' | coef
///   field    := 'psi*' | 'psi' | 'phi' | 'pphi'
///   coef     := [sign] (nat ['i'] | 'i') ['/' nat]
///
/// grad(f).grad(g) maps to the kernel factor -k_f.k_g, lap^n(f) to
/// (-k_f.k_f)^n; inputs equivalent under integration by parts produce
/// identical canonical Functionals.
Functional build(std::string_view expression);

}  // namespace nf
