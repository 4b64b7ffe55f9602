#pragma once

#include <string>

#include "nf/functional.hpp"

namespace nf {

enum class PrintStyle { laplacian, latex };

/// Deterministic human-readable rendering.  Fields carry Delta decorations;
/// two-factor kernels and single off-diagonal dot products are shown as
/// gradient pairings in the conventional display style; anything else falls
/// back to explicit [ki.kj] kernel notation.
std::string pretty_print(const Functional& F, PrintStyle style = PrintStyle::laplacian);

/// One term in the structured machine-readable form used by --format json:
/// exact rationals as "p/q" strings (schema in docs/formats.md).
std::string to_json(const Functional& F);

}  // namespace nf
