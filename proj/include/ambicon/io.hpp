#pragma once

// Exact JSON (de)serialization for instances and contract sets. All numbers
// travel as integers or canonical "p/q" / decimal strings; parsing is exact
// and emission is deterministic (byte-identical for identical inputs).

#include "ambicon/model.hpp"

namespace ambicon::io {

// Schema: {"costs":[rat], "rewards":[rat], "probs":[[rat]]} with rat an
// integer, a "p/q" string, or an exact decimal string such as "0.25".
// Validates nonnegativity and exact row sums of 1 (errors carry row indices).
Instance parse_instance(const std::string& text);
std::string emit_instance(const Instance& inst);

// Schema: {"contracts":[[rat]...]}; every contract must have m entries.
AmbiguousContract parse_tau(const std::string& text, int m);
std::string emit_tau(const AmbiguousContract& tau);

}  // namespace ambicon::io
