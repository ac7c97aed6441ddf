#pragma once

#include "plweb/reader.hpp"
#include "plweb/substitution.hpp"
#include "plweb/term.hpp"

#include <string>

namespace plweb {

struct WriteOptions {
    bool quoted = false;
    bool ignore_ops = false;
    bool numbervars = true;
    std::size_t max_depth = 0; // 0 = unlimited
};

// `priority` is the context priority (999 for arguments, 1200 at top level).
std::string render_term(const Term& t, const WriteOptions& options, const OperatorTable& ops, int priority = 1200);

// Text of an atom as writeq would print it.
std::string quote_atom_if_needed(const std::string& name);

// Shortest round-tripping decimal text of a float, always with a `.` or exponent.
std::string format_float(double v);

// Resolves cyclic bindings (X -> f(X)) for display, eliding below `limit` levels.
Term resolve_for_display(const Term& t, const Substitution& s, std::size_t limit = 64);

} // namespace plweb
