#pragma once

#include "plweb/substitution.hpp"

#include <optional>
#include <span>

namespace plweb {

// Most general unifier of a and b, or nullopt when none exists. The result is
// idempotent except for cyclic bindings admitted with occurs_check=false
// (X = f(X) yields X -> f(X)).
//
// Host values unify with each other by identity, and with `{k1: v1, ...}`
// records by matching each key against a property of the host object.
std::optional<Substitution> unify(const Term& a, const Term& b, bool occurs_check);

// Pairwise unification of two sequences of equal length, left to right.
std::optional<Substitution> unify_sequences(std::span<const Term> a, std::span<const Term> b,
                                            bool occurs_check);

// Host-value specific entry point; same semantics as unify(host, t).
std::optional<Substitution> unify_host(const Term& host, const Term& t, bool occurs_check);

} // namespace plweb
