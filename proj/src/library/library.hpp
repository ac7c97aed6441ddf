#pragma once

#include "plweb/engine.hpp"

namespace plweb {

void install_system(Session& s);
void install_control(Module& m);
void install_system_builtins(Module& m);
void install_system_terms(Module& m);
void install_arith(Module& m);
void install_database(Module& m);
std::string_view system_prolog_source();

void install_lists(Session& s);
// Prolog text of the lists library (for package/consult equivalence checks).
std::string_view lists_source();
void install_random(Session& s);
void install_os(Session& s);
void install_js(Session& s);
void install_dom(Session& s);

// Evaluates an arithmetic expression; throws PrologError on failure.
Term evaluate(Session& s, const Term& expr, const Term& context);
// -1, 0, 1 comparing two evaluated numbers.
int compare_numbers(const Term& a, const Term& b);

// Carries an error ball out of helper code called by natives.
struct PrologError {
    Term ball;
};

// Shorthand for natives: raise the ball in the thread and report synchronous.
inline bool raise(Thread& t, const Term& ball)
{
    t.throw_error(ball);
    return false;
}

// Gives a runtime-read term fresh variables (names follow).
void rename_read(ReadResult& r, FreshVars& fresh);
// number_codes/2 syntax; throws PrologError(syntax_error).
Term text_to_number(const std::string& text, const Term& context);

Term make_indicator(std::string_view name, std::size_t arity);

} // namespace plweb
