#include "plweb/tooling.hpp"

#include <unordered_set>

namespace plweb {

namespace {

bool visible(const VarId& v)
{
    const std::string& name = v.name.str();
    return v.serial == 0 && !name.empty() && name[0] != '_';
}

void collect_vars(const Term& t, std::vector<VarId>& out)
{
    if (t.is_var())
        out.push_back(t.var_id());
    else if (t.is_compound() && !t.is_ground())
        for (const Term& a : t.args())
            collect_vars(a, out);
}

std::string letter_name(std::size_t n)
{
    std::string s = "_" + std::string(1, static_cast<char>('A' + n % 26));
    if (n >= 26)
        s += std::to_string(n / 26);
    return s;
}

} // namespace

// Query variables left unbound are not shown. A query variable bound to an
// internal variable is shown only when another query variable shares it
// (`Y = X`); other internal variables print as _A, _B, ... in order of
// appearance.
std::string format_bindings(Session& session, const Substitution& bindings, const WriteOptions& options)
{
    std::unordered_set<std::string> query_names;
    for (const auto& [var, value] : bindings)
        query_names.insert(var.name.str());

    Substitution rename;
    std::vector<const Substitution::Binding*> shown;
    for (const auto& b : bindings) {
        const auto& [var, value] = b;
        if (!visible(var))
            continue;
        if (value.is_var() && value.var_id() == var)
            continue;
        if (value.is_var() && !visible(value.var_id()) && !rename.contains(value.var_id())) {
            // First query variable to reach this internal variable names it.
            rename.bind(value.var_id(), Term::var(var));
            continue;
        }
        shown.push_back(&b);
    }

    std::size_t next_letter = 0;
    for (const auto* b : shown) {
        std::vector<VarId> vars;
        collect_vars(b->second, vars);
        for (const VarId& v : vars) {
            if (visible(v) || rename.contains(v))
                continue;
            std::string name;
            do
                name = letter_name(next_letter++);
            while (query_names.count(name));
            rename.bind(v, Term::var(name));
        }
    }

    std::string out;
    for (const auto* b : shown) {
        if (!out.empty())
            out += ", ";
        // 699 keeps operators of priority 700 and above in parentheses.
        out += b->first.name.str() + " = " + render_term(rename.apply(b->second), options, session.operators(), 699);
    }
    return out;
}

std::string format_answer(Session& session, const Answer& answer, const WriteOptions& options)
{
    switch (answer.kind) {
    case Answer::Kind::success: {
        std::string b = format_bindings(session, answer.bindings, options);
        return b.empty() ? "true." : b;
    }
    case Answer::Kind::failure:
        return "false.";
    case Answer::Kind::error:
        return "uncaught exception: " + render_term(answer.ball, options, session.operators()) + ".";
    case Answer::Kind::limit:
        return "limit exceeded.";
    }
    return {};
}

} // namespace plweb
