#pragma once

// Random function-free programs and a naive bottom-up evaluator for them.
// The engine's answer sets for every derived predicate must equal the least
// model computed here.

#include "harness.hpp"
#include "property_suites.hpp"

#include <map>
#include <random>
#include <set>
#include <sstream>

namespace plweb::testing::datalog {

struct Arg {
    bool is_var;
    std::string name;
};

struct Atom {
    std::string pred;
    std::vector<Arg> args;
};

struct Rule {
    Atom head;
    std::vector<Atom> body;
};

using Tuple = std::vector<std::string>;
using Model = std::map<std::string, std::set<Tuple>>;

struct Program {
    Model facts;
    std::vector<Rule> rules;
    std::map<std::string, std::size_t> derived; // name -> arity

    std::string text() const
    {
        std::ostringstream o;
        for (const auto& [p, tuples] : facts)
            for (const auto& t : tuples) {
                o << p << "(";
                for (std::size_t i = 0; i < t.size(); ++i)
                    o << (i ? "," : "") << t[i];
                o << ").\n";
            }
        auto atom = [&](const Atom& a) {
            o << a.pred << "(";
            for (std::size_t i = 0; i < a.args.size(); ++i)
                o << (i ? "," : "") << a.args[i].name;
            o << ")";
        };
        for (const auto& r : rules) {
            atom(r.head);
            o << " :- ";
            for (std::size_t i = 0; i < r.body.size(); ++i) {
                if (i)
                    o << ", ";
                atom(r.body[i]);
            }
            o << ".\n";
        }
        return o.str();
    }
};

// Base relations e/2 (acyclic), f/1 and g/2; tc/2 is the right-recursive
// closure of e; p1.. are non-recursive and may use anything defined before.
inline Program generate(std::mt19937_64& rng)
{
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    auto c = [](int i) { return "c" + std::to_string(i); };
    const int consts = 6;
    Program p;
    for (int i = 0; i < consts; ++i)
        for (int j = i + 1; j < consts; ++j)
            if (pick(3) == 0)
                p.facts["e"].insert({c(i), c(j)});
    p.facts["e"].insert({c(0), c(1)});
    for (int i = 0; i < consts; ++i)
        if (pick(2) == 0)
            p.facts["f"].insert({c(i)});
    p.facts["f"].insert({c(pick(consts))});
    for (int k = 0; k < 6; ++k)
        p.facts["g"].insert({c(pick(consts)), c(pick(consts))});

    auto v = [](const char* n) { return Arg{true, n}; };
    p.rules.push_back({{"tc", {v("X"), v("Y")}}, {{"e", {v("X"), v("Y")}}}});
    p.rules.push_back({{"tc", {v("X"), v("Y")}}, {{"e", {v("X"), v("Z")}}, {"tc", {v("Z"), v("Y")}}}});
    p.derived["tc"] = 2;

    std::vector<std::pair<std::string, std::size_t>> usable = {{"e", 2}, {"f", 1}, {"g", 2}, {"tc", 2}};
    static const char* vars[] = {"X", "Y", "Z", "W"};
    int layers = 2 + pick(3);
    for (int l = 1; l <= layers; ++l) {
        std::string name = "p" + std::to_string(l);
        std::size_t arity = 1 + pick(2);
        int nrules = 1 + pick(3);
        for (int r = 0; r < nrules; ++r) {
            Rule rule;
            std::vector<std::string> seen;
            int nbody = 1 + pick(3);
            for (int b = 0; b < nbody; ++b) {
                auto [bp, ba] = usable[pick(static_cast<int>(usable.size()))];
                Atom a{bp, {}};
                for (std::size_t i = 0; i < ba; ++i) {
                    if (pick(10) == 0) {
                        a.args.push_back({false, c(pick(consts))});
                    } else {
                        std::string vn = vars[pick(4)];
                        a.args.push_back({true, vn});
                        seen.push_back(vn);
                    }
                }
                rule.body.push_back(a);
            }
            rule.head.pred = name;
            for (std::size_t i = 0; i < arity; ++i) {
                if (seen.empty() || pick(8) == 0)
                    rule.head.args.push_back({false, c(pick(consts))});
                else
                    rule.head.args.push_back({true, seen[pick(static_cast<int>(seen.size()))]});
            }
            p.rules.push_back(rule);
        }
        p.derived[name] = arity;
        usable.emplace_back(name, arity);
    }
    return p;
}

namespace detail {

inline void join(const Rule& r, std::size_t i, std::map<std::string, std::string>& env, const Model& m,
                 std::set<Tuple>& out)
{
    if (i == r.body.size()) {
        Tuple t;
        for (const auto& a : r.head.args)
            t.push_back(a.is_var ? env.at(a.name) : a.name);
        out.insert(t);
        return;
    }
    const Atom& a = r.body[i];
    auto it = m.find(a.pred);
    if (it == m.end())
        return;
    for (const auto& tuple : it->second) {
        auto saved = env;
        bool ok = true;
        for (std::size_t k = 0; k < a.args.size() && ok; ++k) {
            const Arg& arg = a.args[k];
            if (!arg.is_var) {
                ok = arg.name == tuple[k];
            } else if (auto e = env.find(arg.name); e != env.end()) {
                ok = e->second == tuple[k];
            } else {
                env[arg.name] = tuple[k];
            }
        }
        if (ok)
            join(r, i + 1, env, m, out);
        env = saved;
    }
}

} // namespace detail

// Naive fixpoint iteration.
inline Model least_model(const Program& p)
{
    Model m = p.facts;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : p.rules) {
            std::set<Tuple> derived;
            std::map<std::string, std::string> env;
            detail::join(r, 0, env, m, derived);
            for (const auto& t : derived)
                changed |= m[r.head.pred].insert(t).second;
        }
    }
    return m;
}

inline SuiteResult program_suite(std::size_t programs, std::uint64_t seed)
{
    SuiteResult result;
    std::mt19937_64 rng(seed);
    for (std::size_t n = 0; n < programs; ++n, ++result.cases) {
        Program p = generate(rng);
        Model model = least_model(p);
        Harness h;
        std::string text = p.text();
        if (auto e = h.consult(text)) {
            result.fail("consult failed: " + *e + "\n" + text);
            continue;
        }
        for (const auto& [pred, arity] : p.derived) {
            std::string goal = pred + "(";
            for (std::size_t i = 0; i < arity; ++i)
                goal += (i ? ",A" : "A") + std::to_string(i);
            goal += ")";
            if (auto e = h.query(goal)) {
                result.fail(goal + ": " + *e);
                break;
            }
            std::set<Tuple> got;
            bool finished = false;
            for (int k = 0; k < 100000; ++k) {
                Answer a = h.next();
                if (!a.is_success()) {
                    finished = a.kind == Answer::Kind::failure;
                    break;
                }
                Tuple t(arity);
                for (const auto& [var, value] : a.bindings)
                    for (std::size_t i = 0; i < arity; ++i)
                        if (var.name.str() == "A" + std::to_string(i))
                            t[i] = value.is_atom() ? value.name() : "?";
                got.insert(t);
            }
            if (!finished) {
                result.fail(goal + " did not end in plain failure\n" + text);
                break;
            }
            if (got != model[pred]) {
                result.fail(goal + ": engine found " + std::to_string(got.size()) + " tuples, model has " +
                            std::to_string(model[pred].size()) + "\n" + text);
                break;
            }
        }
    }
    return result;
}

} // namespace plweb::testing::datalog
