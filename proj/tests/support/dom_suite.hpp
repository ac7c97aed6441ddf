#pragma once

// Random sequences of dom predicate calls against a virtual document. After
// every step the tree must pass the structural audit, and an insertion that
// fails must leave the document byte-identical.

#include "harness.hpp"
#include "property_suites.hpp"

#include "plweb/dom.hpp"

#include <random>

namespace plweb::testing {

inline SuiteResult dom_suite(std::size_t sequences, std::uint64_t seed)
{
    SuiteResult result;
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    for (std::size_t s = 0; s < sequences; ++s, ++result.cases) {
        Harness h;
        auto doc = dom::VirtualDocument::from_markup(
            R"(<div id="i0"><p id="i1">x</p><ul id="i2"><li id="i3">a</li><li id="i4">b</li></ul></div><span id="i5"></span>)");
        dom::set_document(*h.session, doc);
        h.once("use_module(library(dom)).");
        std::vector<std::string> ids = {"i0", "i1", "i2", "i3", "i4", "i5"};
        std::size_t fresh = 0;
        std::string log;
        bool broken = false;

        std::size_t steps = 5 + pick(11);
        for (std::size_t k = 0; k < steps && !broken; ++k) {
            std::string a = ids[pick(ids.size())], b = ids[pick(ids.size())];
            bool a_live = !doc->query_by(dom::DocumentHost::Selector::id, a).empty();
            bool b_live = !doc->query_by(dom::DocumentHost::Selector::id, b).empty();
            std::string goal;
            enum { must_succeed, must_fail_unchanged, either } expect = either;
            switch (pick(9)) {
            case 0:
            case 1:
            case 2: {
                static const char* how[] = {"append_child(A, X)", "insert_before(X, A)", "insert_after(X, A)"};
                std::string id = "n" + std::to_string(fresh++);
                ids.push_back(id);
                goal = "get_by_id(" + a + ", A), create(em, X), set_attr(X, id, " + id + "), " + how[pick(3)] +
                       ", get_by_id(" + id + ", Y), Y == X.";
                expect = a_live ? must_succeed : must_fail_unchanged;
                break;
            }
            case 3:
                // Moving an attached node is refused, whatever the anchor.
                goal = "get_by_id(" + a + ", A), get_by_id(" + b + ", B), append_child(A, B).";
                expect = must_fail_unchanged;
                break;
            case 4:
                goal = "get_by_id(" + a + ", A), get_by_id(" + b + ", B), insert_before(B, A).";
                expect = must_fail_unchanged;
                break;
            case 5: {
                std::string id = "h" + std::to_string(fresh++);
                ids.push_back(id);
                goal = "get_by_id(" + a + ", A), set_html(A, '<i id=\"" + id + "\">t</i><b>u</b>').";
                expect = a_live ? must_succeed : must_fail_unchanged;
                break;
            }
            case 6:
                goal = "get_by_id(" + a + ", A), add_class(A, c" + std::to_string(pick(3)) + "), toggle(A).";
                expect = a_live ? must_succeed : must_fail_unchanged;
                break;
            case 7:
                goal = "get_by_id(" + a + ", A), set_style(A, color, red), set_attr(A, title, t" + std::to_string(k) + ").";
                expect = a_live ? must_succeed : must_fail_unchanged;
                break;
            default:
                goal = "get_by_id(" + a + ", A), create(hr, X), append_child(X, A).";
                expect = must_fail_unchanged;
                break;
            }
            (void)b_live;
            std::string before = doc->snapshot();
            std::string answer = h.once(goal);
            log += goal + " -> " + answer + "\n";
            bool ok = answer != "false." && answer.rfind("uncaught", 0) != 0 && answer.rfind("query", 0) != 0;
            if (answer.rfind("uncaught", 0) == 0 || answer.rfind("query", 0) == 0) {
                result.fail("error in step\n" + log);
                broken = true;
            } else if (expect == must_succeed && !ok) {
                result.fail("step should have succeeded\n" + log);
                broken = true;
            } else if (expect == must_fail_unchanged && (ok || doc->snapshot() != before)) {
                result.fail("refused step changed the document or succeeded\n" + log + before + "\n" + doc->snapshot());
                broken = true;
            } else if (auto problems = doc->audit(); !problems.empty()) {
                result.fail("audit: " + problems.front() + "\n" + log);
                broken = true;
            }
        }
    }
    return result;
}

} // namespace plweb::testing
