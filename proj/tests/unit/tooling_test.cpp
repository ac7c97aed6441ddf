#include "support/harness.hpp"

#include "plweb/boundary.hpp"
#include "plweb/dom.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <regex>
#include <sstream>

using plweb::testing::Harness;
using namespace plweb;
using nlohmann::json;
using V = std::vector<std::string>;

namespace {

const char* append_program = "append([], L, L).\nappend([H|T], L, [H|R]) :- append(T, L, R).\n";
const char* powerset_program = "powerset([], []).\n"
                               "powerset([H|T], [H|P]) :- powerset(T, P).\n"
                               "powerset([_|T], P) :- powerset(T, P).\n";

DerivationTree tree_for(Harness& h, const std::string& goal, std::size_t cap)
{
    auto thread = h.session->fork();
    EXPECT_FALSE(h.query(goal, thread.get()));
    return record_tree(*thread, cap);
}

std::string repl(const std::string& program, const std::string& input)
{
    auto s = Session::create();
    bool done = false;
    s->consult(Source::text(program), [&](const std::optional<Term>&) { done = true; });
    s->executor().run_until([&] { return done; });
    std::istringstream in(input);
    std::ostringstream out;
    int code = run_repl(*s, in, out, {});
    return out.str() + "[exit " + std::to_string(code) + "]";
}

} // namespace

TEST(AnswerFormat, Shapes)
{
    Harness h;
    EXPECT_EQ(h.once("X = f(Y), Y = 1."), "X = f(1), Y = 1");
    EXPECT_EQ(h.once("X = Y."), "X = Y");
    EXPECT_EQ(h.once("_X = 1, Z = 2."), "Z = 2");
    EXPECT_EQ(h.once("X = (a :- b)."), "X = (a :- b)");
    EXPECT_EQ(h.once("X = 'hello world'."), "X = hello world");
    EXPECT_EQ(h.format_quoted("X = 'hello world'."), "X = 'hello world'");
    EXPECT_EQ(h.once("true."), "true.");
    EXPECT_EQ(h.once("fail."), "false.");
    EXPECT_EQ(h.once("X = [1,2|T]."), "X = [1,2|T]");
    EXPECT_EQ(h.once("X = - 1, Y = -1, Z = -(-(1))."), "X = - 1, Y = -1, Z = - - 1");
}

TEST(DerivationTree, PowersetMatchesAnswerStream)
{
    Harness h;
    ASSERT_FALSE(h.consult(powerset_program));
    auto tree = tree_for(h, "powerset([a,b],P).", 10);
    V leaves;
    for (const TreeNode* n : tree.answers()) {
        EXPECT_EQ(n->goal, "□");
        leaves.push_back(n->subst);
    }
    auto stream = h.run("powerset([a,b],P).");
    stream.pop_back();
    EXPECT_EQ(leaves, stream);
    EXPECT_EQ(leaves.size(), 4u);
    // Parents precede children and ids are indexes.
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        EXPECT_EQ(tree.nodes[i].id, i);
        if (tree.nodes[i].parent)
            EXPECT_LT(*tree.nodes[i].parent, i);
        else
            EXPECT_EQ(i, 0u);
    }
}

TEST(DerivationTree, FailureAndCap)
{
    Harness h;
    ASSERT_FALSE(h.consult(append_program));
    auto failed = tree_for(h, "fail.", 10);
    EXPECT_TRUE(failed.answers().empty());
    ASSERT_FALSE(failed.nodes.empty());
    EXPECT_EQ(failed.nodes[0].goal, "fail");

    auto capped = tree_for(h, "append(X, Y, [a,b,c]).", 1);
    ASSERT_EQ(capped.answers().size(), 1u);
    EXPECT_EQ(capped.answers()[0]->subst, "X = [], Y = [a,b,c]");

    auto erroring = tree_for(h, "X is foo + 1.", 10);
    bool has_error = false;
    for (const auto& n : erroring.nodes)
        has_error |= n.kind == TreeNode::Kind::error;
    EXPECT_TRUE(has_error);
}

TEST(DerivationTree, CutPrunesAlternatives)
{
    Harness h;
    ASSERT_FALSE(h.consult("p(1). p(2). p(3).\nq(X) :- p(X), !.\n"));
    auto tree = tree_for(h, "q(X).", 10);
    ASSERT_EQ(tree.answers().size(), 1u);
    std::size_t pruned = 0;
    for (const auto& n : tree.nodes)
        pruned += n.kind == TreeNode::Kind::cut_pruned;
    EXPECT_GE(pruned, 1u);
}

TEST(DerivationTree, JsonSchemaAndDot)
{
    Harness h;
    ASSERT_FALSE(h.consult(powerset_program));
    auto tree = tree_for(h, "powerset([a,b],P).", 10);
    json j = json::parse(export_tree(tree, "json"));
    ASSERT_TRUE(j.is_object());
    EXPECT_EQ(j["version"], 1);
    EXPECT_TRUE(j["goal_text"].is_string());
    EXPECT_EQ(j["answer_cap"], 10);
    ASSERT_TRUE(j["nodes"].is_array());
    EXPECT_EQ(j["nodes"].size(), tree.nodes.size());
    const std::set<std::string> kinds = {"interior", "answer", "error", "cut_pruned"};
    std::size_t answers = 0;
    for (const auto& n : j["nodes"]) {
        ASSERT_TRUE(n.is_object());
        EXPECT_EQ(n.size(), 5u);
        EXPECT_TRUE(n["id"].is_number_unsigned());
        EXPECT_TRUE(n["parent"].is_null() || n["parent"].is_number_unsigned());
        EXPECT_TRUE(n["goal"].is_string());
        EXPECT_TRUE(n["subst"].is_string());
        ASSERT_TRUE(n["kind"].is_string());
        EXPECT_TRUE(kinds.count(n["kind"].get<std::string>()));
        answers += n["kind"] == "answer";
    }
    EXPECT_EQ(answers, 4u);

    std::string dot = export_tree(tree, "dot");
    std::regex node_stmt(R"(^\s*n\d+\s*\[)");
    std::size_t statements = 0;
    std::istringstream lines(dot);
    for (std::string line; std::getline(lines, line);)
        statements += std::regex_search(line, node_stmt);
    EXPECT_EQ(statements, tree.nodes.size());
    EXPECT_THROW(export_tree(tree, "svg"), std::invalid_argument);
}

TEST(DerivationTree, PendingGoalsShowCurrentBindings)
{
    Harness h;
    auto tree = tree_for(h, "X = f(Y), Y = a, Z = X.", 10);
    V goals;
    for (const auto& n : tree.nodes)
        goals.push_back(n.goal);
    // Conjunctions unfold one step at a time; the waiting Z=X shows X's value.
    EXPECT_EQ(goals, (V{"(X=f(Y),Y=a,Z=X)", "X=f(Y), (Y=a,Z=X)", "(Y=a,Z=f(Y))", "Y=a, Z=f(Y)", "Z=f(a)", "□"}));
    ASSERT_EQ(tree.answers().size(), 1u);
    EXPECT_EQ(tree.answers()[0]->subst, "X = f(a), Y = a, Z = f(a)");
}

TEST(DerivationTree, TrueGivesSingleNode)
{
    Harness h;
    auto tree = tree_for(h, "true.", 10);
    json j = json::parse(export_tree(tree, "json"));
    // Root and its answer leaf.
    ASSERT_EQ(tree.answers().size(), 1u);
    EXPECT_LE(j["nodes"].size(), 2u);
}

TEST(Repl, MoreAnswersAndErrors)
{
    EXPECT_EQ(repl(append_program, "append(X, Y, [a,b]).\n;;;\n"),
              "?- X = [], Y = [a,b]\nX = [a], Y = [b]\nX = [a,b], Y = []\nfalse.\n?- \n[exit 0]");
    EXPECT_EQ(repl("", "X = .\nY = 1.\n"), "?- syntax error: unexpected end of clause at line(1)-column(5)\n?- Y = 1\n[exit 0]");
    EXPECT_EQ(repl("", "foo.\nhalt.\n"),
              "?- uncaught exception: error(existence_error(procedure,foo/0),foo/0).\n?- [exit 0]");
    // A goal line while more answers could follow starts the next query.
    EXPECT_EQ(repl("", "(X = a ; X = b).\nY = 2.\n\n"), "?- X = a\nY = 2\n?- \n[exit 0]");
    // Goals may span lines; end of input while waiting for ';' exits quietly.
    EXPECT_EQ(repl("", "X = 1,\nY = 2.\n"), "?- X = 1, Y = 2\n[exit 0]");
}

TEST(Boundary, SessionLifecycle)
{
    Boundary b;
    json r = b.handle({{"op", "create_session"}});
    ASSERT_TRUE(r["ok"]);
    auto id = r["session"].get<std::uint64_t>();
    EXPECT_TRUE(b.handle({{"op", "consult"}, {"session", id}, {"text", append_program}})["ok"]);
    EXPECT_TRUE(b.handle({{"op", "query"}, {"session", id}, {"goal", "append(X, Y, [a])."}})["ok"]);
    json a = b.handle({{"op", "answer"}, {"session", id}});
    EXPECT_EQ(a["kind"], "success");
    EXPECT_EQ(a["text"], "X = [], Y = [a]");
    EXPECT_EQ(a["bindings"]["X"], "[]");
    b.handle({{"op", "answer"}, {"session", id}});
    EXPECT_EQ(b.handle({{"op", "answer"}, {"session", id}})["kind"], "failure");

    json bad = b.handle({{"op", "query"}, {"session", id}, {"goal", "X = ."}});
    EXPECT_FALSE(bad["ok"]);
    EXPECT_NE(bad["error"].get<std::string>().find("syntax_error"), std::string::npos);

    json t = b.handle({{"op", "record_tree"}, {"session", id}, {"goal", "append(X, Y, [a])."}});
    ASSERT_TRUE(t["ok"]);
    EXPECT_EQ(t["tree"]["version"], 1);
    EXPECT_FALSE(b.handle({{"op", "record_tree"}, {"session", id}, {"goal", "true."}, {"format", "png"}})["ok"]);

    EXPECT_TRUE(b.handle({{"op", "set_flag"}, {"session", id}, {"flag", "max_inferences"}, {"value", "500"}})["ok"]);
    EXPECT_EQ(b.handle({{"op", "get_flag"}, {"session", id}, {"flag", "max_inferences"}})["value"], "500");

    EXPECT_TRUE(b.handle({{"op", "destroy_session"}, {"session", id}})["ok"]);
    EXPECT_FALSE(b.handle({{"op", "answer"}, {"session", id}})["ok"]);
    EXPECT_FALSE(json::parse(b.handle_text("{not json"))["ok"]);
    EXPECT_FALSE(b.handle({{"op", "launch"}, {"session", 1}})["ok"]);
}

TEST(Boundary, OutputAndHostHandles)
{
    Boundary b;
    json r = b.handle({{"op", "create_session"}, {"host", {{"o", {{"x", 1}}}}}});
    auto id = r["session"].get<std::uint64_t>();
    b.handle({{"op", "query"}, {"session", id}, {"goal", "use_module(library(js)), write(hi), get_prop(o, O)."}});
    json a = b.handle({{"op", "answer"}, {"session", id}});
    EXPECT_EQ(a["output"], "hi");
    ASSERT_TRUE(a["bindings"]["O"].is_object());
    EXPECT_EQ(a["bindings"]["O"]["kind"], "object");
    auto handle = a["bindings"]["O"]["$handle"].get<std::uint64_t>();
    EXPECT_TRUE(b.handle({{"op", "release"}, {"session", id}, {"handle", handle}})["ok"]);
    EXPECT_FALSE(b.handle({{"op", "release"}, {"session", id}, {"handle", handle}})["ok"]);
}

TEST(Boundary, DispatchEvent)
{
    Boundary b;
    json r = b.handle({{"op", "create_session"}, {"document", "<input id=\"in\"><span id=\"output\"></span>"}});
    auto id = r["session"].get<std::uint64_t>();
    b.handle({{"op", "query"},
              {"session", id},
              {"goal", "use_module(library(dom)), get_by_id(in, I), get_by_id(output, O), "
                       "bind(I, keypress, Ev, (event_property(Ev, key, K), set_html(O, K), write(K)))."}});
    ASSERT_EQ(b.handle({{"op", "answer"}, {"session", id}})["kind"], "success");
    json d = b.handle({{"op", "dispatch_event"}, {"session", id}, {"id", "in"}, {"type", "keypress"},
                       {"properties", {{"key", "q"}}}});
    ASSERT_TRUE(d["ok"]);
    EXPECT_EQ(d["output"], "q");
    auto s = b.session(id);
    auto doc = std::dynamic_pointer_cast<dom::VirtualDocument>(dom::document_of(*s));
    EXPECT_NE(doc->snapshot().find("<span id=\"output\">q</span>"), std::string::npos);
}
