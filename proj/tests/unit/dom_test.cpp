#include "../support/harness.hpp"
#include "plweb/dom.hpp"

#include <gtest/gtest.h>

using plweb::testing::Harness;
using namespace plweb;
using V = std::vector<std::string>;

namespace {

struct DomHarness : Harness {
    std::shared_ptr<dom::VirtualDocument> doc;

    explicit DomHarness(const std::string& markup = R"(<div class="item" id="a">one</div><div class="item" id="b">two</div><span id="output"></span>)")
    {
        doc = dom::VirtualDocument::from_markup(markup);
        dom::set_document(*session, doc);
        EXPECT_EQ(once("use_module(library(dom)), use_module(library(lists))."), "true.");
    }
};

} // namespace

TEST(Dom, Selection)
{
    DomHarness h;
    EXPECT_EQ(h.run("get_by_id(output, N)."), (V{"N = host<element>", "false."}));
    EXPECT_EQ(h.once("findall(N, get_by_class(item, N), L), length(L, Len)."), "L = [host<element>,host<element>], Len = 2");
    EXPECT_EQ(h.once("get_by_id(nope, _)."), "false.");
    EXPECT_EQ(h.once("get_by_id(_, _)."), "uncaught exception: error(instantiation_error,get_by_id/2).");
    EXPECT_EQ(h.once("get_by_tag(div, D), get_attr(D, id, I)."), "D = host<element>, I = a");
}

TEST(Dom, Traversal)
{
    DomHarness h;
    EXPECT_EQ(h.once("get_by_tag(body, B), findall(I, (parent_of(C, B), get_attr(C, id, I)), Is)."),
              "B = host<element>, Is = [a,b,output]");
    EXPECT_EQ(h.once("get_by_id(a, A), sibling(A, S), get_attr(S, id, I)."), "A = host<element>, S = host<element>, I = b");
    EXPECT_EQ(h.once("get_by_id(b, B), findall(I, (sibling(B, S), get_attr(S, id, I)), Is)."),
              "B = host<element>, Is = [a,output]");
    EXPECT_EQ(h.once("get_by_tag(html, R), parent_of(R, P)."), "false.");
    EXPECT_EQ(h.once("parent_of(foo, P)."), "uncaught exception: error(type_error(dom_object,foo),parent_of/2).");
}

TEST(Dom, Building)
{
    DomHarness h;
    std::string before = h.doc->snapshot();
    EXPECT_EQ(h.once("create(p, D), get_by_tag(body, B), append_child(B, D), append_child(B, D)."), "false.");
    EXPECT_NE(h.doc->snapshot(), before); // the first append happened
    std::string mid = h.doc->snapshot();
    EXPECT_EQ(h.once("get_by_id(a, A), get_by_tag(body, B), append_child(B, A)."), "false.");
    EXPECT_EQ(h.doc->snapshot(), mid);
    EXPECT_EQ(h.once("get_by_id(b, B), create(hr, D2), insert_before(D2, B), sibling(B, S), \\+ get_attr(S, id, _)."),
              "B = host<element>, D2 = host<element>, S = host<element>");
    EXPECT_EQ(h.once("get_by_id(b, B), sibling(S, B), \\+ get_attr(S, id, _)."), "B = host<element>, S = host<element>");
    EXPECT_EQ(h.once("create(em, X), get_by_id(a, A), insert_after(X, A), get_by_tag(body, Body), get_html(Body, H)."),
              "X = host<element>, A = host<element>, Body = host<element>, H = <div id=\"a\" class=\"item\">one</div><em></em><hr><div id=\"b\" class=\"item\">two</div><span id=\"output\"></span><p></p>");
    EXPECT_TRUE(h.doc->audit().empty());
}

TEST(Dom, Properties)
{
    DomHarness h;
    EXPECT_EQ(h.once("create(input, Rad), set_attr(Rad, value, 3.14), get_attr(Rad, value, V)."), "Rad = host<element>, V = 3.14");
    EXPECT_EQ(h.once("get_by_id(output, O), set_html(O, k), get_html(O, H)."), "O = host<element>, H = k");
    EXPECT_EQ(h.once("get_by_id(a, N), add_class(N, c), has_class(N, c), remove_class(N, c), \\+ has_class(N, c)."), "N = host<element>");
    EXPECT_EQ(h.once("get_by_id(a, N), set_style(N, color, red), get_style(N, color, C)."), "N = host<element>, C = red");
    EXPECT_EQ(h.once("get_by_id(a, N), hide(N), get_style(N, display, D)."), "N = host<element>, D = none");
    EXPECT_EQ(h.once("get_by_id(a, N), show(N), \\+ get_style(N, display, _), toggle(N), toggle(N), \\+ get_style(N, display, _)."), "N = host<element>");
    EXPECT_EQ(h.once("get_by_id(output, O), set_html(O, '<b>x</b>'), parent_of(C, O), get_html(C, H)."), "O = host<element>, C = host<element>, H = x");
}

TEST(Dom, KeypressExample)
{
    DomHarness h;
    EXPECT_EQ(h.once("get_by_id(output, Output), get_by_tag(body, B), "
                     "bind(B, keypress, Event, (event_property(Event, key, Key), set_html(Output, Key)))."),
              "Output = host<element>, B = host<element>");
    h.doc->dispatch(h.doc->body(), "keypress", {{"key", std::string("k")}});
    h.session->executor().run();
    EXPECT_EQ(h.once("get_by_id(output, O), get_html(O, H)."), "O = host<element>, H = k");

    EXPECT_EQ(h.once("get_by_tag(body, B), unbind(B, keypress)."), "B = host<element>");
    h.doc->dispatch(h.doc->body(), "keypress", {{"key", std::string("z")}});
    h.session->executor().run();
    EXPECT_EQ(h.once("get_by_id(output, O), get_html(O, H)."), "O = host<element>, H = k");
}

TEST(Dom, EventEdgeCases)
{
    DomHarness h;
    std::string before = h.doc->snapshot();
    EXPECT_EQ(h.once("get_by_tag(body, B), bind(B, click, _, fail)."), "B = host<element>");
    h.doc->dispatch(h.doc->body(), "click");
    h.session->executor().run();
    EXPECT_EQ(h.doc->snapshot(), before);
    EXPECT_TRUE(h.session->warnings().empty());

    // Events fired at a child reach handlers of its ancestors, in order.
    ASSERT_FALSE(h.consult(":- dynamic(seen/1).\n"));
    EXPECT_EQ(h.once("get_by_tag(body, B), bind(B, ping, E, (event_property(E, n, N), assertz(seen(N))))."), "B = host<element>");
    auto a = h.doc->query_by(dom::DocumentHost::Selector::id, "a").at(0);
    for (double i = 1; i <= 3; ++i)
        h.doc->dispatch(a, "ping", {{"n", i}});
    h.session->executor().run();
    EXPECT_EQ(h.once("findall(N, seen(N), L)."), "L = [1,2,3]");

    // prevent_default marks the event.
    EXPECT_EQ(h.once("get_by_tag(body, B), bind(B, submit, E, prevent_default(E))."), "B = host<element>");
    auto ev = h.doc->dispatch(h.doc->body(), "submit");
    h.session->executor().run();
    EXPECT_TRUE(ev->default_prevented);

    // Handlers captured outside their goal carry no information.
    EXPECT_EQ(h.once("get_by_tag(body, B), bind(B, keep, E, assertz(kept(E)))."), "B = host<element>");
    h.doc->dispatch(h.doc->body(), "keep", {{"key", std::string("q")}});
    h.session->executor().run();
    EXPECT_EQ(h.once("kept(E), event_property(E, key, K)."), "false.");

    // unbind/3 removes only the structurally equal goal.
    EXPECT_EQ(h.once("get_by_tag(body, B), unbind(B, ping, (event_property(X, n, Y), assertz(seen(Y))))."), "B = host<element>");
    h.doc->dispatch(a, "ping", {{"n", 9.0}});
    h.session->executor().run();
    EXPECT_EQ(h.once("findall(N, seen(N), L)."), "L = [1,2,3]");
}
