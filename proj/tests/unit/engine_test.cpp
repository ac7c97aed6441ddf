#include "../support/harness.hpp"

#include <gtest/gtest.h>

using plweb::testing::Harness;
using V = std::vector<std::string>;

TEST(Engine, AppendEnumeratesSplits)
{
    Harness h;
    ASSERT_FALSE(h.consult("append([], L, L).\nappend([H|T], L, [H|R]) :- append(T, L, R).\n"));
    EXPECT_EQ(h.run("append(X, Y, [a,b,c])."),
              (V{"X = [], Y = [a,b,c]", "X = [a], Y = [b,c]", "X = [a,b], Y = [c]", "X = [a,b,c], Y = []", "false."}));
}

TEST(Engine, ControlConstructs)
{
    Harness h;
    EXPECT_EQ(h.once("X = 1 ; X = 2."), "X = 1");
    EXPECT_EQ(h.run("(X = 1 ; X = 2), X > 1."), (V{"X = 2", "false."}));
    EXPECT_EQ(h.once("( 1 > 2 -> X = a ; X = b )."), "X = b");
    EXPECT_EQ(h.once("\\+ fail."), "true.");
    EXPECT_EQ(h.once("findall(X, between(1, 5, X), L)."), "L = [1,2,3,4,5]");
    EXPECT_EQ(h.once("catch(throw(boom), E, true)."), "E = boom");
    EXPECT_EQ(h.once("throw(boom)."), "uncaught exception: boom.");
    EXPECT_EQ(h.once("X is 2 + 3 * 4."), "X = 14");
    EXPECT_EQ(h.once("X is 7 / 2."), "X = 3.5");
    EXPECT_EQ(h.once("atom_length(hello, N)."), "N = 5");
    EXPECT_EQ(h.once("foo(1)."), "uncaught exception: error(existence_error(procedure,foo/1),foo/1).");
    EXPECT_EQ(h.once("use_module(library(lists))."), "true.");
    EXPECT_EQ(h.run("member(X, [a,b])."), (V{"X = a", "X = b", "false."}));
    EXPECT_EQ(h.once("setof(X-Y, member(X-Y, [b-1,a-2,b-1]), L)."), "L = [a-2,b-1]");
    EXPECT_EQ(h.once("length(L, 2), L = [A, B], A \\== B, var(A)."), "L = [A,B]");
}
