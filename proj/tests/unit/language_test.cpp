#include "support/harness.hpp"

#include "plweb/reader.hpp"
#include "plweb/writer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using plweb::testing::Harness;
using namespace plweb;
using V = std::vector<std::string>;

namespace {

std::string canon(const std::string& text)
{
    OperatorTable ops;
    return render_term(parse_term(text, ops).term, {true, true, false, 0}, ops);
}

std::string writeq(const std::string& text)
{
    OperatorTable ops;
    return render_term(parse_term(text, ops).term, {true, false, true, 0}, ops);
}

} // namespace

TEST(Reader, OperatorsAndPriorities)
{
    EXPECT_EQ(canon("a :- b, c ; d -> e"), ":-(a,;(','(b,c),->(d,e)))");
    EXPECT_EQ(canon("1 - 2 - 3"), "-(-(1,2),3)");
    EXPECT_EQ(canon("2 ^ 3 ^ 4"), "^(2,^(3,4))");
    EXPECT_EQ(canon("- 1"), "-(1)");
    EXPECT_EQ(canon("-1"), "-1");
    EXPECT_EQ(canon("- a"), "-(a)");
    EXPECT_EQ(canon("-(1)"), "-(1)");
    EXPECT_EQ(canon("a- -1"), "-(a,-1)");
    EXPECT_EQ(canon("\\+ a, b"), "','(\\+(a),b)");
    EXPECT_EQ(canon("f(a, (b, c))"), "f(a,','(b,c))");
    EXPECT_EQ(canon("[a, b | T]"), "[a,b|T]");
    EXPECT_EQ(canon("{a, b}"), "{}(','(a,b))");
    EXPECT_EQ(canon("- (1)"), "-(1)");
    EXPECT_EQ(canon("f(+, -)"), "f(+,-)");
    EXPECT_EQ(canon("[-]"), "[-]");
}

TEST(Reader, Tokens)
{
    EXPECT_EQ(canon("'it''s'"), "'it\\'s'");
    EXPECT_EQ(canon("'a\\nb'"), "'a\\nb'");
    EXPECT_EQ(canon("0'a"), "97");
    EXPECT_EQ(canon("0x1F"), "31");
    EXPECT_EQ(canon("0b101"), "5");
    EXPECT_EQ(canon("0o17"), "15");
    EXPECT_EQ(canon("1.5e3"), "1500.0");
    EXPECT_EQ(canon("\"ab\""), "[97,98]");
    EXPECT_EQ(canon("a /* comment */ + % line\n b"), "+(a,b)");
    EXPECT_EQ(canon("'hello world'"), "'hello world'");
    EXPECT_EQ(canon("[]"), "[]");
    EXPECT_EQ(canon("'[]'"), "[]");
}

TEST(Reader, SyntaxErrors)
{
    OperatorTable ops;
    EXPECT_THROW(parse_term("f(a", ops), SyntaxError);
    EXPECT_THROW(parse_term("a b", ops), SyntaxError);
    EXPECT_THROW(parse_term("'unterminated", ops), SyntaxError);
    EXPECT_THROW(parse_term("X = )", ops), SyntaxError);
    EXPECT_THROW(parse_term("_G12", ops), SyntaxError); // reserved for fresh variables
    Harness h;
    EXPECT_EQ(h.once("catch(atom_to_term('foo(', T, B), error(E, _), true)."), "E = syntax_error(unexpected end of file)");
}

TEST(Writer, Quoting)
{
    EXPECT_EQ(writeq("'hello world'"), "'hello world'");
    EXPECT_EQ(writeq("[]"), "[]");
    EXPECT_EQ(writeq("'A'"), "'A'");
    EXPECT_EQ(writeq("f(;, '|', '[]')"), "f(;,'|',[])");
    EXPECT_EQ(writeq("- (1)"), "- 1");
    EXPECT_EQ(writeq("-(-(1))"), "- - 1");
    EXPECT_EQ(writeq("- (-1)"), "- -1");
    EXPECT_EQ(writeq("1 - -1"), "1- -1");
    EXPECT_EQ(writeq("a = \\+ b"), "a=(\\+b)");
    EXPECT_EQ(writeq("(a :- b, c)"), "a :- b,c");
    EXPECT_EQ(writeq("f((a :- b))"), "f((a :- b))");
    EXPECT_EQ(writeq("f((a, b))"), "f((a,b))");
    EXPECT_EQ(writeq("- (+)"), "- (+)");
    EXPECT_EQ(writeq("{x}"), "{x}");
    EXPECT_EQ(writeq("'$VAR'(27)"), "B1");
    EXPECT_EQ(writeq("1.0e10"), "10000000000.0");
    EXPECT_EQ(writeq("f((a;b))"), "f((a;b))");
    EXPECT_EQ(writeq("2*(3+4)"), "2*(3+4)");
    EXPECT_EQ(writeq("(2*3)+4"), "2*3+4");
    EXPECT_EQ(writeq("1-(2-3)"), "1-(2-3)");
}

TEST(Builtins, Arithmetic)
{
    Harness h;
    EXPECT_EQ(h.once("X is 7 // 2, Y is -7 // 2, Z is 7 mod -2, W is -7 rem 2."), "X = 3, Y = -3, Z = -1, W = -1");
    EXPECT_EQ(h.once("X is 2 ** 3, Y is 2 ^ 3, Z is 2.0 ** 3."), "X = 8, Y = 8, Z = 8.0");
    EXPECT_EQ(h.once("X is max(1, 2.0), Y is min(3, 2), Z is abs(-4)."), "X = 2.0, Y = 2, Z = 4");
    EXPECT_EQ(h.once("X is truncate(3.7), Y is round(2.5), Z is ceiling(2.1), W is floor(-2.1)."),
              "X = 3, Y = 3, Z = 3, W = -3");
    EXPECT_EQ(h.once("X is 5 /\\ 3, Y is 5 \\/ 3, Z is 1 << 4, W is \\ 0."), "X = 1, Y = 7, Z = 16, W = -1");
    EXPECT_EQ(h.once("catch(X is 1 / 0, error(E, _), true)."), "E = evaluation_error(zero_divisor)");
    EXPECT_EQ(h.once("catch(X is foo + 1, error(E, _), true)."), "E = type_error(evaluable,foo/0)");
    EXPECT_EQ(h.once("catch(X is Y + 1, error(E, _), true)."), "E = instantiation_error");
    EXPECT_EQ(h.once("X = 3, X =:= 3.0, 1 < 2, 2 >= 2, 1 =\\= 2."), "X = 3");
    EXPECT_EQ(h.once("succ(X, 4), succ(3, Y), plus(2, Z, 5)."), "X = 3, Y = 4, Z = 3");
    EXPECT_EQ(h.once("succ(X, 0)."), "false.");
    EXPECT_EQ(h.once("catch(succ(X, -1), error(E, _), true)."), "E = type_error(not_less_than_zero,-1)");
}

TEST(Builtins, TermInspection)
{
    Harness h;
    EXPECT_EQ(h.once("functor(f(a, b), N, A)."), "N = f, A = 2");
    EXPECT_EQ(h.once("functor(T, g, 2)."), "T = g(_A,_B)");
    EXPECT_EQ(h.once("arg(2, f(a, b), X)."), "X = b");
    EXPECT_EQ(h.once("f(a, b) =.. L."), "L = [f,a,b]");
    EXPECT_EQ(h.once("T =.. [g, 1]."), "T = g(1)");
    EXPECT_EQ(h.once("copy_term(f(X, Y, X), C), C = f(1, 2, Z)."), "C = f(1,2,1), Z = 1");
    EXPECT_EQ(h.once("term_variables(f(X, g(Y, X)), Vs)."), "Vs = [X,Y]");
    EXPECT_EQ(h.once("compare(O, a, b)."), "O = (<)");
    EXPECT_EQ(h.once("msort([b, 1, a, 2.0, f(x), Z], L)."), "L = [Z,1,2.0,a,b,f(x)]");
    EXPECT_EQ(h.once("sort([c, a, b, a], L)."), "L = [a,b,c]");
    EXPECT_EQ(h.once("sort(0, @>=, [1, 3, 2, 3], L)."), "L = [3,3,2,1]");
    EXPECT_EQ(h.once("keysort([b-1, a-2, b-0], L)."), "L = [a-2,b-1,b-0]");
    EXPECT_EQ(h.once("f(A, B) =@= f(C, D), \\+ f(A, A) =@= f(C, D)."), "true.");
    EXPECT_EQ(h.once("catch(functor(T, N, 1), error(E, _), true)."), "E = instantiation_error");
    EXPECT_EQ(h.once("catch(arg(x, f(a), _), error(E, _), true)."), "E = type_error(integer,x)");
}

TEST(Builtins, Atoms)
{
    Harness h;
    EXPECT_EQ(h.once("atom_codes(abc, L)."), "L = [97,98,99]");
    EXPECT_EQ(h.once("atom_chars(X, [a, b])."), "X = ab");
    EXPECT_EQ(h.once("atom_concat(ab, cd, X)."), "X = abcd");
    EXPECT_EQ(h.run("atom_concat(X, Y, ab)."), (V{"X = , Y = ab", "X = a, Y = b", "X = ab, Y = ", "false."}));
    EXPECT_EQ(h.once("sub_atom(hello, 1, 3, A, S)."), "A = 1, S = ell");
    EXPECT_EQ(h.once("findall(B, sub_atom(abab, B, _, _, ab), L)."), "L = [0,2]");
    EXPECT_EQ(h.once("atom_number('3.5', N), number_codes(M, \"42\")."), "N = 3.5, M = 42");
    EXPECT_EQ(h.once("atom_number(foo, N)."), "false.");
    EXPECT_EQ(h.once("upcase_atom(abc, U), char_code(C, 0'z)."), "U = ABC, C = z");
    EXPECT_EQ(h.once("atomic_list_concat([a, 1, b], '-', X)."), "X = a-1-b");
    EXPECT_EQ(h.once("atomic_list_concat(L, ',', 'a,b,c')."), "L = [a,b,c]");
    EXPECT_EQ(h.once("term_to_atom(f(X, 'a b'), A)."), "A = f(X,'a b')");
    EXPECT_EQ(h.once("catch(atom_length(X, N), error(E, _), true)."), "E = instantiation_error");
    EXPECT_EQ(h.once("catch(atom_length(f(x), N), error(E, _), true)."), "E = type_error(atom,f(x))");
}

TEST(Builtins, Database)
{
    Harness h;
    EXPECT_EQ(h.once("assertz(c(1)), assertz(c(2)), asserta(c(0)), findall(X, c(X), L)."), "L = [0,1,2]");
    EXPECT_EQ(h.once("retract(c(1)), findall(X, c(X), L)."), "L = [0,2]");
    EXPECT_EQ(h.once("clause(c(X), B)."), "X = 0, B = true");
    EXPECT_EQ(h.once("retractall(c(_)), findall(X, c(X), L)."), "L = []");
    EXPECT_EQ(h.once("c(_)."), "false."); // still dynamic
    EXPECT_EQ(h.once("catch(assertz((foo :- 1)), error(E, _), true)."), "E = type_error(callable,1)");
    EXPECT_EQ(h.once("catch(assertz(atom_length(a, 1)), error(E, _), true)."),
              "E = permission_error(modify,static_procedure,atom_length/2)");
    // The logical update view: clauses added while iterating are not seen.
    EXPECT_EQ(h.once("assertz(n(1)), findall(X, (n(X), Y is X + 1, assertz(n(Y))), L)."), "L = [1]");
}

TEST(Builtins, AllSolutions)
{
    Harness h;
    ASSERT_FALSE(h.consult("age(peter, 7). age(ann, 11). age(pat, 8). age(tom, 5). age(mike, 11).\n"));
    EXPECT_EQ(h.once("findall(N, age(N, _), L)."), "L = [peter,ann,pat,tom,mike]");
    EXPECT_EQ(h.run("bagof(N, age(N, A), L)."),
              (V{"A = 5, L = [tom]", "A = 7, L = [peter]", "A = 8, L = [pat]", "A = 11, L = [ann,mike]", "false."}));
    EXPECT_EQ(h.once("setof(A-N, age(N, A), [_-Y|_])."), "Y = tom");
    EXPECT_EQ(h.once("setof(N, A^age(N, A), L)."), "L = [ann,mike,pat,peter,tom]");
    EXPECT_EQ(h.once("bagof(N, age(N, 99), L)."), "false.");
    EXPECT_EQ(h.once("aggregate_all(count, age(_, _), C), aggregate_all(sum(A), age(_, A), S), "
                     "aggregate_all(max(A), age(_, A), M)."),
              "C = 5, S = 42, M = 11");
    EXPECT_EQ(h.once("forall(age(_, A), A > 4)."), "true.");
    EXPECT_EQ(h.once("findall(X, (X = a ; X = b), L, [z])."), "L = [a,b,z]");
}

TEST(Engine, CutSemantics)
{
    Harness h;
    ASSERT_FALSE(h.consult("t(1). t(2). t(3).\n"
                           "first(X) :- t(X), !.\n"
                           "local(X) :- (t(X), ! ; X = none).\n"
                           "opaque(X) :- call((t(X), !)) ; X = after.\n"
                           "neg(X) :- t(X), \\+ (t(Y), Y > X, !, fail).\n"
                           "ite(X, R) :- ( t(X) -> R = yes ; R = no ).\n"
                           "soft(X) :- ( t(X) *-> true ; X = none ).\n"));
    EXPECT_EQ(h.run("first(X)."), (V{"X = 1", "false."}));
    EXPECT_EQ(h.run("local(X)."), (V{"X = 1", "false."}));
    EXPECT_EQ(h.run("opaque(X)."), (V{"X = 1", "X = after", "false."}));
    EXPECT_EQ(h.run("neg(X)."), (V{"X = 1", "X = 2", "X = 3", "false."}));
    EXPECT_EQ(h.run("ite(X, R)."), (V{"X = 1, R = yes", "false."}));
    EXPECT_EQ(h.run("soft(X)."), (V{"X = 1", "X = 2", "X = 3", "false."}));
    EXPECT_EQ(h.run("findall(X, (t(X), X > 1, !), L)."), (V{"L = [2]", "false."}));
}

TEST(Engine, CatchAndThrow)
{
    Harness h;
    ASSERT_FALSE(h.consult("r(1). r(2).\n"
                           "p(X) :- catch(r(X), _, true).\n"));
    EXPECT_EQ(h.run("p(X)."), (V{"X = 1", "X = 2", "false."}));
    EXPECT_EQ(h.once("catch(throw(f(Y)), f(Z), true)."), "true.");
    EXPECT_EQ(h.once("catch(throw(a), b, true)."), "uncaught exception: a.");
    EXPECT_EQ(h.once("catch((X = 1, throw(e)), e, true)."), "true.");
    EXPECT_EQ(h.once("catch(catch(throw(inner), outer, true), inner, X = caught)."), "X = caught");
    EXPECT_EQ(h.once("catch(throw(_), E, true)."), "E = error(instantiation_error,throw/1)");
    EXPECT_EQ(h.once("catch(call(1), error(E, _), true)."), "E = type_error(callable,1)");
    EXPECT_EQ(h.once("catch(call((fail, 1)), error(E, _), true)."), "E = type_error(callable,(fail,1))");
}

TEST(Engine, InferenceLimit)
{
    SessionOptions o;
    o.max_inferences = 1000;
    Harness h(o);
    ASSERT_FALSE(h.consult("nat(0).\nnat(s(X)) :- nat(X).\nloop :- loop.\n"));
    ASSERT_FALSE(h.query("loop."));
    Thread& t = *h.session->thread();
    for (int i = 1; i <= 3; ++i) {
        EXPECT_EQ(h.next_text(), "limit exceeded.");
        EXPECT_EQ(t.inferences(), 1000u * i);
    }
    // An enumeration interrupted by the limit continues on the next request.
    h.session->set_max_inferences(2);
    ASSERT_FALSE(h.query("nat(X), X = s(s(s(_)))."));
    std::vector<std::string> seen;
    for (int i = 0; i < 20 && (seen.empty() || seen.back() == "limit exceeded."); ++i)
        seen.push_back(h.next_text());
    EXPECT_GT(seen.size(), 1u);
    EXPECT_EQ(seen.back(), "X = s(s(s(0)))");
    h.session->set_max_inferences(1000);
    EXPECT_EQ(h.once("set_prolog_flag(max_inferences, 77), current_prolog_flag(max_inferences, F)."), "F = 77");
}

TEST(Engine, DeepRecursion)
{
    SessionOptions o;
    o.max_inferences = 10'000'000;
    Harness h(o);
    ASSERT_FALSE(h.consult("count(N, N) :- !.\ncount(I, N) :- J is I + 1, count(J, N).\n"
                           "len([], 0).\nlen([_|T], N) :- len(T, M), N is M + 1.\n"));
    EXPECT_EQ(h.once("count(0, 200000)."), "true.");
    EXPECT_EQ(h.once("findall(_, between(1, 50000, _), _L), len(_L, N)."), "N = 50000");
    // A list built step by step while a later goal waits on it.
    EXPECT_EQ(h.once("use_module(library(lists)), numlist(1, 50000, _L), len(_L, N)."), "N = 50000");
    EXPECT_EQ(h.once("findall(X, between(1, 50000, X), L), len(L, N)."), "L = [" + [] {
        std::string s;
        for (int i = 1; i <= 50000; ++i)
            s += (i > 1 ? "," : "") + std::to_string(i);
        return s;
    }() + "], N = 50000");
}

TEST(Consult, DirectivesAndErrors)
{
    Harness h;
    ASSERT_FALSE(h.consult(":- dynamic(counter/1).\n"
                           "counter(0).\n"
                           ":- initialization(assertz(ready)).\n"
                           ":- op(700, xfx, ===>).\n"
                           "rule(a ===> b).\n"
                           ":- write(loaded), nl.\n"));
    EXPECT_EQ(h.output, "loaded\n");
    EXPECT_EQ(h.once("rule(X ===> Y)."), "X = a, Y = b");
    EXPECT_EQ(h.once("ready."), "true.");
    // A syntax error stops the consult; clauses read before it stay.
    Harness g;
    auto error = g.consult("ok(1).\nbad( .\nok(2).\n");
    ASSERT_TRUE(error);
    EXPECT_NE(error->find("syntax_error"), std::string::npos);
    EXPECT_EQ(g.once("findall(X, ok(X), L)."), "L = [1]");
    // A failing directive is only a warning.
    Harness f;
    ASSERT_FALSE(f.consult(":- fail.\nok.\n"));
    EXPECT_EQ(f.session->warnings().size(), 1u);
    EXPECT_EQ(f.once("ok."), "true.");
}

TEST(Consult, Dcg)
{
    Harness h;
    ASSERT_FALSE(h.consult("greeting --> [hello], name.\n"
                           "name --> [world].\n"
                           "name --> [prolog].\n"
                           "digits([D|T]) --> digit(D), digits(T).\n"
                           "digits([D]) --> digit(D).\n"
                           "digit(D) --> [D], { code_type(D, digit) }.\n"
                           "ab --> \"ab\", !, { true }.\n"
                           "any --> [] | [_], any.\n"
                           "skip, [x] --> [y].\n"));
    EXPECT_EQ(h.once("phrase(greeting, [hello, world])."), "true.");
    EXPECT_EQ(h.once("phrase(greeting, [hello, there])."), "false.");
    EXPECT_EQ(h.once("phrase(greeting, [hello|R], [])."), "R = [world]");
    EXPECT_EQ(h.once("phrase(ab, \"ab\")."), "true.");
    EXPECT_EQ(h.once("phrase(any, [a, b, c])."), "true.");
    EXPECT_EQ(h.once("phrase(any, L)."), "L = []");
    EXPECT_EQ(h.once("phrase(skip, [y, z], R)."), "R = [x,z]");
    EXPECT_EQ(h.once("name(S0, S)."), "S0 = [world|S]");
}

TEST(Consult, TermExpansionAndModules)
{
    Harness h;
    ASSERT_FALSE(h.consult("term_expansion(double(X), [val(X), val(Y)]) :- Y is X * 2.\n"
                           "goal_expansion(old(X), new(X)).\n"
                           "new(ok).\n"
                           "double(21).\n"
                           "use_old(X) :- old(X).\n"));
    EXPECT_EQ(h.once("findall(X, val(X), L)."), "L = [21,42]");
    EXPECT_EQ(h.once("use_old(X)."), "X = ok");

    Harness m;
    ASSERT_FALSE(m.consult(":- module(shapes, [area/2]).\n"
                           "area(square(S), A) :- sq(S, A).\n"
                           "sq(X, Y) :- Y is X * X.\n"));
    EXPECT_EQ(m.once("area(square(3), A)."), "A = 9");
    EXPECT_EQ(m.once("sq(3, A)."), "uncaught exception: error(existence_error(procedure,sq/2),sq/2).");
    EXPECT_EQ(m.once("shapes:sq(4, A)."), "A = 16");
}

TEST(Consult, VirtualFileSystem)
{
    SessionOptions o;
    o.file_system = VirtualFileSystem::from_json(R"({"lib/util.pl": "twice(X, Y) :- Y is 2 * X.\n",
                                                     "main.pl": ":- consult('lib/util.pl').\nfour(F) :- twice(2, F).\n"})");
    Harness h(o);
    EXPECT_EQ(h.once("consult('main.pl'), four(F)."), "F = 4");
    EXPECT_EQ(h.once("use_module(library(os)), exists_file('lib/util.pl'), \\+ exists_file(nope)."), "true.");
    EXPECT_EQ(h.once("catch(consult(nope), error(E, _), true)."), "E = existence_error(source_sink,nope)");
}

TEST(Library, Lists)
{
    Harness h;
    ASSERT_EQ(h.once("use_module(library(lists))."), "true.");
    EXPECT_EQ(h.once("length(L, 2)."), "L = [_A,_B]");
    EXPECT_EQ(h.once("nth0(1, [a, b, c], X), nth1(1, [a, b, c], Y)."), "X = b, Y = a");
    EXPECT_EQ(h.once("reverse([1, 2, 3], R), last([1, 2, 3], L)."), "R = [3,2,1], L = 3");
    EXPECT_EQ(h.once("msort([b, a, b], M), sort([b, a, b], S)."), "M = [a,b,b], S = [a,b]");
    EXPECT_EQ(h.run("select(X, [a, b], R)."), (V{"X = a, R = [b]", "X = b, R = [a]", "false."}));
    ASSERT_FALSE(h.consult("double(X, Y) :- Y is X * 2.\nadd(X, A0, A) :- A is A0 + X.\nbig(X) :- X > 1.\n"));
    EXPECT_EQ(h.once("maplist(double, [1, 2], L)."), "L = [2,4]");
    EXPECT_EQ(h.once("foldl(add, [1, 2, 3], 0, S)."), "S = 6");
    EXPECT_EQ(h.once("sum_list([1, 2.5], S), max_list([3, 1, 4], M), min_list([3, 1, 4], N)."), "S = 3.5, M = 4, N = 1");
    EXPECT_EQ(h.once("exclude(big, [1, 2, 3], L), include(big, [1, 2, 3], I)."), "L = [1], I = [2,3]");
    EXPECT_EQ(h.once("flatten([1, [2, [3]], []], F), list_to_set([a, b, a], S)."), "F = [1,2,3], S = [a,b]");
    EXPECT_EQ(h.once("findall(P, permutation([1, 2, 3], P), Ps), length(Ps, N)."),
              "Ps = [[1,2,3],[1,3,2],[2,1,3],[2,3,1],[3,1,2],[3,2,1]], N = 6");
    EXPECT_EQ(h.once("length(L, -1)."), "false.");
    EXPECT_EQ(h.once("length(a, N)."), "false.");
}

TEST(Library, RandomIsUniform)
{
    SessionOptions o;
    o.seed = 99;
    o.max_inferences = 10'000'000;
    Harness h(o);
    ASSERT_EQ(h.once("use_module(library(random))."), "true.");
    ASSERT_FALSE(h.query("between(1, 10000, _), random(0, 10, X)."));
    std::map<std::int64_t, int> counts;
    for (int i = 0; i < 10000; ++i) {
        Answer a = h.next();
        ASSERT_TRUE(a.is_success());
        const Term& x = a.bindings.bindings().back().second;
        ASSERT_TRUE(x.is_integer());
        ASSERT_GE(x.int_value(), 0);
        ASSERT_LT(x.int_value(), 10);
        ++counts[x.int_value()];
    }
    double chi = 0;
    for (int k = 0; k < 10; ++k)
        chi += std::pow(counts[k] - 1000.0, 2) / 1000.0;
    // 9 degrees of freedom: p = 0.001 at 27.88.
    EXPECT_LT(chi, 27.88);
    EXPECT_NE(h.once("random(X), float(X), X >= 0.0, X < 1.0."), "false.");
    EXPECT_EQ(h.once("set_random(seed(1)), random_between(1, 6, A), set_random(seed(1)), random_between(1, 6, B), A \\== B."),
              "false.");
}

TEST(Library, SleepZeroYields)
{
    Harness h;
    ASSERT_EQ(h.once("use_module(library(os))."), "true.");
    bool ran = false;
    ASSERT_FALSE(h.query("sleep(0), X = done."));
    std::optional<Answer> got;
    bool ran_before_answer = false;
    h.session->thread()->answer([&](const Answer& a) {
        got = a;
        ran_before_answer = ran;
    });
    h.session->executor().post([&] { ran = true; });
    h.session->executor().run_until([&] { return got.has_value(); });
    ASSERT_TRUE(got);
    EXPECT_EQ(format_answer(*h.session, *got), "X = done");
    EXPECT_TRUE(ran_before_answer);
    EXPECT_EQ(h.once("sleep(-1)."), "true."); // treated as sleep(0)
    EXPECT_EQ(h.once("catch(sleep(a), error(E, _), true)."), "E = type_error(integer,a)");
}
