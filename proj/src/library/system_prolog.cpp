#include "library.hpp"

namespace plweb {

namespace {

const char* const source = R"PL(
once(G) :- call(G), !.
ignore(G) :- (call(G) -> true ; true).
forall(C, A) :- \+ (call(C), \+ call(A)).

bagof(T, G, L) :-
    '$free_variable_set'(T^G, Goal, W),
    (   W == []
    ->  findall(T, Goal, L),
        L \== []
    ;   findall(W-T, Goal, Pairs),
        Pairs \== [],
        keysort(Pairs, Sorted),
        '$bagof_enum'(Sorted, W, L)
    ).

'$bagof_enum'(Pairs, W, L) :-
    Pairs = [W1-_|_],
    '$bagof_partition'(Pairs, W1, Ts, Others),
    (   W = W1, L = Ts
    ;   Others \== [],
        '$bagof_enum'(Others, W, L)
    ).

'$bagof_partition'([], _, [], []).
'$bagof_partition'([W-T|Ps], W1, [T|Ts], Os) :-
    W =@= W1, !,
    W = W1,
    '$bagof_partition'(Ps, W1, Ts, Os).
'$bagof_partition'([P|Ps], W1, Ts, [P|Os]) :-
    '$bagof_partition'(Ps, W1, Ts, Os).

setof(T, G, S) :-
    bagof(T, G, L),
    sort(L, S).

aggregate_all(count, G, C) :- !, findall(x, G, L), '$length'(L, 0, C).
aggregate_all(sum(E), G, S) :- !, findall(E, G, L), '$sum'(L, 0, S).
aggregate_all(max(E), G, M) :- !, findall(E, G, [H|T]), '$max'(T, H, M).
aggregate_all(min(E), G, M) :- !, findall(E, G, [H|T]), '$min'(T, H, M).
aggregate_all(bag(E), G, L) :- !, findall(E, G, L).
aggregate_all(set(E), G, S) :- !, findall(E, G, L), sort(L, S).

'$length'([], N, N).
'$length'([_|T], N0, N) :- N1 is N0+1, '$length'(T, N1, N).
'$sum'([], S, S).
'$sum'([X|Xs], S0, S) :- S1 is S0+X, '$sum'(Xs, S1, S).
'$max'([], M, M).
'$max'([X|Xs], M0, M) :- (X > M0 -> M1 = X ; M1 = M0), '$max'(Xs, M1, M).
'$min'([], M, M).
'$min'([X|Xs], M0, M) :- (X < M0 -> M1 = X ; M1 = M0), '$min'(Xs, M1, M).

atom_to_term(A, T) :- term_to_atom(T, A).

predsort(P, L, Sorted) :-
    '$length'(L, 0, N),
    (   N < 2
    ->  Sorted = L
    ;   H is N // 2,
        '$split_at'(H, L, A, B),
        predsort(P, A, SA),
        predsort(P, B, SB),
        '$predmerge'(P, SA, SB, Sorted)
    ).

'$split_at'(0, L, [], L) :- !.
'$split_at'(N, [X|Xs], [X|As], Bs) :- N1 is N-1, '$split_at'(N1, Xs, As, Bs).

'$predmerge'(_, [], L, L) :- !.
'$predmerge'(_, L, [], L) :- !.
'$predmerge'(P, [X|Xs], [Y|Ys], R) :-
    call(P, O, X, Y),
    '$predmerge'(O, P, X, Xs, Y, Ys, R).

'$predmerge'(<, P, X, Xs, Y, Ys, [X|R]) :- '$predmerge'(P, Xs, [Y|Ys], R).
'$predmerge'(=, P, X, Xs, _, Ys, [X|R]) :- '$predmerge'(P, Xs, Ys, R).
'$predmerge'(>, P, X, Xs, Y, Ys, [Y|R]) :- '$predmerge'(P, [X|Xs], Ys, R).
)PL";

} // namespace

std::string_view system_prolog_source()
{
    return source;
}

} // namespace plweb
