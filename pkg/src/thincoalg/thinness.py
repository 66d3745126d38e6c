"""Thinness: does a pointed coalgebra carry only countably many infinite paths?

A finite pointed coalgebra is thin exactly when every reachable nontrivial
strongly connected component is a plain loop: each member has exactly one
successor edge (counted with multiplicity) staying inside the component.  Any
state with two in-component edges yields two cycles that differ at their first
step, hence neither is a prefix of the other, and strong connectivity pumps
that divergence into uncountably many infinite paths.

``is_thin`` runs in time linear in states plus edges.  ``oracle_is_thin`` is
the definitional cross-check: enumerate bounded cycles through every state and
test pairwise prefix-comparability.  ``count_infinite_paths_class`` refines
the verdict into none / finitely many / countably many / uncountably many.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Optional

from .coalgebra import (
    Coalgebra,
    FinitePath,
    PointedCoalgebra,
    _adjacency,
    _csr,
    _scc_adj,
    _scc_csr,
    _step_pairs,
    cycles_through,
    reachable_states,
)


@dataclass(frozen=True)
class ThinWitness:
    """Evidence of non-thinness: two incomparable cycles through one state,
    plus an access path from the root to that state."""

    access: FinitePath
    cycle1: FinitePath
    cycle2: FinitePath


@dataclass(frozen=True)
class ThinVerdict:
    thin: bool
    witness: Optional[ThinWitness] = None


def _bfs_tree(offs: array, flat: array, source: int, n: int) -> array:
    """Complete BFS parent array from ``source``; -1 marks unreached states.

    The tree is fully built rather than stopped at any target, so the work
    done is a fixed function of the graph, not of where a target happens to
    sit.
    """
    par = array("l", [-1]) * n
    par[source] = source
    frontier = [source]
    while frontier:
        nxt = []
        for s in frontier:
            for i in range(offs[s], offs[s + 1]):
                t = flat[i]
                if par[t] == -1:
                    par[t] = s
                    nxt.append(t)
        frontier = nxt
    return par


def _walk(par, source: int, target: int) -> tuple[int, ...]:
    states = [target]
    while states[-1] != source:
        states.append(par[states[-1]])
    states.reverse()
    return tuple(states)


def _witness(
    c: Coalgebra,
    offs: array,
    flat: array,
    root: int,
    offender: int,
    comp_members: tuple[int, ...],
) -> ThinWitness:
    n = c.n_states
    mem = bytearray(n)
    for s in comp_members:
        mem[s] = 1
    counts: dict[int, int] = {}
    for t in c.transition[offender].args:
        if mem[t]:
            counts[t] = counts.get(t, 0) + 1
    in_pairs = [(t, k) for t in sorted(counts) for k in range(counts[t])]
    (t1, k1), (t2, k2) = in_pairs[0], in_pairs[1]

    access_par = _bfs_tree(offs, flat, root, n)
    access = _walk(access_par, root, offender)

    # Shortest in-component route from every member back to the offender, via
    # one reverse BFS tree over the component's internal edges.  The reverse
    # adjacency reuses the offset/flat layout to keep the pass cheap on large
    # components.
    roffs = array("l", [0]) * (n + 1)
    for s in comp_members:
        for i in range(offs[s], offs[s + 1]):
            t = flat[i]
            if mem[t]:
                roffs[t + 1] += 1
    for i in range(n):
        roffs[i + 1] += roffs[i]
    cursor = roffs[:-1]
    rflat = array("l", [0]) * roffs[n]
    for s in comp_members:
        for i in range(offs[s], offs[s + 1]):
            t = flat[i]
            if mem[t]:
                rflat[cursor[t]] = s
                cursor[t] += 1
    back = array("l", [-1]) * n
    back[offender] = offender
    frontier = [offender]
    while frontier:
        nxt = []
        for s in frontier:
            for i in range(roffs[s], roffs[s + 1]):
                t = rflat[i]
                if back[t] == -1:
                    back[t] = s
                    nxt.append(t)
        frontier = nxt

    def close(t: int, k: int) -> FinitePath:
        states = _walk(back, offender, t)[::-1]
        return FinitePath((offender, *states), (k,) + (0,) * (len(states) - 1))

    return ThinWitness(
        access=FinitePath(access, (0,) * (len(access) - 1)),
        cycle1=close(t1, k1),
        cycle2=close(t2, k2),
    )


def is_thin(pc: PointedCoalgebra) -> ThinVerdict:
    """Linear-time thinness check with a witness on failure.

    The witness names the first offending state in component emission order.
    """
    c = pc.coalg
    offs, flat = _csr(c)
    comps, comp = _scc_csr(offs, flat, [pc.root], c.n_states)
    for ci, members in enumerate(comps):
        # A component passes when every member keeps at most one edge inside
        # it; strong connectivity then forces a plain loop or a lone state.
        for s in members:
            k = 0
            for t in c.transition[s].args:
                if comp[t] == ci:
                    k += 1
            if k >= 2:
                return ThinVerdict(False, _witness(c, offs, flat, pc.root, s, members))
    return ThinVerdict(True, None)


def oracle_is_thin(pc: PointedCoalgebra, maxlen: int) -> bool:
    """Definitional check: are all bounded cycles through each state
    pairwise prefix-comparable?

    Exact when ``maxlen >= 2 * n_states``: an incomparable pair, when one
    exists, exists already among cycles no longer than twice the state count.
    Exponential; meant for exhaustive small-instance comparison.
    """
    c = pc.coalg
    for s in reachable_states(c, pc.root):
        cycles = cycles_through(c, s, maxlen)
        for i in range(len(cycles)):
            for j in range(i + 1, len(cycles)):
                a, b = cycles[i], cycles[j]
                if not (a.is_prefix_of(b) or b.is_prefix_of(a)):
                    return False
    return True


@dataclass(frozen=True)
class PathClassCount:
    """How many infinite paths start at the root.

    ``kind`` is one of "zero", "finite", "countably-infinite", "uncountable";
    ``count`` is set only for "finite".
    """

    kind: str
    count: Optional[int] = None


def count_infinite_paths_class(pc: PointedCoalgebra) -> PathClassCount:
    """Classify the number of infinite paths from the root.

    Thin coalgebras admit an exact count: loops with no live exit contribute
    one path each, a loop with a live exit already gives one path per number
    of turns, and trivial states sum over their successor edges.
    """
    if not is_thin(pc).thin:
        return PathClassCount("uncountable")
    c = pc.coalg
    adj = _adjacency(c)
    comps, comp = _scc_adj(adj, [pc.root], c.n_states)

    INF = -1  # countably infinite marker
    value: dict[int, int] = {}
    for ci, members in enumerate(comps):
        in_edges = sum(
            1 for s in members for t in c.transition[s].args if comp[t] == ci
        )
        if in_edges:
            live_exit = False
            for s in members:
                for t in c.transition[s].args:
                    if comp[t] != ci and value[t] != 0:
                        live_exit = True
            v = INF if live_exit else 1
            for s in members:
                value[s] = v
        else:
            s = members[0]
            total = 0
            for t in c.transition[s].args:
                if value[t] == INF:
                    total = INF
                    break
                total += value[t]
            value[s] = total

    v = value[pc.root]
    if v == 0:
        return PathClassCount("zero")
    if v == INF:
        return PathClassCount("countably-infinite")
    return PathClassCount("finite", v)
