"""Finite coalgebras over a branching signature.

A coalgebra assigns to each state (numbered 0..n-1) one branching value whose
arguments are successor states.  Paths interleave states with multiplicity
indices, so a successor occurring twice in a tuple contributes two edges.

Includes strongly connected components (iterative path-based search, linear
time), behavioural minimization by partition refinement, behavioural equality
on the disjoint union, and an isomorphism-invariant canonical key used to
fingerprint behaviours.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import CoalgebraError
from .signature import FElem, SignatureSpec


@dataclass(frozen=True)
class Coalgebra:
    sig: SignatureSpec
    transition: tuple[FElem, ...]

    def __post_init__(self):
        n = len(self.transition)
        for s, elem in enumerate(self.transition):
            op = self.sig.op(elem.op)
            if len(elem.args) != op.arity:
                raise CoalgebraError(
                    f"state {s}: tuple length {len(elem.args)} does not match "
                    f"arity of {elem.op!r}"
                )
            for t in elem.args:
                if not isinstance(t, int) or not 0 <= t < n:
                    raise CoalgebraError(f"state {s}: successor {t!r} out of range")

    @property
    def n_states(self) -> int:
        return len(self.transition)

    def successors(self, state: int) -> list[tuple[int, int]]:
        """Successor pairs (state, multiplicity index), sorted."""
        counts: dict[int, int] = {}
        for t in self.transition[state].args:
            counts[t] = counts.get(t, 0) + 1
        return [(t, k) for t in sorted(counts) for k in range(counts[t])]


@dataclass(frozen=True)
class PointedCoalgebra:
    coalg: Coalgebra
    root: int

    def __post_init__(self):
        if not 0 <= self.root < self.coalg.n_states:
            raise CoalgebraError(f"root {self.root} out of range")


@dataclass(frozen=True)
class FinitePath:
    """An alternating path: states[0], indices[0], states[1], ...

    ``indices[j]`` is the multiplicity index of the step from ``states[j]``
    to ``states[j+1]``.
    """

    states: tuple[int, ...]
    indices: tuple[int, ...]

    def __post_init__(self):
        if len(self.states) != len(self.indices) + 1:
            raise CoalgebraError("path needs one more state than indices")

    @property
    def length(self) -> int:
        return len(self.indices)

    def is_prefix_of(self, other: "FinitePath") -> bool:
        m = len(self.states)
        return (
            m <= len(other.states)
            and other.states[:m] == self.states
            and other.indices[: m - 1] == self.indices
        )

    def flat_key(self) -> tuple[int, ...]:
        out = [self.states[0]]
        for k, t in zip(self.indices, self.states[1:]):
            out.append(k)
            out.append(t)
        return tuple(out)


def validate_path(c: Coalgebra, path: FinitePath) -> None:
    """Raise unless every step of ``path`` is a successor pair of its source."""
    for j in range(path.length):
        s, t, k = path.states[j], path.states[j + 1], path.indices[j]
        mult = sum(1 for x in c.transition[s].args if x == t)
        if not (0 <= k < mult):
            raise CoalgebraError(f"step {j}: ({t},{k}) is not a successor of {s}")


def reachable_states(c: Coalgebra, root: int) -> list[int]:
    """States reachable from ``root``, in BFS discovery order."""
    seen = {root}
    order = [root]
    i = 0
    while i < len(order):
        for t in c.transition[order[i]].args:
            if t not in seen:
                seen.add(t)
                order.append(t)
        i += 1
    return order


def _step_pairs(c: Coalgebra, state: int) -> list[tuple[int, int]]:
    # Successor pairs ordered as they appear along a path: index, then state.
    counts: dict[int, int] = {}
    out = []
    for t in c.transition[state].args:
        counts[t] = counts.get(t, 0) + 1
    for t in sorted(counts):
        for k in range(counts[t]):
            out.append((k, t))
    out.sort()
    return out


def paths_to_depth(pc: PointedCoalgebra, depth: int) -> list[FinitePath]:
    """All paths of length exactly ``depth`` from the root, lexicographically.

    A path stops early only when a state has no successors, in which case it
    does not reach ``depth`` and is not listed.
    """
    c = pc.coalg
    out: list[FinitePath] = []
    steps = [_step_pairs(c, s) for s in range(c.n_states)]

    def walk(state: int, states: list[int], indices: list[int]) -> None:
        if len(indices) == depth:
            out.append(FinitePath(tuple(states), tuple(indices)))
            return
        for k, t in steps[state]:
            states.append(t)
            indices.append(k)
            walk(t, states, indices)
            states.pop()
            indices.pop()

    walk(pc.root, [pc.root], [])
    return out


def path_count(pc: PointedCoalgebra, depth: int) -> int:
    """Number of length-``depth`` paths from the root, by dynamic programming."""
    c = pc.coalg
    counts = {pc.root: 1}
    for _ in range(depth):
        nxt: dict[int, int] = {}
        for s, m in counts.items():
            for t in c.transition[s].args:
                nxt[t] = nxt.get(t, 0) + m
        counts = nxt
    return sum(counts.values())


def cycles_through(c: Coalgebra, state: int, maxlen: int) -> list[FinitePath]:
    """All paths from ``state`` back to ``state`` of length 1..maxlen.

    Exhaustive enumeration, exponential in ``maxlen``; intended for the
    brute-force thinness oracle on small instances.
    """
    steps = {s: _step_pairs(c, s) for s in range(c.n_states)}
    out: list[FinitePath] = []

    def walk(cur: int, states: list[int], indices: list[int]) -> None:
        if len(indices) == maxlen:
            return
        for k, t in steps[cur]:
            states.append(t)
            indices.append(k)
            if t == state:
                out.append(FinitePath(tuple(states), tuple(indices)))
            walk(t, states, indices)
            states.pop()
            indices.pop()

    walk(state, [state], [])
    return out


@dataclass(frozen=True)
class Condensation:
    """SCCs in emission order: every edge goes from a later component index
    to an earlier one, so the order is reverse topological."""

    components: tuple[tuple[int, ...], ...]
    component_of: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


def _csr(c: Coalgebra) -> tuple[array, array]:
    """Deduplicated sorted successor lists in offset/flat form.

    Flat arrays of machine ints keep the random probes of the component
    search cache-resident on large coalgebras.
    """
    n = c.n_states
    offs = array("l", [0]) * (n + 1)
    flat: list[int] = []
    ext = flat.extend
    tr = c.transition
    for s in range(n):
        ext(sorted(set(tr[s].args)))
        offs[s + 1] = len(flat)
    return offs, array("l", flat)


def _scc_csr(offs: array, flat: array, roots: Iterable[int], n: int):
    """Path-based strong component search over offset/flat adjacency.

    Returns (components in emission order, component id per state, -1 if
    unvisited).  Every edge leaving a component points to an earlier one, so
    emission order is reverse topological.  Within a component, members are
    listed in reverse discovery order, the component's entry state last.
    """
    index = array("l", [-1]) * n
    comp = array("l", [-1]) * n
    open_stack: list[int] = []
    bound_stack: list[int] = []
    comps: list[tuple[int, ...]] = []
    for r in roots:
        if index[r] != -1:
            continue
        work: list[list[int]] = [[r, -1]]
        while work:
            frame = work[-1]
            v, i = frame
            if i == -1:
                i = offs[v]
                index[v] = len(open_stack)
                open_stack.append(v)
                bound_stack.append(index[v])
            end = offs[v + 1]
            descended = False
            while i < end:
                w = flat[i]
                i += 1
                iw = index[w]
                if iw == -1:
                    frame[1] = i
                    work.append([w, -1])
                    descended = True
                    break
                if iw < n:
                    while bound_stack[-1] > iw:
                        bound_stack.pop()
            if descended:
                continue
            work.pop()
            if bound_stack[-1] == index[v]:
                bound_stack.pop()
                cid = len(comps)
                members = open_stack[index[v] :]
                del open_stack[index[v] :]
                members.reverse()
                closed = n + cid
                for u in members:
                    index[u] = closed
                    comp[u] = cid
                comps.append(tuple(members))
    return comps, comp


def _scc_adj(adj: list[tuple[int, ...]], roots: Iterable[int], n: int):
    """Strong components of tuple-form adjacency; see ``_scc_csr``."""
    offs = array("l", [0]) * (n + 1)
    flat: list[int] = []
    for s in range(n):
        flat.extend(adj[s])
        offs[s + 1] = len(flat)
    comps, comp = _scc_csr(offs, array("l", flat), roots, n)
    return comps, list(comp)


def _adjacency(c: Coalgebra) -> list[tuple[int, ...]]:
    return [tuple(sorted(set(e.args))) for e in c.transition]


def sccs(c: Coalgebra) -> Condensation:
    """Strongly connected components of the successor graph, all states."""
    adj = _adjacency(c)
    comps, comp = _scc_adj(adj, range(c.n_states), c.n_states)
    edges = set()
    for s in range(c.n_states):
        cs = comp[s]
        for t in adj[s]:
            if comp[t] != cs:
                edges.add((cs, comp[t]))
    return Condensation(tuple(comps), tuple(comp), tuple(sorted(edges)))


def reachable_condensation(pc: PointedCoalgebra) -> Condensation:
    """SCCs of the part reachable from the root; unreachable states get -1."""
    c = pc.coalg
    adj = _adjacency(c)
    comps, comp = _scc_adj(adj, [pc.root], c.n_states)
    edges = set()
    for s in range(c.n_states):
        if comp[s] == -1:
            continue
        for t in adj[s]:
            if comp[t] != comp[s]:
                edges.add((comp[s], comp[t]))
    return Condensation(tuple(comps), tuple(comp), tuple(sorted(edges)))


# -- behavioural equivalence ---------------------------------------------


def _refine(c: Coalgebra, states: list[int]) -> dict[int, int]:
    """Partition ``states`` by behavioural equivalence.

    Starts from a single block and splits by the canonical branching value
    over block ids until stable.  Block ids are assigned by sorted signature,
    so the result is deterministic and isomorphism-invariant.
    """
    sig = c.sig
    block = {s: 0 for s in states}
    nblocks = 1
    while True:
        keys = {}
        for s in states:
            elem = sig.map_elem(c.transition[s], lambda t: block[t])
            keys[s] = (block[s], elem.op, elem.args)
        distinct = sorted(set(keys.values()))
        ids = {key: i for i, key in enumerate(distinct)}
        block = {s: ids[keys[s]] for s in states}
        if len(distinct) == nblocks:
            return block
        nblocks = len(distinct)


def minimize(pc: PointedCoalgebra) -> tuple[PointedCoalgebra, dict[int, int]]:
    """Reachable behavioural quotient and the state mapping onto it.

    The mapping covers exactly the states reachable from the root.  Quotient
    states are numbered in BFS order from the root's block.
    """
    c = pc.coalg
    order = reachable_states(c, pc.root)
    block = _refine(c, order)
    rep: dict[int, int] = {}
    for s in order:
        rep.setdefault(block[s], s)

    new_id: dict[int, int] = {block[pc.root]: 0}
    frontier = [block[pc.root]]
    while frontier:
        nxt = []
        for b in frontier:
            for t in c.transition[rep[b]].args:
                tb = block[t]
                if tb not in new_id:
                    new_id[tb] = len(new_id)
                    nxt.append(tb)
        frontier = nxt
    if len(new_id) != len(rep):
        raise CoalgebraError("internal: unreachable block in quotient")

    trans = [None] * len(new_id)
    for b, i in new_id.items():
        trans[i] = c.sig.map_elem(c.transition[rep[b]], lambda t: new_id[block[t]])
    quotient = Coalgebra(c.sig, tuple(trans))
    mapping = {s: new_id[block[s]] for s in order}
    return PointedCoalgebra(quotient, 0), mapping


def disjoint_union(c1: Coalgebra, c2: Coalgebra) -> Coalgebra:
    if c1.sig != c2.sig:
        raise CoalgebraError("signature mismatch in disjoint union")
    n1 = c1.n_states
    shifted = [c1.sig.map_elem(e, lambda t: t + n1) for e in c2.transition]
    return Coalgebra(c1.sig, c1.transition + tuple(shifted))


def beh_equal(pc1: PointedCoalgebra, pc2: PointedCoalgebra) -> bool:
    """Behavioural equality of the two roots, by refining the disjoint union."""
    union = disjoint_union(pc1.coalg, pc2.coalg)
    r1 = pc1.root
    r2 = pc2.root + pc1.coalg.n_states
    states = reachable_states(union, r1)
    seen = set(states)
    for s in reachable_states(union, r2):
        if s not in seen:
            states.append(s)
            seen.add(s)
    block = _refine(union, states)
    return block[r1] == block[r2]


def canonical_key(pc: PointedCoalgebra):
    """A hashable key equal for exactly the behaviourally equal roots.

    Minimizes, then orders the quotient states by their refinement history,
    which distinguishes all states of a minimal coalgebra and depends only on
    the structure, never on state numbering.
    """
    mpc, _ = minimize(pc)
    c = mpc.coalg
    n = c.n_states
    sig = c.sig
    color = [0] * n
    ncolors = 1
    while True:
        keys = []
        for s in range(n):
            elem = sig.map_elem(c.transition[s], lambda t: color[t])
            keys.append((color[s], elem.op, elem.args))
        ids = {key: i for i, key in enumerate(sorted(set(keys)))}
        color = [ids[k] for k in keys]
        if len(ids) == ncolors:
            break
        ncolors = len(ids)
    if ncolors != n:
        raise CoalgebraError("internal: minimal coalgebra with equivalent states")
    order = sorted(range(n), key=lambda s: color[s])
    renum = {s: i for i, s in enumerate(order)}
    rows = []
    for s in order:
        elem = sig.map_elem(c.transition[s], lambda t: renum[t])
        rows.append((elem.op, elem.args))
    return (renum[mpc.root], tuple(rows))
