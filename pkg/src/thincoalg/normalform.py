"""Normal forms: least-rank terms denoting a given thin behaviour.

``state_ranks`` computes, per reachable state of a thin coalgebra, the least
rank of any term unfolding to that state's behaviour, together with which node
kind attains it.  Components are processed in reverse topological order:

* A state inside a loop component always takes a stream node.  Its spine is
  the loop itself, the only spine that avoids mentioning a same-component
  state as a side, so its major is one more than the largest major among
  out-of-component successors of the loop.
* A lone state compares the branching candidate (largest successor major,
  one more than the largest successor minor) with the stream candidate
  ``(1 + g, 0)``, where ``g`` is found by an ascending threshold search: the
  least ``k`` such that some decomposition keeps every side at major at most
  ``k`` and continues into a spine of value at most ``k``.

``extract_normal`` then reads a term off the table, minimizing first.  All
tie-breaking compares extracted terms, never state numbers, so behaviourally
equal inputs extract structurally identical terms.  ``brute_force_normal`` is
the independent oracle: enumerate every candidate term up to a size bound and
replay the inductive definition of normality over the pool.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .coalgebra import (
    PointedCoalgebra,
    _adjacency,
    _scc_adj,
    canonical_key,
    minimize,
)
from .errors import NonThinError, TermError
from .semantics import unfold
from .signature import ContextElem, SignatureSpec
from .terms import (
    FNode,
    GNode,
    LassoStream,
    Rank,
    Term,
    rank,
    subterms,
    term_size,
)
from .thinness import is_thin


@dataclass(frozen=True)
class StateRank:
    """Rank data for one state.

    ``kind`` is "f" or "g".  ``g_value`` and ``spine`` are set for every
    state that reaches a cycle: ``spine`` lists the decompositions (context
    over state ids, next state) that attain ``g_value``; extraction picks
    among them by comparing extracted terms.
    """

    rank: Rank
    kind: str
    g_value: int | None = None
    spine: tuple[tuple[ContextElem, int], ...] = ()


@dataclass(frozen=True)
class StateRankTable:
    root: int
    entries: dict[int, StateRank]

    def __getitem__(self, state: int) -> StateRank:
        return self.entries[state]

    @property
    def root_rank(self) -> Rank:
        return self.entries[self.root].rank


def state_ranks(pc: PointedCoalgebra) -> StateRankTable:
    """Least term rank per reachable state of a thin coalgebra.

    Raises ``NonThinError`` on non-thin input.
    """
    verdict = is_thin(pc)
    if not verdict.thin:
        raise NonThinError(verdict)
    c = pc.coalg
    sig = c.sig
    adj = _adjacency(c)
    comps, comp = _scc_adj(adj, [pc.root], c.n_states)

    entries: dict[int, StateRank] = {}
    for ci, members in enumerate(comps):
        in_loop = any(comp[t] == ci for s in members for t in c.transition[s].args)
        if in_loop:
            outside = 0
            for s in members:
                for t in c.transition[s].args:
                    if comp[t] != ci:
                        outside = max(outside, entries[t].rank.major)
            r = Rank(outside + 1, 0)
            for s in members:
                steps = [
                    (ctx, x)
                    for ctx, x in sig.decompositions(c.transition[s])
                    if comp[x] == ci
                ]
                if len(steps) != 1:
                    raise AssertionError("thin loop state without unique loop step")
                entries[s] = StateRank(r, "g", outside, tuple(steps))
            continue

        (s,) = members
        succ = sorted(set(c.transition[s].args))
        if succ:
            f_rank = Rank(
                max(entries[t].rank.major for t in succ),
                1 + max(entries[t].rank.minor for t in succ),
            )
        else:
            f_rank = Rank(0, 1)

        through = [
            (ctx, x)
            for ctx, x in sig.decompositions(c.transition[s])
            if entries[x].g_value is not None
        ]
        if not through:
            entries[s] = StateRank(f_rank, "f")
            continue

        ceiling = 0
        for ctx, x in through:
            ceiling = max(ceiling, entries[x].g_value)
            for y in ctx.sides:
                ceiling = max(ceiling, entries[y].rank.major)
        g_val = None
        best: tuple[tuple[ContextElem, int], ...] = ()
        for k in range(ceiling + 1):
            hits = tuple(
                (ctx, x)
                for ctx, x in through
                if entries[x].g_value <= k
                and all(entries[y].rank.major <= k for y in ctx.sides)
            )
            if hits:
                g_val, best = k, hits
                break
        if g_val is None:
            raise AssertionError("threshold search failed below its ceiling")
        g_rank = Rank(g_val + 1, 0)
        if g_rank < f_rank:
            entries[s] = StateRank(g_rank, "g", g_val, tuple(best))
        else:
            entries[s] = StateRank(f_rank, "f", g_val, tuple(best))
    return StateRankTable(pc.root, entries)


def extract_normal(pc: PointedCoalgebra) -> Term:
    """The normal term of a thin pointed coalgebra.

    Minimizes, ranks, then follows the best kind at every state; stream
    spines collect their contexts until a state repeats, closing the lasso.
    Deterministic and invariant under behavioural equivalence of the input.
    """
    verdict = is_thin(pc)
    if not verdict.thin:
        raise NonThinError(verdict)
    mpc, _ = minimize(pc)
    table = state_ranks(mpc)
    c = mpc.coalg
    sig = c.sig

    memo: dict[int, Term] = {}
    chosen: dict[int, tuple[ContextElem, int]] = {}

    def choose_step(s: int) -> tuple[ContextElem, int]:
        got = chosen.get(s)
        if got is None:
            cands = table[s].spine
            if len(cands) == 1:
                got = cands[0]
            else:
                # Sides of a lone state sit strictly below it, so extraction
                # of the tie-break keys cannot loop back through s.
                got = min(
                    cands,
                    key=lambda p: (
                        sig.map_ctx(p[0], extract).sort_key,
                        extract(p[1]).sort_key,
                    ),
                )
            chosen[s] = got
        return got

    def extract(s: int) -> Term:
        t = memo.get(s)
        if t is not None:
            return t
        if table[s].kind == "f":
            t = FNode(sig.map_elem(c.transition[s], extract))
        else:
            ctxs: list[ContextElem] = []
            seen = {s: 0}
            cur = s
            while True:
                ctx, nxt = choose_step(cur)
                ctxs.append(sig.map_ctx(ctx, extract))
                if nxt in seen:
                    cut = seen[nxt]
                    break
                seen[nxt] = len(ctxs)
                cur = nxt
            t = GNode(LassoStream(tuple(ctxs[:cut]), tuple(ctxs[cut:])))
        memo[s] = t
        return t

    return extract(mpc.root)


def normalize(sig: SignatureSpec, t: Term) -> Term:
    """The normal form of a finitary term: unfold, minimize, extract."""
    return extract_normal(unfold(sig, t).pc)


# -- brute-force oracle ---------------------------------------------------


def _compositions(total: int, parts: int):
    """All ways to write ``total`` as ``parts`` positive summands."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_terms(sig: SignatureSpec, size_bound: int) -> list[Term]:
    """Every canonical term of size at most ``size_bound``, sorted.

    Size counts branching nodes and contexts (see ``term_size``).  Stream
    canonicalization can shrink a candidate below its nominal size; such
    duplicates collapse into their true bucket.
    """
    terms: dict[int, set[Term]] = {n: set() for n in range(size_bound + 1)}
    ctxs: dict[int, set[ContextElem]] = {n: set() for n in range(size_bound + 1)}

    def term_pool(sizes) -> list[list[Term]]:
        return [sorted(terms[n], key=lambda t: t.sort_key) for n in sizes]

    for n in range(1, size_bound + 1):
        for op in sig.ops:
            if op.arity == 0:
                if n == 1:
                    terms[n].add(FNode(sig.canonical_tuple(op.id, ())))
                continue
            for sizes in _compositions(n - 1, op.arity):
                for combo in itertools.product(*term_pool(sizes)):
                    terms[n].add(FNode(sig.canonical_tuple(op.id, combo)))
        for op in sig.ops:
            if op.arity == 0:
                continue
            for sizes in _compositions(n - 1, op.arity - 1):
                for combo in itertools.product(*term_pool(sizes)):
                    for hole in range(op.arity):
                        ctxs[n].add(sig.canonical_context(op.id, hole, combo))
        for total_ctx in range(1, n):
            for count in range(1, total_ctx + 1):
                for sizes in _compositions(total_ctx, count):
                    pools = [sorted(ctxs[m], key=lambda c: c.sort_key) for m in sizes]
                    for combo in itertools.product(*pools):
                        for plen in range(count):
                            g = GNode(LassoStream(combo[:plen], combo[plen:]))
                            terms[term_size(g)].add(g)
    out: list[Term] = []
    for n in range(size_bound + 1):
        out.extend(terms[n])
    return sorted(set(out), key=lambda t: t.sort_key)


@functools.lru_cache(maxsize=8)
def _keyed_pool(
    sig: SignatureSpec, size_bound: int
) -> tuple[tuple[Term, Rank, object], ...]:
    pool = enumerate_terms(sig, size_bound)
    return tuple(
        (cand, rank(cand), canonical_key(unfold(sig, cand).pc))
        for cand in pool
    )


def brute_force_normal(sig: SignatureSpec, t: Term, size_bound: int) -> Term:
    """Inductive normality search over all terms up to ``size_bound``.

    A term is normal when every immediate subterm is normal and no normal
    term of strictly smaller rank denotes the same behaviour.  The pool is
    walked in ascending rank order so both conditions only look at already
    decided terms; equal-rank candidates never block each other.  Returns
    the normal member of the input's behaviour class, raising when the bound
    truncates that class or leaves several representatives standing.
    Intended for tiny instances only.
    """
    if term_size(t) > size_bound:
        raise TermError(
            f"term size {term_size(t)} exceeds oracle bound {size_bound}"
        )
    target = canonical_key(unfold(sig, t).pc)
    decided: dict[Term, bool] = {}
    class_floor: dict[object, Rank] = {}
    found: dict[object, list[Term]] = {}
    ordered = sorted(
        _keyed_pool(sig, size_bound), key=lambda row: (row[1], row[0].sort_key)
    )
    for cand, r, key in ordered:
        floor = class_floor.get(key)
        # subterms rank strictly below their parent, hence decided already
        ok = (floor is None or floor == r) and all(
            decided[sub] for sub in subterms(cand)
        )
        decided[cand] = ok
        if ok:
            class_floor.setdefault(key, r)
            found.setdefault(key, []).append(cand)
    winners = found.get(target, [])
    if not winners:
        raise AssertionError("no normal representative within the size bound")
    if len(winners) > 1:
        raise AssertionError("behaviour class kept several normal candidates")
    return winners[0]
