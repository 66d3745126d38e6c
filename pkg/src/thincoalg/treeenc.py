"""Word-tree encoding and derivative rank, for rigid (polynomial) signatures.

When every group is trivial, argument positions are rigid and a behaviour is
a prefix-closed set of position words.  ``enc`` computes that set directly
from a term: a branching node contributes the empty word plus its children's
trees shifted by one position letter; a stream node lays its contexts along
the spine of hole directions and glues the side trees off it.  ``dom_tree``
reads the same set from the unfolded coalgebra, so the two must agree at
every depth.

``cb_rank`` measures how often isolated branches must be removed before the
branch set stops changing, computed on the coalgebra by a reverse topological
pass: a lone state takes the largest value among its successors, a loop adds
one to the largest value reachable through its exits (one when it has none).
For thin inputs this equals the major rank of the normal term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coalgebra import PointedCoalgebra, _adjacency, _scc_adj
from .errors import NonThinError, SignatureError
from .semantics import unfold
from .signature import SignatureSpec
from .terms import FNode, GNode, Term
from .thinness import is_thin

Word = tuple[int, ...]


@dataclass(frozen=True)
class WordTree:
    """A prefix-closed set of position words, truncated at ``depth``."""

    depth: int
    words: frozenset[Word]

    def __post_init__(self):
        if () not in self.words:
            raise ValueError("word tree must contain the empty word")
        for w in self.words:
            if len(w) > self.depth:
                raise ValueError(f"word {w} longer than depth {self.depth}")
            if w and w[:-1] not in self.words:
                raise ValueError(f"word tree not prefix-closed at {w}")


def assert_polynomial(sig: SignatureSpec) -> None:
    """Raise unless every operation has a trivial group."""
    if not sig.is_polynomial:
        raise SignatureError("operation groups must be trivial for tree encoding")


def enc(sig: SignatureSpec, t: Term, depth: int) -> WordTree:
    """The position-word tree of ``t``, truncated at ``depth``."""
    assert_polynomial(sig)
    memo: dict[tuple[Term, int], frozenset[Word]] = {}

    def go(u: Term, d: int) -> frozenset[Word]:
        key = (u, d)
        got = memo.get(key)
        if got is not None:
            return got
        words: set[Word] = {()}
        if isinstance(u, FNode):
            if d > 0:
                for i, child in enumerate(u.elem.args):
                    for w in go(child, d - 1):
                        words.add((i,) + w)
        else:
            spine: Word = ()
            for n in range(d + 1):
                ctx = u.stream.context_at(n)
                words.add(spine)
                budget = d - n - 1
                if budget >= 0:
                    arity = sig.arity(ctx.op)
                    side_iter = iter(ctx.sides)
                    for pos in range(arity):
                        if pos == ctx.hole:
                            continue
                        side = next(side_iter)
                        for w in go(side, budget):
                            words.add(spine + (pos,) + w)
                spine = spine + (ctx.hole,)
        out = frozenset(words)
        memo[key] = out
        return out

    return WordTree(depth, go(t, depth))


def dom_tree(sig: SignatureSpec, t: Term, depth: int) -> WordTree:
    """The same tree read from the unfolded coalgebra of ``t``."""
    assert_polynomial(sig)
    pc = unfold(sig, t).pc
    c = pc.coalg
    words: set[Word] = set()
    frontier: list[tuple[int, Word]] = [(pc.root, ())]
    while frontier:
        nxt: list[tuple[int, Word]] = []
        for state, w in frontier:
            words.add(w)
            if len(w) < depth:
                for i, child in enumerate(c.transition[state].args):
                    nxt.append((child, w + (i,)))
        frontier = nxt
    return WordTree(depth, frozenset(words))


def cb_rank(pc: PointedCoalgebra) -> int:
    """Derivative rank of the behaviour tree of a thin rigid coalgebra."""
    assert_polynomial(pc.coalg.sig)
    verdict = is_thin(pc)
    if not verdict.thin:
        raise NonThinError(verdict)
    c = pc.coalg
    adj = _adjacency(c)
    comps, comp = _scc_adj(adj, [pc.root], c.n_states)
    value: dict[int, int] = {}
    for ci, members in enumerate(comps):
        looped = any(comp[t] == ci for s in members for t in c.transition[s].args)
        if looped:
            v = 1
            for s in members:
                for t in c.transition[s].args:
                    if comp[t] != ci:
                        v = max(v, 1 + value[t])
            for s in members:
                value[s] = v
        else:
            (s,) = members
            value[s] = max((value[t] for t in c.transition[s].args), default=0)
    return value[pc.root]
