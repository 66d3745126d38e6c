"""Branching signatures: operation symbols with permutation symmetries.

A signature is a finite list of operation symbols.  Each symbol has an arity
and a permutation group on its argument positions, given by generators.  A
branching value ("element") is an operation symbol applied to a tuple of
arguments, identified up to the group action; a context is such a value with
one argument position replaced by a hole.  Both are stored as canonical orbit
representatives, so structural equality coincides with orbit equality.

The group acts on a tuple by moving the entry at position ``k`` to position
``sigma[k]``.  Contexts carry the restricted action: the hole moves with the
permutation and the remaining entries follow.

Canonical representatives are lexicographic minima over the fully enumerated
group.  This is exponential in the arity, which is why arities are capped
(default 8, see ``DEFAULT_ARITY_CAP``); argument values must be totally
ordered, either natively (ints, strings) or through a ``sort_key`` attribute.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable, Iterator, Sequence

from .errors import SignatureError

DEFAULT_ARITY_CAP = 8

Perm = tuple[int, ...]


def value_key(x: Any):
    """Sort key for argument values: native for scalars, recursive for terms."""
    key = getattr(x, "sort_key", None)
    return x if key is None else key


def identity_perm(arity: int) -> Perm:
    return tuple(range(arity))


def check_perm(perm: Sequence[int], arity: int) -> Perm:
    """Validate ``perm`` as a bijection on ``range(arity)`` and return it."""
    p = tuple(perm)
    if len(p) != arity or sorted(p) != list(range(arity)):
        raise SignatureError(f"malformed permutation {list(perm)} for arity {arity}")
    return p


def compose_perms(p: Perm, q: Perm) -> Perm:
    """Composition applying ``q`` first: (p . q)[k] = p[q[k]]."""
    return tuple(p[q[k]] for k in range(len(p)))


def invert_perm(p: Perm) -> Perm:
    inv = [0] * len(p)
    for k, v in enumerate(p):
        inv[v] = k
    return tuple(inv)


def apply_perm(sigma: Perm, values: Sequence) -> tuple:
    """Move the entry at position k to position sigma[k]."""
    out = [None] * len(values)
    for k, v in enumerate(values):
        out[sigma[k]] = v
    return tuple(out)


@dataclass(frozen=True)
class PermGroup:
    """A permutation group on ``range(arity)``, fully enumerated.

    Elements are stored sorted, so iteration order is deterministic.
    """

    arity: int
    elements: tuple[Perm, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.elements)

    def __contains__(self, perm) -> bool:
        return tuple(perm) in self._element_set

    @cached_property
    def _element_set(self) -> frozenset[Perm]:
        return frozenset(self.elements)

    @property
    def is_trivial(self) -> bool:
        return len(self.elements) == 1


def enumerate_group(generators: Iterable[Sequence[int]], arity: int) -> PermGroup:
    """Close ``generators`` under composition; worklist closure from identity."""
    gens = [check_perm(g, arity) for g in generators]
    seen = {identity_perm(arity)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose_perms(g, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return PermGroup(arity, tuple(sorted(seen)))


@dataclass(frozen=True)
class OperationSymbol:
    """One operation: a name, an arity and the symmetry generators."""

    id: str
    arity: int
    generators: tuple[Perm, ...] = ()


@dataclass(frozen=True)
class FElem:
    """A branching value: op applied to a canonical argument tuple.

    Construct through ``SignatureSpec.canonical_tuple`` so the tuple is the
    orbit minimum; direct construction skips canonicalization.
    """

    op: str
    args: tuple

    @cached_property
    def sort_key(self):
        return (self.op, tuple(value_key(x) for x in self.args))

    def __lt__(self, other: "FElem") -> bool:
        return self.sort_key < other.sort_key

    def base(self) -> frozenset:
        """The set of argument values."""
        return frozenset(self.args)


@dataclass(frozen=True)
class ContextElem:
    """A branching value with one argument replaced by a hole.

    ``hole`` is the canonical hole position and ``sides`` lists the remaining
    arguments in position order.  Construct through
    ``SignatureSpec.canonical_context``.
    """

    op: str
    hole: int
    sides: tuple

    @cached_property
    def sort_key(self):
        return (self.op, self.hole, tuple(value_key(x) for x in self.sides))

    def __lt__(self, other: "ContextElem") -> bool:
        return self.sort_key < other.sort_key

    def base(self) -> frozenset:
        """The set of side values (the hole does not count)."""
        return frozenset(self.sides)


def _hole_key(full: Sequence) -> tuple:
    # The hole (None) sorts below every argument value.
    return tuple((0,) if v is None else (1, value_key(v)) for v in full)


class SignatureSpec:
    """A validated signature with pre-enumerated groups.

    Raises ``SignatureError`` on duplicate ids, bad permutations, or arities
    above ``arity_cap``.  Two specs are equal when they have the same ops with
    the same arities and the same enumerated groups, regardless of which
    generators were listed.
    """

    def __init__(self, ops: Iterable[OperationSymbol], arity_cap: int = DEFAULT_ARITY_CAP):
        self.ops: tuple[OperationSymbol, ...] = tuple(ops)
        self.arity_cap = arity_cap
        self._by_id: dict[str, OperationSymbol] = {}
        self._groups: dict[str, PermGroup] = {}
        if not self.ops:
            raise SignatureError("signature needs at least one operation")
        for op in self.ops:
            if op.id in self._by_id:
                raise SignatureError(f"duplicate operation id {op.id!r}")
            if op.arity < 0:
                raise SignatureError(f"negative arity for {op.id!r}")
            if op.arity > arity_cap:
                raise SignatureError(
                    f"arity {op.arity} of {op.id!r} exceeds cap {arity_cap}"
                )
            self._by_id[op.id] = op
            self._groups[op.id] = enumerate_group(op.generators, op.arity)

    def __repr__(self) -> str:
        names = ", ".join(f"{o.id}/{o.arity}" for o in self.ops)
        return f"SignatureSpec({names})"

    def _eq_key(self):
        return tuple((o.id, o.arity, self._groups[o.id].elements) for o in self.ops)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignatureSpec):
            return NotImplemented
        return self._eq_key() == other._eq_key()

    def __hash__(self) -> int:
        return hash(self._eq_key())

    def op(self, op_id: str) -> OperationSymbol:
        try:
            return self._by_id[op_id]
        except KeyError:
            raise SignatureError(f"unknown operation {op_id!r}") from None

    def arity(self, op_id: str) -> int:
        return self.op(op_id).arity

    def group(self, op_id: str) -> PermGroup:
        self.op(op_id)
        return self._groups[op_id]

    @property
    def is_polynomial(self) -> bool:
        """True when every group is trivial, so positions are rigid."""
        return all(g.is_trivial for g in self._groups.values())

    # -- canonical construction ------------------------------------------

    def canonical_tuple(self, op_id: str, values: Sequence) -> FElem:
        """The orbit-minimal element with the given arguments."""
        op = self.op(op_id)
        vals = tuple(values)
        if len(vals) != op.arity:
            raise SignatureError(
                f"{op_id!r} expects {op.arity} arguments, got {len(vals)}"
            )
        group = self._groups[op_id]
        if group.is_trivial:
            return FElem(op_id, vals)
        best = min(apply_perm(s, vals) for s in group)
        return FElem(op_id, best)

    def canonical_context(self, op_id: str, hole: int, sides: Sequence) -> ContextElem:
        """The orbit-minimal context with the hole at ``hole``.

        ``sides`` lists the non-hole arguments in position order.  The hole
        sorts below every value, so the canonical hole position is the first
        position it can reach under the group.
        """
        op = self.op(op_id)
        if op.arity == 0:
            raise SignatureError(f"{op_id!r} has arity 0 and admits no context")
        if not 0 <= hole < op.arity:
            raise SignatureError(f"hole {hole} out of range for {op_id!r}/{op.arity}")
        s = tuple(sides)
        if len(s) != op.arity - 1:
            raise SignatureError(
                f"context over {op_id!r} expects {op.arity - 1} sides, got {len(s)}"
            )
        full = s[:hole] + (None,) + s[hole:]
        group = self._groups[op_id]
        if not group.is_trivial:
            full = min((apply_perm(g, full) for g in group), key=_hole_key)
        h = full.index(None)
        return ContextElem(op_id, h, full[:h] + full[h + 1 :])

    # -- structural operations -------------------------------------------

    def plug(self, ctx: ContextElem, value) -> FElem:
        """Fill the hole of ``ctx`` with ``value``."""
        full = ctx.sides[: ctx.hole] + (value,) + ctx.sides[ctx.hole :]
        return self.canonical_tuple(ctx.op, full)

    def decompositions(self, elem: FElem) -> list[tuple[ContextElem, Any]]:
        """All (context, value) pairs that plug back to ``elem``.

        One pair per orbit, deterministically ordered.
        """
        out = set()
        for u, x in enumerate(elem.args):
            ctx = self.canonical_context(elem.op, u, elem.args[:u] + elem.args[u + 1 :])
            out.add((ctx, x))
        return sorted(out, key=lambda p: (p[0].sort_key, value_key(p[1])))

    def map_elem(self, elem: FElem, f: Callable) -> FElem:
        """Apply ``f`` to every argument and re-canonicalize."""
        return self.canonical_tuple(elem.op, tuple(f(x) for x in elem.args))

    def map_ctx(self, ctx: ContextElem, f: Callable) -> ContextElem:
        """Apply ``f`` to every side value and re-canonicalize."""
        return self.canonical_context(ctx.op, ctx.hole, tuple(f(x) for x in ctx.sides))
