"""JSON file formats for signatures, coalgebras, terms, paths and witnesses.

Loaders validate structure and raise the matching ``ValueError`` subclass
with a readable message; dumpers emit canonical layouts, so load(dump(x))
returns x.  ``dump_json`` writes deterministic bytes (sorted keys, fixed
separators) so generated files are reproducible byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from .coalgebra import Coalgebra, FinitePath, PointedCoalgebra
from .errors import CoalgebraError, SignatureError, TermError
from .signature import DEFAULT_ARITY_CAP, ContextElem, OperationSymbol, SignatureSpec
from .terms import FNode, GNode, LassoStream, Term
from .thinness import ThinWitness


def dump_json(path: str | Path, obj: Any) -> None:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load(data: Any) -> Any:
    if isinstance(data, (str, Path)):
        try:
            return json.loads(Path(data).read_text(encoding="utf-8"))
        except OSError as exc:
            raise SignatureError(f"cannot read {data}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SignatureError(f"invalid JSON in {data}: {exc}") from exc
    return data


# -- signatures -----------------------------------------------------------


def load_signature(src: Any, arity_cap: int = DEFAULT_ARITY_CAP) -> SignatureSpec:
    data = _load(src)
    if not isinstance(data, dict) or "ops" not in data:
        raise SignatureError("signature document must be an object with 'ops'")
    ops = []
    if not isinstance(data["ops"], list):
        raise SignatureError("'ops' must be a list")
    for entry in data["ops"]:
        if not isinstance(entry, dict):
            raise SignatureError("each op must be an object")
        unknown = set(entry) - {"id", "arity", "generators"}
        if unknown:
            raise SignatureError(f"unknown op fields {sorted(unknown)}")
        if not isinstance(entry.get("id"), str):
            raise SignatureError("op 'id' must be a string")
        if not isinstance(entry.get("arity"), int):
            raise SignatureError(f"op {entry.get('id')!r}: 'arity' must be an integer")
        gens = entry.get("generators", [])
        if not isinstance(gens, list) or not all(
            isinstance(g, list) and all(isinstance(k, int) for k in g) for g in gens
        ):
            raise SignatureError(
                f"op {entry['id']!r}: 'generators' must be a list of integer lists"
            )
        ops.append(
            OperationSymbol(entry["id"], entry["arity"], tuple(tuple(g) for g in gens))
        )
    return SignatureSpec(ops, arity_cap=arity_cap)


def dump_signature(sig: SignatureSpec) -> dict:
    return {
        "ops": [
            {"id": op.id, "arity": op.arity, "generators": [list(g) for g in op.generators]}
            for op in sig.ops
        ]
    }


# -- coalgebras -----------------------------------------------------------


def load_coalgebra(
    src: Any,
    sig: SignatureSpec | None = None,
    arity_cap: int = DEFAULT_ARITY_CAP,
) -> tuple[Coalgebra, int | None]:
    """Load a coalgebra and its optional root.

    The document's "signature" may be inline or a path relative to the
    document's own location; an explicit ``sig`` argument wins over both.
    """
    base_dir = Path(src).parent if isinstance(src, (str, Path)) else Path(".")
    data = _load(src)
    if not isinstance(data, dict):
        raise CoalgebraError("coalgebra document must be an object")
    if sig is None:
        ref = data.get("signature")
        if ref is None:
            raise CoalgebraError("no signature: pass one or embed 'signature'")
        if isinstance(ref, str):
            sig = load_signature(base_dir / ref, arity_cap)
        else:
            sig = load_signature(ref, arity_cap)
    n = data.get("states")
    if not isinstance(n, int) or n < 0:
        raise CoalgebraError("'states' must be a nonnegative integer")
    rows = data.get("transitions")
    if not isinstance(rows, list) or len(rows) != n:
        raise CoalgebraError(f"'transitions' must list exactly {n} entries")
    transitions = []
    for s, row in enumerate(rows):
        if not isinstance(row, dict) or not isinstance(row.get("op"), str):
            raise CoalgebraError(f"state {s}: transition needs an 'op' string")
        tup = row.get("tuple", [])
        if not isinstance(tup, list) or not all(isinstance(x, int) for x in tup):
            raise CoalgebraError(f"state {s}: 'tuple' must be a list of integers")
        transitions.append(sig.canonical_tuple(row["op"], tup))
    coalg = Coalgebra(sig, tuple(transitions))
    root = data.get("root")
    if root is not None and not isinstance(root, int):
        raise CoalgebraError("'root' must be an integer")
    if root is not None and not 0 <= root < n:
        raise CoalgebraError(f"root {root} out of range")
    return coalg, root


def dump_coalgebra(c: Coalgebra, root: int | None = None) -> dict:
    doc: dict[str, Any] = {
        "signature": dump_signature(c.sig),
        "states": c.n_states,
        "transitions": [
            {"op": e.op, "tuple": list(e.args)} for e in c.transition
        ],
    }
    if root is not None:
        doc["root"] = root
    return doc


# -- terms ----------------------------------------------------------------


def _term_from(data: Any, sig: SignatureSpec) -> Term:
    if not isinstance(data, dict) or len(data) != 1:
        raise TermError("term node must be an object with exactly 'f' or 'g'")
    if "f" in data:
        body = data["f"]
        if not isinstance(body, dict) or not isinstance(body.get("op"), str):
            raise TermError("branching node needs an 'op' string")
        children = body.get("children", [])
        if not isinstance(children, list):
            raise TermError("'children' must be a list")
        args = tuple(_term_from(ch, sig) for ch in children)
        return FNode(sig.canonical_tuple(body["op"], args))
    if "g" in data:
        body = data["g"]
        if not isinstance(body, dict):
            raise TermError("stream node must be an object")
        prefix = body.get("prefix", [])
        period = body.get("period")
        if not isinstance(prefix, list) or not isinstance(period, list):
            raise TermError("stream node needs 'prefix' and 'period' lists")
        if not period:
            raise TermError("stream period must be nonempty")
        pctx = tuple(_ctx_from(c, sig) for c in prefix)
        qctx = tuple(_ctx_from(c, sig) for c in period)
        return GNode(LassoStream(pctx, qctx))
    raise TermError("term node must contain 'f' or 'g'")


def _ctx_from(data: Any, sig: SignatureSpec) -> ContextElem:
    if not isinstance(data, dict) or not isinstance(data.get("op"), str):
        raise TermError("context needs an 'op' string")
    if not isinstance(data.get("hole"), int):
        raise TermError(f"context over {data.get('op')!r} needs an integer 'hole'")
    sides = data.get("sides", [])
    if not isinstance(sides, list):
        raise TermError("'sides' must be a list")
    terms = tuple(_term_from(s, sig) for s in sides)
    return sig.canonical_context(data["op"], data["hole"], terms)


def load_term(src: Any, sig: SignatureSpec) -> Term:
    return _term_from(_load(src), sig)


def dump_term(t: Term) -> dict:
    if isinstance(t, FNode):
        return {
            "f": {"op": t.elem.op, "children": [dump_term(c) for c in t.elem.args]}
        }
    return {
        "g": {
            "prefix": [_ctx_to(c) for c in t.stream.prefix],
            "period": [_ctx_to(c) for c in t.stream.period],
        }
    }


def _ctx_to(ctx: ContextElem) -> dict:
    return {
        "op": ctx.op,
        "hole": ctx.hole,
        "sides": [dump_term(s) for s in ctx.sides],
    }


# -- paths and witnesses --------------------------------------------------


def dump_path(p: FinitePath) -> dict:
    return {"states": list(p.states), "indices": list(p.indices)}


def dump_witness(w: ThinWitness) -> dict:
    return {
        "access": dump_path(w.access),
        "cycle1": dump_path(w.cycle1),
        "cycle2": dump_path(w.cycle2),
    }
