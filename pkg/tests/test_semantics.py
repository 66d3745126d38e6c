"""Unfolding terms into coalgebras and behavioural equality of terms."""

import random

import pytest

from thincoalg import FElem
from thincoalg.coalgebra import beh_equal, minimize
from thincoalg.generate import rand_term
from thincoalg.semantics import beh_equal_terms, check_constructible_thin, unfold
from thincoalg.terms import FNode, GNode, LassoStream, apply_rewrite, random_rewrite, rewrite_actions


@pytest.fixture(scope="module")
def atoms(sig_poly):
    Fc = FNode(sig_poly.canonical_tuple("c", ()))
    uctx = sig_poly.canonical_context("u", 0, ())
    return {
        "Fc": Fc,
        "uomega": GNode(LassoStream((), (uctx,))),
        "bspine": GNode(LassoStream((), (sig_poly.canonical_context("b", 0, (Fc,)),))),
    }


def test_pure_loop_unfolds_to_one_state(sig_poly, atoms):
    r = unfold(sig_poly, atoms["uomega"])
    assert r.pc.coalg.transition == (FElem("u", (0,)),)
    assert r.pc.root == 0
    assert r.node_index == {atoms["uomega"]: 0}


def test_shared_subterms_share_states(sig_poly, atoms):
    uomega = atoms["uomega"]
    pair = FNode(sig_poly.canonical_tuple("b", (uomega, uomega)))
    r = unfold(sig_poly, pair)
    assert r.pc.coalg.transition == (FElem("b", (1, 1)), FElem("u", (1,)))
    assert r.node_index == {pair: 0, uomega: 1}


def test_stream_sides_become_states(sig_poly, atoms):
    r = unfold(sig_poly, atoms["bspine"])
    assert r.pc.coalg.transition == (FElem("b", (0, 1)), FElem("c", ()))
    assert r.node_index[atoms["bspine"]] == 0
    assert r.node_index[atoms["Fc"]] == 1


def test_unfold_is_deterministic(sig_server):
    rng = random.Random(12)
    for _ in range(30):
        t = rand_term(sig_server, rng.randrange(1, 12), rng)
        r1, r2 = unfold(sig_server, t), unfold(sig_server, t)
        assert r1.pc == r2.pc
        assert r1.node_index == r2.node_index


def test_node_index_replays_the_transition(sig_poly, sig_bag, sig_server):
    rng = random.Random(13)
    for sig in (sig_poly, sig_bag, sig_server):
        for _ in range(40):
            t = rand_term(sig, rng.randrange(1, 12), rng)
            r = unfold(sig, t)
            assert sorted(r.node_index.values()) == list(range(r.pc.coalg.n_states))
            for u, i in r.node_index.items():
                if isinstance(u, FNode):
                    assert sig.map_elem(u.elem, r.node_index.__getitem__) == (
                        r.pc.coalg.transition[i]
                    )


def test_term_and_fixture_loops_agree(sig_poly, atoms, u_loop):
    assert beh_equal(unfold(sig_poly, atoms["uomega"]).pc, u_loop)


def test_beh_equal_terms_on_small_pairs(sig_poly, atoms):
    uomega, Fc = atoms["uomega"], atoms["Fc"]
    assert beh_equal_terms(sig_poly, uomega, FNode(sig_poly.canonical_tuple("u", (uomega,))))
    assert not beh_equal_terms(sig_poly, uomega, Fc)
    assert not beh_equal_terms(sig_poly, uomega, atoms["bspine"])


def test_unfoldings_are_always_thin(sig_poly, sig_bag, sig_server):
    rng = random.Random(99)
    for sig in (sig_poly, sig_bag, sig_server):
        for _ in range(80):
            t = rand_term(sig, rng.randrange(1, 14), rng)
            assert check_constructible_thin(sig, t)


def test_rewrites_preserve_behaviour(sig_poly, sig_bag, sig_server):
    rng = random.Random(314)
    for sig in (sig_poly, sig_bag, sig_server):
        for _ in range(40):
            t = rand_term(sig, rng.randrange(2, 12), rng)
            s = t
            for _ in range(rng.randrange(1, 4)):
                s = random_rewrite(sig, s, rng)
            assert beh_equal_terms(sig, t, s)


def test_every_single_rewrite_preserves_behaviour(sig_server):
    # exhaustive over the action list of a few terms, not just sampled
    rng = random.Random(271)
    for _ in range(12):
        t = rand_term(sig_server, rng.randrange(3, 10), rng)
        for action in rewrite_actions(sig_server, t):
            assert beh_equal_terms(sig_server, t, apply_rewrite(sig_server, t, action))


def test_minimized_unfolding_is_a_quotient(sig_bag):
    rng = random.Random(55)
    for _ in range(30):
        t = rand_term(sig_bag, rng.randrange(1, 12), rng)
        pc = unfold(sig_bag, t).pc
        mpc, mapping = minimize(pc)
        assert mpc.coalg.n_states <= pc.coalg.n_states
        assert beh_equal(pc, mpc)
        assert mapping[pc.root] == mpc.root
