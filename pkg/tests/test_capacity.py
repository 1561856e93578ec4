import numpy as np
import pytest

from conftest import random_policy, random_semidet
from semidet_bc.binary_example import bsc_policy, noncausal_corner, noncausal_region
from semidet_bc.capacity import (
    SearchConfig,
    bound_triple,
    inner_region,
    joint_from_policy,
    policy_triples,
    search_region,
)
from semidet_bc.channels import AuxPolicy, SemiDetChannel
from semidet_bc.errors import GuardError
from semidet_bc.geometry import contains, hausdorff
from semidet_bc.prob import binary_entropy

SMALL = SearchConfig(weight_sweep_count=12, random_restarts=6, local_steps=15, seed=4)


def test_alpha_01_triple(fig1_channel):
    t = bound_triple(fig1_channel, bsc_policy(0.1))
    # closed form: (H(Y|S), 1 - Hb(beta), 1 - Hb(beta) + Hb(alpha)), beta = 0.26
    assert t.a == pytest.approx(1.0, abs=1e-12)
    assert t.b == pytest.approx(1 - binary_entropy(0.26), abs=1e-12)
    assert t.c == pytest.approx(1 - binary_entropy(0.26) + binary_entropy(0.1), abs=1e-12)
    # high-precision reference values
    assert t.b == pytest.approx(0.173253627507382, abs=1e-12)
    assert t.c == pytest.approx(0.642249221096663, abs=1e-12)


def test_x_equals_u_gives_full_y_entropy(fig1_channel):
    t = bound_triple(fig1_channel, bsc_policy(0.0))
    assert t.a == pytest.approx(1.0, abs=1e-12)
    ry, rz = noncausal_corner(0.0, 0.2)
    assert t.b == pytest.approx(rz, abs=1e-12)


def test_batched_triples_match_reference():
    rng = np.random.default_rng(11)
    for _ in range(30):
        ys, zs = rng.integers(1, 4), rng.integers(1, 4)
        ch = random_semidet(rng, ys, zs)
        q = np.stack([random_policy(rng, u_size=4, alpha=0.5).p_xu_given_s for _ in range(5)])
        fast = policy_triples(ch.kernel(), ch.p_s, q)
        ref = [bound_triple(ch, AuxPolicy(qi)) for qi in q]
        np.testing.assert_allclose(fast, ref, atol=1e-12)


def test_markov_structure_of_joint(fig1_channel):
    j = joint_from_policy(fig1_channel, random_policy(np.random.default_rng(1), u_size=5))
    assert j.cond_mutual_info("U", "YZ", "XS") == pytest.approx(0.0, abs=1e-12)
    assert j.cond_entropy("Y", "XS") == pytest.approx(0.0, abs=1e-12)


def test_search_is_worker_invariant(fig1_channel):
    a = search_region(fig1_channel.kernel(), fig1_channel.p_s, SMALL, workers=1)
    b = search_region(fig1_channel.kernel(), fig1_channel.p_s, SMALL, workers=3)
    np.testing.assert_array_equal(a.triples, b.triples)
    assert a.region.to_csv() == b.region.to_csv()


def test_more_restarts_only_add_members(fig1_channel):
    small = search_region(fig1_channel.kernel(), fig1_channel.p_s,
                          SearchConfig(4, 2, 5, seed=9))
    big = search_region(fig1_channel.kernel(), fig1_channel.p_s,
                        SearchConfig(4, 3, 5, seed=9))
    # member order is (sweep, restart)
    np.testing.assert_array_equal(small.triples, big.triples.reshape(4, 3, 3)[:, :2].reshape(-1, 3))


def test_small_search_near_closed_form(fig1_channel):
    r = inner_region(fig1_channel, SMALL)
    assert hausdorff(r, noncausal_region(0.2)) < 0.03


def test_deterministic_selection_search(fig1_channel):
    cfg = SearchConfig(8, 4, 10, seed=2, deterministic_selection=True)
    r = inner_region(fig1_channel, cfg)
    assert hausdorff(r, noncausal_region(0.2)) < 0.05


def test_state_free_deterministic_channel():
    # Y = Z = x, one state: both unit corners are achievable
    ch = SemiDetChannel([[0], [1]], [[[1.0, 0.0]], [[0.0, 1.0]]], [1.0], 2)
    # entropy is flat near the uniform input, so give the ascent more rounds
    r = inner_region(ch, SearchConfig(12, 6, 60, seed=4))
    assert contains(r, (1.0, 0.0), tol=1e-6)
    assert contains(r, (0.0, 1.0), tol=1e-6)
    assert not contains(r, (0.6, 0.6), tol=1e-6)


def test_aux_size_guard():
    ch = SemiDetChannel(np.zeros((4, 8), dtype=int), np.full((4, 8, 2), 0.5), np.full(8, 1 / 8), 1)
    with pytest.raises(GuardError, match="33"):
        inner_region(ch, SMALL)
