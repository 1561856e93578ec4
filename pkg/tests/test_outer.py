import numpy as np
import pytest

from conftest import random_policy, random_semidet
from semidet_bc.binary_example import BinaryExampleParams, build_channel, causal_region, noncausal_region
from semidet_bc.capacity import SearchConfig, bound_triple
from semidet_bc.channels import GeneralChannel
from semidet_bc.errors import GuardError
from semidet_bc.geometry import hausdorff, region_contains
from semidet_bc.outer import (
    ESTIMATE_MARKER,
    causal_outer_region,
    outer_region_estimate,
    outer_triple,
    strategy_joint,
    strategy_kernel,
    strategy_letter,
    strategy_letters,
)

SMALL = SearchConfig(weight_sweep_count=10, random_restarts=5, local_steps=15, seed=3)


def test_outer_equals_inner_on_semidet():
    rng = np.random.default_rng(5)
    for _ in range(20):
        ch = random_semidet(rng, rng.integers(1, 3), rng.integers(2, 4))
        pol = random_policy(rng, u_size=4)
        assert np.allclose(outer_triple(ch.as_general(), pol), bound_triple(ch, pol), atol=1e-12, rtol=0)


def test_outer_cap_is_below_entropy_cap_for_noisy_y():
    # general channel with a noisy Y: I(X;Y|S) < H(Y|S)
    rng = np.random.default_rng(2)
    w = rng.dirichlet(np.ones(4), size=(2, 2)).reshape(2, 2, 2, 2)
    ch = GeneralChannel(w, [0.5, 0.5])
    pol = random_policy(rng, u_size=3)
    t = outer_triple(ch, pol)
    from semidet_bc.capacity import joint_from_kernel
    j = joint_from_kernel(ch.w, ch.p_s, pol.p_xu_given_s)
    assert t.a < j.cond_entropy("Y", "S")
    assert t.a == pytest.approx(j.mutual_info("X", "YS") - j.mutual_info("X", "S"), abs=1e-12)


def test_outer_estimate_contains_closed_form_region(fig1_channel):
    r = outer_region_estimate(fig1_channel, SMALL)
    assert r.meta["estimate"] == ESTIMATE_MARKER
    assert hausdorff(r, noncausal_region(0.2)) < 0.03
    with pytest.raises(ValueError):
        outer_region_estimate(fig1_channel, SearchConfig(2, 2, 2, deterministic_selection=True))


def test_four_strategies_with_identity_at_two():
    letters = strategy_letters(2, 2)
    assert [t.table for t in letters] == [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert strategy_letter(2, 2, 2).table == (0, 1)
    with pytest.raises(ValueError):
        strategy_letter(4, 2, 2)
    with pytest.raises(GuardError):
        strategy_letters(3, 6)


def test_strategy_kernel_of_binary_example(fig1_channel):
    k = strategy_kernel(fig1_channel)
    ky = k.sum(axis=2)
    # constant strategies give Y uniform, the two state-following ones a fixed Y
    np.testing.assert_allclose(ky, [[0.5, 0.5], [0, 1], [1, 0], [0.5, 0.5]], atol=1e-15)
    j = strategy_joint(fig1_channel, [0.5, 0, 0, 0.5])
    assert j.mutual_info("T", "Z") == pytest.approx(1 - 0.7219280948873623, abs=1e-12)
    assert j.mutual_info("T", "Y") == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("p", [0.1, 0.2, 0.35])
def test_causal_region_triangle(p):
    ch = build_channel(BinaryExampleParams(0.5, p))
    r = causal_outer_region(ch, SearchConfig(16, 10, 10))
    assert hausdorff(r, causal_region(p)) < 1e-9


def test_causal_inside_noncausal():
    r = causal_outer_region(build_channel(BinaryExampleParams(0.5, 0.2)), SearchConfig(8, 4, 5))
    assert region_contains(noncausal_region(0.2), r, 1e-9)
