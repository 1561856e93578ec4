import numpy as np
import pytest

from conftest import random_policy, random_semidet
from semidet_bc.binary_example import bsc_policy
from semidet_bc.capacity import joint_from_policy, triple_from_joint
from semidet_bc.channels import AuxPolicy
from semidet_bc.prob import JointDist
from semidet_bc.support import reduce_support


def _check(joint, reduced, tol=1e-9):
    np.testing.assert_allclose(triple_from_joint(reduced), triple_from_joint(joint), atol=tol, rtol=0)
    np.testing.assert_allclose(reduced.marginal("XYZS").mass, joint.marginal("XYZS").mass, atol=tol)
    # still of the channel form
    assert reduced.cond_mutual_info("U", "YZ", "XS") == pytest.approx(0.0, abs=1e-10)


def test_split_copies(fig1_channel):
    # each of the 2 u-values split into 4 equal copies
    q = np.repeat(bsc_policy(0.1).p_xu_given_s / 4, 4, axis=2)
    j = joint_from_policy(fig1_channel, AuxPolicy(q))
    r = reduce_support(j)
    assert r.size("U") <= 5
    _check(j, r)


def test_random_joints_reduce_to_bound():
    rng = np.random.default_rng(7)
    for _ in range(15):
        ch = random_semidet(rng, rng.integers(1, 3), rng.integers(2, 4))
        j = joint_from_policy(ch, random_policy(rng, u_size=12))
        r = reduce_support(j)
        assert r.size("U") <= 5
        _check(j, r)


def test_three_by_two_alphabets():
    rng = np.random.default_rng(8)
    ch = random_semidet(rng, y_size=3, z_size=2, x_size=3, s_size=2)
    j = joint_from_policy(ch, random_policy(rng, x_size=3, s_size=2, u_size=10))
    r = reduce_support(j)
    assert r.size("U") <= 7
    _check(j, r)


def test_small_support_untouched(fig1_channel):
    j = joint_from_policy(fig1_channel, bsc_policy(0.3))
    r = reduce_support(j)
    assert r.size("U") == 2
    _check(j, r, 1e-14)


def test_rejects_non_channel_joints():
    rng = np.random.default_rng(0)
    m = rng.dirichlet(np.ones(32)).reshape(2, 2, 2, 2, 2)
    with pytest.raises(ValueError):
        reduce_support(JointDist("XYZSU", m))
