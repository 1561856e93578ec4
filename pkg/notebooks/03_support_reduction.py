"""
Shrinking the auxiliary alphabet
================================

A policy with a large U alphabet is replaced by one with at most
|X||S| + 1 letters that keeps all three bounds.
"""

import numpy as np

from semidet_bc import AuxPolicy, BinaryExampleParams, bound_triple, build_channel, joint_from_policy, reduce_support

rng = np.random.default_rng(0)
ch = build_channel(BinaryExampleParams(sigma=0.5, p=0.2))

# a random policy with twelve auxiliary letters
q = rng.dirichlet(np.ones(2 * 12), size=2).reshape(2, 2, 12)
pol = AuxPolicy(q)
joint = joint_from_policy(ch, pol)
small = reduce_support(joint)

print("letters before:", pol.u_size, "after:", small.size("U"))
print("bounds before:", np.round(bound_triple(ch, pol), 12))
print("bounds after: ", np.round(bound_triple(ch, AuxPolicy.from_joint(small)), 12))
