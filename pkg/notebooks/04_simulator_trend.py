"""
Monte Carlo runs of the binned scheme
=====================================

Rates are set to 70% of what the chosen policy supports.  The overall error
rate should fall as the block length grows, while bins that ask for more
than H(Y) bits make the deterministic decoder fail regardless of n.
"""

import numpy as np

from semidet_bc import BinaryExampleParams, SimConfig, bsc_policy, build_channel, run_trials, selection_from_policy
from semidet_bc.sim import fractional_rates, scheme_thresholds, selection_joint

ch = build_channel(BinaryExampleParams(sigma=0.5, p=0.2))
sel = selection_from_policy(ch, bsc_policy(0.2))
th = scheme_thresholds(selection_joint(ch, sel))
print({k: round(v, 4) + 0.0 for k, v in th.items()})

ry, rz, cry, crz = fractional_rates(th, 0.7)
print(f"R_y {ry:.3f}, R_z {rz:.3f}, cover y {cry:.3f}, cover z {crz:.3f}")

for n in (8, 12, 16, 20):
    errs = [run_trials(ch, sel, SimConfig(n, ry, rz, cry, crz, 1.0, 1000, seed)).overall_err_rate
            for seed in range(3)]
    print(f"n = {n:2d}: overall error {np.mean(errs):.3f}")

# oversubscribed: R_y + cover y = H(Y) + 0.2
over = run_trials(ch, sel, SimConfig(16, th["det_max"] + 0.2 - 0.5, 0.0, 0.5, 0.0, 1.0, 1000, 0))
print(f"oversubscribed deterministic error {over.det_err_rate:.3f}")

# one shared codebook instead of the ensemble average
fixed = run_trials(ch, sel, SimConfig(12, ry, rz, cry, crz, 1.0, 1000, 0), fixed_codebook=True)
print(fixed.to_text())
