"""
The binary example: noncausal versus causal state
=================================================

Y = X xor S is seen without noise, Z is X through a BSC(p).  With the
state known in advance the transmitter can steer Y freely and still leave
room for Z; with causal knowledge only a straight trade-off remains.
"""

import tempfile

import numpy as np

from semidet_bc import BinaryExampleParams, build_channel, causal_region, noncausal_region, write_figure1

p = 0.2
nc = noncausal_region(p)
ca = causal_region(p)
# the noncausal boundary is a dense polyline; show its two ends
print(f"noncausal: {len(nc.vertices)} vertices, first and last three")
print(np.round(nc.vertices[:3], 6))
print(np.round(nc.vertices[-3:], 6))
print("causal corners:")
print(np.round(ca.vertices, 6))

# the gap between the two upper boundaries, traced along R_y
for ry in np.linspace(0, 1, 6):
    print(f"R_y = {ry:.1f}: noncausal {nc.max_r_z(ry):.4f}, causal {ca.max_r_z(ry):.4f}")

# the channel object behind both curves
ch = build_channel(BinaryExampleParams(sigma=0.5, p=p))
print("f(x, s) =")
print(ch.f)

# csv files plus an svg drawing, written to a scratch directory
with tempfile.TemporaryDirectory() as d:
    res = write_figure1(d, p, 0.5)
    print("noncausal area", round(res["noncausal"].area, 6), "causal area", round(res["causal"].area, 6))
