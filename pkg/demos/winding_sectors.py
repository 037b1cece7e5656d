"""Critical points and winding sectors along the alpha line (gamma=1, delta=-1, lambda=1).

Run: python3 demos/winding_sectors.py
"""
import numpy as np

from spinres import Axis, ModelParams, critical_scan, diagnose_topological

line = ModelParams(gamma=1, delta=-1, lam=1)
crit = critical_scan(line, Axis.ALPHA, -3.0, 3.0)
print("gap closes at alpha =", ", ".join(f"{a:.6f}" for a in crit))

edges = [-3.0, *crit, 3.0]
for lo, hi in zip(edges[:-1], edges[1:]):
    a = 0.5 * (lo + hi)
    d = diagnose_topological(line.with_(alpha=a))
    print(f"alpha in ({lo:+.3f}, {hi:+.3f}): N={d.winding:+d}  coherence decay={d.decay.mode.value}"
          f"  consistent={d.consistent}")
