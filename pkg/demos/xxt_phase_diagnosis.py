"""Diagnose the three XXT phases from the decay of l1 coherence with distance.

Run: python3 demos/xxt_phase_diagnosis.py
"""
from spinres import diagnose_xxt

for alpha, lam in [(0.7, 1.0), (3.0, 0.5), (0.5, 2.0)]:
    d = diagnose_xxt(alpha, lam)
    head = ", ".join(f"{v:.4f}" for v in d.profile.values[:5])
    print(f"alpha={alpha:<4} lambda={lam:<4} Fermi points={len(d.fermi_points)} "
          f"decay={d.decay.mode.value:<12} label={d.label.value:<14} agrees={d.agrees}")
    print(f"    C_l1(r=1..5) = {head}")
