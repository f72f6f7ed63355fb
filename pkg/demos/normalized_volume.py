"""
Normalized flows: fixing the volume, watching the shape
=======================================================

Adding the trace term (2/3) hbar g to the flow makes it volume-preserving:
d/dt (A B C) = 0 exactly along solutions.  The integrator is not told this
-- the drift below is an honest global error measurement, not an enforced
constraint.  With the volume frozen, the normalized flow isolates the shape
dynamics: on SU(2), anisotropy decays and the metric relaxes toward round
instead of collapsing.
"""

import numpy as np

from xcflow import NXCF, Geometry, IntegratorOptions, MetricDiag, integrate

# -- volume drift across every geometry ------------------------------------------

seeds = {
    Geometry.HEISENBERG: (1.0, 2.0, 3.0),
    Geometry.SOL: (2.0, 4.0, 1.0),
    Geometry.SU2: (3.0, 2.0, 1.0),
    Geometry.SL2R: (1.0, 2.0, 1.0),
    Geometry.E2: (2.0, 1.0, 1.0),
    Geometry.TRIVIAL: (1.0, 2.0, 3.0),
}

print("volume A*B*C under the normalized negative flow (t_max = 2):")
for geom, init in seeds.items():
    traj = integrate(geom, NXCF, MetricDiag(*init), IntegratorOptions(t_max=2.0))
    vol = traj.states.prod(axis=1)
    drift = np.abs(vol / vol[0] - 1.0).max()
    print(f"  {geom.value:10s} init {init}:  max relative drift {drift:.3e}")

# -- shape relaxation on SU(2) ------------------------------------------------------

traj = integrate(Geometry.SU2, NXCF, MetricDiag(3.0, 2.0, 1.0),
                 IntegratorOptions(t_max=2.0))
A, B, C = traj.states.T
print("\nSU(2) (3, 2, 1) under the normalized flow: A/C relaxes toward 1")
for t in (0.0, 0.5, 1.0, 2.0):
    i = int(np.searchsorted(traj.times, t))
    i = min(i, len(traj.times) - 1)
    print(f"  t = {traj.times[i]:4.2f}:  (A, B, C) = ({A[i]:.4f}, {B[i]:.4f}, "
          f"{C[i]:.4f})   A/C = {A[i]/C[i]:.6f}")
