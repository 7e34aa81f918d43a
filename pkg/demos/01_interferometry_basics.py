#!/usr/bin/env python3
"""Phase estimation with the four basic probe families.

Walks through the textbook schemes: a polarized ensemble precessing about
y (shot-noise limited), a GHZ state read out through its x-parity
(Heisenberg limited), a half-excited Dicke state read out through <J_z^2>,
and a spin singlet that ignores homogeneous fields but responds to a
gradient.
"""

import numpy as np

from qmetro import (dicke_scenario, error_propagation, ghz_parity_scenario,
                    gradient_scenario, ramsey_curve, ramsey_scenario)
from qmetro.metrology import Scenario, squared_op
from qmetro.spin import collective_op, full_rep
from qmetro.states import singlet_pi

print("=== precision of the basic schemes ===")
print(f"{'N':>4} {'ramsey':>12} {'1/N':>10} {'ghz parity':>12} {'1/N^2':>10} "
      f"{'dicke':>12} {'2/N(N+2)':>10}")
for n in (2, 4, 8):
    ram = error_propagation(ramsey_scenario(n)).value
    ghz_v = error_propagation(ghz_parity_scenario(n)).value
    dic = error_propagation(dicke_scenario(n)).value
    print(f"{n:>4} {ram:>12.6f} {1/n:>10.6f} {ghz_v:>12.6f} {1/n**2:>10.6f} "
          f"{dic:>12.6f} {2/(n*(n+2)):>10.6f}")

print("\n=== interference fringes (N = 6) ===")
sc = ramsey_scenario(6)
thetas = np.linspace(0, np.pi, 7)
curve = ramsey_curve(sc.probe, sc.generator, sc.observable, thetas)
for th, m, v in zip(thetas, curve["mean"], curve["variance"]):
    print(f"theta={th:5.2f}  <Jx>={m:+7.3f}  Var(Jx)={v:6.3f}")

gsc = ghz_parity_scenario(6)
curve = ramsey_curve(gsc.probe, gsc.generator, gsc.observable, thetas)
print("\nGHZ parity oscillates N times faster:")
for th, m in zip(thetas, curve["mean"]):
    print(f"theta={th:5.2f}  <parity>={m:+7.3f}  cos(6 theta)={np.cos(6*th):+7.3f}")

print("\n=== gradient magnetometry with a singlet (N = 4) ===")
grad = gradient_scenario(4)
res = error_propagation(grad)
print(f"gradient readout: (dtheta_G)^2 = {res.value:.6f}  [{res.branch} branch]")

rep = full_rep(4)
hom = Scenario(singlet_pi(4), collective_op("y", rep),
               squared_op(collective_op("z", rep)), 0.0)
res_h = error_propagation(hom)
print(f"homogeneous field: no sensitivity = {res_h.no_sensitivity} "
      "(the singlet is rotation invariant)")
