"""Independent oracle for the band edge of the reference profile
beta = log(1+eta), delta = 1: dense/fine eigensolves at n = 1024..4096
with Richardson extrapolation, plus direct 2-variable maximization."""
import numpy as np
from scipy.optimize import minimize_scalar
from shelfwaves.profiles import make_depth_profile
from shelfwaves.transversal import (TransversalGrid, assemble_transversal_forms,
                                    solve_transversal)

d = make_depth_profile("log", [1.0], 1.0)

def edge(n):
    g = TransversalGrid(n=n, delta=1.0)
    f = assemble_transversal_forms(g, d)
    res = minimize_scalar(lambda a: -solve_transversal(f, a, 1)[0].omega,
                          bounds=(0.5, 5.0), method="bounded",
                          options={"xatol": 1e-13})
    return -res.fun, res.x

vals = {}
for n in (1024, 2048, 4096):
    w, a = edge(n)
    vals[n] = (w, a)
    print(n, f"{w:.16f}", f"{a:.16f}")

w_extrap = vals[4096][0] + (vals[4096][0] - vals[2048][0]) / 3.0
a_extrap = vals[4096][1] + (vals[4096][1] - vals[2048][1]) / 3.0
print("Richardson Omega* =", f"{w_extrap:.16f}")
print("Richardson alpha. =", f"{a_extrap:.16f}")
