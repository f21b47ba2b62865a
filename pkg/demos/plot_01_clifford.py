"""
Spinor representations
======================

Every dimension from 2 to 12 gets one fixed complex spinor module.  The
generators act by Clifford multiplication and satisfy ``XY + YX = -2 g(X, Y)``.
"""
import numpy as np

from diracbounds import build_rep, sym_trace_contract, vector_mult

# %%
# Sizes grow like ``2^(n // 2)``; odd dimensions reuse the even construction
# and add the volume element as the last generator.
for n in range(2, 13):
    rep = build_rep(n)
    print(f"n = {n:2d}  spinor dimension {rep.dim:3d}")

# %%
# The generators are skew-Hermitian with entries in ``{0, +-1, +-i}``.
rep = build_rep(5)
g = rep.generators
print(np.unique(g))
print("max |G + G^*|:", np.abs(g + g.conj().transpose(0, 2, 1)).max())

# %%
# Clifford multiplication by a vector squares to minus its length squared.
v = np.array([0.3, -1.2, 0.5, 2.0, 0.1])
c = vector_mult(rep, v)
print("|c(v)^2 + |v|^2| =", np.abs(c @ c + (v @ v) * rep.identity).max())

# %%
# Contracting a symmetric endomorphism against the frame gives ``-tr(S)``.
s = np.random.default_rng(0).normal(size=(5, 5))
s = s + s.T
print("trace", np.trace(s), "->", sym_trace_contract(rep, s)[0, 0].real)
