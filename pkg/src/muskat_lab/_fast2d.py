"""Numba inner loop for the 2-D principal-value lattice sum.

Kept separate so the rest of the package stays importable without paying JIT
compilation until a 2-D right-hand side is actually requested.  The pairing of
+offset / -offset inside one accumulation is load-bearing: it cancels the odd
part of the integrand in exact floating point, which is what makes plane
profiles evaluate to 0 at the center node instead of O(dx).
"""

import numba
import numpy as np


@numba.njit(cache=True, parallel=True, fastmath=False)
def lattice_sum_2d(vpad, gx1, gx2, jv, pad, dx, out):
    n = out.shape[0]
    for i1 in numba.prange(n):
        for i2 in range(n):
            J = jv[i1, i2]
            c1 = i1 + pad
            c2 = i2 + pad
            fc = vpad[c1, c2]
            g1 = gx1[i1, i2]
            g2 = gx2[i1, i2]
            acc = 0.0
            # half lattice: (j1 > 0, any j2) plus (j1 = 0, j2 > 0); each term
            # handles the offset and its negation together.
            for j1 in range(0, J + 1):
                a1 = j1 * dx
                a1g = a1 * g1
                rp = c1 - j1
                rm = c1 + j1
                j2lo = 1 if j1 == 0 else -J
                for j2 in range(j2lo, J + 1):
                    a2 = j2 * dx
                    asq = a1 * a1 + a2 * a2
                    nlin = a1g + a2 * g2
                    dp = fc - vpad[rp, c2 - j2]
                    dm = fc - vpad[rm, c2 + j2]
                    up = asq + dp * dp
                    um = asq + dm * dm
                    acc += (nlin - dp) / (up * np.sqrt(up)) + (-nlin - dm) / (
                        um * np.sqrt(um)
                    )
            out[i1, i2] = acc * dx * dx
    return out
