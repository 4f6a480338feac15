"""Pure-numpy gate kernels (fallback backend).

All kernels mutate the flat complex128 amplitude array in place. Qubit
indices are MSB-first: qubit 0 is the most significant bit of the basis
label, so qubit ``q`` of an ``n``-qubit register is tensor axis ``q`` of
``amps.reshape([2] * n)``.
"""

import numpy as np

_ISQ2 = 1.0 / np.sqrt(2.0)

name = "python"


def _axes(amps, n):
    return amps.reshape([2] * n)


def _sel(n, **fixed):
    ix = [slice(None)] * n
    for q, b in fixed.items():
        ix[int(q[1:])] = b
    return tuple(ix)


def _sel_at(n, pairs):
    ix = [slice(None)] * n
    for q, b in pairs:
        ix[q] = b
    return tuple(ix)


def apply_h(amps, n, q):
    v = _axes(amps, n)
    i0 = _sel_at(n, [(q, 0)])
    i1 = _sel_at(n, [(q, 1)])
    a0 = v[i0].copy()
    v[i0] = (a0 + v[i1]) * _ISQ2
    v[i1] = (a0 - v[i1]) * _ISQ2


def apply_x(amps, n, q):
    v = _axes(amps, n)
    i0 = _sel_at(n, [(q, 0)])
    i1 = _sel_at(n, [(q, 1)])
    tmp = v[i0].copy()
    v[i0] = v[i1]
    v[i1] = tmp


def apply_y(amps, n, q):
    v = _axes(amps, n)
    i0 = _sel_at(n, [(q, 0)])
    i1 = _sel_at(n, [(q, 1)])
    tmp = v[i0].copy()
    v[i0] = -1j * v[i1]
    v[i1] = 1j * tmp


def apply_z(amps, n, q):
    v = _axes(amps, n)
    v[_sel_at(n, [(q, 1)])] *= -1.0


def apply_unitary1(amps, n, q, m00, m01, m10, m11):
    v = _axes(amps, n)
    i0 = _sel_at(n, [(q, 0)])
    i1 = _sel_at(n, [(q, 1)])
    a0 = v[i0].copy()
    a1 = v[i1]
    v[i0] = m00 * a0 + m01 * a1
    v[i1] = m10 * a0 + m11 * a1


def apply_cnot(amps, n, c, t):
    v = _axes(amps, n)
    i10 = _sel_at(n, [(c, 1), (t, 0)])
    i11 = _sel_at(n, [(c, 1), (t, 1)])
    tmp = v[i10].copy()
    v[i10] = v[i11]
    v[i11] = tmp


def apply_cz(amps, n, a, b):
    v = _axes(amps, n)
    v[_sel_at(n, [(a, 1), (b, 1)])] *= -1.0


def apply_ccx(amps, n, c1, c2, t):
    v = _axes(amps, n)
    i0 = _sel_at(n, [(c1, 1), (c2, 1), (t, 0)])
    i1 = _sel_at(n, [(c1, 1), (c2, 1), (t, 1)])
    tmp = v[i0].copy()
    v[i0] = v[i1]
    v[i1] = tmp


def dominant_factor(amps, nrows, ncols):
    """Best rank-1 split of ``amps`` viewed as (nrows, ncols).

    Returns (v, residual): v is the normalized dominant row and residual
    the probability mass outside the rank-1 component row x v.
    """
    m = amps.reshape(nrows, ncols)
    weights = np.einsum("ij,ij->i", m, m.conj()).real
    v = m[int(np.argmax(weights))]
    v = v / np.linalg.norm(v)
    overlaps = m @ v.conj()
    residual = max(0.0, 1.0 - float((np.abs(overlaps) ** 2).sum()))
    return v.copy(), residual
