"""Hot F_p kernels: grid zero search and modular rank.

Both kernels have a numba version and a plain numpy version.  The numba path
is used when numba imports cleanly and ``STRASSMANN_ACCEL`` is not ``numpy``.
Entries are int64, so the kernels require p < 2**31; callers fall back to
pure Python above that.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

KERNEL_PRIME_LIMIT = 2**31


def backend() -> str:
    if os.environ.get("STRASSMANN_ACCEL", "numba").lower() == "numpy" or not _HAVE_NUMBA:
        return "numpy"
    return "numba"


def pack_polys(polys, nvars):
    """Flatten sparse polynomials {exps: coeff} into (offsets, exps, coeffs) arrays."""
    offsets = [0]
    exps = []
    coeffs = []
    for f in polys:
        for e, c in f.items():
            exps.append(e)
            coeffs.append(c)
        offsets.append(len(coeffs))
    exps_arr = np.array(exps, dtype=np.int64).reshape(-1, nvars)
    return np.array(offsets, dtype=np.int64), exps_arr, np.array(coeffs, dtype=np.int64)


# --- grid zero search -------------------------------------------------------


def _zeros_numpy(p, nvars, offsets, exps, coeffs, chunk=1 << 18):
    total = p**nvars
    found = []
    maxdeg = int(exps.max()) if exps.size else 0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        pts = np.empty((idx.size, nvars), dtype=np.int64)
        rest = idx.copy()
        for k in range(nvars - 1, -1, -1):
            pts[:, k] = rest % p
            rest //= p
        # powers[k][d] = x_k^d mod p
        pw = np.ones((nvars, maxdeg + 1, idx.size), dtype=np.int64)
        for k in range(nvars):
            for d in range(1, maxdeg + 1):
                pw[k, d] = (pw[k, d - 1] * pts[:, k]) % p
        alive = np.ones(idx.size, dtype=bool)
        for j in range(len(offsets) - 1):
            acc = np.zeros(idx.size, dtype=np.int64)
            for t in range(offsets[j], offsets[j + 1]):
                term = np.full(idx.size, coeffs[t] % p, dtype=np.int64)
                for k in range(nvars):
                    if exps[t, k]:
                        term = (term * pw[k, exps[t, k]]) % p
                acc = (acc + term) % p
            alive &= acc == 0
        found.append(pts[alive])
    if not found:
        return np.empty((0, nvars), dtype=np.int64)
    return np.concatenate(found)


if _HAVE_NUMBA:

    @njit(cache=True)
    def _zeros_numba(p, nvars, offsets, exps, coeffs):  # pragma: no cover - compiled
        total = 1
        for _ in range(nvars):
            total *= p
        hit = np.zeros(total, dtype=np.uint8)
        pt = np.zeros(nvars, dtype=np.int64)
        maxdeg = 0
        for t in range(exps.shape[0]):
            for k in range(nvars):
                if exps[t, k] > maxdeg:
                    maxdeg = exps[t, k]
        pw = np.ones((nvars, maxdeg + 1), dtype=np.int64)
        for idx in range(total):
            rest = idx
            for k in range(nvars - 1, -1, -1):
                pt[k] = rest % p
                rest //= p
            for k in range(nvars):
                for d in range(1, maxdeg + 1):
                    pw[k, d] = (pw[k, d - 1] * pt[k]) % p
            ok = True
            for j in range(offsets.shape[0] - 1):
                acc = 0
                for t in range(offsets[j], offsets[j + 1]):
                    term = coeffs[t] % p
                    for k in range(nvars):
                        e = exps[t, k]
                        if e:
                            term = (term * pw[k, e]) % p
                    acc = (acc + term) % p
                if acc != 0:
                    ok = False
                    break
            if ok:
                hit[idx] = 1
        return hit


def common_zeros(p, nvars, polys):
    """All points of F_p^nvars where every polynomial vanishes, in lexicographic order."""
    if p >= KERNEL_PRIME_LIMIT:
        raise OverflowError("kernel needs p < 2**31")
    offsets, exps, coeffs = pack_polys(polys, nvars)
    if backend() == "numba":
        idx = np.nonzero(_zeros_numba(p, nvars, offsets, exps, coeffs))[0].astype(np.int64)
        pts = np.empty((idx.size, nvars), dtype=np.int64)
        for k in range(nvars - 1, -1, -1):
            pts[:, k] = idx % p
            idx //= p
        return pts
    return _zeros_numpy(p, nvars, offsets, exps, coeffs)


# --- rank mod p ---------------------------------------------------------------


def _rank_numpy(mat, p):
    a = mat.copy() % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1:, c].copy()
        if below.any():
            a[r + 1:] = (a[r + 1:] - np.outer(below, a[r]) % p) % p
        r += 1
    return r


if _HAVE_NUMBA:

    @njit(cache=True)
    def _inv_mod(a, p):  # pragma: no cover - compiled
        # extended Euclid; a nonzero mod p
        t, newt = 0, 1
        r, newr = p, a % p
        while newr != 0:
            q = r // newr
            t, newt = newt, t - q * newt
            r, newr = newr, r - q * newr
        if t < 0:
            t += p
        return t

    @njit(cache=True)
    def _rank_numba(mat, p):  # pragma: no cover - compiled
        a = mat.copy()
        rows, cols = a.shape
        for i in range(rows):
            for j in range(cols):
                a[i, j] %= p
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            inv = _inv_mod(a[r, c], p)
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(r + 1, rows):
                fac = a[i, c]
                if fac != 0:
                    for j in range(c, cols):
                        a[i, j] = (a[i, j] - fac * a[r, j]) % p
            r += 1
        return r


def rank_mod_p(mat, p) -> int:
    """Rank of an integer matrix over F_p."""
    mat = np.asarray(mat, dtype=np.int64)
    if mat.size == 0:
        return 0
    if p >= KERNEL_PRIME_LIMIT:
        raise OverflowError("kernel needs p < 2**31")
    if backend() == "numba":
        return int(_rank_numba(mat, p))
    return _rank_numpy(mat, p)


def thread_count() -> int:
    """Worker cap from ``STRASSMANN_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("STRASSMANN_THREADS", "1")))
    except ValueError:
        return 1
