"""Exhaustive verification over every prime Hurwitz modulus up to a norm bound.

The pure-Python oracles in :mod:`hurwitz_residues.modulo` are exact but far too
slow for ~10^5 moduli and ~2*10^9 residue pairs, so this module runs the same
checks in one compiled int64 kernel.

Congruence is decided by a class fingerprint. For ``X`` in H let
``key(X)`` be the coordinates of ``conj(alpha) * X`` in the Z-basis
``(1+i+j+k)/2, i, j, k``, reduced mod ``p = N(alpha)``. Then
``X = Y (mod alpha*H)`` iff ``key(X) == key(Y)``. The keys span a
2-dimensional subspace of ``F_p^4``, so two well-chosen coordinates already
separate classes; products use ``key(XY) = Q(Y) key(X)`` where ``Q(Y)`` is
right multiplication by ``Y`` in basis coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .quaternion import HurwitzInt, is_prime_int

__all__ = [
    "CHECKS",
    "ArithmeticOverflowError",
    "SweepResult",
    "enumerate_prime_moduli",
    "compute_tables",
    "run_sweep",
]


class ArithmeticOverflowError(OverflowError):
    """Inputs are outside the range where the int64 kernel is exact."""


# check id -> (name, property)
CHECKS: tuple[tuple[str, str], ...] = (
    ("congruent_to_z", "residue_system"),
    ("distinct_classes", "residue_system"),
    ("distinct_values", "residue_system"),
    ("branch_soundness", "residue_system"),
    ("additive", "homomorphism"),
    ("multiplicative", "homomorphism"),
    ("symmetry", "symmetry"),
    ("mu1_at_0_is_0", "zero_anchor"),
    ("mu2_at_0_congruent_0", "zero_anchor"),
    ("norm_mu2_at_0", "zero_anchor"),
    ("matching_branch_at_n_is_0", "norm_anchor"),
    ("other_branch_at_n_congruent_0", "norm_anchor"),
    ("two_component_collapse", "two_component"),
    ("min_rule_dominance", "min_rule"),
)
_NCHECK = len(CHECKS)
_KERNEL_LIMIT = 1 << 20


def enumerate_prime_moduli(norm_bound: int) -> np.ndarray:
    """Doubled coordinates of all prime Hurwitz integers with norm <= bound.

    Brute force over the doubled box ``|d_i| <= 2*ceil(sqrt(bound))``; rows are
    ordered by norm, then lexicographically by doubled coordinates.
    """
    if norm_bound < 2:
        return np.zeros((0, 4), dtype=np.int64)
    r = 2 * math.isqrt(norm_bound - 1) + 2
    rng = np.arange(-r, r + 1, dtype=np.int64)
    primes = np.array([is_prime_int(n) for n in range(norm_bound + 1)], dtype=bool)
    g2, g3, g4 = np.meshgrid(rng, rng, rng, indexing="ij")
    g2, g3, g4 = g2.ravel(), g3.ravel(), g4.ravel()
    partial = g2 * g2 + g3 * g3 + g4 * g4
    chunks = []
    for d1 in rng:
        s = partial + d1 * d1
        ok = (s % 4 == 0) & (s <= 4 * norm_bound)
        ok &= ((g2 - d1) % 2 == 0) & ((g3 - d1) % 2 == 0) & ((g4 - d1) % 2 == 0)
        idx = np.nonzero(ok)[0]
        if idx.size == 0:
            continue
        n = s[idx] // 4
        idx = idx[primes[n]]
        block = np.empty((idx.size, 4), dtype=np.int64)
        block[:, 0] = d1
        block[:, 1] = g2[idx]
        block[:, 2] = g3[idx]
        block[:, 3] = g4[idx]
        chunks.append(block)
    out = np.concatenate(chunks) if chunks else np.zeros((0, 4), dtype=np.int64)
    norms = (out * out).sum(axis=1) // 4
    order = np.lexsort((out[:, 3], out[:, 2], out[:, 1], out[:, 0], norms))
    return out[order]


# -- kernel helpers -----------------------------------------------------------------


@njit(cache=True)
def _ham(a1, a2, a3, a4, b1, b2, b3, b4):
    return (
        a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4,
        a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3,
        a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
        a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
    )


@njit(cache=True)
def _round_doubled(num, den, half):
    # mirrors rounding.round_div_doubled
    if not half:
        if num <= 0:
            return 2 * ((2 * num + den) // (2 * den))
        return 2 * (-((den - 2 * num) // (2 * den)))
    shifted = 2 * num - den
    if num <= 0:
        r = (2 * shifted + 2 * den) // (4 * den)
    else:
        r = -((2 * den - 2 * shifted) // (4 * den))
    return 2 * r + 1


@njit(cache=True)
def _branch(a, n, z, half, out):
    """Doubled coordinates of z - alpha * round(conj(alpha) z / n)."""
    den = 2 * n
    r1 = _round_doubled(a[0] * z, den, half)
    r2 = _round_doubled(-a[1] * z, den, half)
    r3 = _round_doubled(-a[2] * z, den, half)
    r4 = _round_doubled(-a[3] * z, den, half)
    q = _ham(a[0], a[1], a[2], a[3], r1, r2, r3, r4)
    out[0] = 2 * z - q[0] // 2
    out[1] = -(q[1] // 2)
    out[2] = -(q[2] // 2)
    out[3] = -(q[3] // 2)


@njit(cache=True)
def _key(a, x0, x1, x2, x3, p, out):
    """Basis coordinates of conj(alpha)*X mod p (X in doubled coordinates)."""
    q = _ham(a[0], -a[1], -a[2], -a[3], x0, x1, x2, x3)
    e1, e2, e3, e4 = q[0] // 2, q[1] // 2, q[2] // 2, q[3] // 2
    out[0] = e1 % p
    out[1] = ((e2 - e1) // 2) % p
    out[2] = ((e3 - e1) // 2) % p
    out[3] = ((e4 - e1) // 2) % p


@njit(cache=True)
def _right_mul_matrix(y, p, out):
    """out[r, c] = r-th basis coordinate of (basis_c * Y), mod p."""
    # basis in doubled coordinates: w=(1,1,1,1), i=(0,2,0,0), j=(0,0,2,0), k=(0,0,0,2)
    basis = ((1, 1, 1, 1), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2))
    for c in range(4):
        b = basis[c]
        q = _ham(b[0], b[1], b[2], b[3], y[0], y[1], y[2], y[3])
        e1, e2, e3, e4 = q[0] // 2, q[1] // 2, q[2] // 2, q[3] // 2
        out[0, c] = e1 % p
        out[1, c] = ((e2 - e1) // 2) % p
        out[2, c] = ((e3 - e1) // 2) % p
        out[3, c] = ((e4 - e1) // 2) % p


@njit(cache=True)
def _projection_rows(a, p):
    """Two key coordinates that are independent on the key subspace."""
    basis = ((1, 1, 1, 1), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2))
    km = np.zeros((4, 4), dtype=np.int64)
    tmp = np.zeros(4, dtype=np.int64)
    for c in range(4):
        b = basis[c]
        _key(a, b[0], b[1], b[2], b[3], p, tmp)
        for r in range(4):
            km[r, c] = tmp[r]
    for r1 in range(4):
        for r2 in range(r1 + 1, 4):
            for c1 in range(4):
                for c2 in range(c1 + 1, 4):
                    det = km[r1, c1] * km[r2, c2] - km[r1, c2] * km[r2, c1]
                    if det % p != 0:
                        return r1, r2
    return -1, -1


@njit(cache=True)
def _tables_kernel(moduli, n_arr, maxn, res, b1, b2, branch):
    for m in range(moduli.shape[0]):
        a = moduli[m]
        n = n_arr[m]
        for z in range(n):
            _branch(a, n, z, False, b1[m, z])
            _branch(a, n, z, True, b2[m, z])
            x, y = b1[m, z], b2[m, z]
            n1 = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]) // 4
            n2 = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]) // 4
            if n1 < n2 or (n1 == n2 and z % 2 == 0):
                branch[m, z] = 1
                res[m, z, :] = x
            else:
                branch[m, z] = 2
                res[m, z, :] = y


@njit(cache=True)
def _sweep_kernel(moduli, n_arr, maxn, checked, failed, witness, override, use_override):
    key = np.zeros(4, dtype=np.int64)
    tmp = np.zeros(4, dtype=np.int64)
    zk = np.zeros(4, dtype=np.int64)
    res = np.zeros((maxn + 1, 4), dtype=np.int64)
    b1 = np.zeros((maxn + 1, 4), dtype=np.int64)
    b2 = np.zeros((maxn + 1, 4), dtype=np.int64)
    full = np.zeros((maxn, 4), dtype=np.int64)   # full keys of residues
    cls = np.zeros((maxn, 2), dtype=np.int64)    # projected keys of residues
    zcls = np.zeros((maxn, 2), dtype=np.int64)   # projected keys of z
    g = np.zeros((maxn, 2, 4), dtype=np.int64)   # projected right-mult matrices
    qm = np.zeros((4, 4), dtype=np.int64)
    occupied = np.zeros(maxn * maxn, dtype=np.uint8)
    codes = np.zeros(maxn, dtype=np.int64)

    for m in range(moduli.shape[0]):
        a = moduli[m]
        n = n_arr[m]
        p = n
        lip = a[0] % 2 == 0
        nz = 0
        for t in range(4):
            if a[t] != 0:
                nz += 1
        two_comp = lip and nz == 2
        r1, r2 = _projection_rows(a, p)

        for z in range(n + 1):
            _branch(a, n, z, False, b1[z])
            _branch(a, n, z, True, b2[z])
            x, y = b1[z], b2[z]
            n1 = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]) // 4
            n2 = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]) // 4
            if n1 < n2 or (n1 == n2 and z % 2 == 0):
                res[z, :] = x
                nc = n1
            else:
                res[z, :] = y
                nc = n2
            if z == n:
                break
            if use_override:
                res[z, :] = override[m, z]
                nc = (res[z, 0] ** 2 + res[z, 1] ** 2 + res[z, 2] ** 2 + res[z, 3] ** 2) // 4
            # min-rule dominance
            checked[m, 13] += 1
            if nc != min(n1, n2):
                failed[m, 13] += 1
                if witness[m, 13, 0] < 0:
                    witness[m, 13, 0] = z
            # congruence classes
            _key(a, res[z, 0], res[z, 1], res[z, 2], res[z, 3], p, key)
            _key(a, 2 * z, 0, 0, 0, p, zk)
            for t in range(4):
                full[z, t] = key[t]
            cls[z, 0] = key[r1]
            cls[z, 1] = key[r2]
            zcls[z, 0] = zk[r1]
            zcls[z, 1] = zk[r2]
            checked[m, 0] += 1
            if cls[z, 0] != zcls[z, 0] or cls[z, 1] != zcls[z, 1]:
                failed[m, 0] += 1
                if witness[m, 0, 0] < 0:
                    witness[m, 0, 0] = z
            for bb in range(2):
                src = b1[z] if bb == 0 else b2[z]
                _key(a, src[0], src[1], src[2], src[3], p, tmp)
                checked[m, 3] += 1
                if tmp[r1] != zk[r1] or tmp[r2] != zk[r2]:
                    failed[m, 3] += 1
                    if witness[m, 3, 0] < 0:
                        witness[m, 3, 0] = z
                        witness[m, 3, 1] = bb + 1
            _right_mul_matrix(res[z], p, qm)
            for t in range(4):
                g[z, 0, t] = qm[r1, t]
                g[z, 1, t] = qm[r2, t]
            # two-component collapse
            if two_comp:
                checked[m, 12] += 1
                if (res[z, 0] != x[0] or res[z, 1] != x[1]
                        or res[z, 2] != x[2] or res[z, 3] != x[3]):
                    failed[m, 12] += 1
                    if witness[m, 12, 0] < 0:
                        witness[m, 12, 0] = z

        # pairwise non-congruence: projected keys are injective on classes
        for z in range(n):
            occupied[cls[z, 0] * p + cls[z, 1]] = 0
        for z in range(n):
            c = cls[z, 0] * p + cls[z, 1]
            checked[m, 1] += 1
            if occupied[c]:
                failed[m, 1] += 1
                if witness[m, 1, 0] < 0:
                    witness[m, 1, 0] = z
            occupied[c] = 1
        # pairwise distinct values
        span = 4 * n + 1
        for z in range(n):
            codes[z] = (((res[z, 0] + 2 * n) * span + res[z, 1] + 2 * n) * span
                        + res[z, 2] + 2 * n) * span + res[z, 3] + 2 * n
        srt = np.sort(codes[:n])
        for z in range(1, n):
            checked[m, 2] += 1
            if srt[z] == srt[z - 1]:
                failed[m, 2] += 1
                if witness[m, 2, 0] < 0:
                    witness[m, 2, 0] = z
        # all pairs: addition and multiplication
        for z1 in range(n):
            c10 = cls[z1, 0]
            c11 = cls[z1, 1]
            f0, f1, f2, f3 = full[z1, 0], full[z1, 1], full[z1, 2], full[z1, 3]
            for z2 in range(n):
                s = z1 + z2
                if s >= n:
                    s -= n
                t0 = c10 + cls[z2, 0] - cls[s, 0]
                t1 = c11 + cls[z2, 1] - cls[s, 1]
                if (t0 != 0 and t0 != p) or (t1 != 0 and t1 != p):
                    failed[m, 4] += 1
                    if witness[m, 4, 0] < 0:
                        witness[m, 4, 0] = z1
                        witness[m, 4, 1] = z2
                pr = (z1 * z2) % n
                u0 = (g[z2, 0, 0] * f0 + g[z2, 0, 1] * f1 + g[z2, 0, 2] * f2
                      + g[z2, 0, 3] * f3) % p
                u1 = (g[z2, 1, 0] * f0 + g[z2, 1, 1] * f1 + g[z2, 1, 2] * f2
                      + g[z2, 1, 3] * f3) % p
                if u0 != cls[pr, 0] or u1 != cls[pr, 1]:
                    failed[m, 5] += 1
                    if witness[m, 5, 0] < 0:
                        witness[m, 5, 0] = z1
                        witness[m, 5, 1] = z2
        checked[m, 4] += n * n
        checked[m, 5] += n * n
        # symmetry
        for z in range(1, n):
            checked[m, 6] += 1
            t0 = cls[z, 0] + cls[n - z, 0]
            t1 = cls[z, 1] + cls[n - z, 1]
            if (t0 != 0 and t0 != p) or (t1 != 0 and t1 != p):
                failed[m, 6] += 1
                if witness[m, 6, 0] < 0:
                    witness[m, 6, 0] = z
        # anchors at 0
        checked[m, 7] += 1
        if b1[0, 0] != 0 or b1[0, 1] != 0 or b1[0, 2] != 0 or b1[0, 3] != 0:
            failed[m, 7] += 1
            witness[m, 7, 0] = 0
        checked[m, 8] += 1
        _key(a, b2[0, 0], b2[0, 1], b2[0, 2], b2[0, 3], p, tmp)
        if tmp[r1] != 0 or tmp[r2] != 0:
            failed[m, 8] += 1
            witness[m, 8, 0] = 0
        checked[m, 9] += 1
        nm = (b2[0, 0] ** 2 + b2[0, 1] ** 2 + b2[0, 2] ** 2 + b2[0, 3] ** 2) // 4
        if nm != n:
            failed[m, 9] += 1
            witness[m, 9, 0] = 0
        # anchors at z = n
        ex = b1[n] if lip else b2[n]
        ot = b2[n] if lip else b1[n]
        checked[m, 10] += 1
        if ex[0] != 0 or ex[1] != 0 or ex[2] != 0 or ex[3] != 0:
            failed[m, 10] += 1
            witness[m, 10, 0] = n
        checked[m, 11] += 1
        _key(a, ot[0], ot[1], ot[2], ot[3], p, tmp)
        if tmp[r1] != 0 or tmp[r2] != 0:
            failed[m, 11] += 1
            witness[m, 11, 0] = n


def _as_moduli(moduli) -> np.ndarray:
    if isinstance(moduli, np.ndarray):
        arr = np.ascontiguousarray(moduli, dtype=np.int64)
    else:
        arr = np.array(
            [m.doubled if isinstance(m, HurwitzInt) else tuple(m) for m in moduli],
            dtype=np.int64,
        ).reshape(-1, 4)
    if arr.size and np.abs(arr).max() >= _KERNEL_LIMIT:
        raise ArithmeticOverflowError(
            f"doubled coordinates beyond {_KERNEL_LIMIT} would overflow the int64 kernel"
        )
    for row in arr:
        HurwitzInt(*(int(v) for v in row))  # parity check
    return arr


def _norms(arr: np.ndarray) -> np.ndarray:
    n = (arr * arr).sum(axis=1)
    if np.any(n % 4):
        raise ValueError("rows are not Hurwitz integers")
    n //= 4
    for v in np.unique(n):
        if not is_prime_int(int(v)):
            raise ValueError(f"norm {v} is not prime")
    return n


def compute_tables(moduli) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Batch residue tables: (residues, mu1, mu2, branch) with shape (M, maxn, ...)."""
    arr = _as_moduli(moduli)
    n = _norms(arr)
    maxn = int(n.max()) if n.size else 1
    res = np.zeros((arr.shape[0], maxn, 4), dtype=np.int64)
    b1 = np.zeros_like(res)
    b2 = np.zeros_like(res)
    branch = np.zeros((arr.shape[0], maxn), dtype=np.int8)
    _tables_kernel(arr, n, maxn, res, b1, b2, branch)
    return res, b1, b2, branch


@dataclass
class SweepResult:
    moduli: np.ndarray
    norms: np.ndarray
    checked: np.ndarray
    failed: np.ndarray
    witness: np.ndarray
    norm_bound: int | None = None

    def totals(self) -> dict[str, tuple[int, int]]:
        return {
            name: (int(self.checked[:, i].sum()), int(self.failed[:, i].sum()))
            for i, (name, _) in enumerate(CHECKS)
        }

    def property_status(self) -> dict[str, tuple[int, int]]:
        out: dict[str, list[int]] = {}
        for i, (_, prop) in enumerate(CHECKS):
            c, f = out.setdefault(prop, [0, 0])
            out[prop] = [c + int(self.checked[:, i].sum()), f + int(self.failed[:, i].sum())]
        return {k: (v[0], v[1]) for k, v in out.items()}

    def witnesses(self, check: str, limit: int = 20) -> list[dict]:
        i = [c for c, _ in CHECKS].index(check)
        rows = np.nonzero(self.failed[:, i])[0][:limit]
        return [
            {
                "alpha": str(HurwitzInt(*(int(v) for v in self.moduli[r]))),
                "norm": int(self.norms[r]),
                "failures": int(self.failed[r, i]),
                "first": [int(v) for v in self.witness[r, i] if v >= 0],
            }
            for r in rows
        ]

    @property
    def passed(self) -> bool:
        return not self.failed.any()


def run_sweep(norm_bound: int | None = None, moduli=None, residues=None) -> SweepResult:
    """Run every check on all prime moduli with norm <= bound (or the given list).

    ``residues`` (shape ``(M, maxn, 4)``, doubled coordinates) replaces the
    computed tables, so deliberately broken tables can be fed to the checks.
    """
    if moduli is None:
        if norm_bound is None:
            raise ValueError("give a norm bound or explicit moduli")
        arr = enumerate_prime_moduli(norm_bound)
    else:
        arr = _as_moduli(moduli)
    n = _norms(arr) if arr.size else np.zeros(0, dtype=np.int64)
    maxn = int(n.max()) if n.size else 1
    checked = np.zeros((arr.shape[0], _NCHECK), dtype=np.int64)
    failed = np.zeros_like(checked)
    witness = np.full((arr.shape[0], _NCHECK, 2), -1, dtype=np.int64)
    if residues is None:
        override = np.zeros((1, 1, 4), dtype=np.int64)
    else:
        override = np.ascontiguousarray(residues, dtype=np.int64)
        if override.shape[0] != arr.shape[0] or override.shape[1] < maxn:
            raise ValueError("residues must have shape (len(moduli), max norm, 4)")
    if arr.shape[0]:
        _sweep_kernel(arr, n.astype(np.int64), maxn, checked, failed, witness,
                      override, residues is not None)
    return SweepResult(arr, n, checked, failed, witness, norm_bound)
