"""Numeric oracle: the approximate representation on a truncated Hilbert space.

Operators are scipy sparse matrices on the vectors v^{j,up}_{m,l},
v^{j,down}_{m,l} with 2j <= N.  Residues come from the per-eigenvalue
diagonal sums T_d, which for elements of X behave like c2 d^2 + c1 d + c0
up to geometrically small terms; c2, c1, c0 are the residues at |D|^-3,
|D|^-2 and |D|^-1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .oneform import OneForm, ncint_J
from .pbw import AlgebraElement
from .qfield import QScalar
from .xalg import LETTERS, SHIFT, XElement, lift

__all__ = [
    "BasisVector",
    "ShellTrace",
    "Fit",
    "ConvergenceError",
    "Oracle",
    "apply",
    "apply_J",
    "residues_fit",
    "oracle_integral",
    "oracle_J",
    "MAX_Q",
]

MAX_Q = 0.9


class ConvergenceError(RuntimeError):
    """Successive fit windows disagree beyond the requested tolerance."""


@dataclass(frozen=True)
class BasisVector:
    two_j: int
    m: int
    l: int
    spin: str = "up"

    def __post_init__(self):
        if not self.is_valid():
            raise ValueError(f"invalid basis vector {self}")

    def is_valid(self) -> bool:
        return _valid(self.two_j, self.m, self.l, self.spin)

    @property
    def d(self) -> Fraction:
        """Eigenvalue of |D| on this vector."""
        return Fraction(2 * self.two_j + (3 if self.spin == "up" else 1), 2)


def _valid(two_j: int, m: int, l: int, spin: str) -> bool:
    if two_j < 0 or not 0 <= m <= two_j or l < 0:
        return False
    if spin == "up":
        return l <= two_j + 1
    if spin == "down":
        return two_j >= 1 and l <= two_j - 1
    raise ValueError(f"spin must be 'up' or 'down', got {spin!r}")


@dataclass(frozen=True)
class ShellTrace:
    d: Fraction
    value: complex


@dataclass(frozen=True)
class Fit:
    c2: float
    c1: float
    c0: float
    uncertainty: tuple[float, float, float]

    def residue(self, p: int) -> float:
        return {3: self.c2, 2: self.c1, 1: self.c0}[p]


def _check_q(q0) -> float:
    q = float(q0)
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if q > MAX_Q:
        raise ValueError(
            f"q = {q} > {MAX_Q}: the O(q^d) tail decays too slowly for a feasible truncation; "
            "use the symbolic engine instead"
        )
    return q


def _qn(q: float, n):
    """q_n = sqrt(1 - q^(2n)), vectorized."""
    return np.sqrt(np.maximum(0.0, 1.0 - q ** (2.0 * np.asarray(n, dtype=float))))


def _letter_coeff(x: int, q: float, m, l):
    m = np.asarray(m, dtype=float)
    l = np.asarray(l, dtype=float)
    if x == 0:
        return _qn(q, m + 1) * _qn(q, l + 1)
    if x in (1, 5):
        return q ** (m + l + 1)
    if x == 2:
        return q**l * _qn(q, m + 1)
    if x == 3:
        return -(q**m) * _qn(q, l)
    if x == 4:
        return _qn(q, m) * _qn(q, l)
    if x == 6:
        return q**l * _qn(q, m)
    if x == 7:
        return -(q**m) * _qn(q, l + 1)
    raise ValueError(f"unknown letter code {x}")


def apply(T: XElement, v: BasisVector, q0) -> dict[BasisVector, complex]:
    """T v for T in X (with optional F part), out-of-range targets dropped."""
    q = float(q0)
    out: dict[BasisVector, complex] = {}
    sign_f = 1 if v.spin == "up" else -1
    for part, fac in ((T.plain, 1), (T.f_part, sign_f)):
        for w, c in part.items():
            state = (v.two_j, v.m, v.l)
            amp = complex(c(q)) * fac
            for x in reversed(w):
                amp *= float(_letter_coeff(x, q, state[1], state[2]))
                s = SHIFT[x]
                state = (state[0] + s[0], state[1] + s[1], state[2] + s[2])
                if amp == 0 or not _valid(*state, v.spin):
                    amp = 0
                    break
            if amp:
                key = BasisVector(*state, v.spin)
                out[key] = out.get(key, 0) + amp
    return {k: c for k, c in out.items() if c != 0}


def _j_target(v: BasisVector) -> tuple[complex, BasisVector]:
    s = v.m + v.l
    if v.spin == "up":
        return 1j ** ((2 * s - 1) % 4), BasisVector(v.two_j, v.two_j - v.m, v.two_j + 1 - v.l, "up")
    return 1j ** ((-2 * s + 1) % 4), BasisVector(v.two_j, v.two_j - v.m, v.two_j - 1 - v.l, "down")


def apply_J(v: BasisVector, coeff: complex = 1) -> tuple[complex, BasisVector]:
    """J (coeff v) = conj(coeff) phase v'; J is antilinear."""
    phase, w = _j_target(v)
    return complex(coeff).conjugate() * phase, w


class Oracle:
    """Sparse operators on all basis vectors with 2j <= ``two_j_max``."""

    def __init__(self, q0, two_j_max: int):
        self.q = _check_q(q0)
        self.N = int(two_j_max)
        n = np.arange(self.N + 1)
        up_sizes = (n + 1) * (n + 2)
        dn_sizes = (n + 1) * n
        sizes = np.empty(2 * (self.N + 1), dtype=np.int64)
        sizes[0::2], sizes[1::2] = up_sizes, dn_sizes
        offsets = np.concatenate(([0], np.cumsum(sizes)))
        self.off_up = offsets[0:-1:2]
        self.off_dn = offsets[1::2]
        self.dim = int(offsets[-1])
        # flat basis description
        tj, mm, ll, up = [], [], [], []
        for k in range(self.N + 1):
            for spin, width in ((1, k + 2), (0, k)):
                if width <= 0:
                    continue
                m, l = np.meshgrid(np.arange(k + 1), np.arange(width), indexing="ij")
                tj.append(np.full(m.size, k))
                mm.append(m.ravel())
                ll.append(l.ravel())
                up.append(np.full(m.size, spin, dtype=bool))
        self.two_j = np.concatenate(tj)
        self.m = np.concatenate(mm)
        self.l = np.concatenate(ll)
        self.up = np.concatenate(up)
        self.absD = np.where(self.up, self.two_j + 1.5, self.two_j + 0.5)

    # -- indexing ----------------------------------------------------------

    def index(self, two_j, m, l, up):
        """Flat index, or -1 where (two_j, m, l, spin) is outside the truncated basis."""
        two_j, m, l, up = map(np.asarray, (two_j, m, l, up))
        width = np.where(up, two_j + 2, two_j)
        ok = (two_j >= 0) & (two_j <= self.N) & (m >= 0) & (m <= two_j) & (l >= 0) & (l < width)
        tj = np.clip(two_j, 0, self.N)
        base = np.where(up, self.off_up[tj], self.off_dn[tj])
        return np.where(ok, base + m * width + l, -1)

    # -- elementary operators ------------------------------------------------

    def letter(self, x: int) -> sp.csr_matrix:
        return self._letters[x]

    @cached_property
    def _letters(self) -> list[sp.csr_matrix]:
        out = []
        for x in range(len(LETTERS)):
            s = SHIFT[x]
            coeff = _letter_coeff(x, self.q, self.m, self.l)
            tgt = self.index(self.two_j + s[0], self.m + s[1], self.l + s[2], self.up)
            keep = (tgt >= 0) & (coeff != 0)
            src = np.nonzero(keep)[0]
            out.append(sp.csr_matrix((coeff[keep], (tgt[keep], src)), shape=(self.dim, self.dim)))
        return out

    @cached_property
    def F(self) -> sp.dia_matrix:
        return sp.diags(np.where(self.up, 1.0, -1.0))

    @cached_property
    def abs_D(self) -> sp.dia_matrix:
        return sp.diags(self.absD)

    @cached_property
    def _J_perm(self) -> sp.csr_matrix:
        s = self.m + self.l
        phase = np.where(self.up, 1j ** ((2 * s - 1) % 4), 1j ** ((-2 * s + 1) % 4))
        tgt = self.index(self.two_j, self.two_j - self.m, np.where(self.up, self.two_j + 1, self.two_j - 1) - self.l, self.up)
        assert (tgt >= 0).all()
        return sp.csr_matrix((phase, (tgt, np.arange(self.dim))), shape=(self.dim, self.dim))

    def J_conj(self, S) -> sp.csr_matrix:
        """J S J^-1 = -U conj(S) conj(U) with J = U o conj."""
        U = self._J_perm
        return (-(U @ S.conj() @ U.conj())).tocsr()

    def apply_J_vector(self, x: np.ndarray) -> np.ndarray:
        return self._J_perm @ np.conj(x)

    def delta(self, S) -> sp.csr_matrix:
        return (self.abs_D @ S - S @ self.abs_D).tocsr()

    # -- lifting -----------------------------------------------------------

    def word(self, w: Sequence[int]):
        M = sp.identity(self.dim, format="csr")
        for x in w:
            M = M @ self._letters[x]
        return M

    def x_matrix(self, T: XElement) -> sp.csr_matrix:
        out = sp.csr_matrix((self.dim, self.dim))
        for part, extra in ((T.plain, None), (T.f_part, self.F)):
            for w, c in part.items():
                M = self.word(w) * c(self.q)
                out = out + (M if extra is None else extra @ M)
        return out.tocsr()

    @cached_property
    def _gens(self) -> dict[str, sp.csr_matrix]:
        L = self._letters
        return {"a": L[0] + L[1], "b": L[2] + L[3], "a*": L[4] + L[5], "b*": L[6] + L[7]}

    def monomial(self, alpha: int, beta: int, gamma: int) -> sp.csr_matrix:
        g = self._gens
        M = sp.identity(self.dim, format="csr")
        for name, k in (("a" if alpha > 0 else "a*", abs(alpha)), ("b", beta), ("b*", gamma)):
            for _ in range(k):
                M = M @ g[name]
        return M

    def alg_matrix(self, x: AlgebraElement) -> sp.csr_matrix:
        out = sp.csr_matrix((self.dim, self.dim))
        for (al, be, ga), c in x.terms.items():
            out = out + self.monomial(al, be, ga) * c(self.q)
        return out.tocsr()

    def form_matrix(self, A: OneForm, variant: str = "delta") -> sp.csr_matrix:
        """Sum c x delta(y) (``variant='d'`` multiplies by F)."""
        out = sp.csr_matrix((self.dim, self.dim))
        for (al, be), c in A.coeffs.items():
            out = out + (self.monomial(*al) @ self.delta(self.monomial(*be))) * c(self.q)
        if variant == "d":
            out = self.F @ out
        elif variant != "delta":
            raise ValueError(f"variant must be 'delta' or 'd', got {variant!r}")
        return out.tocsr()

    # -- traces ------------------------------------------------------------

    def shell_traces(self, T, max_two_j: int | None = None) -> list[ShellTrace]:
        """Diagonal sums of T per eigenvalue d of |D|, over complete shells only.

        A shell d contains the up vectors with 2j = d - 3/2 and the down
        vectors with 2j = d - 1/2; it is kept when both lie within ``max_two_j``.
        """
        top = self.N if max_two_j is None else min(max_two_j, self.N)
        diag = np.asarray(T.diagonal())
        key = np.where(self.up, self.two_j + 1, self.two_j)  # d - 1/2
        out = []
        for k in range(0, top + 1):
            sel = key == k
            vals = diag[sel]
            total = complex(math.fsum(vals.real), math.fsum(vals.imag))
            out.append(ShellTrace(Fraction(2 * k + 1, 2), total))
        return out


def _solve3(ds: Sequence[Fraction], ts: Sequence[complex]) -> tuple[complex, complex, complex]:
    """Exact quadratic through three points, in Fractions for the real and imaginary parts."""
    res = []
    for part in (lambda z: z.real, lambda z: z.imag):
        (x0, x1, x2), (y0, y1, y2) = ds, [Fraction(part(t)) for t in ts]
        d01, d12 = (y1 - y0) / (x1 - x0), (y2 - y1) / (x2 - x1)
        c2 = (d12 - d01) / (x2 - x0)
        c1 = d01 - c2 * (x0 + x1)
        c0 = y0 - c2 * x0 * x0 - c1 * x0
        res.append((c2, c1, c0))
    return tuple(complex(float(r), float(i)) for r, i in zip(*res))


def residues_fit(traces: Sequence[ShellTrace], tol: float | None = None, real: bool = True) -> Fit:
    """(c2, c1, c0) from the top three shells; uncertainty is the change from the window below.

    With ``tol`` set, raises :class:`ConvergenceError` if any coefficient moved by more than 10*tol.
    """
    if len(traces) < 4:
        raise ValueError("need at least four shells")
    top = _solve3([t.d for t in traces[-3:]], [t.value for t in traces[-3:]])
    prev = _solve3([t.d for t in traces[-4:-1]], [t.value for t in traces[-4:-1]])
    unc = tuple(abs(a - b) for a, b in zip(top, prev))
    if tol is not None and max(unc) > 10 * tol:
        raise ConvergenceError(f"fit windows disagree by {max(unc):.3g} (tolerance {tol:g})")
    if real:
        if max(abs(c.imag) for c in top) > 1e-10:
            raise ValueError(f"expected real residues, got {top}")
        top = tuple(c.real for c in top)
    return Fit(*top, uncertainty=unc)


def _margin(*forms: OneForm) -> int:
    return sum(max((abs(al[0]) + al[1] + al[2] + abs(be[0]) + be[1] + be[2] for (al, be) in A.coeffs), default=0) for A in forms)


def oracle_integral(A: OneForm, n: int, p: int, q0=0.5, max_two_j: int = 70, variant: str = "delta") -> Fit:
    """Numeric ncint A^n |D|^-p; read the residue with ``fit.residue(p)``."""
    orc = Oracle(q0, max_two_j + n * _margin(A) + 1)
    M = orc.form_matrix(A, variant)
    T = M
    for _ in range(n - 1):
        T = T @ M
    return residues_fit(orc.shell_traces(T, max_two_j))


def oracle_J(A: OneForm, B: OneForm, kind: str, q0=0.5, max_two_j: int = 70) -> float:
    """Numeric left-hand side of the J-reduction: A J B J^-1 (|D|^-3, |D|^-2), A^2 J B J^-1 |D|^-3,
    or delta(A) J A J^-1 |D|^-3 for kind iv."""
    orc = Oracle(q0, max_two_j + 2 * _margin(A) + _margin(B) + 2)
    MA = orc.form_matrix(A)
    if kind == "iv":
        T = orc.delta(MA) @ orc.J_conj(MA)
        return residues_fit(orc.shell_traces(T, max_two_j), real=False).c2.real
    JB = orc.J_conj(orc.form_matrix(B))
    if kind == "i":
        return residues_fit(orc.shell_traces(MA @ JB, max_two_j), real=False).c2.real
    if kind == "ii":
        return residues_fit(orc.shell_traces(MA @ JB, max_two_j), real=False).c1.real
    if kind == "iii":
        return residues_fit(orc.shell_traces(MA @ MA @ JB, max_two_j), real=False).c2.real
    raise ValueError(f"kind must be i, ii, iii or iv, got {kind!r}")


def symbolic_J(A: OneForm, B: OneForm, kind: str, q0=0.5) -> float:
    return ncint_J(A, B, kind)(float(q0))
