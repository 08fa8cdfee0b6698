"""Exact integer lattices, pairings, characteristic polynomials, spectral radii.

Everything here is computed in exact arbitrary-precision arithmetic; floating
point appears only in the final spectral-radius estimate.  The dichotomy
"spectral radius 1 vs. > 1" drives every certificate downstream, so it must
never be a rounding artifact:

  * characteristic polynomials come from an integer Faddeev-LeVerrier
    recursion with an exact divisibility check at every step,
  * unipotence is an exact integer nilpotence test, never ``|lambda - 1| < eps``,
  * the spectral radius is bracketed by the Cauchy bound of the exact
    characteristic polynomial and refined with validated multiprecision
    root finding on its squarefree part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import InputError, NumericError

#: Default accuracy target for spectral-radius refinement.
DEFAULT_TOL = 1e-9

_SYMMETRY_KINDS = ("symmetric", "euler_general")


def _as_int_rows(rows):
    out = []
    for row in rows:
        out.append(tuple(int(x) for x in row))
    return tuple(out)


@dataclass(frozen=True)
class SquareIntMatrix:
    """Immutable square matrix with (arbitrary-precision) integer entries."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = _as_int_rows(self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0:
            raise InputError("matrix must have positive dimension")
        if any(len(row) != n for row in rows):
            raise InputError("matrix must be square")

    @property
    def n(self) -> int:
        return len(self.entries)

    @staticmethod
    def identity(n: int) -> "SquareIntMatrix":
        return SquareIntMatrix(
            tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        )

    def __matmul__(self, other: "SquareIntMatrix") -> "SquareIntMatrix":
        if self.n != other.n:
            raise InputError(f"dimension mismatch: {self.n} vs {other.n}")
        cols = tuple(zip(*other.entries))
        return SquareIntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.entries
            )
        )

    def __add__(self, other: "SquareIntMatrix") -> "SquareIntMatrix":
        if self.n != other.n:
            raise InputError(f"dimension mismatch: {self.n} vs {other.n}")
        return SquareIntMatrix(
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other: "SquareIntMatrix") -> "SquareIntMatrix":
        return self + other.scaled(-1)

    def scaled(self, c: int) -> "SquareIntMatrix":
        return SquareIntMatrix(tuple(tuple(c * a for a in row) for row in self.entries))

    def power(self, k: int) -> "SquareIntMatrix":
        if k < 0:
            raise InputError("negative matrix power not supported")
        result = SquareIntMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return result

    def apply(self, v: tuple[int, ...]) -> tuple[int, ...]:
        if len(v) != self.n:
            raise InputError(f"dimension mismatch: {self.n} vs {len(v)}")
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.entries)

    def trace(self) -> int:
        return sum(self.entries[i][i] for i in range(self.n))

    def transpose(self) -> "SquareIntMatrix":
        return SquareIntMatrix(tuple(zip(*self.entries)))

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.entries for a in row)


@dataclass(frozen=True)
class LatticeVector:
    """Integer coordinate vector in a fixed basis of a lattice."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))

    def __len__(self):
        return len(self.coords)


def _coords(v) -> tuple[int, ...]:
    if isinstance(v, LatticeVector):
        return v.coords
    return tuple(int(x) for x in v)


@dataclass(frozen=True)
class BilinearLattice:
    """Finite-rank integer lattice with a symmetric or Euler-type pairing.

    ``euler_sign`` records how the stored pairing relates to the Euler
    pairing chi of the category being modelled: pairing = euler_sign * chi.
    The default -1 is the Mukai convention, under which spherical classes
    have self-pairing -2 and twist actions are reflections there.
    """

    gram: tuple[tuple[int, ...], ...]
    symmetry_kind: str = "euler_general"
    euler_sign: int = -1

    def __post_init__(self):
        rows = _as_int_rows(self.gram)
        object.__setattr__(self, "gram", rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise InputError("gram matrix must be square of positive rank")
        if self.symmetry_kind not in _SYMMETRY_KINDS:
            raise InputError(
                f"symmetry_kind must be one of {_SYMMETRY_KINDS}, got {self.symmetry_kind!r}"
            )
        if self.symmetry_kind == "symmetric":
            for i in range(n):
                for j in range(i + 1, n):
                    if rows[i][j] != rows[j][i]:
                        raise InputError(
                            f"symmetric lattice has asymmetric gram at ({i},{j})"
                        )
        if self.euler_sign not in (1, -1):
            raise InputError("euler_sign must be +1 or -1")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pairing(self, v, w) -> int:
        """Evaluate v^T . gram . w exactly."""
        vc, wc = _coords(v), _coords(w)
        if len(vc) != self.rank or len(wc) != self.rank:
            raise InputError(
                f"vector length mismatch: rank {self.rank}, got {len(vc)} and {len(wc)}"
            )
        return sum(
            vc[i] * self.gram[i][j] * wc[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )


def pairing_eval(lattice: BilinearLattice, v, w) -> int:
    """Pairing of two lattice vectors (module-level alias)."""
    return lattice.pairing(v, w)


# ---------------------------------------------------------------------------
# Integer polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients ascending; () is the zero polynomial."""

    coeffs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def is_zero(self) -> bool:
        return not self.coeffs


def poly_mul(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    if a.is_zero() or b.is_zero():
        return IntPolynomial()
    out = [0] * (a.degree + b.degree + 1)
    for i, ca in enumerate(a.coeffs):
        for j, cb in enumerate(b.coeffs):
            out[i + j] += ca * cb
    return IntPolynomial(tuple(out))


def _frac_divmod(a: list[Fraction], b: list[Fraction]):
    # Plain Euclidean division over Q, coefficients ascending.
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(b):
            break
        c = r[-1] / b[-1]
        d = len(r) - len(b)
        q[d] = c
        for i, bc in enumerate(b):
            r[i + d] -= c * bc
        r.pop()
    return q, r


def poly_divmod_exact(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Exact quotient a / b; raises if the division leaves a remainder."""
    if b.is_zero():
        raise InputError("division by the zero polynomial")
    q, r = _frac_divmod(
        [Fraction(c) for c in a.coeffs], [Fraction(c) for c in b.coeffs]
    )
    if any(r):
        raise InputError("polynomial division is not exact")
    if any(c.denominator != 1 for c in q):
        raise InputError("polynomial quotient is not integral")
    return IntPolynomial(tuple(int(c) for c in q))


def poly_divides(b: IntPolynomial, a: IntPolynomial) -> bool:
    """True iff b divides a exactly over Q."""
    if b.is_zero():
        return a.is_zero()
    _, r = _frac_divmod(
        [Fraction(c) for c in a.coeffs], [Fraction(c) for c in b.coeffs]
    )
    return not any(r)


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Primitive integer gcd with positive leading coefficient."""
    fa = [Fraction(c) for c in a.coeffs]
    fb = [Fraction(c) for c in b.coeffs]
    while any(fb):
        _, r = _frac_divmod(fa, fb)
        while r and r[-1] == 0:
            r.pop()
        fa, fb = fb, r
    if not any(fa):
        return IntPolynomial()
    from math import gcd, lcm

    denom = lcm(*(c.denominator for c in fa)) if fa else 1
    ints = [int(c * denom) for c in fa]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return IntPolynomial(tuple(ints))


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    """p divided by gcd(p, p'); same roots, all simple."""
    if p.degree < 1:
        return p
    g = poly_gcd(p, p.derivative())
    if g.degree < 1:
        return p
    return poly_divmod_exact(p, g)


def poly_eval_matrix(p: IntPolynomial, m: SquareIntMatrix) -> SquareIntMatrix:
    """Evaluate a polynomial at a matrix argument (Horner, exact)."""
    acc = SquareIntMatrix.identity(m.n).scaled(0)
    for c in reversed(p.coeffs):
        acc = acc @ m + SquareIntMatrix.identity(m.n).scaled(c)
    return acc


def companion_matrix(p: IntPolynomial) -> SquareIntMatrix:
    """Companion matrix of a monic integer polynomial."""
    if p.degree < 1 or p.coeffs[-1] != 1:
        raise InputError("companion matrix requires a monic polynomial of degree >= 1")
    n = p.degree
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = -p.coeffs[i]
    return SquareIntMatrix(tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# Characteristic polynomial, unipotence, spectral radius
# ---------------------------------------------------------------------------


def char_poly(m: SquareIntMatrix) -> IntPolynomial:
    """Exact characteristic polynomial det(lambda*I - M).

    Integer Faddeev-LeVerrier recursion; each division by the step index is
    checked for exactness, which certifies the arithmetic.
    """
    n = m.n
    ident = SquareIntMatrix.identity(n)
    coeffs_desc = [1]
    aux = ident
    for k in range(1, n + 1):
        prod = m @ aux
        t = prod.trace()
        if t % k != 0:
            raise NumericError(f"Faddeev-LeVerrier integrality failed at step {k}")
        ck = -t // k
        coeffs_desc.append(ck)
        aux = prod + ident.scaled(ck)
    return IntPolynomial(tuple(reversed(coeffs_desc)))


def is_unipotent(m: SquareIntMatrix) -> bool:
    """Exact test: (M - I)^n = 0 with n the dimension."""
    nil = m - SquareIntMatrix.identity(m.n)
    acc = nil
    for _ in range(m.n):
        if acc.is_zero():
            return True
        acc = acc @ nil
    return acc.is_zero()


def _cauchy_bound(p: IntPolynomial) -> float:
    lead = abs(p.coeffs[-1])
    return 1.0 + max(abs(c) for c in p.coeffs[:-1]) / lead if p.degree >= 1 else 0.0


def spectral_radius(m: SquareIntMatrix, tol: float = DEFAULT_TOL) -> float:
    """Maximum root modulus of char_poly(M), accurate to +/- tol.

    Roots are bracketed by the Cauchy bound and refined by multiprecision
    polynomial root finding on the squarefree part, escalating precision
    until the solver's own error bound is below tol.
    """
    if not tol > 0:
        raise InputError("tol must be positive")
    p = char_poly(m)
    coeffs = list(p.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if len(coeffs) <= 1:
        return 0.0  # nilpotent: all eigenvalues zero
    if is_unipotent(m):
        return 1.0
    q = squarefree_part(IntPolynomial(tuple(coeffs)))
    bound = _cauchy_bound(q)
    desc = list(reversed(q.coeffs))
    last_err = None
    for extraprec in (30, 80, 160, 320):
        try:
            roots, err = mpmath.polyroots(
                desc, maxsteps=200, extraprec=extraprec, error=True
            )
        except mpmath.mp.NoConvergence:
            continue
        last_err = err
        if err < tol / 2:
            rho = max(abs(r) for r in roots)
            if rho > bound + tol:
                raise NumericError(
                    f"root estimate {float(rho)} exceeds Cauchy bound {bound}"
                )
            return float(rho)
    raise NumericError(
        f"spectral radius refinement did not reach tol={tol} "
        f"(degree {q.degree}, last error {last_err})"
    )
