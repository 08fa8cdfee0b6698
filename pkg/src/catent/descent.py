"""Descent of entropy and spectral radius through a cyclic covering.

Models the quotient of a hyperkaehler-type cover by a finite cyclic group of
deck transformations.  When the autoequivalence word commutes with the deck
action, the quotient's numerical lattice embeds as the deck-fixed sublattice,
the word restricts to it, and

  * the quotient inherits the cover's certified entropy lower bound, and
  * the quotient log spectral radius is squeezed to exactly zero whenever
    the cover action is unipotent (restriction of unipotent is unipotent).

All sublattice computation is exact: the fixed sublattice is the integer
kernel of (deck - I), computed by unimodular row reduction, and the
restricted action is solved over exact rationals and cleared to integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError, InputError
from .lattice import (
    DEFAULT_TOL,
    BilinearLattice,
    SquareIntMatrix,
    is_unipotent,
    spectral_radius,
)
from .words import ActionWord, TensorClass, induced_matrix


def integer_kernel_basis(m: SquareIntMatrix) -> tuple[tuple[int, ...], ...]:
    """Basis of the saturated integer kernel {v : M v = 0}.

    Row-reduces [M^T | I] with unimodular integer operations; rows whose left
    block vanishes carry a basis of the kernel lattice in their right block.
    """
    n = m.n
    mt = m.transpose().entries
    rows = [list(mt[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    pivot_row = 0
    for col in range(n):
        while True:
            nonzero = [i for i in range(pivot_row, n) if rows[i][col] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: abs(rows[i][col]))
            rows[pivot_row], rows[best] = rows[best], rows[pivot_row]
            clean = True
            for i in range(pivot_row + 1, n):
                if rows[i][col]:
                    q = rows[i][col] // rows[pivot_row][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[pivot_row])]
                    if rows[i][col]:
                        clean = False
            if clean:
                pivot_row += 1
                break
    return tuple(tuple(row[n:]) for row in rows[pivot_row:])


def _restrict_to_basis(
    action: SquareIntMatrix, basis: tuple[tuple[int, ...], ...]
) -> SquareIntMatrix:
    """Matrix of the action on the sublattice spanned by ``basis`` vectors."""
    rank = action.n
    size = len(basis)
    images = [action.apply(v) for v in basis]
    # Solve [basis columns] X = [image columns] over Q by Gaussian elimination.
    aug = [
        [Fraction(basis[j][i]) for j in range(size)]
        + [Fraction(images[j][i]) for j in range(size)]
        for i in range(rank)
    ]
    pivots = []
    row = 0
    for col in range(size):
        pivot = next((r for r in range(row, rank) if aug[r][col] != 0), None)
        if pivot is None:
            raise ContractError("sublattice basis is not linearly independent")
        aug[row], aug[pivot] = aug[pivot], aug[row]
        aug[row] = [x / aug[row][col] for x in aug[row]]
        for r in range(rank):
            if r != row and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[row])]
        pivots.append(row)
        row += 1
    for r in range(row, rank):
        if any(aug[r][size:]):
            raise ContractError(
                "action does not preserve the invariant sublattice"
            )
    rows_out = []
    for r in pivots:
        row_vals = []
        for j in range(size):
            val = aug[r][size + j]
            if val.denominator != 1:
                raise ContractError(
                    "restricted action is not integral on the kernel basis"
                )
            row_vals.append(int(val))
        rows_out.append(tuple(row_vals))
    return SquareIntMatrix(tuple(rows_out))


@dataclass(frozen=True)
class CoverScenario:
    """A cover model, its cyclic deck action, and the word to descend.

    The deck matrix must have the declared finite order exactly; this is a
    construction-time check, never a runtime surprise.  Commutation of the
    word with the deck action is what ``commutes_with_deck`` decides, and is
    a precondition for the descent operations.
    """

    cover_lattice: BilinearLattice
    deck_matrix: SquareIntMatrix
    order: int
    word: ActionWord
    cover_entropy_bound: float

    def __post_init__(self):
        rank = self.cover_lattice.rank
        if self.deck_matrix.n != rank:
            raise InputError(
                f"deck matrix dimension {self.deck_matrix.n} != lattice rank {rank}"
            )
        if self.order < 1:
            raise InputError("deck order must be a positive integer")
        if self.deck_matrix.power(self.order) != SquareIntMatrix.identity(rank):
            raise InputError(
                f"deck matrix does not have order dividing {self.order}"
            )
        if self.word.lattice.rank != rank:
            raise InputError("word acts on a lattice of different rank")
        if self.cover_entropy_bound < 0:
            raise InputError("cover entropy bound must be nonnegative")


def commutes_with_deck(sc: CoverScenario) -> bool:
    """Exact check that the induced word action commutes with the deck action."""
    action = induced_matrix(sc.word)
    return action @ sc.deck_matrix == sc.deck_matrix @ action


def tensor_generators_commute(sc: CoverScenario) -> bool:
    """Exact check for the invariant-polarization condition on tensor factors."""
    return all(
        gen.matrix @ sc.deck_matrix == sc.deck_matrix @ gen.matrix
        for gen in sc.word.generators
        if isinstance(gen, TensorClass)
    )


def invariant_sublattice(
    sc: CoverScenario,
) -> tuple[tuple[tuple[int, ...], ...], SquareIntMatrix]:
    """Basis of the deck-fixed sublattice and the word's restriction to it."""
    if not commutes_with_deck(sc):
        raise ContractError(
            "word action does not commute with the deck action; descent needs "
            "an invariant polarization"
        )
    fixed = sc.deck_matrix - SquareIntMatrix.identity(sc.cover_lattice.rank)
    basis = integer_kernel_basis(fixed)
    if not basis:
        raise InputError(
            "deck action fixes no lattice vector; not a valid quotient model"
        )
    return basis, _restrict_to_basis(induced_matrix(sc.word), basis)


@dataclass(frozen=True)
class QuotientVerdict:
    """Descended bound and spectral radius for the quotient model."""

    entropy_lower: float
    cover_log_rho: float
    quotient_log_rho: float
    quotient_log_rho_exact_zero: bool
    quotient_rank: int
    verdict: str


def quotient_verdict(sc: CoverScenario, tol: float = DEFAULT_TOL) -> QuotientVerdict:
    """Descend the entropy bound and squeeze the quotient spectral radius.

    The entropy bound transfers as an identity through the covering.  When
    the cover action is unipotent the quotient log spectral radius is exactly
    zero; otherwise it is computed on the restriction and only the inequality
    against the cover value is asserted.
    """
    basis, restricted = invariant_sublattice(sc)
    cover_action = induced_matrix(sc.word)
    cover_unipotent = is_unipotent(cover_action)
    if cover_unipotent:
        if not is_unipotent(restricted):
            raise ContractError(
                "restriction of a unipotent action failed the exact "
                "unipotence test"
            )
        cover_log_rho = 0.0
        quotient_log_rho = 0.0
        exact_zero = True
    else:
        cover_log_rho = math.log(spectral_radius(cover_action, tol))
        quotient_log_rho = math.log(spectral_radius(restricted, tol))
        exact_zero = is_unipotent(restricted)
        if exact_zero:
            quotient_log_rho = 0.0
        if quotient_log_rho > cover_log_rho + 10 * tol:
            raise ContractError(
                "restricted spectral radius exceeds the ambient one"
            )
    violated = sc.cover_entropy_bound > 0 and (
        exact_zero or sc.cover_entropy_bound > quotient_log_rho + 10 * tol
    )
    return QuotientVerdict(
        entropy_lower=sc.cover_entropy_bound,
        cover_log_rho=cover_log_rho,
        quotient_log_rho=quotient_log_rho,
        quotient_log_rho_exact_zero=exact_zero,
        quotient_rank=len(basis),
        verdict="GY violated" if violated else "no violation certified",
    )
