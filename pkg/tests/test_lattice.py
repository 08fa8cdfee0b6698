import math
import random

import pytest

from catent.errors import InputError
from catent.lattice import (
    BilinearLattice,
    IntPolynomial,
    SquareIntMatrix,
    char_poly,
    companion_matrix,
    is_unipotent,
    pairing_eval,
    poly_divmod_exact,
    poly_eval_matrix,
    poly_gcd,
    poly_mul,
    spectral_radius,
    squarefree_part,
)

TOL = 1e-9


def random_matrix(rng, n, lo=-5, hi=5):
    return SquareIntMatrix(
        tuple(tuple(rng.randint(lo, hi) for _ in range(n)) for _ in range(n))
    )


# -- pairings ----------------------------------------------------------------


def test_pairing_orthogonal_basis():
    lat = BilinearLattice(((1, 0), (0, 1)), "symmetric")
    assert pairing_eval(lat, (1, 0), (0, 1)) == 0


def test_pairing_hyperbolic():
    lat = BilinearLattice(((0, 1), (1, 0)), "symmetric")
    assert pairing_eval(lat, (1, 0), (0, 1)) == 1


def test_pairing_mukai_rank3():
    # <v(O), v(O)> = -chi(O, O) on a K3 with H^2 = 10;
    # expanding v^T G w by hand gives -2.
    lat = BilinearLattice(((0, 0, -1), (0, 10, 0), (-1, 0, 0)), "symmetric")
    assert pairing_eval(lat, (1, 0, 1), (1, 0, 1)) == -2


def test_pairing_dimension_mismatch():
    lat = BilinearLattice(((1, 0), (0, 1)), "symmetric")
    with pytest.raises(InputError):
        pairing_eval(lat, (1, 0, 0), (0, 1))


def test_symmetric_gram_validated():
    with pytest.raises(InputError):
        BilinearLattice(((0, 1), (2, 0)), "symmetric")
    # asymmetric is fine when declared euler_general
    BilinearLattice(((0, 1), (2, 0)), "euler_general")


# -- characteristic polynomial ----------------------------------------------


def test_char_poly_identity():
    p = char_poly(SquareIntMatrix.identity(2))
    assert p.coeffs == (1, -2, 1)  # (x - 1)^2


def test_char_poly_trace_det():
    p = char_poly(SquareIntMatrix(((0, -1), (1, 3))))
    assert p.coeffs == (1, -3, 1)


def test_char_poly_unipotent_triangular():
    m = SquareIntMatrix(((1, 2, 3), (0, 1, 4), (0, 0, 1)))
    assert char_poly(m).coeffs == (-1, 3, -3, 1)  # (x - 1)^3


@pytest.mark.parametrize("n", range(1, 9))
def test_cayley_hamilton_random(n):
    rng = random.Random(1000 + n)
    for _ in range(5):
        m = random_matrix(rng, n)
        assert poly_eval_matrix(char_poly(m), m).is_zero()


# -- unipotence ---------------------------------------------------------------


def test_is_unipotent_basic():
    assert is_unipotent(SquareIntMatrix.identity(3))
    assert is_unipotent(SquareIntMatrix(((1, 1), (0, 1))))
    assert not is_unipotent(SquareIntMatrix(((2, 0), (0, 1))))


def test_unipotent_spectral_radius_is_one():
    rng = random.Random(7)
    for _ in range(10):
        n = rng.randint(2, 5)
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = 1
            for j in range(i + 1, n):
                rows[i][j] = rng.randint(-4, 4)
        m = SquareIntMatrix(tuple(tuple(r) for r in rows))
        assert is_unipotent(m)
        assert abs(spectral_radius(m, TOL) - 1.0) <= TOL


# -- spectral radius ----------------------------------------------------------


def test_spectral_radius_identity():
    assert spectral_radius(SquareIntMatrix.identity(4)) == 1.0


def test_spectral_radius_companion_quadratic():
    m = companion_matrix(IntPolynomial((1, -3, 1)))
    assert abs(spectral_radius(m) - (3 + math.sqrt(5)) / 2) <= TOL


def test_spectral_radius_nilpotent():
    assert spectral_radius(SquareIntMatrix(((0, 1), (0, 0)))) == 0.0


def test_spectral_radius_mean_eigenvalue_bound():
    rng = random.Random(21)
    for _ in range(40):
        n = rng.randint(1, 6)
        m = random_matrix(rng, n)
        assert spectral_radius(m, TOL) >= abs(m.trace()) / n - TOL


def test_spectral_radius_power_scaling():
    rng = random.Random(31)
    for _ in range(15):
        n = rng.randint(2, 4)
        m = random_matrix(rng, n, -3, 3)
        rho = spectral_radius(m, TOL)
        for k in range(2, 5):
            slack = k * TOL * max(1.0, rho) ** (k - 1) + TOL
            assert abs(spectral_radius(m.power(k), TOL) - rho**k) <= slack


def test_spectral_radius_requires_positive_tol():
    with pytest.raises(InputError):
        spectral_radius(SquareIntMatrix.identity(2), 0.0)


# -- polynomial helpers -------------------------------------------------------


def test_poly_trim_and_zero():
    assert IntPolynomial((0, 0)).is_zero()
    assert IntPolynomial((1, 2, 0)).coeffs == (1, 2)


def test_poly_mul_divmod_roundtrip():
    a = IntPolynomial((2, 0, 1))
    b = IntPolynomial((-1, 1))
    assert poly_divmod_exact(poly_mul(a, b), b) == a


def test_poly_gcd_and_squarefree():
    # (x-1)^2 (x+2) has squarefree part (x-1)(x+2)
    sq = poly_mul(poly_mul(IntPolynomial((-1, 1)), IntPolynomial((-1, 1))),
                  IntPolynomial((2, 1)))
    sf = squarefree_part(sq)
    assert sf == poly_mul(IntPolynomial((-1, 1)), IntPolynomial((2, 1)))
    assert poly_gcd(sq, sq.derivative()) == IntPolynomial((-1, 1))


def test_matrix_power_and_apply():
    m = SquareIntMatrix(((1, 1), (0, 1)))
    assert m.power(5).entries == ((1, 5), (0, 1))
    assert m.apply((2, 3)) == (5, 3)
    with pytest.raises(InputError):
        m.apply((1, 2, 3))
