"""Twist iteration on line-bundle profiles and certified entropy lower bounds.

The engine iterates the class of autoequivalence "projective twist composed
with tensoring by the inverse polarization" on a hyperkaehler-type model of
half dimension n (complex dimension 2n).  All objects are tracked only
through graded dimension profiles; every step is a long-exact-sequence cone
propagation (``cone_bounds``), so exactness of top-degree entries is
*discovered* by the interval machinery, never assumed.

Tracked families, for a generator index k and twist levels l >= 1:

  * iterate profiles: the m-th functor iterate of the k-th negative
    generator summand, tensored down by l,
  * correction profiles: the cone correction term produced by the twist's
    two-term evaluation complex, iterated alongside,
  * evaluation-cone profiles: the correction-of-correction consumed by each
    inductive step.

Their recursions only ever combine profiles whose supports are disjoint at
the top, which is why the top degree of every iterate collapses to an exact
value (the product d_{k+1} d_l d_1^{m-1}) and everything above it vanishes
exactly; ``advance`` enforces this as a hard contract.

Entropy: the per-m lower bounds of the summed profiles grow like d_1^m, so
log d_1 is a certified entropy lower bound; the action on any lattice model
is unipotent, so the log spectral radius is exactly zero and the
Gromov-Yomdin equality fails with gap at least log d_1.

A generic surface spherical-twist iteration (bounds only, no collapse
contract) is included for degree-two models.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import CollapseError, ContractError, InputError
from .graded import (
    GradedDim,
    GradedDimInterval,
    cone_bounds,
    convolve_interval,
    delta_value_interval,
)
from .lattice import DEFAULT_TOL, BilinearLattice, SquareIntMatrix
from .words import (
    ActionWord,
    PTwist,
    TensorClass,
    induced_matrix,
    log_rho_is_exact_zero,
    tensor_matrix_from_nilpotent,
    word_log_rho,
)

_CACHED_FUNCS = []


def _cached(fn):
    wrapped = lru_cache(maxsize=None)(fn)
    _CACHED_FUNCS.append(wrapped)
    return wrapped


def clear_caches() -> None:
    """Drop all memoized profiles (used for reproducible work accounting)."""
    for fn in _CACHED_FUNCS:
        fn.cache_clear()


def _binomial_dim(n: int, q: int, i: int) -> int:
    # chi of the i-th polarization power on a K3^[n]-type model:
    # binom(q i^2 / 2 + n + 1, n), evaluated exactly.
    x = Fraction(q * i * i, 2) + n + 1
    val = Fraction(1)
    for t in range(n):
        val *= x - t
    val /= math.factorial(n)
    if val.denominator != 1:
        raise InputError(
            f"Riemann-Roch rule gives non-integer dimension at i={i} "
            f"(q={q}, n={n}); supply an explicit d-table instead"
        )
    return int(val)


@dataclass(frozen=True)
class HKModel:
    """Hyperkaehler-type model: half dimension n and a Riemann-Roch rule.

    The rule i -> d_i gives the section dimension of the i-th power of the
    polarization, either from the degree-n binomial formula in a stored
    even form value q, or from an explicit table (d_1, d_2, ...).  All
    generated or stored values must exceed 1 and be nondecreasing.
    """

    n: int
    q: int | None = None
    table: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InputError("n must be a positive integer")
        if (self.q is None) == (self.table is None):
            raise InputError("supply exactly one of q or an explicit d-table")
        if self.q is not None:
            if self.q < 1:
                raise InputError("q must be a positive integer")
            self.dim(1)  # reject non-integral rules at construction
            self.dim(2)
        if self.table is not None:
            table = tuple(int(x) for x in self.table)
            object.__setattr__(self, "table", table)
            if not table:
                raise InputError("d-table must be nonempty")
            for i, d in enumerate(table, start=1):
                if d <= 1:
                    raise InputError(f"d-table violates d_i > 1 at i={i} (got {d})")
            if any(a > b for a, b in zip(table, table[1:])):
                raise InputError("d-table must be nondecreasing")

    @property
    def dim_x(self) -> int:
        """Complex dimension of the modelled manifold."""
        return 2 * self.n

    @property
    def generator_width(self) -> int:
        """Number of summands in each generator bundle: 2n + 1."""
        return 2 * self.n + 1

    def dim(self, i: int) -> int:
        """d_i, the section dimension of the i-th polarization power."""
        if i < 0:
            raise InputError("dimension index must be nonnegative")
        if self.q is not None:
            d = _binomial_dim(self.n, self.q, i)
        else:
            if i == 0:
                raise InputError("d_0 is not stored in table-based models")
            if i > len(self.table):
                raise InputError(
                    f"d-table too short: need d_{i}, have {len(self.table)} entries"
                )
            d = self.table[i - 1]
        if d <= 1:
            raise InputError(f"Riemann-Roch rule violates d_i > 1 at i={i} (got {d})")
        return d


def negative_line_bundle_profile(model: HKModel, j: int) -> GradedDim:
    """Cohomology profile of the inverse j-th polarization power: {2n: d_j}.

    Kodaira vanishing plus Serre duality with trivial canonical bundle
    concentrate everything in the top degree.
    """
    if j < 1:
        raise InputError(
            "twist level must be >= 1; use trivial_bundle_profile for level 0"
        )
    return GradedDim(((model.dim_x, model.dim(j)),))


def trivial_bundle_profile(model: HKModel) -> GradedDim:
    """Cohomology profile of the structure sheaf: one dimension in each even
    degree 0, 2, ..., 2n."""
    return GradedDim(tuple((2 * i, 1) for i in range(model.n + 1)))


# ---------------------------------------------------------------------------
# Profile recursion
# ---------------------------------------------------------------------------


def _twist_kernel(model: HKModel, l: int) -> GradedDim:
    return trivial_bundle_profile(model) if l == 0 else negative_line_bundle_profile(model, l)


def eval_cone_profile(
    model: HKModel, mult: GradedDimInterval, l: int
) -> GradedDimInterval:
    """Cone of the twist's two-term evaluation complex, tensored down by l.

    Both terms are sums of copies of the same line bundle with multiplicities
    given degreewise by ``mult``; the second copy sits two degrees deeper.
    """
    target = convolve_interval(mult, _twist_kernel(model, l))
    source = target.shifted(-2)
    return cone_bounds(source, target)


@_cached
def correction_profile(model: HKModel, m: int, k: int, l: int) -> GradedDimInterval:
    """Interval profile of the m-th correction object, tensored down by l."""
    if m < 1 or k < 1 or l < 1:
        raise InputError("correction profiles need m, k, l >= 1")
    if m == 1:
        mult = GradedDimInterval.exact(negative_line_bundle_profile(model, k + 1))
        return eval_cone_profile(model, mult, l)
    inner = eval_twist_cone_profile(model, m, k, l)
    return cone_bounds(inner, correction_profile(model, m - 1, k, l + 1))


@_cached
def eval_twist_cone_profile(
    model: HKModel, m: int, k: int, l: int
) -> GradedDimInterval:
    """Interval profile of the evaluation cone feeding the m-th correction."""
    if m < 2:
        raise InputError("evaluation cones exist for m >= 2 only")
    return eval_cone_profile(model, correction_profile(model, m - 1, k, 1), l)


@_cached
def iterate_profile(model: HKModel, m: int, k: int, l: int) -> GradedDimInterval:
    """Interval profile of the m-th functor iterate of the k-th negative
    generator summand, tensored down by l."""
    if m < 0 or k < 1 or l < 1:
        raise InputError("iterate profiles need m >= 0 and k, l >= 1")
    if m == 0:
        return GradedDimInterval.exact(
            GradedDim(((model.dim_x, model.dim(k + l)),))
        )
    return cone_bounds(
        correction_profile(model, m, k, l), iterate_profile(model, m - 1, k + 1, l)
    )


# ---------------------------------------------------------------------------
# Collapse contracts
# ---------------------------------------------------------------------------


def _expected_top(model: HKModel, m: int, k: int, l: int) -> int:
    return model.dim(k + 1) * model.dim(l) * model.dim(1) ** (m - 1)


def _check_top(profile: GradedDimInterval, top: int, expected: int, label: str):
    for deg, lo, hi in profile.entries:
        if deg > top:
            raise CollapseError(
                f"{label}: expected exact vanishing above degree {top}, "
                f"found [{lo}, {hi}] at degree {deg}",
                degree=deg,
            )
    lo, hi = profile.lo(top), profile.hi(top)
    if lo != expected or hi != expected:
        raise CollapseError(
            f"{label}: top degree {top} expected exactly {expected}, got [{lo}, {hi}]",
            degree=top,
        )


def verify_iterate_contract(
    model: HKModel, m: int, k: int, l: int
) -> GradedDimInterval:
    """Iterate profile with its collapse contract enforced.

    For m >= 1 the top degree 2n(m+1) must be exactly d_{k+1} d_l d_1^{m-1}
    and all higher degrees exactly zero.
    """
    profile = iterate_profile(model, m, k, l)
    _check_top(
        profile,
        model.dim_x * (m + 1),
        _expected_top(model, m, k, l),
        f"iterate profile (m={m}, k={k}, l={l})",
    )
    if profile.entries and profile.entries[0][0] < 0:
        raise CollapseError(
            f"iterate profile (m={m}, k={k}, l={l}) has negative-degree support",
            degree=profile.entries[0][0],
        )
    return profile


def verify_correction_contract(
    model: HKModel, m: int, k: int, l: int
) -> GradedDimInterval:
    """Correction profile with its collapse contract enforced.

    The top degree 2n(m+1)+1 must be exactly d_{k+1} d_l d_1^{m-1} and all
    higher degrees exactly zero.
    """
    profile = correction_profile(model, m, k, l)
    _check_top(
        profile,
        model.dim_x * (m + 1) + 1,
        _expected_top(model, m, k, l),
        f"correction profile (m={m}, k={k}, l={l})",
    )
    return profile


def verify_eval_cone_boundary(
    model: HKModel, m: int, k: int, l: int
) -> GradedDimInterval:
    """Evaluation-cone profile with its two boundary rows enforced (m >= 2):
    exactly d_{k+1} d_l d_1^{m-1} at degree 2n(m+1)+2, zero above, and the
    same value for the shifted term of the complex one degree higher."""
    profile = eval_twist_cone_profile(model, m, k, l)
    top = model.dim_x * (m + 1) + 2
    expected = _expected_top(model, m, k, l)
    _check_top(profile, top, expected, f"evaluation cone (m={m}, k={k}, l={l})")
    source = convolve_interval(
        correction_profile(model, m - 1, k, 1), _twist_kernel(model, l)
    ).shifted(-2)
    if (source.lo(top + 1), source.hi(top + 1)) != (expected, expected):
        raise CollapseError(
            f"evaluation complex (m={m}, k={k}, l={l}): shifted term at degree "
            f"{top + 1} expected exactly {expected}, got "
            f"[{source.lo(top + 1)}, {source.hi(top + 1)}]",
            degree=top + 1,
        )
    return profile


def first_iterate_profile(model: HKModel, k: int, l: int) -> GradedDim:
    """Exact profile of the first iterate, produced by the triangle machinery.

    The closed form {2n: d_{k+l+1}, 4n-1: d_{k+1} d_l, 4n: d_{k+1} d_l} is
    used as a cross-check only.
    """
    profile = verify_iterate_contract(model, 1, k, l)
    if not profile.is_exact():
        deg = next(d for d, lo, hi in profile.entries if lo != hi)
        raise CollapseError(
            f"first iterate (k={k}, l={l}) did not collapse to exact values",
            degree=deg,
        )
    got = profile.to_exact()
    dd = model.dim(k + 1) * model.dim(l)
    closed = GradedDim(
        (
            (model.dim_x, model.dim(k + l + 1)),
            (2 * model.dim_x - 1, dd),
            (2 * model.dim_x, dd),
        )
    )
    if got != closed:
        raise ContractError(
            f"first iterate (k={k}, l={l}): machinery produced {got.entries}, "
            f"closed form gives {closed.entries}"
        )
    return got


# ---------------------------------------------------------------------------
# Stateful iteration facade
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistState:
    """Verified snapshot of the iteration at step m for one generator index.

    ``profiles`` maps each tracked twist level l to the iterate profile;
    ``correction`` is the level-1 correction profile the next evaluation
    complex consumes; ``correction_by_twist`` tracks the other levels.
    """

    m: int
    k: int
    profiles: dict[int, GradedDimInterval]
    correction: GradedDimInterval
    correction_by_twist: dict[int, GradedDimInterval]


def _build_state(model: HKModel, m: int, k: int, ls: tuple[int, ...]) -> TwistState:
    profiles = {l: verify_iterate_contract(model, m, k, l) for l in ls}
    corr_by_twist = {l: verify_correction_contract(model, m, k, l) for l in ls}
    if m >= 2:
        for l in ls:
            verify_eval_cone_boundary(model, m, k, l)
    correction = corr_by_twist.get(1) or verify_correction_contract(model, m, k, 1)
    return TwistState(m, k, profiles, correction, corr_by_twist)


def initial_twist_state(model: HKModel, k: int, ls=None) -> TwistState:
    """State after one application, all generator twist levels tracked."""
    if k < 1:
        raise InputError("generator summand index k must be >= 1")
    ls = tuple(ls) if ls is not None else tuple(range(1, model.generator_width + 1))
    if any(l < 1 for l in ls):
        raise InputError("twist levels must be >= 1")
    for l in ls:
        first_iterate_profile(model, k, l)  # includes the closed-form cross-check
    return _build_state(model, 1, k, ls)


def advance(state: TwistState, model: HKModel, l_next: int) -> TwistState:
    """Advance one step, enforcing every collapse contract at the new level."""
    if l_next < 1:
        raise InputError("twist level must be >= 1")
    ls = tuple(sorted(set(state.profiles) | {l_next}))
    return _build_state(model, state.m + 1, state.k, ls)


# ---------------------------------------------------------------------------
# Growth series and entropy bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundSeries:
    """Per-step lower/upper bounds for the generator-pair Ext total at t.

    Entry i corresponds to step m = i + 1; ``None`` upper bounds mean
    unbounded.  Values are exact integers at t = 0.
    """

    t: float
    lowers: tuple
    uppers: tuple

    def __post_init__(self):
        if len(self.lowers) != len(self.uppers):
            raise InputError("lower and upper sequences must have equal length")

    @property
    def m_max(self) -> int:
        return len(self.lowers)

    def rows(self):
        return [
            (m, lo, hi)
            for m, (lo, hi) in enumerate(zip(self.lowers, self.uppers), start=1)
        ]

    def log_slope(self, m_from: int, m_to: int) -> float:
        """Least-squares slope of log lower(m) against m on [m_from, m_to]."""
        if not 1 <= m_from < m_to <= self.m_max:
            raise InputError(f"invalid slope window [{m_from}, {m_to}]")
        ms = list(range(m_from, m_to + 1))
        logs = [math.log(self.lowers[m - 1]) for m in ms]
        return statistics.linear_regression(ms, logs).slope


def ext_growth_series(model: HKModel, m_max: int, t: float = 0.0) -> BoundSeries:
    """Bounds on the Ext total between the positive and twisted negative
    generators, summed over all summand pairs, for m = 1 .. m_max."""
    if m_max < 1:
        raise InputError("m_max must be >= 1")
    width = model.generator_width
    lowers, uppers = [], []
    for m in range(1, m_max + 1):
        lo_sum = 0
        hi_sum: float | None = 0
        for k in range(1, width + 1):
            for l in range(1, width + 1):
                lo, hi = delta_value_interval(
                    verify_iterate_contract(model, m, k, l), t
                )
                lo_sum += lo
                hi_sum = None if hi_sum is None or hi is None else hi_sum + hi
        lowers.append(lo_sum)
        uppers.append(hi_sum)
    return BoundSeries(t, tuple(lowers), tuple(uppers))


@dataclass(frozen=True)
class EntropyBound:
    """Certified entropy lower bound together with the empirical series slope."""

    certified: float
    empirical_slope: float
    series: BoundSeries


def entropy_lower_bound(model: HKModel, m_max: int) -> EntropyBound:
    """Certified bound log d_1, plus the observed log-slope of the series.

    The certificate does not depend on the slope estimate; the series top
    terms alone give lower(m) >= d_1^{m+1} for every m.
    """
    if m_max < 3:
        raise InputError("m_max must be >= 3 for a meaningful slope window")
    series = ext_growth_series(model, m_max, 0.0)
    slope = series.log_slope(max(1, m_max // 2), m_max)
    return EntropyBound(math.log(model.dim(1)), slope, series)


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


def default_action_word(model: HKModel) -> ActionWord:
    """Rank-3 stand-in lattice action for the twist-and-tensor word.

    Only unipotence matters for the verdict; the lattice is a Mukai-style
    stand-in spanned by rank, polarization, and point classes.
    """
    q = model.q if model.q is not None and model.q % 2 == 0 else 2
    lattice = BilinearLattice(((0, 0, -1), (0, q, 0), (-1, 0, 0)), "symmetric")
    nil = SquareIntMatrix(((0, 0, 0), (-1, 0, 0), (0, -q, 0)))
    tensor = tensor_matrix_from_nilpotent(nil)
    return ActionWord(lattice, (PTwist(), TensorClass(tensor)))


@dataclass(frozen=True)
class HKVerdict:
    """Outcome of the Gromov-Yomdin check on a hyperkaehler-type model."""

    log_rho: float
    log_rho_exact_zero: bool
    entropy_lower: float
    empirical_slope: float
    gap: float
    verdict: str
    series: BoundSeries


def gy_verdict(
    model: HKModel,
    m_max: int,
    word: ActionWord | None = None,
    tol: float = DEFAULT_TOL,
) -> HKVerdict:
    """Certified entropy bound vs. exact log spectral radius of the word."""
    word = word if word is not None else default_action_word(model)
    matrix = induced_matrix(word)
    exact_zero = log_rho_is_exact_zero(matrix)
    log_rho = 0.0 if exact_zero else word_log_rho(word, tol)
    bound = entropy_lower_bound(model, m_max)
    violated = bound.certified > 0 and (
        exact_zero or bound.certified > log_rho + 10 * tol
    )
    verdict = "GY violated" if violated else "no violation certified"
    return HKVerdict(
        log_rho=log_rho,
        log_rho_exact_zero=exact_zero,
        entropy_lower=bound.certified,
        empirical_slope=bound.empirical_slope,
        gap=bound.certified - log_rho,
        verdict=verdict,
        series=bound.series,
    )


# ---------------------------------------------------------------------------
# Generic surface spherical-twist iteration (bounds only)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceModel:
    """Degree-two model for the spherical twist along the structure sheaf.

    Supplies the negative line-bundle profiles {2: d_j} and the two-degree
    structure-sheaf profile {0: 1, 2: 1}.
    """

    q: int | None = None
    table: tuple[int, ...] | None = None

    def __post_init__(self):
        inner = HKModel(1, self.q, self.table)  # reuse the rank validation
        if self.table is not None:
            object.__setattr__(self, "table", inner.table)

    @classmethod
    def k3(cls, q: int) -> "SurfaceModel":
        return cls(q=q)

    def dim(self, i: int) -> int:
        return HKModel(1, self.q, self.table).dim(i)

    def line_profile(self, j: int) -> GradedDim:
        if j < 1:
            raise InputError("twist level must be >= 1")
        return GradedDim(((2, self.dim(j)),))

    def trivial_profile(self) -> GradedDim:
        return GradedDim(((0, 1), (2, 1)))


def spherical_twist_step(
    surface: SurfaceModel,
    mult: GradedDimInterval,
    target: GradedDimInterval,
    l: int,
) -> GradedDimInterval:
    """One spherical-twist cone at twist level l.

    ``mult`` carries the evaluation multiplicities (the profile of the object
    being twisted, already tensored down by one); ``target`` is that object
    tensored down by l more.  The zero object twists to the zero profile.
    """
    kernel = surface.trivial_profile() if l == 0 else surface.line_profile(l)
    return cone_bounds(convolve_interval(mult, kernel), target)


def spherical_twist_series(
    surface: SurfaceModel, k: int, l: int, m_max: int, t: float = 0.0
) -> BoundSeries:
    """Interval bounds for the iterated spherical-twist-and-tensor word.

    Returns per-step lower/upper bounds on the Ext total against the k-th
    negative and l-th positive generator summands.  No closed form is
    asserted; supports overlap from step three on, so these are honest
    bounds, not exact values.
    """
    if k < 1 or l < 1:
        raise InputError("k and l must be >= 1")
    if m_max < 1:
        raise InputError("m_max must be >= 1")
    profiles: dict[tuple[int, int], GradedDimInterval] = {}
    for lv in range(1, l + m_max + 1):
        profiles[(0, lv)] = GradedDimInterval.exact(
            GradedDim(((2, surface.dim(k + lv)),))
        )
    for m in range(1, m_max + 1):
        for lv in range(1, l + m_max - m + 1):
            profiles[(m, lv)] = spherical_twist_step(
                surface, profiles[(m - 1, 1)], profiles[(m - 1, lv + 1)], lv
            )
    lowers, uppers = [], []
    for m in range(1, m_max + 1):
        lo, hi = delta_value_interval(profiles[(m, l)], t)
        if hi is None and lo == 0:
            raise ContractError(f"interval blow-up at step {m}: no finite bounds left")
        lowers.append(lo)
        uppers.append(hi)
    return BoundSeries(t, tuple(lowers), tuple(uppers))
