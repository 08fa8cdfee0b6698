import math

import pytest

from catent.errors import CollapseError, InputError
from catent.graded import GradedDim, GradedDimInterval
from catent.twists import (
    BoundSeries,
    HKModel,
    SurfaceModel,
    advance,
    default_action_word,
    entropy_lower_bound,
    ext_growth_series,
    first_iterate_profile,
    gy_verdict,
    initial_twist_state,
    negative_line_bundle_profile,
    spherical_twist_series,
    spherical_twist_step,
    trivial_bundle_profile,
    verify_correction_contract,
    verify_eval_cone_boundary,
)
from catent.words import induced_matrix
from catent.lattice import is_unipotent

K3 = HKModel(1, q=10)  # d_i = 5 i^2 + 2: the degree-10 polarized K3 model
HK2 = HKModel(2, q=2)  # d_i = binom(i^2 + 3, 2)


# -- model validation ----------------------------------------------------------


def test_model_requires_exactly_one_rule():
    with pytest.raises(InputError):
        HKModel(1)
    with pytest.raises(InputError):
        HKModel(1, q=10, table=(2, 3))


def test_model_rejects_degenerate_dimensions():
    with pytest.raises(InputError):
        HKModel(1, table=(1, 5))
    with pytest.raises(InputError):
        HKModel(1, table=(5, 4))
    with pytest.raises(InputError):
        HKModel(0, q=10)


def test_model_rejects_nonintegral_rule():
    with pytest.raises(InputError):
        HKModel(1, q=9).dim(1)  # 9/2 + 2 is not an integer


def test_dim_values():
    assert [K3.dim(i) for i in range(1, 5)] == [7, 22, 47, 82]
    assert [HK2.dim(i) for i in range(1, 5)] == [6, 21, 66, 171]
    assert HKModel(1, table=(6, 21)).dim(2) == 21
    with pytest.raises(InputError):
        HKModel(1, table=(6, 21)).dim(3)


# -- line bundle profiles --------------------------------------------------------


def test_negative_line_bundle_profile():
    assert negative_line_bundle_profile(K3, 1) == GradedDim(((2, 7),))
    assert negative_line_bundle_profile(HKModel(2, table=(6,)), 1) == GradedDim(
        ((4, 6),)
    )
    p = negative_line_bundle_profile(HK2, 3)
    assert p.support == (4,) and p.dim(4) == HK2.dim(3)
    with pytest.raises(InputError):
        negative_line_bundle_profile(K3, 0)


def test_trivial_bundle_profile():
    assert trivial_bundle_profile(K3) == GradedDim(((0, 1), (2, 1)))
    assert trivial_bundle_profile(HK2) == GradedDim(((0, 1), (2, 1), (4, 1)))


# -- first iterate ----------------------------------------------------------------


def test_first_iterate_k3():
    assert first_iterate_profile(K3, 1, 1) == GradedDim(((2, 47), (3, 154), (4, 154)))


def test_first_iterate_table_model():
    model = HKModel(2, table=(6, 21, 48, 171))
    assert first_iterate_profile(model, 1, 2) == GradedDim(
        ((4, 171), (7, 441), (8, 441))
    )


def test_first_iterate_euler_characteristic():
    # The two top entries sit in adjacent degrees and cancel, so the
    # alternating sum equals the single bottom entry.
    for model in (K3, HK2):
        for k in (1, 2):
            for l in (1, 3):
                p = first_iterate_profile(model, k, l)
                assert p.euler_characteristic() == model.dim(k + l + 1)


def test_machinery_matches_closed_form_sweep():
    rules = (
        HKModel(1, q=10),
        HKModel(2, q=2),
        HKModel(3, q=4),
        HKModel(2, table=tuple(3 * i * i + 3 for i in range(1, 12))),
    )
    for model in rules:
        for k in range(1, 4):
            for l in range(1, 4):
                dd = model.dim(k + 1) * model.dim(l)
                got = first_iterate_profile(model, k, l)
                assert got == GradedDim(
                    (
                        (model.dim_x, model.dim(k + l + 1)),
                        (2 * model.dim_x - 1, dd),
                        (2 * model.dim_x, dd),
                    )
                )


# -- iteration contracts -----------------------------------------------------------


def test_advance_step_values():
    state = initial_twist_state(K3, 1)
    assert state.m == 1
    state = advance(state, K3, 1)
    prof = state.profiles[1]
    # top degree 2n(m+1) = 6 with d_2 d_1 d_1 = 22 * 49 = 1078, nothing above
    assert (prof.lo(6), prof.hi(6)) == (1078, 1078)
    assert max(prof.support) == 6


def test_vanishing_window_and_top_through_m6():
    for model in (K3, HK2):
        for k in (1, 2):
            state = initial_twist_state(model, k, ls=(1, 2))
            for m in range(2, 7):
                state = advance(state, model, 1 + (m % 2))
                for l, prof in state.profiles.items():
                    top = model.dim_x * (m + 1)
                    expected = model.dim(k + 1) * model.dim(l) * model.dim(1) ** (m - 1)
                    assert (prof.lo(top), prof.hi(top)) == (expected, expected)
                    assert all(deg <= top for deg in prof.support)
                    assert min(prof.support) >= 0


def test_correction_top_values():
    # h^{2n(m+1)+1} of the level-l correction is d_{k+1} d_l d_1^{m-1}, exactly.
    for m in range(1, 6):
        prof = verify_correction_contract(K3, m, 1, 2)
        top = 2 * (m + 1) + 1
        assert (prof.lo(top), prof.hi(top)) == (22 * 22 * 7 ** (m - 1),) * 2


def test_eval_cone_boundary_rows():
    # The evaluation cone has the exact product entry at 2n(m+1)+2, zero
    # above, and its shifted complex term carries the same value one higher.
    for m in range(2, 6):
        prof = verify_eval_cone_boundary(K3, m, 1, 1)
        top = 2 * (m + 1) + 2
        expected = 22 * 7 * 7 ** (m - 1)
        assert (prof.lo(top), prof.hi(top)) == (expected, expected)
        assert all(deg <= top for deg in prof.support)


def test_initial_state_tracks_generator_levels():
    state = initial_twist_state(HK2, 1)
    assert sorted(state.profiles) == [1, 2, 3, 4, 5]
    assert state.correction == state.correction_by_twist[1]


def test_advance_rejects_bad_level():
    state = initial_twist_state(K3, 1)
    with pytest.raises(InputError):
        advance(state, K3, 0)


def test_collapse_error_names_degree():
    from catent.twists import _check_top

    prof = GradedDimInterval.from_dict({4: (3, 5)})
    with pytest.raises(CollapseError) as exc:
        _check_top(prof, 4, 4, "test profile")
    assert exc.value.degree == 4
    with pytest.raises(CollapseError) as exc:
        _check_top(prof, 3, 1, "test profile")
    assert exc.value.degree == 4


# -- growth series -------------------------------------------------------------------


def test_series_first_value_exact():
    series = ext_growth_series(K3, 3)
    d = K3.dim
    expected = sum(
        d(k + l + 1) + 2 * d(k + 1) * d(l)
        for k in range(1, 4)
        for l in range(1, 4)
    )
    assert series.lowers[0] == expected == 24155
    assert series.uppers[0] == expected


def test_series_dominates_top_terms_and_geometric_floor():
    for model in (K3, HK2):
        series = ext_growth_series(model, 6)
        d = model.dim
        width = model.generator_width
        for m, lo, _ in series.rows():
            tops = sum(
                d(k + 1) * d(l) * d(1) ** (m - 1)
                for k in range(1, width + 1)
                for l in range(1, width + 1)
            )
            assert lo >= tops >= d(1) ** (m + 1)


def test_series_integer_at_t_zero():
    series = ext_growth_series(K3, 3)
    assert all(isinstance(lo, int) for lo in series.lowers)
    assert all(isinstance(hi, int) for hi in series.uppers)


def test_series_positive_t_weights():
    series = ext_growth_series(K3, 2, t=0.5)
    assert 0 < series.lowers[0] < 24155


def test_log_slope_window_validation():
    series = BoundSeries(0.0, (2, 4, 8), (2, 4, 8))
    assert series.log_slope(1, 3) == pytest.approx(math.log(2))
    with pytest.raises(InputError):
        series.log_slope(3, 1)


# -- entropy bound and verdict ----------------------------------------------------


def test_entropy_lower_bound_values():
    assert entropy_lower_bound(K3, 6).certified == pytest.approx(math.log(7))
    assert entropy_lower_bound(HK2, 6).certified == pytest.approx(math.log(6))
    with pytest.raises(InputError):
        entropy_lower_bound(K3, 2)


def test_entropy_empirical_slope_converges():
    bound = entropy_lower_bound(K3, 10)
    assert bound.empirical_slope >= bound.certified - 0.05


def test_gy_verdict_k3():
    verdict = gy_verdict(K3, 6)
    assert verdict.verdict == "GY violated"
    assert verdict.log_rho == 0.0 and verdict.log_rho_exact_zero
    assert verdict.gap >= math.log(7) - 1e-12
    assert verdict.entropy_lower == pytest.approx(math.log(7))


def test_gy_verdict_generic_model():
    table = tuple(i * i + 3 for i in range(1, 15))
    verdict = gy_verdict(HKModel(2, table=table), 4)
    assert verdict.verdict == "GY violated"
    assert verdict.gap >= math.log(4) - 1e-12


def test_default_word_is_unipotent():
    for model in (K3, HK2, HKModel(3, table=(2, 3, 4, 5, 6, 7, 8))):
        assert is_unipotent(induced_matrix(default_action_word(model)))


# -- surface spherical twist -------------------------------------------------------


def test_surface_series_frozen_values():
    # m = 1 value 201 = d_3 + d_2 d_1 cross-checked by a hand long-exact-
    # sequence expansion; later values are exact regression anchors.
    series = spherical_twist_series(SurfaceModel.k3(10), 1, 1, 5)
    assert series.lowers[:3] == (201, 1973, 18246)
    assert series.uppers[:3] == (201, 1973, 19394)


def test_surface_series_nondecreasing():
    series = spherical_twist_series(SurfaceModel.k3(10), 1, 1, 5)
    assert all(a <= b for a, b in zip(series.lowers, series.lowers[1:]))


def test_surface_trivial_twist_of_zero_object():
    zero = GradedDimInterval()
    out = spherical_twist_step(SurfaceModel.k3(10), zero, zero, 1)
    assert out == GradedDimInterval()


def test_surface_model_validation():
    with pytest.raises(InputError):
        SurfaceModel(q=9)
    with pytest.raises(InputError):
        spherical_twist_series(SurfaceModel.k3(10), 0, 1, 3)
