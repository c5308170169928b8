import itertools
import math

import numpy as np
import pytest

from fex import (
    BudgetError,
    PeakError,
    ResolutionError,
    a_norm,
    apply,
    build_peak,
    canonical_operator,
    difference_set,
    from_generators,
    generator_norms,
    greedy_base_set,
    interpolation_defect,
    make_group,
    make_point_set,
    norm_certified,
    rademacher_average,
    sample_point_set,
    sign_max,
    sub,
)


def pipeline(group, points):
    peak = build_peak(group, greedy_base_set(group, difference_set(group, points)))
    return peak, canonical_operator(group, points, peak)


def shifted_delta_oracle(group, peak, coeffs, points):
    """Oracle: sum_j f_j * delta(t - t_j) evaluated pointwise."""
    out = np.zeros(group.order, dtype=complex)
    for i, t in enumerate(group.elements()):
        for c, tj in zip(coeffs, points):
            out[i] += c * peak.delta.values[group.index_of(sub(group, t, tj))]
    return out


def test_canonical_singleton_is_point_indicator():
    g = make_group([3, 5])
    K = make_point_set(g, [[1, 2]])
    peak = build_peak(g, [g.zero])
    op = canonical_operator(g, K, peak)
    expected = np.zeros(g.order)
    expected[g.index_of((1, 2))] = 1.0
    assert op.psi[0] == pytest.approx(expected, abs=1e-12)


def test_canonical_z8_example():
    g = make_group([8])
    K = make_point_set(g, [[0], [3]])
    _, op = pipeline(g, K)
    psi1 = op.psi[0]
    assert psi1[0] == pytest.approx(1.0)
    assert psi1[3] == pytest.approx(0.0, abs=1e-12)
    assert psi1[1] == pytest.approx(2 / 3)


def test_canonical_full_group_is_identity():
    g = make_group([4])
    K = make_point_set(g, g.elements())
    peak, op = pipeline(g, K)
    assert peak.base_set == (g.zero,)
    assert op.psi == pytest.approx(np.eye(4), abs=1e-12)


def test_canonical_rejects_mismatched_peak():
    g = make_group([8])
    peak = build_peak(g, [(0,), (1,), (2,)])  # delta(1) = 2/3 != 0
    K = make_point_set(g, [[0], [1]])
    with pytest.raises(PeakError):
        canonical_operator(g, K, peak)


def test_apply_on_basis_and_zero():
    g = make_group([8])
    K = make_point_set(g, [[0], [3]])
    _, op = pipeline(g, K)
    assert apply(op, [1.0, 0.0]).values == pytest.approx(op.psi[0])
    assert np.all(apply(op, [0.0, 0.0]).values == 0)
    with pytest.raises(ValueError):
        apply(op, [1.0, 2.0, 3.0])


def test_apply_sum_of_shifted_peaks():
    g = make_group([8])
    K = make_point_set(g, [[0], [3]])
    peak, op = pipeline(g, K)
    result = apply(op, [1.0, 1.0]).values
    oracle = shifted_delta_oracle(g, peak, [1.0, 1.0], K.points)
    assert result == pytest.approx(oracle, abs=1e-12)
    expected = np.array([1, 1, 1, 1, 2 / 3, 1 / 3, 1 / 3, 2 / 3])
    assert result == pytest.approx(expected, abs=1e-12)


def test_extension_property_random_values():
    rng = np.random.default_rng(21)
    for factors in ([8], [2, 4], [3, 5]):
        g = make_group(factors)
        K = sample_point_set(g, 3, rng)
        _, op = pipeline(g, K)
        indices = [g.index_of(t) for t in K]
        for _ in range(100):
            f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            extended = apply(op, f)
            assert extended.values[indices] == pytest.approx(f, abs=1e-9)


def test_from_generators_rejects_noninterpolating():
    g = make_group([4])
    K = make_point_set(g, [[0], [1]])
    with pytest.raises(ValueError):
        from_generators(g, K, np.zeros((2, 4), dtype=complex))
    with pytest.raises(ValueError):
        from_generators(g, K, np.zeros((3, 4), dtype=complex))


def test_norm_certified_single_point_equals_generator_norm():
    g = make_group([8])
    K = make_point_set(g, [[2]])
    _, op = pipeline(g, K)
    cert = norm_certified(op, 16)
    assert cert.grid_max == pytest.approx(a_norm(op.generator(0)), abs=1e-12)
    assert cert.lo <= cert.hi
    assert cert.interval == (cert.lo, cert.hi)


def test_norm_certified_identity_on_z2_matches_hand_enumeration():
    g = make_group([2])
    K = make_point_set(g, g.elements())
    _, op = pipeline(g, K)
    cert = norm_certified(op, 4)
    # oracle: a_norm(f1, f2) = (|f1+f2| + |f1-f2|)/2 over the 16 phase pairs
    phases = [1, 1j, -1, -1j]
    oracle = max(
        (abs(f1 + f2) + abs(f1 - f2)) / 2 for f1, f2 in itertools.product(phases, repeat=2)
    )
    assert oracle == pytest.approx(math.sqrt(2))
    assert cert.grid_max == pytest.approx(oracle, abs=1e-12)


def test_norm_certified_guards():
    g = make_group([8])
    K = make_point_set(g, [[0], [3]])
    _, op = pipeline(g, K)
    with pytest.raises(ResolutionError):
        norm_certified(op, 3)
    with pytest.raises(BudgetError):
        norm_certified(op, 16, max_points=100)


def test_refinement_consistency():
    g = make_group([12])
    K = make_point_set(g, [[0], [1], [5]])
    _, op = pipeline(g, K)
    coarse = norm_certified(op, 8)
    fine = norm_certified(op, 16)
    assert fine.grid_max >= coarse.grid_max - 1e-12
    assert fine.grid_max <= coarse.grid_max + coarse.slack + 1e-9
    # slack halves as the grid doubles, up to the sine ratio
    ratio = coarse.slack / fine.slack
    assert ratio == pytest.approx(
        math.sin(math.pi / 16) / math.sin(math.pi / 32), rel=1e-12
    )


def test_sign_statistics_single_point():
    g = make_group([8])
    K = make_point_set(g, [[2]])
    _, op = pipeline(g, K)
    norm = a_norm(op.generator(0))
    assert sign_max(op) == pytest.approx(norm, abs=1e-12)
    assert rademacher_average(op) == pytest.approx(norm, abs=1e-12)


def test_sign_statistics_identity_on_z2():
    g = make_group([2])
    K = make_point_set(g, g.elements())
    _, op = pipeline(g, K)
    assert sign_max(op) == pytest.approx(1.0, abs=1e-12)
    assert rademacher_average(op) == pytest.approx(1.0, abs=1e-12)


def test_sign_enumeration_guard():
    g = make_group([8])
    K = make_point_set(g, [[0], [1], [2], [3]])
    _, op = pipeline(g, K)
    with pytest.raises(BudgetError):
        sign_max(op, max_n=3)
    with pytest.raises(BudgetError):
        rademacher_average(op, max_n=3)


def test_mean_max_norm_ordering():
    g = make_group([16])
    K = make_point_set(g, [[0], [3], [7]])
    _, op = pipeline(g, K)
    cert = norm_certified(op, 16)
    avg = rademacher_average(op)
    mx = sign_max(op)
    assert avg <= mx + 1e-12
    assert mx <= cert.hi + 1e-9


def test_canonical_upper_bound_on_grid():
    g = make_group([12])
    K = make_point_set(g, [[0], [2], [7]])
    _, op = pipeline(g, K)
    n = K.n
    cert = norm_certified(op, 8)
    assert cert.grid_max <= math.sqrt(n) + 1e-6
    # every unimodular grid point individually satisfies norm^2 <= n
    phases = np.exp(2j * np.pi * np.arange(8) / 8)
    for ks in itertools.product(range(8), repeat=n):
        f = phases[list(ks)]
        value = np.abs(f @ op.phi).sum()
        assert value**2 <= n + 1e-6


def test_proof_chain_inequalities_and_diagonal_bound():
    for factors, pts in (([8], [[0], [3]]), ([2, 4], [[0, 1], [1, 2], [1, 3]])):
        g = make_group(factors)
        K = make_point_set(g, pts)
        _, op = pipeline(g, K)
        cert = norm_certified(op, 16)
        n = K.n
        rms = (1 / math.sqrt(2)) * float(
            np.sum(np.sqrt((np.abs(op.phi) ** 2).sum(axis=0)))
        )
        assert rms <= cert.hi + 1e-9
        norm_sum = (1 / math.sqrt(2)) * math.fsum(generator_norms(op))
        assert norm_sum <= math.sqrt(n) * cert.hi + 1e-9
        for j in range(n):
            assert a_norm(op.generator(j)) >= 1 - 1e-9


def test_interpolation_defect_reports_worst_entry():
    g = make_group([8])
    K = make_point_set(g, [[0], [3]])
    _, op = pipeline(g, K)
    assert interpolation_defect(g, K, op.psi) < 1e-12
    perturbed = op.psi.copy()
    perturbed[0, 3] += 0.25
    assert interpolation_defect(g, K, perturbed) == pytest.approx(0.25)
