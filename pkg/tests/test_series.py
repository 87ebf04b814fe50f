import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erdoslab.errors import BoundsError, DivergentSeriesError
from erdoslab.primes import build_table
from erdoslab.series import (
    PartialSumTrace,
    average_consecutive,
    checkpoint_indices,
    erdos_partial,
    oscillation_stats,
    parity_partial,
    verify_equivalence,
)

TABLE = build_table(200_000)


def exact_erdos(n_max):
    total = Fraction(0)
    for n in range(1, n_max + 1):
        total += Fraction((-1) ** n * n, TABLE.nth_prime(n))
    return total


def test_erdos_first_terms():
    tr = erdos_partial(TABLE, 4, -1.0)
    assert tr.value_at(4).real == pytest.approx(float(exact_erdos(4)), abs=1e-15)
    assert tr.value_at(1) == -0.5
    assert tr.value_at(4).imag == 0.0


def test_erdos_matches_exact_rationals():
    tr = erdos_partial(TABLE, 10_000, -1.0, checkpoints=np.array([10, 100, 1234, 10_000]))
    for n in (10, 100, 1234, 10_000):
        exact = float(exact_erdos(n))
        assert abs(tr.value_at(n).real - exact) <= 1e-12 * abs(exact)


def test_compensation_bounded():
    tr = erdos_partial(TABLE, 10_000, -1.0)
    eps = np.finfo(float).eps
    assert np.all(np.abs(tr.compensations) <= eps * max(tr.abs_term_total, 1.0))


def test_term_recovery():
    tr = erdos_partial(TABLE, 120, -1.0, dense_windows=((50, 60),))
    for n in range(50, 60):
        step = tr.value_at(n + 1) - tr.value_at(n)
        expect = (-1) ** (n + 1) * (n + 1) / TABLE.nth_prime(n + 1)
        assert step.real == pytest.approx(expect, rel=5e-13)


def test_parity_first_terms():
    assert parity_partial(TABLE, 2, -1.0).value_at(2).real == pytest.approx(
        -1 / (2 * math.log(2)), abs=1e-15
    )
    got = parity_partial(TABLE, 3, -1.0, checkpoints=np.array([2, 3])).value_at(3)
    assert got.real == pytest.approx(-1 / (2 * math.log(2)) + 1 / (3 * math.log(3)), abs=1e-15)
    # single term with unit phase i: pi(2) = 1 so the term is i / (2 log 2)
    got = parity_partial(TABLE, 2, 1j).value_at(2)
    assert got == pytest.approx(1j / (2 * math.log(2)), abs=1e-14)


def test_parity_direct_loop_oracle():
    # independent scalar recomputation, parity of pi(m) via rank queries
    M = 3000
    total = 0.0
    for m in range(2, M + 1):
        total += (-1) ** TABLE.pi(m) / (m * math.log(m))
    tr = parity_partial(TABLE, M, -1.0)
    assert tr.value_at(M).real == pytest.approx(total, rel=1e-10)


def test_parity_only_depends_on_parity():
    # recompute with pi(m) reduced mod 2 before exponentiation
    M = 500
    total = 0.0
    for m in range(2, M + 1):
        total += (-1) ** (TABLE.pi(m) % 2) / (m * math.log(m))
    assert parity_partial(TABLE, M, -1.0).value_at(M).real == pytest.approx(total, rel=1e-12)


@given(phase_k=st.integers(min_value=1, max_value=11))
@settings(max_examples=8, deadline=None)
def test_complex_phase_erdos_oracle(phase_k):
    # direct scalar oracle for a twelfth root of unity
    z = complex(math.cos(2 * math.pi * phase_k / 12), math.sin(2 * math.pi * phase_k / 12))
    n_max = 300
    total = 0.0 + 0.0j
    for n in range(1, n_max + 1):
        total += z**n * n / TABLE.nth_prime(n)
    tr = erdos_partial(TABLE, n_max, z)
    assert tr.value_at(n_max) == pytest.approx(total, abs=1e-10)


def test_phase_validation():
    with pytest.raises(ValueError):
        erdos_partial(TABLE, 10, 0.5)
    with pytest.raises(DivergentSeriesError):
        erdos_partial(TABLE, 10, 1.0, require_convergent=True)
    # raw trace still computable on demand
    assert erdos_partial(TABLE, 10, 1.0).value_at(10).real > 0


def test_range_errors():
    with pytest.raises(BoundsError):
        erdos_partial(TABLE, TABLE.primes.size + 1, -1.0)
    with pytest.raises(ValueError):
        parity_partial(TABLE, 1, -1.0)
    with pytest.raises(BoundsError):
        parity_partial(TABLE, TABLE.limit + 1, -1.0)


def test_checkpoint_layout():
    cps = checkpoint_indices(1, 1000, 1.25, dense_windows=((500, 510),))
    assert np.all(np.diff(cps) > 0)
    assert cps[0] == 1 and cps[-1] == 1000
    assert set(range(500, 511)) <= set(cps.tolist())
    with pytest.raises(ValueError):
        checkpoint_indices(1, 100, explicit=np.array([101]))


def test_average_constant_fixed_point():
    tr = PartialSumTrace(
        indices=np.arange(1, 6),
        values=np.full(5, 3.25, dtype=complex),
        compensations=np.zeros(5, dtype=complex),
        phase=-1.0,
        start_index=1,
    )
    av = average_consecutive(tr)
    assert np.allclose(av.values, 3.25)
    assert av.indices.tolist() == [1, 2, 3, 4]


def test_average_alternating():
    tr = PartialSumTrace(
        indices=np.array([1, 2, 3]),
        values=np.array([1.0, -1.0, 1.0], dtype=complex),
        compensations=np.zeros(3, dtype=complex),
        phase=-1.0,
        start_index=1,
    )
    assert average_consecutive(tr).values.tolist() == [0.0, 0.0]


def test_average_sparse_rejected():
    tr = PartialSumTrace(
        indices=np.array([1, 10, 100]),
        values=np.zeros(3, dtype=complex),
        compensations=np.zeros(3, dtype=complex),
        phase=-1.0,
        start_index=1,
    )
    with pytest.raises(ValueError):
        average_consecutive(tr)


def test_averaged_anchor_at_1e6(big_table):
    n = 10**6
    tr = erdos_partial(big_table, n + 1, -1.0, dense_windows=((n, n + 1),))
    av = average_consecutive(tr)
    assert av.value_at(n).real == pytest.approx(-0.052161, abs=2e-2)


def test_oscillation_reduction(big_table):
    from erdoslab.calibration import load_fixture

    raw, avg = oscillation_stats(big_table, 10**5, 10**7, -1.0)
    ratio = avg / raw
    assert ratio <= 0.10
    assert ratio <= load_fixture()["series"]["oscillation_ratio_bound"]


def test_equivalence_repeated_x(big_table):
    rep = verify_equivalence(big_table, [10**5, 10**5], -1.0)
    assert rep.max_pairwise_spread(top_half=False) == 0.0


def test_equivalence_phase_minus_one(big_table):
    rep = verify_equivalence(big_table, [10**5, 3 * 10**5, 10**6], -1.0)
    assert rep.max_pairwise_spread(top_half=False) < 1e-1
    # factor z/(z-1) at z = -1 is 1/2
    assert rep.rhs[0] == pytest.approx(
        0.5 * parity_partial(big_table, int(1e5 * math.log(1e5)), -1.0).final_value.real,
        rel=1e-12,
    )


def test_equivalence_phase_i(big_table):
    rep = verify_equivalence(big_table, [10**5, 10**6], 1j)
    assert rep.max_pairwise_spread(top_half=False) < 2e-1


def test_equivalence_errors(big_table):
    with pytest.raises(ValueError):
        verify_equivalence(big_table, [10**5], 1.0)
    small = build_table(1000)
    with pytest.raises(BoundsError):
        verify_equivalence(small, [10**5], -1.0)


def test_trace_csv_json_roundtrip(tmp_path):
    tr = erdos_partial(TABLE, 100, -1.0)
    csv_path = tr.to_csv(tmp_path / "t.csv", header="probe")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "# probe"
    assert lines[1] == "index,value_re,value_im,compensation"
    assert len(lines) == 2 + len(tr)
    import json

    doc = json.loads(tr.to_json(tmp_path / "t.json").read_text())
    assert len(doc["rows"]) == len(tr)
    assert doc["rows"][-1]["index"] == 100
