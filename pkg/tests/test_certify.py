import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app.certify import (
    UNCERTIFIED,
    certificate,
    distance_to_witness,
    gap_oracle,
    theorem_bound,
)
from app.errors import DimensionError, MissingWitnessError
from app.problems import build_problem
from app.solvers import Criterion, SolverConfig, Termination, solve

# constants of the reference HpHard instance
L_F = 6.125326
M_G = 6.22351


@pytest.mark.parametrize("alg, expected", [
    (1, "0.05"), (2, "0.05"), (3, "0.05"), (7, "0.05"),
    (4, "0.306"), (5, "0.306"),
    (6, "0.0492"),
])
def test_criterion1_estimates(alg, expected):
    accuracy, switching = theorem_bound(alg, 1, I=120, J=40, sum_invF2=3.0, sum_invG2=1.0,
                                        eps=0.05, L_F=L_F, M_g=M_G, D=2.0)
    assert switching == 0.0
    assert f"{accuracy:.3g}" == expected


def test_criterion2_switching_terms():
    kw = dict(I=10, J=5, sum_invF2=4.0, sum_invG2=2.0, eps=0.05, L_F=2.0, M_g=3.0, D=2.0)
    assert theorem_bound(1, 2, **kw)[1] == pytest.approx(2.0 * 4.0 * 5 / (3.0 * 10))
    assert theorem_bound(2, 2, **kw)[1] == pytest.approx(3.0 * 2.0 * 2.0 / 4.0)
    assert theorem_bound(3, 2, **kw)[1] == pytest.approx(2.0 * 5 / 4.0)
    assert theorem_bound(4, 2, **kw)[1] == pytest.approx(3.0 * 2.0 * 2.0 * 2.0 / 10)
    assert theorem_bound(5, 2, **kw)[1] == pytest.approx(2.0 * 2.0 * 5 / 10)
    assert theorem_bound(6, 2, **kw)[1] == pytest.approx(2.0 * 2.0 * 5 / (3.0 * 10))
    assert theorem_bound(7, 2, **kw)[1] == pytest.approx(5 * 3.0 * 2.0 / 10)
    # no non-productive steps: criterion 2 collapses to criterion 1
    kw["J"] = 0
    assert theorem_bound(5, 2, **kw) == (0.05 * 2.0, 0.0)


def test_certificate_shifts_by_delta():
    problem = build_problem({"kind": "hphard", "n": 5, "m": 3, "seed": 2})
    for alg in (1, 4, 7):
        base = SolverConfig(algorithm=alg, criterion=Criterion.TWO, eps=0.1)
        shifted = SolverConfig(algorithm=alg, criterion=Criterion.TWO, eps=0.1, delta=0.01)
        r0, r1 = solve(problem, base), solve(problem, shifted)
        c0, c1 = certificate(r0, problem, base), certificate(r1, problem, shifted)
        assert r0.iterations == r1.iterations
        assert c1.gap_bound - c0.gap_bound == pytest.approx(0.01, abs=1e-12)
        assert c1.components["delta"] == 0.01
        assert all(v >= 0 for v in c1.components.values())


def test_certificate_uncertified_on_max_iter():
    problem = build_problem({"kind": "hphard", "n": 5, "m": 3, "seed": 2, "start_radius": 0.0})
    config = SolverConfig(algorithm=2, criterion=Criterion.ONE, eps=0.05, max_iter=2)
    result = solve(problem, config)
    assert result.termination is Termination.MAX_ITER
    cert = certificate(result, problem, config)
    assert cert is UNCERTIFIED
    assert not cert.certified


def test_gap_oracle_zero_operator():
    problem = build_problem({"kind": "custom", "n": 2, "operator": {"type": "affine", "matrix": [[0, 0], [0, 0]]}})
    assert gap_oracle(problem, np.array([0.3, -0.2]), 50) == 0.0


def test_gap_oracle_identity_in_1d():
    problem = build_problem({"kind": "custom", "n": 1, "operator": {"type": "affine", "matrix": [[1.0]]}})
    assert gap_oracle(problem, np.zeros(1), 401) == pytest.approx(0.0, abs=1e-12)
    # x_hat = 0.5: max_x x (0.5 - x) = 1/16 at x = 0.25
    assert gap_oracle(problem, np.array([0.5]), 401) == pytest.approx(1.0 / 16.0, abs=1e-9)


def test_gap_oracle_rejects_high_dimension():
    problem = build_problem({"kind": "hphard", "n": 4, "m": 1, "seed": 1})
    with pytest.raises(DimensionError):
        gap_oracle(problem, np.zeros(4), 10)


def _binding_problem():
    # unconstrained solution -q lies outside x0 + x1 >= 0.2, and so does the start 0
    return build_problem({
        "kind": "custom", "n": 2,
        "operator": {"type": "affine", "matrix": [[1, 0], [0, 1]], "offset": [0.8, 0.6]},
        "constraints": {"a": [[-1.0, -1.0]], "b": [-0.2]},
    })


@pytest.mark.parametrize("alg", [1, 2, 3, 4, 5, 6, 7])
def test_gap_oracle_below_certificate_with_active_constraint(alg):
    problem = _binding_problem()
    config = SolverConfig(algorithm=alg, criterion=Criterion.TWO, eps=0.05)
    result = solve(problem, config)
    assert result.termination is Termination.CRITERION2
    assert result.J_count > 0
    cert = certificate(result, problem, config)
    assert cert.components["switching"] > 0.0
    assert gap_oracle(problem, result.x_hat, 400) <= result.certified_bound + 1e-6


@pytest.mark.parametrize("alg", [1, 2, 3, 4, 5, 6, 7])
def test_gap_oracle_below_certificate_in_2d(alg):
    problem = build_problem({"kind": "hphard", "n": 2, "m": 1, "seed": 7})
    config = SolverConfig(algorithm=alg, criterion=Criterion.ONE, eps=0.05)
    result = solve(problem, config)
    assert result.termination is Termination.CRITERION1
    assert gap_oracle(problem, result.x_hat, 400) <= result.certified_bound + 1e-6


def test_gap_oracle_below_certificate_on_simplex():
    problem = build_problem({
        "kind": "custom", "n": 3, "geometry": "entropy", "start": [0.6, 0.3, 0.1],
        "operator": {"type": "affine", "matrix": [[1, 1, -1], [-1, 1, 1], [1, -1, 1]]},
    })
    result = solve(problem, SolverConfig(algorithm=2, criterion=Criterion.TWO, eps=0.05))
    assert gap_oracle(problem, result.x_hat, 200) <= result.certified_bound + 1e-6


def test_distance_to_witness():
    problem = build_problem({"kind": "hphard", "n": 2, "m": 1, "seed": 1})
    assert distance_to_witness(problem, np.zeros(2)) == 0.0
    assert distance_to_witness(problem, np.array([0.1, 0.0])) == pytest.approx(0.1)
    custom = build_problem({"kind": "custom", "n": 2, "operator": {"type": "affine", "matrix": [[1, 0], [0, 1]]}})
    with pytest.raises(MissingWitnessError):
        distance_to_witness(custom, np.zeros(2))
