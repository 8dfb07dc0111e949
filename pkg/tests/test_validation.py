"""Validation harness: random cometric generation, suite registry, reporting."""

import numpy as np
import pytest

from cometric import charts, validation
from cometric.validation import SUITES, TOLERANCES, render_table, run_suites


def test_random_cometrics_are_spd_at_their_test_point():
    rng = np.random.default_rng(5)
    for _ in range(25):
        dim = int(rng.integers(2, 5))
        defn, x0 = validation.random_cometric(rng, dim)
        jet = charts.cometric_jet(defn, x0)
        eigs = np.linalg.eigvalsh(jet.ginv)
        assert eigs.min() > 0
        assert np.allclose(jet.ginv, jet.ginv.T)


def test_registry_covers_every_tolerance():
    assert len(SUITES) == 10
    used = set()
    results = run_suites(quick=True)
    assert len(results) == 10
    for result in results:
        used.add(result.name)
    assert used == set(SUITES)


def test_unknown_suite_and_tolerance_rejected():
    with pytest.raises(KeyError):
        run_suites(["no_such_suite"])
    with pytest.raises(KeyError):
        run_suites(["kernel_oracle"], overrides={"no_such_tol": 1.0}, quick=True)


def test_override_can_fail_a_suite():
    results = run_suites(["kernel_oracle"], overrides={"kernel_oracle": 1e-30}, quick=True)
    assert len(results) == 1
    assert not results[0].passed
    # default tolerance passes
    ok = run_suites(["kernel_oracle"], quick=True)
    assert ok[0].passed


def test_overrides_do_not_leak():
    before = dict(TOLERANCES)
    run_suites(["kernel_oracle"], overrides={"kernel_oracle": 1e-30}, quick=True)
    assert TOLERANCES == before


def test_threads_give_same_verdicts():
    serial = run_suites(["kernel_oracle", "m0_reduction"], quick=True)
    threaded = run_suites(["kernel_oracle", "m0_reduction"], threads=4, quick=True)
    assert [(r.name, r.passed, r.detail) for r in serial] == [
        (r.name, r.passed, r.detail) for r in threaded
    ]


def test_render_table():
    results = run_suites(["kernel_oracle"], quick=True)
    text = render_table(results)
    assert "kernel_oracle" in text
    assert "PASS" in text
    assert "all suites passed" in text
    failed = run_suites(["kernel_oracle"], overrides={"kernel_oracle": 1e-30}, quick=True)
    text = render_table(failed)
    assert "FAIL" in text
    assert "1 suite(s) FAILED" in text
