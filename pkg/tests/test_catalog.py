import math

import pytest

from tsvf import catalog


@pytest.mark.parametrize("name", sorted(catalog.EXAMPLES))
def test_every_claim_passes(name):
    results = catalog.run_example(catalog.EXAMPLES[name](), catalog.RunContext(trials=50_000, seed=11))
    assert results
    failed = [(r.label, r.actual, r.expected, r.tolerance) for r in results if not r.passed]
    assert not failed


@pytest.mark.parametrize("name", sorted(catalog.EXAMPLES))
def test_claims_have_references(name):
    ex = catalog.EXAMPLES[name]()
    assert ex.name == name
    for c in ex.claims:
        assert c.anchor and c.label and c.tolerance >= 0


def test_simulation_cached_per_context():
    ctx = catalog.RunContext(trials=1000, seed=1)
    ex = catalog.shimony_pair()
    a = ctx.simulate("forward", ex.scenarios["forward"])
    assert ctx.simulate("forward", ex.scenarios["forward"]) is a


def test_failing_claim_is_reported():
    claim = catalog.Claim("wrong", 2.0, 1e-12, "deliberately wrong", lambda ctx: 1.0)
    ex = catalog.NamedExample("x", catalog.three_box().description, {}, (claim,))
    (r,) = catalog.run_example(ex, catalog.RunContext(trials=10))
    assert not r.passed and r.error == 1.0


def test_missing_element_of_reality_fails_cleanly():
    r = catalog.ClaimResult("x", 1.0, catalog._or_nan(None), 0.0, "")
    assert math.isnan(r.error) and not r.passed


def test_statistical_claim_band_scales_with_trials():
    ex = catalog.spin_xy()
    mc = next(c for c in ex.claims if c.label.startswith("MC"))
    _, tol_small = mc.compute(catalog.RunContext(trials=10_000, seed=3))
    _, tol_large = mc.compute(catalog.RunContext(trials=40_000, seed=3))
    assert tol_large == pytest.approx(tol_small / 2, rel=0.05)
