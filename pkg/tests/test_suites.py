import math

import pytest

from charsum.report import report_json
from charsum.suites import SUITES, candidate_moduli, characters_for, make_config, run_suite

# small configurations that keep every suite quick
SMALL = {
    "orthogonality": {"q_max": 30},
    "pair-count": {"q_max": 60, "samples": 8},
    "passto-pow": {"q_max": 30},
    "et-level": {"q_max": 30},
    "ft-correlation": {"moduli": [7, 13], "k_max": 2, "z": 12.0, "x_list": [1000]},
    "variance-delta": {"samples": 4, "M": 200},
    "fourier": {"V": 10_000, "grid_points": 500},
    "hmt": {"q_max": 400, "n_moduli": 2},
    "gslog": {"q_max": 400, "n_moduli": 2},
    "tk": {"q_max": 1200, "n_moduli": 1},
    "structure": {"q_max": 120, "n_moduli": 2},
    "thm1": {"q_max": 1100, "n_moduli": 2},
    "thm2": {"q_max": 1100, "n_moduli": 2},
    "thm4": {"q_max": 1100, "n_moduli": 1},
}


def test_every_suite_has_a_small_config():
    assert set(SMALL) == set(SUITES)


@pytest.mark.parametrize("name", list(SUITES))
def test_suite_runs_and_is_deterministic(name):
    cfg = make_config(name, **SMALL[name])
    a = report_json(run_suite(cfg, workers=1))
    b = report_json(run_suite(cfg, workers=1))
    assert a == b
    rep = run_suite(cfg, workers=1)
    assert rep["summary"]["n"] > 0
    if SUITES[name].hard:
        assert rep["summary"]["failures"] == 0
    else:
        assert all(r["pass"] in (None, True) for r in rep["rows"] if r.get("kind") != "pow2")
    for r in rep["rows"]:
        assert {"lhs", "rhs", "ratio", "pass"} <= set(r)


@pytest.mark.parametrize("name", ["orthogonality", "thm1", "pair-count"])
def test_parallel_matches_serial(name):
    cfg = make_config(name, **SMALL[name])
    assert report_json(run_suite(cfg, workers=1)) == report_json(run_suite(cfg, workers=2))


def test_family_filters():
    cfg = make_config("thm1", q_max=3000, n_moduli=5)
    qs = candidate_moduli(cfg)
    assert len(qs) == 5 and qs == sorted(qs)
    assert all(1000 <= q <= 3000 and all(q % p for p in range(2, math.isqrt(q) + 1)) for q in qs)
    for q in qs:
        chars = characters_for(cfg, q)
        assert 0 < len(chars) <= 2
        assert all(c.order >= 30 and c.is_primitive for c in chars)
    assert candidate_moduli(make_config("orthogonality", moduli=[9, 4])) == [4, 9]


def test_seed_changes_sample():
    a = candidate_moduli(make_config("thm1", n_moduli=5))
    b = candidate_moduli(make_config("thm1", n_moduli=5, seed=99))
    assert a != b


def test_unknown_suite():
    with pytest.raises(KeyError):
        make_config("nope")
