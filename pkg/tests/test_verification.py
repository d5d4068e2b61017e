import math

from pcapmono.verification import ACCEPTANCE, REGISTRY, CheckResult, Context, run_checks


def test_every_criterion_is_registered():
    assert sorted(ACCEPTANCE) == list(range(1, 13))
    names = [n for n, _ in REGISTRY]
    assert len(names) == len(set(names))
    assert set(ACCEPTANCE.values()) <= set(names)


def test_seed_changes_points_not_verdicts():
    a = run_checks({"k-solve", "capacity-round-trip"}, seed=1)
    b = run_checks({"k-solve", "capacity-round-trip"}, seed=2)
    assert [r.passed for r in a] == [r.passed for r in b] == [True, True]
    assert a[0].measured != b[0].measured or a[1].measured != b[1].measured


def test_rng_streams_are_per_check():
    x = Context(seed=5, index=3).rng().random()
    y = Context(seed=5, index=4).rng().random()
    assert x != Context(seed=6, index=3).rng().random() and x != y
    assert x == Context(seed=5, index=3).rng().random()


def test_crash_becomes_failure(monkeypatch):
    import pcapmono.verification as v

    def boom(ctx):
        raise RuntimeError("kaput")

    monkeypatch.setattr(v, "REGISTRY", [("boom", boom)])
    [res] = v.run_checks()
    assert not res.passed and "kaput" in res.detail and math.isnan(res.measured)
    assert res.as_dict()["measured"] == "nan"


def test_result_line():
    line = CheckResult("x", True, 1e-12, 1e-9, "ok").line()
    assert line.startswith("PASS") and "1.000e-12" in line
