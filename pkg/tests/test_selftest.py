from schiffer_lab import selftest
from schiffer_lab.utils.exceptions import PeriodMatrixError


def test_failing_check_is_reported(mocker):
    mocker.patch.dict(selftest.CHECKS, {"genus2_riemann": mocker.Mock(side_effect=PeriodMatrixError("broken"))},
                      clear=True)
    results = selftest.run_selftest()
    assert results == [{"check": "genus2_riemann", "ok": False, "detail": str(PeriodMatrixError("broken"))}]


def test_individual_checks():
    for name in ("genus1_modulus", "theta_square_lattice", "lll_example", "rank_one_update"):
        ok, detail = selftest.CHECKS[name]()
        assert ok, f"{name}: {detail}"
