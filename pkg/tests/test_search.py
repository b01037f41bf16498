import numpy as np
import pytest
from numpy.testing import assert_allclose

from classification.Classification import Classification, Pattern, Verdict
from classification.Classifier import Classifier
from dynamics import equations
from dynamics.ShootParams import ShootParams
from dynamics.exceptions import DomainError, SearchError
from evaluation.functions.validation_checks import biaxial_conservation
from integrator.EventSpec import Chart, EventKind
from integrator.integrator import integrate
from search.CriticalBracket import CriticalBracket
from search.CriticalSearch import CriticalSearch
from search.Shooter import Shooter
from search.SweepOrchestrator import SweepOrchestrator
from search.verification import verify_soliton_candidate


@pytest.fixture(scope="module")
def shooter():
    return Shooter()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_einstein_launch_loses_completeness(shooter, n):
    shot = shooter.shoot(ShootParams(n=n, alpha=0.0, beta=1.0), horizon=100.0)
    assert shot.main.has_event(EventKind.XI_ZERO)
    assert Classifier().classify(shot.main).verdict is Verdict.INCOMPLETE_XI_NEGATIVE


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2])
def test_low_order_einstein_launch_stays_complete(shooter, n):
    shot = shooter.shoot(ShootParams(n=n, alpha=0.0, beta=1.0), horizon=100.0)
    assert not shot.main.has_event(EventKind.XI_ZERO)


def test_shot_legs_join_at_handoff(shooter):
    shot = shooter.shoot(ShootParams(n=3, alpha=1.0, beta=0.0), horizon=5.0)
    assert shot.startup.final_time == pytest.approx(0.05)
    assert shot.main.times[0] == shot.startup.final_time
    assert shot.main.clock[0] == 0.0
    assert shot.main.final_clock == pytest.approx(5.0, abs=1e-9)
    radii = np.linspace(1e-4, shot.main.final_time, 50)
    assert shot.resample_primal(radii).shape == (50, 7)


def test_biaxial_conservation_over_fifty(shooter):
    shot = shooter.shoot(ShootParams(n=3, alpha=1.0, beta=0.0), horizon=50.0)
    assert shot.main.conserved_drift("C", 0.0, 50.0) < 1e-8


def test_einstein_branch_keeps_z_zero(shooter):
    shot = shooter.shoot(ShootParams(n=4, alpha=0.0, beta=1.0), horizon=60.0)
    assert shot.startup.relative_residual("Z") < 1e-6
    assert shot.main.relative_residual("Z") < 1e-6


@pytest.mark.slow
def test_full_system_on_biaxial_launch_matches_reduction():
    params = ShootParams.on_arc(4, 0.05)
    startup = Shooter(rtol=1e-13, atol=1e-15).shoot(params, horizon=1.0).startup
    r0, y0 = startup.final_time, equations.as_seven(startup.final_state)
    common = dict(rtol=1e-13, atol=1e-15, t0=r0, chart=Chart.PRIMAL, params=params, clock=0.0)
    full = integrate(equations.primal_field, y0, 30.0, **common)
    reduced = integrate(equations.biaxial_primal_field, equations.restrict_biaxial(y0), 30.0, **common)
    assert not full.terminated and not reduced.terminated
    radii = np.linspace(r0, min(full.final_time, reduced.final_time), 400)
    compact_full = equations.primal_array_to_compact(full.resample(radii)[0])
    compact_reduced = equations.primal_array_to_compact(equations.as_seven(reduced.resample(radii)[0]))
    assert_allclose(compact_full, compact_reduced, rtol=0, atol=1e-10)


def test_gamma_mirror_symmetry(shooter):
    plus = shooter.shoot(ShootParams.on_arc(4, 0.3, gamma=0.02), horizon=10.0)
    minus = shooter.shoot(ShootParams.on_arc(4, 0.3, gamma=-0.02), horizon=10.0)
    radii = np.linspace(1e-3, min(plus.main.final_time, minus.main.final_time), 40)
    assert_allclose(equations.swap23(plus.resample_primal(radii)), minus.resample_primal(radii), rtol=1e-8, atol=1e-9)


def test_tightened_shooter():
    tight = Shooter().tightened(10.0)
    assert tight.rtol == pytest.approx(1e-11)
    assert tight.atol == pytest.approx(1e-13)


def test_search_rejects_gamma_off_n4():
    with pytest.raises(DomainError):
        CriticalSearch().find_critical(3, gamma=0.1)


class StubSearch(CriticalSearch):
    """Critical search answering from a table instead of integrating."""

    def __init__(self):
        super().__init__()
        self.seeds = {}

    def find_critical(self, n, gamma=0.0, tol=1e-9, seed=None):
        self.seeds[gamma] = seed
        if gamma < 0:
            raise SearchError(f"no sign change for gamma={gamma}")
        done = Classification(Verdict.COMPLETE, time=60.0)
        return CriticalBracket(n=n, gamma=gamma, lo=0.5 - tol / 4, hi=0.5 + tol / 4, lo_class=done, hi_class=done,
                               tol=tol, iterations=1, history=((0.0, 1.0),))


@pytest.mark.parametrize("mode", ["sequential", "thread"])
def test_sweep_keeps_input_order(mode):
    search = StubSearch()
    sweep = SweepOrchestrator(search, mode=mode, verify=False, progress=False)
    results = sweep.sweep_gamma(4, [0.02, -0.01, 0.0, 0.02], tol=1e-6)
    assert [r.gamma for r in results] == [0.02, -0.01, 0.0, 0.02]
    assert not results[1].ok
    assert "no sign change" in results[1].error
    assert results[0].ok and results[2].ok and results[3].ok
    assert results[0].to_dict()["bracket"]["width"] == pytest.approx(5e-7)
    assert search.seeds[0.0] is None
    assert search.seeds[0.02] == (results[2].bracket.lo, results[2].bracket.hi)
    assert search.seeds[-0.01] == search.seeds[0.02]


def test_sweep_without_gamma_zero_still_seeds():
    search = StubSearch()
    results = SweepOrchestrator(search, mode="sequential", verify=False, progress=False).sweep_gamma(4, [0.01])
    assert len(results) == 1 and results[0].gamma == 0.01
    assert search.seeds[0.01] is not None


def test_sweep_rejects_gamma_off_n4():
    with pytest.raises(DomainError):
        SweepOrchestrator(StubSearch(), verify=False, progress=False).sweep_gamma(3, [0.0, 0.01])


def test_sweep_mode_is_validated():
    with pytest.raises(DomainError):
        SweepOrchestrator(StubSearch(), mode="cluster")


@pytest.mark.slow
def test_eguchi_hanson_end_has_no_sign_change():
    with pytest.raises(SearchError):
        CriticalSearch().find_critical(2)


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4])
def test_critical_bracket(n):
    search = CriticalSearch()
    bracket = search.find_critical(n, tol=1e-9)
    assert bracket.resolved
    assert bracket.width < 1e-9
    assert 0.0 < bracket.lo < bracket.hi < 1.0
    assert search.classifier.sign(bracket.lo_class) == 1
    assert search.classifier.sign(bracket.hi_class) == -1
    nested = all(lo0 <= lo1 and hi1 <= hi0 for (lo0, hi0), (lo1, hi1) in zip(bracket.history, bracket.history[1:]))
    assert nested
    report = verify_soliton_candidate(bracket, search.shooter, search.classifier)
    assert not report.unresolved
    assert report.pattern is Pattern.ALL_ZERO
    assert report.xi_limit > 0
    if n == 3:
        assert bracket.midpoint == pytest.approx(0.3780, abs=5e-4)


def test_sign_structure_on_the_arc():
    search = CriticalSearch()
    assert [search.sample(3, 0.0, t).sign for t in (0.0, 0.1, 0.9, 1.0)] == [1, 1, -1, -1]


@pytest.mark.slow
def test_bracket_survives_tighter_tolerances():
    loose = CriticalSearch().find_critical(3, tol=1e-7)
    tight = CriticalSearch(shooter=Shooter().tightened(10.0)).find_critical(3, tol=1e-7)
    assert abs(loose.midpoint - tight.midpoint) < 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("gamma", [0.01, 0.02])
def test_off_axis_solitons_mirror(gamma):
    sweep = SweepOrchestrator(mode="sequential", progress=False)
    plus, minus = sweep.sweep_gamma(4, [gamma, -gamma], tol=1e-9)
    assert plus.ok and minus.ok, (plus.error, minus.error)
    mirrored = {Pattern.PAIR12: Pattern.PAIR13, Pattern.PAIR13: Pattern.PAIR12}
    for result in (plus, minus):
        assert result.report.classification.best_pair in mirrored
        assert result.report.classification.pattern_score < 0.02
    assert plus.bracket.midpoint == pytest.approx(minus.bracket.midpoint, abs=1e-6)
    assert minus.report.classification.best_pair is mirrored[plus.report.classification.best_pair]
    y_plus, y_minus = plus.report.classification.y_limits, minus.report.classification.y_limits
    assert_allclose([y_plus[0], y_plus[2], y_plus[1]], y_minus, atol=1e-6)


def test_unknown_parameters_are_rejected():
    with pytest.raises(DomainError):
        Shooter(rtoll=1.0)
    with pytest.raises(DomainError):
        CriticalSearch(horizn=1.0)


def test_biaxial_conservation_check():
    drift, details = biaxial_conservation()
    assert drift < 1e-8, details


def test_subcritical_run_keeps_y1_below_y2(shooter):
    shot = shooter.shoot(ShootParams.on_arc(3, 0.05), horizon=60.0)
    assert not shot.main.terminated
    y = equations.as_seven(shot.main.states)
    assert np.all(y[:, 4] <= y[:, 5])


@pytest.mark.slow
def test_xi_limit_matches_conserved_quantity(shooter):
    shot = shooter.shoot(ShootParams.on_arc(3, 0.05), horizon=240.0)
    C = shot.main.conserved_table[0][0]
    assert C < 0
    classification = Classifier().classify(shot.main)
    assert classification.verdict is Verdict.COMPLETE
    assert classification.xi_limit == pytest.approx(np.sqrt(-C), abs=1e-4)
    assert np.sqrt(-C) == pytest.approx(1.4120, abs=1e-3)
