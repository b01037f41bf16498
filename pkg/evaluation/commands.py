"""
Back end of the command-line interface: every cmd_* function takes the effective configuration,
writes its files under `out` and returns a process exit code.
"""
import os
import time
from contextlib import contextmanager
from functools import partial

from classification.Classifier import Classifier
from centermanifold.center_manifold import biaxial_expansion_check, coefficients_json, solve_center_poly
from dynamics import logs
from dynamics.ShootParams import ShootParams
from dynamics.exceptions import DomainError, ReconstructionError, SearchError, ValidationError
from dynamics.logs import create_logger
from evaluation.Evaluator import Evaluator
from evaluation.RunManifest import RunManifest
from evaluation.exporters import ensure_directory, slug, to_jsonable, write_json
from geometry.profiles import reconstruct_profile
from search.CriticalSearch import CriticalSearch
from search.Shooter import Shooter
from search.SweepOrchestrator import SweepOrchestrator
from search.verification import acceptable_pattern, verify_soliton_candidate

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_SEARCH_FAILED = 3
EXIT_VALIDATION_FAILED = 4

logger = create_logger(__name__)


def make_shooter(config):
    return Shooter(epsilon=config["startup"]["epsilon"], handoff_radius=config["startup"]["handoff_radius"],
                   rtol=config["integrator"]["rtol"], atol=config["integrator"]["atol"],
                   blow_up_bound=config["integrator"]["blow_up_bound"], y_ball=config["center_manifold"]["radius"],
                   max_steps=config["integrator"]["max_steps"], series_order=config["startup"]["series_order"])


def make_classifier(config):
    return Classifier(**config["classifier"])


def make_search(config, lam=0.0):
    search = config["search"]
    return CriticalSearch(make_shooter(config), make_classifier(config), horizon=search["horizon"],
                          horizon_cap=search["horizon_cap"], max_iterations=search["max_iterations"], lam=lam,
                          min_seed_width=search["min_seed_width"], widen_factor=search["widen_factor"])


@contextmanager
def _timed(manifest: RunManifest, enabled, label):
    start = time.perf_counter()
    yield
    if enabled:
        manifest.timings[label] = time.perf_counter() - start


def _start(command, config, parameters):
    logs.configure(**config["logging"])
    out = ensure_directory(config["output"]["directory"])
    manifest = RunManifest(command=command, parameters=to_jsonable(parameters), config=to_jsonable(config))
    return out, manifest, partial(_timed, manifest, config["output"]["record_timings"])


def _finish(out, manifest: RunManifest, code):
    manifest.results["exit_code"] = code
    manifest.write(os.path.join(out, "manifest.json"))
    return code


def cmd_shoot(config, n, alpha, beta, gamma=0.0, lam=0.0):
    horizon = config["search"]["horizon"]
    out, manifest, timed = _start("shoot", config, {"n": n, "alpha": alpha, "beta": beta, "gamma": gamma,
                                                    "lambda": lam, "horizon": horizon})
    params = ShootParams(n=n, alpha=alpha, beta=beta, gamma=gamma, lam=lam)
    with timed("shoot"):
        shot = make_shooter(config).shoot(params, horizon)
        classifier = make_classifier(config)
        classification = classifier.classify(shot.main)
    manifest.add_output(shot.startup.to_csv(os.path.join(out, "startup.csv")))
    manifest.add_output(shot.main.to_csv(os.path.join(out, "trajectory.csv")))
    try:
        profile = reconstruct_profile(shot.main)
        manifest.add_output(profile.to_csv(os.path.join(out, "profile.csv")))
    except ReconstructionError as error:
        logger.warning(f"Profile not written: {error}")
    manifest.classifications.append(classification.to_dict())
    manifest.results.update({"f_sign": classifier.f_sign(shot.main, classification),
                             "trajectory": shot.main.to_dict()})
    logger.info(f"Verdict: {classification.verdict.value}")
    return _finish(out, manifest, EXIT_OK)


def cmd_find_critical(config, n, gamma=0.0, lam=0.0):
    tol = config["search"]["tol"]
    out, manifest, timed = _start("find-critical", config, {"n": n, "gamma": gamma, "lambda": lam, "tol": tol})
    search = make_search(config, lam)
    try:
        with timed("search"):
            bracket = search.find_critical(n, gamma, tol)
    except SearchError as error:
        manifest.results["error"] = str(error)
        return _finish(out, manifest, EXIT_SEARCH_FAILED)
    manifest.results["bracket"] = bracket.to_dict()
    manifest.classifications.extend([bracket.lo_class.to_dict(), bracket.hi_class.to_dict()])
    if config["search"]["verify"]:
        with timed("verify"):
            report = verify_soliton_candidate(bracket, search.shooter, search.classifier,
                                              horizon=config["search"]["verify_horizon"])
        manifest.results["verification"] = report.to_dict()
        manifest.results["pattern_ok"] = acceptable_pattern(report)
        manifest.add_output(report.shot.main.to_csv(os.path.join(out, "midpoint.csv")))
        if report.profile is not None:
            manifest.add_output(report.profile.to_csv(os.path.join(out, "midpoint_profile.csv")))
    manifest.add_output(write_json(os.path.join(out, "bracket.json"), bracket.to_dict()))
    return _finish(out, manifest, EXIT_OK)


def cmd_sweep(config, n, gammas):
    search_config = config["search"]
    tol = search_config["tol"]
    out, manifest, timed = _start("sweep", config, {"n": n, "gammas": list(gammas), "tol": tol})
    orchestrator = SweepOrchestrator(make_search(config), mode=search_config["mode"],
                                     n_workers=search_config["n_workers"], verify=search_config["verify"],
                                     verify_horizon=search_config["verify_horizon"])
    with timed("sweep"):
        results = orchestrator.sweep_gamma(n, gammas, tol)
    for result in results:
        if result.report is not None:
            path = os.path.join(out, f"midpoint_gamma_{slug(result.gamma)}.csv")
            manifest.add_output(result.report.shot.main.to_csv(path))
    manifest.results["slices"] = [result.to_dict() for result in results]
    code = EXIT_OK if all(result.ok for result in results) else EXIT_SEARCH_FAILED
    return _finish(out, manifest, code)


def cmd_validate(config):
    out, manifest, timed = _start("validate", config, {})
    try:
        with timed("validate"):
            report = Evaluator().evaluate(out=manifest.add_output(os.path.join(out, "validation.json")), strict=True)
    except ValidationError as error:
        logger.error(f"Validation failed on '{error.check}': {error}")
        manifest.results.update({"passed": False, "failed": error.failed})
        return _finish(out, manifest, EXIT_VALIDATION_FAILED)
    manifest.results.update({"passed": report["passed"], "failed": report["failed"]})
    return _finish(out, manifest, EXIT_OK)


def cmd_center_poly(config, degree=None):
    degree = config["center_manifold"]["degree"] if degree is None else degree
    out, manifest, timed = _start("center-poly", config, {"degree": degree})
    with timed("solve"):
        poly = solve_center_poly(degree)
    coefficients_json(poly, manifest.add_output(os.path.join(out, "center_poly.json")))
    manifest.results["biaxial_expansion"] = biaxial_expansion_check(poly)
    manifest.results["swap_symmetric"] = poly.is_swap_symmetric()
    return _finish(out, manifest, EXIT_OK)


def run(command, config, **kwargs):
    """Calls cmd_<command> and maps the exception hierarchy to exit codes."""
    handler = COMMANDS[command]
    try:
        return handler(config, **kwargs)
    except DomainError as error:
        logger.error(f"Bad input: {error}")
        return EXIT_BAD_INPUT
    except SearchError as error:
        logger.error(f"Search failed: {error}")
        return EXIT_SEARCH_FAILED
    except ValidationError as error:
        logger.error(f"Validation failed on '{error.check}': {error}")
        return EXIT_VALIDATION_FAILED


COMMANDS = {
    "shoot": cmd_shoot,
    "find-critical": cmd_find_critical,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
    "center-poly": cmd_center_poly,
}
