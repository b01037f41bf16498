import json

from dynamics.exceptions import ValidationError
from dynamics.logs import create_logger
from evaluation.exporters import to_jsonable
from evaluation.functions.validation_checks import biaxial_conservation, center_biaxial_expansion, \
    center_quadratic, eguchi_hanson_residual, einstein_residual, residual_convergence, taub_bolt_residual


class Evaluator:
    """Runs the validation checks; bounds are closed intervals [low, high] on the measured value."""

    checks = [
        {'check_func': taub_bolt_residual, 'bounds': (0.0, 1e-6), 'name': "Taub-Bolt soliton residual"},
        {'check_func': eguchi_hanson_residual, 'bounds': (0.0, 1e-6), 'name': "Eguchi-Hanson soliton residual"},
        {'check_func': residual_convergence, 'bounds': (10.0, 24.0), 'name': "Residual ratio under grid halving"},
        {'check_func': biaxial_conservation, 'bounds': (0.0, 1e-8), 'name': "Biaxial C drift, n=3"},
        {'check_func': einstein_residual, 'bounds': (0.0, 1e-6), 'name': "Einstein residual Z, n=4, alpha=0"},
        {'check_func': center_quadratic, 'bounds': (0.0, 1e-8), 'name': "Quadratic center-manifold coefficients"},
        {'check_func': center_biaxial_expansion, 'bounds': (0.0, 0.0), 'name': "Biaxial center-manifold expansion"},
    ]

    def __init__(self, checks=None):
        if checks is not None:
            self.checks = checks
        self.logger = create_logger(f"{self.__module__}.{self.__class__.__name__}")

    def run_check(self, check):
        low, high = check['bounds']
        try:
            value, details = check['check_func']()
            passed = bool(low <= value <= high)
        except Exception as error:
            value, details, passed = float("nan"), {"error": f"{type(error).__name__}: {error}"}, False
        if passed:
            self.logger.info(f"{check['name']}: {value:.3e} in [{low}, {high}]")
        else:
            self.logger.error(f"{check['name']} failed: {value} not in [{low}, {high}]")
        return {"name": check['name'], "check": check['check_func'].__name__, "value": value,
                "bounds": [low, high], "passed": passed, "details": details}

    def evaluate(self, out=None, strict=False):
        """
        Runs every check and writes the JSON report to `out`. With `strict`, a ValidationError naming the
        first failed check is raised once the report is written.
        """
        results = [self.run_check(check) for check in self.checks]
        report = {"passed": all(r["passed"] for r in results), "checks": results,
                  "failed": [r["check"] for r in results if not r["passed"]]}
        if out is not None:
            with open(out, 'w', encoding="utf-8") as outfile:
                json.dump(to_jsonable(report), outfile, indent=2, sort_keys=True)
                outfile.write("\n")
        if strict and not report["passed"]:
            raise ValidationError(report["failed"][0], f"{len(report['failed'])} of {len(results)} checks failed",
                                  report["failed"])
        return report
