import concurrent.futures as parallel
from dataclasses import dataclass
from typing import Optional

from tqdm import tqdm

from dynamics.exceptions import DomainError, SearchError
from dynamics.logs import create_logger
from dynamics.validator import check_float, check_str
from search.CriticalBracket import CriticalBracket
from search.CriticalSearch import CriticalSearch
from search.verification import VerificationReport, acceptable_pattern, verify_soliton_candidate


@dataclass(frozen=True, eq=False)
class SliceResult:
    gamma: float
    bracket: Optional[CriticalBracket] = None
    report: Optional[VerificationReport] = None
    error: Optional[str] = None

    @property
    def ok(self):
        return self.bracket is not None

    def to_dict(self):
        return {
            "gamma": self.gamma,
            "bracket": None if self.bracket is None else self.bracket.to_dict(),
            "verification": None if self.report is None else self.report.to_dict(),
            "pattern_ok": None if self.report is None else acceptable_pattern(self.report),
            "error": self.error,
        }


def search_slice(search: CriticalSearch, n, gamma, tol, verify=True, verify_horizon=480.0, seed=None):
    try:
        bracket = search.find_critical(n, gamma, tol, seed=seed)
    except SearchError as error:
        return SliceResult(gamma=gamma, error=str(error))
    report = None
    if verify:
        report = verify_soliton_candidate(bracket, search.shooter, search.classifier, horizon=verify_horizon)
    return SliceResult(gamma=gamma, bracket=bracket, report=report)


class SweepOrchestrator:
    """
    Runs one critical search per gamma-slice, concurrently in "thread" or "process" mode, and returns
    the results in the order the slices were requested.

    The gamma = 0 slice is searched first; its bracket seeds every other slice, whose arc endpoints
    are both incomplete once gamma != 0.
    """

    def __init__(self, search: CriticalSearch = None, mode="thread", n_workers=None, verify=True,
                 verify_horizon=480.0, progress=True):
        self.search = search or CriticalSearch()
        self.mode = check_str("mode", mode, ["sequential", "thread", "process"])
        self.n_workers = n_workers
        self.verify = verify
        self.verify_horizon = check_float("verify_horizon", verify_horizon, (0.0, float("inf")))
        self.progress = progress
        self.logger = create_logger(f"{self.__module__}.{self.__class__.__name__}")

    def _base(self, n, gammas, tol):
        """The gamma = 0 slice and the seed it gives to the others (None when that slice failed)."""
        base = search_slice(self.search, n, 0.0, tol, self.verify and 0.0 in gammas, self.verify_horizon)
        self._report(base)
        if not base.ok:
            self.logger.warning("No gamma = 0 bracket; off-axis slices start from the arc endpoints.")
            return base, None
        return base, (base.bracket.lo, base.bracket.hi)

    def sweep_gamma(self, n=4, gammas=(0.0,), tol=1e-9):
        gammas = [check_float("gamma", g, (-1.0, 1.0)) for g in gammas]
        off_axis = [g for g in gammas if g != 0.0]
        if off_axis and n != 4:
            raise DomainError(f"'gamma' must be 0 unless n = 4, got n = {n}, gammas = {off_axis}.")
        base, seed = (None, None)
        if off_axis:
            base, seed = self._base(n, gammas, tol)
        pending = [i for i, g in enumerate(gammas) if base is None or g != 0.0]
        results = [base if i not in pending else None for i in range(len(gammas))]

        bar = tqdm(total=len(gammas), desc="gamma sweep", disable=not self.progress)
        bar.update(len(gammas) - len(pending))
        if self.mode == "sequential":
            for i in pending:
                results[i] = search_slice(self.search, n, gammas[i], tol, self.verify, self.verify_horizon, seed)
                self._report(results[i])
                bar.update(1)
        else:
            executor_cls = parallel.ThreadPoolExecutor if self.mode == "thread" else parallel.ProcessPoolExecutor
            with executor_cls(self.n_workers) as executor:
                futures = {executor.submit(search_slice, self.search, n, gammas[i], tol, self.verify,
                                           self.verify_horizon, seed): i for i in pending}
                for fut in parallel.as_completed(futures):
                    results[futures[fut]] = fut.result()
                    self._report(results[futures[fut]])
                    bar.update(1)
        bar.close()
        return results

    def _report(self, result: SliceResult):
        if result.ok:
            self.logger.info(f"gamma={result.gamma}: bracket [{result.bracket.lo:.12f}, {result.bracket.hi:.12f}]")
        else:
            self.logger.warning(f"gamma={result.gamma}: {result.error}")


def sweep_gamma(n=4, gammas=(0.0,), tol=1e-9, **kwargs):
    return SweepOrchestrator(**kwargs).sweep_gamma(n, gammas, tol)
