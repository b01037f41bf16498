from dataclasses import dataclass

from classification.Classification import Classification
from classification.Classifier import Classifier
from dynamics.ShootParams import ShootParams
from dynamics.exceptions import DomainError, SearchError
from dynamics.logs import create_logger
from dynamics.validator import check_float, check_int, check_no_extra
from search.CriticalBracket import CriticalBracket
from search.Shooter import Shot, Shooter


@dataclass(frozen=True, eq=False)
class ArcSample:
    t: float
    sign: int
    classification: Classification
    shot: Shot
    horizon: float


class CriticalSearch:
    """
    Bisection for the boundary between complete and incomplete launches on one gamma-slice of the
    shooting sphere.

    Samples whose sign is 0 are re-integrated with the horizon doubled up to `horizon_cap`. A
    midpoint that stays undecided is replaced by the two quarter points; the bracket shrinks on
    whichever side they resolve, and the search stops unresolved if neither does.

    Without a seed the bracket starts from the arc endpoints t = 0 and t = 1. A seed (lo, hi), the
    gamma = 0 bracket for the off-axis slices, is widened by factors of `widen_factor` on each side
    until its ends carry the signs (+1, -1).
    """

    def __init__(self, shooter: Shooter = None, classifier: Classifier = None, horizon=60.0,
                 horizon_cap=480.0, max_iterations=200, lam=0.0, min_seed_width=1e-6, widen_factor=2.0, **kwargs):
        check_no_extra(self.__class__.__name__, kwargs)
        self.shooter = shooter or Shooter()
        self.classifier = classifier or Classifier()
        self.horizon = check_float("horizon", horizon, (0.0, float("inf")))
        self.horizon_cap = check_float("horizon_cap", horizon_cap, [self.horizon, float("inf")])
        self.max_iterations = check_int("max_iterations", max_iterations, [1, float("inf")])
        self.lam = check_float("lambda", lam)
        self.min_seed_width = check_float("min_seed_width", min_seed_width, (0.0, 1.0))
        self.widen_factor = check_float("widen_factor", widen_factor, (1.0, float("inf")))
        self.logger = create_logger(f"{self.__module__}.{self.__class__.__name__}")

    def sample(self, n, gamma, t):
        params = ShootParams.on_arc(n, t, gamma=gamma, lam=self.lam)
        horizon = self.horizon
        shot = self.shooter.shoot(params, horizon)
        classification = self.classifier.classify(shot.main)
        sign = self.classifier.sign(classification)
        while sign == 0 and horizon < self.horizon_cap:
            extra = min(horizon, self.horizon_cap - horizon)
            shot = self.shooter.extend(shot, extra)
            horizon += extra
            classification = self.classifier.classify(shot.main)
            sign = self.classifier.sign(classification)
        if sign == 0:
            self.logger.warning(f"t={t:.12f} still undecided at horizon s={horizon}.")
        return ArcSample(t=t, sign=sign, classification=classification, shot=shot, horizon=horizon)

    def _widen(self, n, gamma, seed):
        lo_t, hi_t = (check_float("seed", v, [0.0, 1.0]) for v in seed)
        if not lo_t < hi_t:
            raise DomainError(f"'seed' should be an interval lo < hi, got {seed}.")
        step = max(hi_t - lo_t, self.min_seed_width)
        lo, width = self.sample(n, gamma, lo_t), step
        while lo.sign != 1 and lo.t > 0.0:
            lo = self.sample(n, gamma, max(lo_t - width, 0.0))
            width *= self.widen_factor
        hi, width = self.sample(n, gamma, hi_t), step
        while hi.sign != -1 and hi.t < 1.0:
            hi = self.sample(n, gamma, min(hi_t + width, 1.0))
            width *= self.widen_factor
        self.logger.info(f"n={n}, gamma={gamma}: seed [{lo_t:.12f}, {hi_t:.12f}] widened to [{lo.t:.12f}, {hi.t:.12f}]")
        return lo, hi

    def find_critical(self, n, gamma=0.0, tol=1e-9, seed=None):
        """
        Args:
            n: order of the principal isotropy
            gamma: slice of the shooting sphere, nonzero only for n = 4
            tol: requested bracket width in the arc parameter t
            seed: optional starting interval (lo, hi) in t, widened until its ends change sign

        Returns:
            CriticalBracket: with f_sign +1 at lo and -1 at hi

        Raises:
            SearchError: when the arc endpoints (or the widened seed) do not carry the signs (+1, -1)
        """
        n = check_int("n", n, [1, float("inf")])
        gamma = check_float("gamma", gamma, (-1.0, 1.0))
        tol = check_float("tol", tol, (0.0, 1.0))
        if gamma != 0.0 and n != 4:
            raise DomainError(f"'gamma' must be 0 unless n = 4, got n = {n}.")
        if seed is None:
            lo, hi = self.sample(n, gamma, 0.0), self.sample(n, gamma, 1.0)
        else:
            lo, hi = self._widen(n, gamma, seed)
        if lo.sign != 1 or hi.sign != -1:
            where = "on the arc" if seed is None else f"around the seed {tuple(seed)}"
            message = (f"no sign change {where} for n={n}, gamma={gamma}: "
                       f"f_sign({lo.t})={lo.sign}, f_sign({hi.t})={hi.sign}")
            self.logger.error(message)
            raise SearchError(message)

        history = [(lo.t, hi.t)]
        resolved, iterations = True, 0
        while hi.t - lo.t >= tol and iterations < self.max_iterations:
            iterations += 1
            mid = self.sample(n, gamma, 0.5 * (lo.t + hi.t))
            if mid.sign == 1:
                lo = mid
            elif mid.sign == -1:
                hi = mid
            else:
                quarter = 0.25 * (hi.t - lo.t)
                left, right = self.sample(n, gamma, lo.t + quarter), self.sample(n, gamma, hi.t - quarter)
                moved = False
                for candidate in (left, right):
                    if candidate.sign == 1 and candidate.t > lo.t and candidate.t < hi.t:
                        lo, moved = candidate, True
                for candidate in (right, left):
                    if candidate.sign == -1 and lo.t < candidate.t < hi.t:
                        hi, moved = candidate, True
                if not moved:
                    resolved = False
                    self.logger.warning(f"Bracket [{lo.t}, {hi.t}] cannot be refined past undecided samples.")
                    break
            history.append((lo.t, hi.t))
            self.logger.info(f"n={n}, gamma={gamma}, iteration: {iterations}, bracket: [{lo.t:.12f}, {hi.t:.12f}], "
                             f"width: {hi.t - lo.t:.3e}")
        if hi.t - lo.t >= tol:
            resolved = False
        return CriticalBracket(n=n, gamma=gamma, lo=lo.t, hi=hi.t, lo_class=lo.classification,
                               hi_class=hi.classification, tol=tol, iterations=iterations, history=tuple(history),
                               resolved=resolved, horizon=max(lo.horizon, hi.horizon), lam=self.lam)


def find_critical(n, gamma=0.0, tol=1e-9, seed=None, **kwargs):
    return CriticalSearch(**kwargs).find_critical(n, gamma, tol, seed)
