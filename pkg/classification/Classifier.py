import numpy as np
from scipy.integrate import trapezoid

from classification.Classification import AsymptoticPattern, Classification, Pattern, Verdict
from dynamics.logs import create_logger
from dynamics.validator import check_float, check_int, check_no_extra
from integrator.EventSpec import EventKind
from integrator.Trajectory import Trajectory

PAIRS = (
    (Pattern.BIAXIAL23, 1, 2, 0),
    (Pattern.PAIR12, 0, 1, 2),
    (Pattern.PAIR13, 0, 2, 1),
)
MIN_LOG_DROP = 1e-3


class Classifier:
    """
    Decides completeness of shooting trajectories from their long-time behaviour.

    A run is Complete either because its X components settle inside the ball of radius `ball` by
    `settle_time` with xi bounded below by `xi_floor` (soliton end), or because u' = sum(L) - xi
    vanishes to `ricci_flat_tol` relative to xi along the whole run (Ricci-flat end). An XiZero
    event makes it incomplete; anything else is Undetermined at the reached horizon.

    The xi limit is extrapolated from the tail by a least-squares fit in 1/s of degree
    `limit_degree`, since xi approaches its limit like 1/s while Y1 decays.
    """

    def __init__(self, ball=0.05, settle_time=30.0, tail_fraction=0.2, zero_threshold=5e-3,
                 decay_floor=0.25, xi_floor=1e-6, ricci_flat_tol=1e-6, sign_threshold=0.0, limit_degree=2, **kwargs):
        check_no_extra(self.__class__.__name__, kwargs)
        self.ball = check_float("ball", ball, (0.0, float("inf")))
        self.settle_time = check_float("settle_time", settle_time, [0.0, float("inf")])
        self.tail_fraction = check_float("tail_fraction", tail_fraction, (0.0, 1.0))
        self.zero_threshold = check_float("zero_threshold", zero_threshold, (0.0, float("inf")))
        self.decay_floor = check_float("decay_floor", decay_floor, [0.0, float("inf")])
        self.xi_floor = check_float("xi_floor", xi_floor, [0.0, float("inf")])
        self.ricci_flat_tol = check_float("ricci_flat_tol", ricci_flat_tol, (0.0, float("inf")))
        self.sign_threshold = check_float("sign_threshold", sign_threshold, [0.0, float("inf")])
        self.limit_degree = check_int("limit_degree", limit_degree, [0, 3])
        self.logger = create_logger(f"{self.__module__}.{self.__class__.__name__}")

    def _tail(self, s):
        start = s[-1] - self.tail_fraction * (s[-1] - s[0])
        mask = s >= start
        if np.count_nonzero(mask) < 2:
            mask[-2:] = True
        return mask

    @staticmethod
    def _average(s, values):
        if s[-1] == s[0]:
            return values.mean(axis=0)
        return trapezoid(values, s, axis=0) / (s[-1] - s[0])

    def _extrapolate(self, s, values):
        """Constant term of the polynomial fit of `values` in 1/s; the tail mean when the fit is not posed."""
        usable = s > 0
        if np.count_nonzero(usable) <= self.limit_degree + 1 or np.ptp(s[usable]) == 0:
            return float(self._average(s, values))
        coefficients = np.polyfit(1.0 / s[usable], values[usable], self.limit_degree)
        return float(coefficients[-1])

    @staticmethod
    def y_ball_entry(traj: Trajectory):
        """Clock of the last YNormBelow crossing, None when Y never entered the ball."""
        entries = [e for e in traj.events if e.kind is EventKind.Y_NORM_BELOW]
        if not entries:
            return None
        last = entries[-1]
        return float(last.clock if last.clock is not None else last.time)

    def asymptotic_pattern(self, traj: Trajectory):
        """
        Returns:
            AsymptoticPattern: the permutation pattern minimising |Y_i - Y_j| + |Y_k| on tail averages,
            AllZero when every limit is below `zero_threshold`, or when Y has entered its ball and
            decays algebraically faster than s^-decay_floor after the entry.
        """
        _, s, compact = traj.compact_view()
        if len(s) < 2:
            nan3 = (float("nan"),) * 3
            return AsymptoticPattern(Pattern.NONE, nan3, float("nan"), Pattern.NONE, float("nan"))
        tail = self._tail(s)
        Y = compact[:, 4:7]
        limits = self._average(s[tail], Y[tail])
        scores = [(abs(limits[i] - limits[j]) + abs(limits[k]), pattern) for pattern, i, j, k in PAIRS]
        score, best = min(scores, key=lambda item: item[0])

        entry = self.y_ball_entry(traj)
        window = tail if entry is None else tail & (s >= entry)
        if np.count_nonzero(window) < 4:
            window = tail
        exponent = self._decay_exponent(s[window], np.linalg.norm(Y[window], axis=1))
        pattern = best
        if np.max(np.abs(limits)) < self.zero_threshold or (entry is not None and exponent < -self.decay_floor):
            pattern = Pattern.ALL_ZERO
        return AsymptoticPattern(pattern, tuple(float(v) for v in limits), float(score), best, exponent)

    @staticmethod
    def _decay_exponent(s, norms):
        """
        -q for |Y| ~ (s + s0)^-q with the offset s0 unknown: a quadratic fit of log|Y| in s gives
        q = (log|Y|)'^2 / (log|Y|)'' at the centre of the window. Falls back to the log-log slope at
        the centre when the curvature is not positive (exponential or faster decay), and gives 0
        when log|Y| drops by less than MIN_LOG_DROP over the window.
        """
        usable = norms > 0
        if np.count_nonzero(usable) < 4 or np.ptp(s[usable]) == 0:
            return float("nan")
        s, logs = s[usable], np.log(norms[usable])
        centre = 0.5 * (s[0] + s[-1])
        c2, slope, _ = np.polyfit(s - centre, logs, 2)
        if -slope * (s[-1] - s[0]) < MIN_LOG_DROP:
            return 0.0
        curvature = 2.0 * c2
        if curvature <= 0:
            return float(slope * centre)
        return float(-slope * slope / curvature)

    def classify(self, traj: Trajectory):
        xi_event = traj.event(EventKind.XI_ZERO)
        if xi_event is not None:
            return Classification(Verdict.INCOMPLETE_XI_NEGATIVE, time=xi_event.time,
                                  details={"clock": xi_event.clock, **xi_event.detail})
        for kind in (EventKind.BLOW_UP, EventKind.STATE_NORM_EXCEEDS):
            event = traj.event(kind)
            if event is not None:
                return Classification(Verdict.BLOW_UP, time=event.time, details={"event": kind.value})

        _, s, compact = traj.compact_view()
        horizon = float(s[-1]) if len(s) else float("nan")
        if len(s) < 2 or s[-1] < self.settle_time:
            return Classification(Verdict.UNDETERMINED, time=horizon, details={"reason": "horizon below settle time"})
        X, xi = compact[:, 1:4], 1.0 / compact[:, 0]
        tail = self._tail(s)
        x_limits = tuple(float(v) for v in self._average(s[tail], X[tail]))
        xi_limit = self._extrapolate(s[tail], xi[tail])
        pattern = self.asymptotic_pattern(traj)
        common = dict(y_limits=pattern.y_limits, x_limits=x_limits, xi_limit=xi_limit,
                      pattern_score=pattern.score, best_pair=pattern.best_pair,
                      decay_exponent=pattern.decay_exponent)
        y_entry = self.y_ball_entry(traj)

        outside = np.flatnonzero(np.linalg.norm(X, axis=1) >= self.ball)
        if outside.size == 0:
            entry = float(s[0])
        elif outside[-1] + 1 < len(s):
            entry = float(s[outside[-1] + 1])
        else:
            entry = float("inf")
        if entry <= self.settle_time and np.min(xi[tail]) > self.xi_floor:
            return Classification(Verdict.COMPLETE, time=horizon, pattern=pattern.pattern, route="soliton",
                                  details={"ball_entry": entry, "y_ball_entry": y_entry}, **common)

        gap = np.abs(1.0 - np.sum(X, axis=1))
        if np.max(gap) < self.ricci_flat_tol:
            return Classification(Verdict.COMPLETE, time=horizon, pattern=pattern.pattern, route="ricci_flat",
                                  details={"max_relative_u_prime": float(np.max(gap))}, **common)

        critical = Pattern.ALL_ZERO if pattern.pattern is Pattern.ALL_ZERO else Pattern.NONE
        return Classification(Verdict.UNDETERMINED, time=horizon, pattern=critical,
                              details={"ball_entry": entry, "y_ball_entry": y_entry}, **common)

    def sign(self, classification: Classification):
        """
        Returns:
            int: -1 for incomplete or blown-up runs, 0 for undetermined ones; complete runs give +1
            when max(Y2 - Y1, Y3 - Y1) of the tail exceeds `sign_threshold` and -1 otherwise.
        """
        if classification.verdict in (Verdict.INCOMPLETE_XI_NEGATIVE, Verdict.BLOW_UP):
            return -1
        if classification.verdict is Verdict.UNDETERMINED:
            return 0
        Y1, Y2, Y3 = classification.y_limits
        spread = max(Y2 - Y1, Y3 - Y1)
        return 1 if spread > self.sign_threshold else -1

    def f_sign(self, traj: Trajectory, classification: Classification = None):
        """Scalar surrogate for the sign of the completeness functional on the shooting arc."""
        return self.sign(classification or self.classify(traj))


def classify(traj: Trajectory, ball=0.05, settle_time=30.0):
    return Classifier(ball=ball, settle_time=settle_time).classify(traj)


def asymptotic_pattern(traj: Trajectory):
    return Classifier().asymptotic_pattern(traj)


def f_sign(traj: Trajectory):
    return Classifier().f_sign(traj)
