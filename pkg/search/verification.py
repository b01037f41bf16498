from dataclasses import dataclass
from typing import Optional

import numpy as np

from classification.Classification import Classification, Pattern, Verdict
from classification.Classifier import Classifier
from dynamics.exceptions import ReconstructionError
from dynamics.logs import create_logger
from geometry.MetricProfile import MetricProfile
from geometry.profiles import profile_from_primal
from search.CriticalBracket import CriticalBracket
from search.Shooter import Shot, Shooter

logger = create_logger(__name__)


@dataclass(frozen=True, eq=False)
class VerificationReport:
    bracket: CriticalBracket
    classification: Classification
    x_tail_norm: float
    c_drift: Optional[float]
    z_residual: float
    profile: Optional[MetricProfile]
    unresolved: bool
    shot: Shot

    @property
    def pattern(self):
        return self.classification.pattern

    @property
    def xi_limit(self):
        return self.classification.xi_limit

    def to_dict(self):
        return {
            "midpoint": self.bracket.midpoint,
            "classification": self.classification.to_dict(),
            "xi_limit": None if np.isnan(self.xi_limit) else float(self.xi_limit),
            "x_tail_norm": self.x_tail_norm,
            "pattern": self.pattern.value,
            "c_drift": self.c_drift,
            "z_residual": self.z_residual,
            "profile_samples": None if self.profile is None else len(self.profile),
            "unresolved": self.unresolved,
        }


def verify_soliton_candidate(bracket: CriticalBracket, shooter: Shooter = None, classifier: Classifier = None,
                             horizon=480.0, tighten=10.0, profile_samples=2001):
    """
    Re-integrates the bracket midpoint at tolerances divided by `tighten` and reports its limits,
    tail X-norm, Y pattern, conserved-quantity drift and reconstructed metric profile.
    """
    shooter = (shooter or Shooter()).tightened(tighten)
    classifier = classifier or Classifier()
    params = bracket.midpoint_params()
    shot = shooter.shoot(params, horizon)
    classification = classifier.classify(shot.main)
    unresolved = classification.verdict in (Verdict.INCOMPLETE_XI_NEGATIVE, Verdict.BLOW_UP) or not bracket.resolved
    if unresolved:
        logger.warning(f"Midpoint of bracket n={bracket.n}, gamma={bracket.gamma} is {classification.verdict.value}.")

    _, s, compact = shot.main.compact_view()
    tail = s >= s[-1] - 0.2 * (s[-1] - s[0])
    x_tail_norm = float(np.max(np.linalg.norm(compact[tail, 1:4], axis=1)))
    c_drift = shot.main.conserved_drift("C")
    c_drift = None if np.isnan(c_drift) else c_drift
    z_residual = shot.main.relative_residual("Z")

    profile = None
    try:
        radii = np.linspace(shot.launch.epsilon, shot.main.final_time, profile_samples)
        profile = profile_from_primal(radii, shot.resample_primal(radii), params.n, params.lam)
    except ReconstructionError as error:
        logger.warning(f"No metric profile for the midpoint: {error}")
    return VerificationReport(bracket=bracket, classification=classification, x_tail_norm=x_tail_norm,
                              c_drift=c_drift, z_residual=z_residual, profile=profile, unresolved=unresolved, shot=shot)


def acceptable_pattern(report: VerificationReport):
    return report.pattern in (Pattern.PAIR12, Pattern.PAIR13, Pattern.ALL_ZERO, Pattern.BIAXIAL23) \
        if report.bracket.gamma == 0.0 else report.pattern in (Pattern.PAIR12, Pattern.PAIR13, Pattern.ALL_ZERO)
