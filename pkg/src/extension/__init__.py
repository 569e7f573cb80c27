"""
Natural extension: 역궤도 표본과 구간 pullback
"""

from .backward import BackwardOrbit, BackwardPolicy, backward_orbit, candidate_preimages
from .pullback import PullbackTrace, pullback_interval

__all__ = [
    "BackwardOrbit",
    "BackwardPolicy",
    "PullbackTrace",
    "backward_orbit",
    "candidate_preimages",
    "pullback_interval",
]
