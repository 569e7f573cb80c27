"""
왜곡 해석: Hölder 조건, c₀, 왜곡 반경, 반복 도함수, C^r 조건
"""

from .derivatives import CrReport, cr_ratio_check, log_deriv_iterate, richardson_derivative
from .distortion import (
    DistortionCheck,
    DistortionStatus,
    DistortionSweep,
    HolderRegime,
    HolderReport,
    RatioBoundReport,
    c0_constant,
    calibrate_holder_constant,
    distortion_bound_check,
    distortion_sweep,
    holder_check,
    ratio_bound_check,
)

__all__ = [
    "CrReport",
    "DistortionCheck",
    "DistortionStatus",
    "DistortionSweep",
    "HolderRegime",
    "HolderReport",
    "RatioBoundReport",
    "c0_constant",
    "calibrate_holder_constant",
    "cr_ratio_check",
    "distortion_bound_check",
    "distortion_sweep",
    "holder_check",
    "log_deriv_iterate",
    "ratio_bound_check",
    "richardson_derivative",
]
