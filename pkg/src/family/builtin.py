"""
내장 패밀리: tent, g_alpha, f_alpha, chebyshev, g_b
"""

from typing import Tuple

from ..maps import (
    OpenInterval,
    PiecewiseMap,
    make_chebyshev_map,
    make_f_alpha,
    make_g_alpha,
    make_g_b,
    make_tent_map,
)
from .base import BaseFamily, FamilyParams


class TentFamily(BaseFamily):
    @property
    def family_id(self) -> str:
        return "tent"

    @property
    def display_name(self) -> str:
        return "Full tent map T"

    def build(self, params: FamilyParams) -> PiecewiseMap:
        return make_tent_map()

    @property
    def singular_point(self) -> float:
        return 0.5

    @property
    def singular_side(self) -> str:
        return "both"


class GAlphaFamily(BaseFamily):
    """g_α = h∘T∘h^{-1}: α < 1 이면 log|Dg| 가 acip 에 대해 적분가능"""

    @property
    def family_id(self) -> str:
        return "g_alpha"

    @property
    def display_name(self) -> str:
        return "Flat-critical unimodal map g_alpha"

    @property
    def required_params(self) -> Tuple[str, ...]:
        return ("alpha",)

    def build(self, params: FamilyParams) -> PiecewiseMap:
        self.check_params(params)
        return make_g_alpha(params.alpha)


class FAlphaFamily(BaseFamily):
    """f_α = h^{-1}∘T∘h: 포물형 고정점 0, c 에서 pole"""

    @property
    def family_id(self) -> str:
        return "f_alpha"

    @property
    def display_name(self) -> str:
        return "Parabolic cusp map f_alpha"

    @property
    def required_params(self) -> Tuple[str, ...]:
        return ("alpha",)

    def build(self, params: FamilyParams) -> PiecewiseMap:
        self.check_params(params)
        return make_f_alpha(params.alpha)

    @property
    def singular_point(self) -> float:
        return 0.5

    @property
    def singular_side(self) -> str:
        return "both"


class ChebyshevFamily(BaseFamily):
    """q(x) = 4x(1-x): 2차 임계점, sin²(πy/2) 로 텐트와 켤레"""

    @property
    def family_id(self) -> str:
        return "chebyshev"

    @property
    def display_name(self) -> str:
        return "Chebyshev quadratic map 4x(1-x)"

    def build(self, params: FamilyParams) -> PiecewiseMap:
        return make_chebyshev_map()

    @property
    def singular_point(self) -> float:
        return 0.5

    @property
    def singular_side(self) -> str:
        return "both"


class GbFamily(BaseFamily):
    """g_b(x) = -1 + b(1 - e^{-1-|x|^{-α}}): α ≥ 1 이면 ergodic acip 없음"""

    @property
    def family_id(self) -> str:
        return "g_b"

    @property
    def display_name(self) -> str:
        return "Flat-top unimodal map g_b"

    @property
    def required_params(self) -> Tuple[str, ...]:
        return ("alpha", "b")

    def build(self, params: FamilyParams) -> PiecewiseMap:
        self.check_params(params)
        return make_g_b(params.b, params.alpha)

    @property
    def singular_side(self) -> str:
        return "both"

    def nice_interval(self, params: FamilyParams) -> OpenInterval:
        # 상 안의 구간; regularly returning 여부는 호출 측에서 검사
        fmap = self.build(params)
        img = fmap.branches[0].image
        return OpenInterval(img.lo + 0.25 * img.length, img.hi - 0.25 * img.length)


BUILTIN_FAMILIES = (TentFamily, GAlphaFamily, FAlphaFamily, ChebyshevFamily, GbFamily)
