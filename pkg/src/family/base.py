"""
사상 패밀리 기본 인터페이스 (ABC)
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

from ..common.errors import ConfigError
from ..maps import InvariantDensity, OpenInterval, PiecewiseMap


@dataclass(frozen=True)
class FamilyParams:
    """패밀리 파라미터 (필요 없는 값은 None)"""
    alpha: Optional[float] = None
    b: Optional[float] = None


class BaseFamily(ABC):
    """사상 패밀리 기본 클래스"""

    @property
    @abstractmethod
    def family_id(self) -> str:
        """패밀리 식별자 (예: 'g_alpha')"""

    @property
    @abstractmethod
    def display_name(self) -> str:
        """표시용 이름"""

    @property
    def required_params(self) -> Tuple[str, ...]:
        """build 에 필요한 파라미터 이름"""
        return ()

    @abstractmethod
    def build(self, params: FamilyParams) -> PiecewiseMap:
        """파라미터로 사상 생성"""

    @property
    def singular_point(self) -> float:
        """적분가능성 분류의 기준 특이점"""
        return 0.0

    @property
    def singular_side(self) -> str:
        """특이점 주변 환대 방향 (left / right / both)"""
        return "right"

    def nice_interval(self, params: FamilyParams) -> OpenInterval:
        """기본 regularly returning 구간: 텐트 좌표 (2/5, 4/5) 의 chart 상"""
        fmap = self.build(params)
        if fmap.chart is None:
            raise ConfigError(f"{self.family_id}: 기본 nice interval 이 없음")
        lo = float(fmap.chart.to_ambient(0.4))
        hi = float(fmap.chart.to_ambient(0.8))
        return OpenInterval(lo, hi)

    def density(self, params: FamilyParams) -> Optional[InvariantDensity]:
        """닫힌꼴 불변밀도 (텐트 켤레 사상만)"""
        fmap = self.build(params)
        if fmap.chart is None:
            return None
        return InvariantDensity(fmap.chart, fmap.ambient)

    def check_params(self, params: FamilyParams) -> None:
        missing = [p for p in self.required_params if getattr(params, p) is None]
        if missing:
            raise ConfigError(
                f"{self.family_id}: 필수 파라미터 누락 {missing}", missing=missing
            )
