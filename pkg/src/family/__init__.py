"""사상 패밀리 패키지: CLI 가 이름으로 사상/불변밀도를 조회하는 레지스트리"""

from .base import BaseFamily, FamilyParams
from .registry import FamilyRegistry, get_registry, register_builtin_families

__all__ = [
    "BaseFamily",
    "FamilyParams",
    "FamilyRegistry",
    "get_registry",
    "register_builtin_families",
]
