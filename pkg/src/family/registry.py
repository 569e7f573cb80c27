"""
패밀리 레지스트리 - 등록된 사상 패밀리 관리
"""

import logging
from typing import Dict, List, Optional

from ..common.errors import ConfigError
from .base import BaseFamily

logger = logging.getLogger(__name__)


class FamilyRegistry:
    """패밀리 레지스트리 싱글턴"""

    _instance = None
    _families: Dict[str, BaseFamily] = {}

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._families = {}
        return cls._instance

    def register(self, family: BaseFamily) -> None:
        """패밀리 등록"""
        self._families[family.family_id] = family

    def get(self, family_id: str) -> Optional[BaseFamily]:
        """패밀리 조회"""
        return self._families.get(family_id)

    def require(self, family_id: str) -> BaseFamily:
        """패밀리 조회: 없으면 ConfigError"""
        family = self.get(family_id)
        if family is None:
            raise ConfigError(
                f"알 수 없는 패밀리: {family_id}", family=family_id, known=self.get_active_ids()
            )
        return family

    def get_all(self) -> List[BaseFamily]:
        """모든 패밀리 조회"""
        return list(self._families.values())

    def get_active_ids(self) -> List[str]:
        """등록된 패밀리 ID 목록"""
        return list(self._families.keys())


_registry = FamilyRegistry()


def get_registry() -> FamilyRegistry:
    return _registry


def register_builtin_families() -> FamilyRegistry:
    """내장 패밀리 4종 등록 (중복 호출 안전)"""
    from .builtin import BUILTIN_FAMILIES

    registry = get_registry()
    for family_cls in BUILTIN_FAMILIES:
        family = family_cls()
        if registry.get(family.family_id) is None:
            registry.register(family)
    logger.debug(f"패밀리 등록 완료: {registry.get_active_ids()}")
    return registry
