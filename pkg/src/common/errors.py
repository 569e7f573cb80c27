"""
CuspLab 예외 계층

exit_code 규약: 2 설정 오류, 3 수치 실패, 4 전제조건 위반.
CLI 는 CuspLabError 를 잡아 stderr 에 JSON 한 줄로 출력하고 exit_code 로 종료한다.
"""

from typing import Any, Dict, Optional


class CuspLabError(Exception):
    """모든 도메인 예외의 기반 클래스"""

    exit_code: int = 1

    def __init__(self, message: str, **fields: Any):
        super().__init__(message)
        self.message = message
        self.fields = fields

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "error": type(self).__name__,
            "exit_code": self.exit_code,
            "message": self.message,
        }
        data.update(self.fields)
        return data


# ─── 설정 ───

class ConfigError(CuspLabError):
    exit_code = 2


# ─── 수치 실패 ───

class NumericalError(CuspLabError):
    exit_code = 3


class OrbitBreakError(NumericalError):
    """궤도가 gap/경계/영미분 점에 도달"""

    def __init__(self, message: str, index: int, point: Optional[float] = None):
        super().__init__(message, index=index, point=point)
        self.index = index
        self.point = point


class DeadEndError(NumericalError):
    """역궤도 구성 중 preimage 가 없는 단계"""

    def __init__(self, message: str, step: int, point: Optional[float] = None):
        super().__init__(message, step=step, point=point)
        self.step = step
        self.point = point


class DegenerateFiberError(NumericalError):
    """pullback 반경이 하한(1e-12) 아래로 축소됨"""


class NonConvergenceError(NumericalError):
    pass


class EmptyInducedMapError(NumericalError):
    """max_depth 까지 분기를 하나도 찾지 못함"""


# ─── 전제조건 위반 ───

class PreconditionError(CuspLabError):
    exit_code = 4


class DomainError(PreconditionError):
    pass


class BoundaryError(PreconditionError):
    """열린 구간의 끝점(0, 1 등)에서의 평가"""


class UndefinedPointError(PreconditionError):
    """분기 사이 gap 의 점"""


class NoPreimageError(PreconditionError):
    pass


class GeometryError(PreconditionError):
    pass


class NotRegularlyReturningError(PreconditionError):
    pass
