"""
실행 설정 (RunConfig): YAML 파일 → 명시 플래그 → `--set key=value` 순서로 덮어쓴다.

검증 실패는 모두 ConfigError (exit 2). config hash 는 서브커맨드 기본값까지
채운 설정에서 `out` 만 빼고 canonical JSON sha256 으로 계산한다.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Sequence, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..common.errors import ConfigError
from ..common.utils import canonical_hash
from ..config import settings

logger = logging.getLogger(__name__)

SUBCOMMANDS: Tuple[str, ...] = (
    "eval-grid",
    "lyapunov",
    "classify",
    "entropy",
    "dimension",
    "density",
    "induce",
    "spread",
    "pullback",
    "series",
    "sweep",
)

# 서브커맨드별 n 기본값 (궤도 길이 / 역궤도 길이 / 격자 크기)
DEFAULT_N: Dict[str, int] = {
    "eval-grid": 401,
    "lyapunov": 100_000,
    "entropy": 200_000,
    "density": 200_000,
    "pullback": 40,
}

MAX_DEPTH = 24

# α 파라미터가 없는 패밀리
ALPHA_FREE_FAMILIES: Tuple[str, ...] = ("tent", "chebyshev")


class RunConfig(BaseModel):
    """서브커맨드 하나의 실행 설정"""

    model_config = ConfigDict(extra="forbid")

    family: Literal["tent", "g_alpha", "f_alpha", "chebyshev", "g_b"] = "tent"
    alpha: Optional[float] = None
    b: Optional[float] = None
    seed: int = Field(default_factory=lambda: settings.seed)
    n: Optional[int] = None
    burn_in: int = 1000
    depth: Optional[int] = None
    bins: int = 100
    out: Path = Field(default_factory=lambda: settings.output_dir)

    # classify
    weight: Optional[Literal["lebesgue", "exact"]] = None
    k_lo: int = 8
    k_hi: int = 48

    # 궤도 시작점 (없으면 불변밀도/균등 표본)
    x0: Optional[float] = None

    # series / Bernoulli 원천
    p: float = 0.3
    N: int = 0
    terms: int = 200

    # entropy
    source: Literal["orbit", "bernoulli"] = "orbit"
    word_lengths: List[int] = Field(default_factory=lambda: [4, 8, 12])

    # dimension
    measure: Literal["bernoulli", "acip"] = "bernoulli"
    points: int = 50
    samples: int = 200_000

    # pullback
    orbits: int = 20
    radius: Optional[float] = None
    policy: Literal["uniform", "density_weighted"] = "uniform"
    distortion_budget: Optional[float] = None

    # induce / spread
    return_order: int = 1
    u_lo: Optional[float] = None
    u_hi: Optional[float] = None

    # sweep
    alphas: List[float] = Field(default_factory=lambda: [0.25, 0.5, 0.9, 1.0, 1.1, 1.5])
    task: Literal["classify", "lyapunov", "series"] = "classify"

    def require_for(self, subcommand: str) -> "RunConfig":
        """서브커맨드의 필수 필드/범위를 검사하고 기본값을 채운 사본을 돌려준다"""
        if subcommand not in SUBCOMMANDS:
            raise ConfigError(f"알 수 없는 서브커맨드: {subcommand}", subcommand=subcommand)

        updates: Dict[str, Any] = {}
        if self.n is None and subcommand in DEFAULT_N:
            updates["n"] = DEFAULT_N[subcommand]
        if self.depth is None and subcommand in ("induce", "spread"):
            updates["depth"] = 12
        resolved = self.model_copy(update=updates)

        needs_alpha = subcommand in ("eval-grid", "classify", "series") or (
            subcommand != "sweep" and resolved.family not in ALPHA_FREE_FAMILIES
        )
        if needs_alpha and resolved.alpha is None:
            raise ConfigError(f"{subcommand}: alpha 필수 (family={resolved.family})", field="alpha")
        if resolved.family == "g_b" and resolved.b is None and subcommand != "series":
            raise ConfigError(f"{subcommand}: g_b 에는 b 필수", field="b")

        if resolved.alpha is not None and not resolved.alpha > 0:
            raise ConfigError(f"alpha 는 양수여야 함 (got {resolved.alpha})", field="alpha")
        if subcommand == "series" and not (0.0 < resolved.alpha < 1.0):
            raise ConfigError(f"series: alpha 는 (0, 1) 안이어야 함 (got {resolved.alpha})", field="alpha")
        if resolved.b is not None and not (0.0 < resolved.b <= 2.0):
            raise ConfigError(f"b 는 (0, 2] 안이어야 함 (got {resolved.b})", field="b")
        if resolved.n is not None and resolved.n < 1:
            raise ConfigError(f"n 은 1 이상이어야 함 (got {resolved.n})", field="n")
        if resolved.bins < 1:
            raise ConfigError(f"bins 는 1 이상이어야 함 (got {resolved.bins})", field="bins")
        if resolved.depth is not None and not (1 <= resolved.depth <= MAX_DEPTH):
            raise ConfigError(f"depth 는 1..{MAX_DEPTH} 이어야 함 (got {resolved.depth})", field="depth")
        if resolved.burn_in < 0:
            raise ConfigError("burn_in 은 0 이상이어야 함", field="burn_in")
        if subcommand == "sweep":
            if not resolved.alphas:
                raise ConfigError("sweep: alphas 가 비어 있음", field="alphas")
            if resolved.family in ALPHA_FREE_FAMILIES and resolved.task != "series":
                raise ConfigError(f"sweep: {resolved.family} 패밀리에는 α 가 없음", field="family")
        if resolved.distortion_budget is not None and not resolved.distortion_budget > 0:
            raise ConfigError("distortion_budget 은 양수여야 함", field="distortion_budget")
        if (resolved.u_lo is None) != (resolved.u_hi is None):
            raise ConfigError("u_lo 와 u_hi 는 함께 지정해야 함", field="u_lo")
        return resolved

    def config_hash(self) -> str:
        payload = self.model_dump(mode="json", exclude={"out"})
        return canonical_hash(payload)


# ─── 로드 / 덮어쓰기 ───

def resolve_config_path(path: Path) -> Path:
    """존재하지 않는 상대 경로는 settings.run_config_dir 기준으로 (확장자 생략 가능)"""
    path = Path(path)
    if path.exists() or path.is_absolute():
        return path
    for candidate in (settings.run_config_dir / path, settings.run_config_dir / path.with_suffix(".yaml")):
        if candidate.exists():
            logger.debug(f"run config 경로 해석: {path} → {candidate}")
            return candidate
    return path


def load_yaml(path: Path) -> Dict[str, Any]:
    """YAML 매핑 로드: 파일이 없거나 매핑이 아니면 ConfigError"""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"설정 파일 없음: {path}", path=str(path))
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"설정 YAML 파싱 실패 [{path.name}]: {e}", path=str(path))
    if not isinstance(raw, dict):
        raise ConfigError(f"설정 YAML 최상위는 매핑이어야 함: {path.name}", path=str(path))
    logger.debug(f"run config 로드: {path}")
    return raw


def parse_assignments(pairs: Sequence[str]) -> Dict[str, Any]:
    """`key=value` 목록 → dict (값은 YAML 스칼라/리스트로 해석)"""
    out: Dict[str, Any] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"--set 은 KEY=VALUE 형식이어야 함: {pair!r}", pair=pair)
        try:
            out[key] = yaml.safe_load(value)
        except yaml.YAMLError:
            out[key] = value
    return out


def build_run_config(
    config_path: Optional[Path] = None,
    flags: Optional[Mapping[str, Any]] = None,
    assignments: Sequence[str] = (),
) -> RunConfig:
    raw: Dict[str, Any] = load_yaml(resolve_config_path(config_path)) if config_path else {}
    raw.update({k: v for k, v in (flags or {}).items() if v is not None})
    raw.update(parse_assignments(assignments))
    try:
        return RunConfig(**raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first.get("loc", ()))
        raise ConfigError(f"RunConfig 검증 실패: {field}: {first.get('msg')}", field=field)
