"""배치 실행기: RunConfig 와 서브커맨드 작업"""

from .jobs import JOBS, JobResult, run
from .run_config import (
    SUBCOMMANDS,
    RunConfig,
    build_run_config,
    load_yaml,
    parse_assignments,
    resolve_config_path,
)

__all__ = [
    "JOBS",
    "JobResult",
    "RunConfig",
    "SUBCOMMANDS",
    "build_run_config",
    "load_yaml",
    "parse_assignments",
    "resolve_config_path",
    "run",
]
