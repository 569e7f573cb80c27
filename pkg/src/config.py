"""
CuspLab 설정 관리 모듈
"""

from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings
from pydantic import Field, field_validator
from functools import lru_cache


class Settings(BaseSettings):
    """애플리케이션 설정 (환경 변수 접두사: CUSPLAB_)"""

    # 프로젝트 경로
    BASE_DIR: Path = Path(__file__).parent.parent

    # 로깅: stdout JSON Lines 가 기본, 파일 핸들러는 경로가 있을 때만
    log_level: str = Field(default="INFO")
    log_json: bool = Field(default=True)
    log_file: Optional[Path] = Field(default=None)

    # 병렬도: sweep 의 파라미터별 작업 수 상한 (CUSPLAB_THREADS)
    threads: int = Field(default=4)

    # 기본 시드 / 출력 디렉토리 (RunConfig 에 값이 없을 때만 사용)
    seed: int = Field(default=0)
    output_dir: Path = Field(default=Path("out"))

    # 설정 YAML 기본 위치 (config/runs/*.yaml)
    run_config_dir: Path = Field(default=Path(__file__).parent.parent / "config" / "runs")

    @field_validator("threads")
    @classmethod
    def _threads_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("CUSPLAB_THREADS must be >= 1")
        return v

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, v: str) -> str:
        return v.upper()

    class Config:
        env_file = Path(__file__).parent.parent / ".env"
        env_file_encoding = "utf-8"
        env_prefix = "CUSPLAB_"
        extra = "ignore"


@lru_cache()
def get_settings() -> Settings:
    """설정 싱글톤 반환"""
    return Settings()


settings = get_settings()
