"""stdout JSON Lines 로그 포맷터 + 로깅 초기화.

필드: ts/level/logger/msg (+ exc_info, + ctx). LOG_JSON=0 이면 사용 안 함.
ctx 는 `logger.info(..., extra={"ctx": {...}})` 로 넘긴 실행 컨텍스트
(subcommand, family, alpha, seed 등)이며 그대로 병합된다.
"""

import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

_PLAIN_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


class JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        data = {
            "ts": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "msg": record.getMessage(),
        }
        ctx = getattr(record, "ctx", None)
        if isinstance(ctx, dict):
            for key, value in ctx.items():
                data.setdefault(key, value)
        if record.exc_info:
            data["exc_info"] = self.formatException(record.exc_info)
        return json.dumps(data, ensure_ascii=False, default=str)


def use_json_logging(default: bool = True) -> bool:
    raw = os.environ.get("LOG_JSON")
    if raw is None:
        return default
    return raw.lower() not in ("0", "false")


def setup_logging(
    level: str = "INFO",
    json_lines: bool = True,
    log_file: Optional[Path] = None,
) -> None:
    """루트 로거 초기화: stdout 은 JSON(또는 plain), 파일은 가독 포맷.

    재호출 시 기존 핸들러를 교체한다 (CLI 를 한 프로세스에서 여러 번 돌리는 테스트 대비).
    """
    plain = logging.Formatter(_PLAIN_FORMAT)

    stream_handler = logging.StreamHandler(sys.stdout)
    stream_handler.setFormatter(JsonFormatter() if use_json_logging(json_lines) else plain)
    handlers: list[logging.Handler] = [stream_handler]

    if log_file is not None:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(plain)
        handlers.append(file_handler)

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        handlers=handlers,
        force=True,
    )
