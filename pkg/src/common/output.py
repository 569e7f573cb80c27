"""
실행 산출물 기록: CSV (첫 줄 config hash 주석 + 헤더) 와 JSON verdict 리포트.

같은 설정/시드면 바이트 단위로 같은 파일이 나와야 하므로 타임스탬프는 넣지 않는다.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def write_csv(frame: pd.DataFrame, path: Path, config_hash: str) -> Path:
    """`# config_hash=<hex>` 한 줄 + RFC-4180 스타일 CSV (소수점 '.', 유효숫자 17)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = frame.to_csv(
        index=False,
        float_format=FLOAT_FORMAT,
        lineterminator="\n",
        na_rep="nan",
    )
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(f"# config_hash={config_hash}\n")
        fh.write(body)
    logger.debug(f"CSV 기록: {path} ({len(frame)} rows)")
    return path


def read_csv(path: Path) -> pd.DataFrame:
    """write_csv 로 쓴 파일을 다시 읽는다 (주석 줄 무시)"""
    return pd.read_csv(path, comment="#")


def _json_safe(value: Any) -> Any:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return _json_safe(value.tolist())
    if isinstance(value, np.generic):
        return _json_safe(value.item())
    return value


def write_report(report: Dict[str, Any], path: Path) -> Path:
    """정렬된 키 JSON 리포트"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_json_safe(report), sort_keys=True, indent=2, ensure_ascii=False)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(text + "\n")
    return path
