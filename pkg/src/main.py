"""
CuspLab 메인 실행 파일
cusp 사상 에르고딕 실험 배치 실행기 (python -m src.main <subcommand> ...)
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.common.errors import CuspLabError
from src.common.json_logging import setup_logging
from src.config import settings
from src.family import register_builtin_families
from src.runner import SUBCOMMANDS, build_run_config, run

logger = logging.getLogger(__name__)


def _emit_error(payload: dict) -> None:
    """stderr 에 JSON 한 줄 (CSV/로그와 섞이지 않게)"""
    sys.stderr.write(json.dumps(payload, ensure_ascii=False, default=str) + "\n")
    sys.stderr.flush()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="CuspLab - cusp 사상 에르고딕 실험 실행기")
    parser.add_argument("subcommand", choices=SUBCOMMANDS, help="실행할 작업")
    parser.add_argument("--family", type=str, default=None, help="tent / g_alpha / f_alpha / chebyshev / g_b")
    parser.add_argument("--alpha", type=float, default=None)
    parser.add_argument("--b", type=float, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--n", type=int, default=None, help="궤도 길이 / 격자 크기")
    parser.add_argument("--depth", type=int, default=None, help="유도 사상 탐색 깊이")
    parser.add_argument("--bins", type=int, default=None)
    parser.add_argument("--weight", type=str, default=None, help="classify 가중치 (lebesgue/exact)")
    parser.add_argument("--out", type=Path, default=None, help="산출물 디렉토리")
    parser.add_argument("--config", type=Path, default=None, help="RunConfig YAML (없으면 run_config_dir 에서 찾음)")
    parser.add_argument(
        "--set", dest="assignments", action="append", default=[], metavar="KEY=VALUE",
        help="RunConfig 필드 덮어쓰기 (반복 가능)",
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """메인 함수: 종료 코드 반환 (0 성공, 2 설정, 3 수치, 4 전제조건)"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # 환경 변수 로드
    load_dotenv()
    setup_logging(settings.log_level, settings.log_json, settings.log_file)

    register_builtin_families()

    flags = {
        "family": args.family,
        "alpha": args.alpha,
        "b": args.b,
        "seed": args.seed,
        "n": args.n,
        "depth": args.depth,
        "bins": args.bins,
        "weight": args.weight,
        "out": args.out,
    }
    try:
        config = build_run_config(args.config, flags, args.assignments)
        csv_path, json_path = run(args.subcommand, config)
    except CuspLabError as e:
        logger.error(f"{args.subcommand} 실패: {type(e).__name__}: {e.message}")
        _emit_error(e.to_dict())
        return e.exit_code
    except Exception as e:
        logger.exception(f"{args.subcommand} 예기치 않은 오류")
        _emit_error({"error": type(e).__name__, "exit_code": 1, "message": str(e)})
        return 1

    logger.info(f"산출물: {csv_path}, {json_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
