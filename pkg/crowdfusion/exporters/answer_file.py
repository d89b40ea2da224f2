"""
답안 파일 입출력

형식 (UTF-8, LF):
    worker,b1,b2,...,bN
    0,1,λ,0
    ...

기호: 0, 1, λ (별칭 "-", "skip")
정답 파일(gold)은 쉼표 또는 공백으로 구분한 0/1 토큰.
"""

import csv
import io
import logging
import os
import re
from typing import List, Sequence, Tuple

from crowdfusion.models.crowd_models import AnswerSymbol, AnswerWord
from crowdfusion.models.errors import AnswerParseError


logger = logging.getLogger(__name__)

SKIP_ALIASES = {"λ", "-", "skip"}

_HEADER_BIT = re.compile(r"^b(\d+)$")


def parse_symbol(token: str) -> AnswerSymbol:
    """토큰을 답안 기호로 변환

    Raises:
        ValueError: 알 수 없는 토큰
    """
    value = token.strip()
    if value == "0":
        return AnswerSymbol.ZERO
    if value == "1":
        return AnswerSymbol.ONE
    if value.lower() in SKIP_ALIASES:
        return AnswerSymbol.SKIP
    raise ValueError(f"unknown answer token {token!r}")


def _parse_header(fields: List[str]) -> int:
    if not fields or fields[0].strip() != "worker":
        raise AnswerParseError("header must start with 'worker'", line=1, column=1)
    if len(fields) < 2:
        raise AnswerParseError("header must list at least one bit column", line=1)
    for index, name in enumerate(fields[1:], start=1):
        match = _HEADER_BIT.match(name.strip())
        if not match or int(match.group(1)) != index:
            raise AnswerParseError(f"expected column 'b{index}', got {name.strip()!r}", line=1, column=index + 1)
    return len(fields) - 1


def parse_answer_text(text: str) -> Tuple[int, List[AnswerWord]]:
    """답안 텍스트 파싱

    Returns:
        (N, AnswerWord 목록)

    Raises:
        AnswerParseError: 형식 오류 (줄/열 위치 포함)
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise AnswerParseError("empty answer file", line=1)
    N = _parse_header(rows[0])

    words: List[AnswerWord] = []
    seen = set()
    for line_no, fields in enumerate(rows[1:], start=2):
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != N + 1:
            raise AnswerParseError(f"expected {N + 1} fields, got {len(fields)}", line=line_no)
        try:
            worker_id = int(fields[0].strip())
        except ValueError:
            raise AnswerParseError(f"invalid worker id {fields[0]!r}", line=line_no, column=1) from None
        if worker_id in seen:
            raise AnswerParseError(f"duplicate worker id {worker_id}", line=line_no, column=1)
        seen.add(worker_id)

        symbols = []
        for column, token in enumerate(fields[1:], start=2):
            try:
                symbols.append(parse_symbol(token))
            except ValueError as e:
                raise AnswerParseError(str(e), line=line_no, column=column) from None
        words.append(AnswerWord(worker_id=worker_id, symbols=tuple(symbols)))

    return N, words


def parse_answer_file(path: str) -> Tuple[int, List[AnswerWord]]:
    """답안 파일 파싱

    Args:
        path: 답안 CSV 경로

    Returns:
        (N, AnswerWord 목록)

    Raises:
        AnswerParseError: 형식 오류
        OSError: 파일 읽기 실패
    """
    with open(path, "r", encoding="utf-8", newline="") as f:
        text = f.read()
    N, words = parse_answer_text(text)
    logger.info(f"답안 파일 로드: {path} (작업자 {len(words)}명, N={N})")
    return N, words


def parse_gold_file(path: str) -> List[int]:
    """정답 파일 파싱 (0/1 토큰, 쉼표/공백 구분)

    Raises:
        AnswerParseError: 0/1 이외 토큰
    """
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().split("\n")
    gold: List[int] = []
    for line_no, line in enumerate(lines, start=1):
        tokens = [t for t in re.split(r"[,\s]+", line.strip()) if t]
        for column, token in enumerate(tokens, start=1):
            if token not in ("0", "1"):
                raise AnswerParseError(f"gold token must be 0 or 1, got {token!r}", line=line_no, column=column)
            gold.append(int(token))
    if not gold:
        raise AnswerParseError("gold file has no entries", line=1)
    return gold


def format_answers(words: Sequence[AnswerWord]) -> str:
    """답안 목록을 CSV 텍스트로 변환 (λ 기호 사용)"""
    if not words:
        raise ValueError("words must not be empty")
    N = words[0].length
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["worker"] + [f"b{i}" for i in range(1, N + 1)])
    for word in words:
        if word.length != N:
            raise ValueError(f"worker {word.worker_id} has length {word.length}, expected {N}")
        writer.writerow([word.worker_id] + [s.value for s in word.symbols])
    return buffer.getvalue()


def write_answer_file(path: str, words: Sequence[AnswerWord]) -> str:
    """답안 목록을 파일로 저장

    Returns:
        저장된 파일 경로
    """
    dir_path = os.path.dirname(path)
    if dir_path:
        os.makedirs(dir_path, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(format_answers(words))
    logger.info(f"답안 파일 저장: {path} (작업자 {len(words)}명)")
    return path
