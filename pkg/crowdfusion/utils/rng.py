"""
난수 스트림 분할

하나의 64비트 마스터 시드에서 (블록 인덱스, 용도 태그) 조합마다
독립적인 numpy Generator를 파생한다. 같은 (seed, block, tag)는
병렬 작업자 수와 관계없이 항상 같은 스트림을 만든다.
"""

import hashlib
import logging

import numpy as np


logger = logging.getLogger(__name__)


def tag_id(tag: str) -> int:
    """용도 태그를 32비트 정수 id로 변환

    Args:
        tag: 용도 태그 (예: "trials", "calibration")

    Returns:
        MD5 해시 앞 8자리로 만든 정수
    """
    return int(hashlib.md5(tag.encode()).hexdigest()[:8], 16)


def derive_stream(seed: int, block: int, tag: str, *extra: int) -> np.random.Generator:
    """(seed, block, tag, extra...)에 대한 결정적 Generator 생성

    Args:
        seed: 마스터 시드
        block: 블록(또는 셀) 인덱스
        tag: 용도 태그
        extra: 추가 구분자 (스윕 인덱스 등)

    Returns:
        독립 스트림 Generator
    """
    spawn_key = (int(block), tag_id(tag)) + tuple(int(e) for e in extra)
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=spawn_key)
    return np.random.default_rng(sequence)
