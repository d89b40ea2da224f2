"""
크라우드 생성기

작업자 프로필 샘플링, 답안 생성, 클래스 부호화/복호화.
스칼라 API(sample_profiles, generate_answers)와 Monte Carlo 엔진이 쓰는
배열 API(sample_profile_arrays, answers_from_uniforms)를 함께 제공한다.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from crowdfusion.models.crowd_models import (
    INVALID_CODEWORD,
    ONE_CODE,
    SKIP_CODE,
    AnswerWord,
    CrowdModel,
    TruthWord,
    WorkerProfile,
    bits_to_class,
    class_bit_table,
    greedy_count,
    profiles_to_arrays,
)


logger = logging.getLogger(__name__)


def encode_class(class_index: int, N: int) -> TruthWord:
    """클래스 인덱스를 N비트 이진 부호로 변환 (첫 비트가 MSB)

    Raises:
        ValueError: class_index가 N비트로 표현되지 않는 경우
    """
    if not 0 <= class_index < 2 ** N:
        raise ValueError(f"class_index {class_index} does not fit in {N} bits")
    bits = tuple((class_index >> (N - 1 - i)) & 1 for i in range(N))
    return TruthWord(class_index=class_index, bits=bits)


def decode_class(bits: Sequence[int], M: int) -> int:
    """이진 부호를 클래스로 복호화

    Returns:
        클래스 인덱스. 값이 M 이상이면 INVALID_CODEWORD (오분류)
    """
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    if value >= M:
        return INVALID_CODEWORD
    return value


def decode_classes(bits: np.ndarray, M: int) -> np.ndarray:
    """(..., N) 비트 배열의 벡터화 복호화"""
    values = bits_to_class(bits)
    return np.where(values < M, values, INVALID_CODEWORD)


def draw_truth(M: int, N: int, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """정답 클래스를 M개 유효 부호어에서 균등 추출

    Returns:
        (class_indices (size,), bits (size, N))
    """
    classes = rng.integers(0, M, size=size)
    return classes, class_bit_table(M, N)[classes]


def sample_profile_arrays(
    model: CrowdModel,
    rng: np.random.Generator,
    trials: int = 1
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """시행별 작업자 프로필을 배열로 샘플링

    앞쪽 round(W·α)명은 탐욕 작업자 (p=0, ρ=0.5).

    Returns:
        (skip_probs (trials, W, N), reliabilities (trials, W, N), greedy_mask (W,))
    """
    shape = (trials, model.W, model.N)
    skip = model.p_dist.sample(rng, shape)
    rho = model.rho_dist.sample(rng, shape)
    g = model.n_greedy
    greedy_mask = np.zeros(model.W, dtype=bool)
    greedy_mask[:g] = True
    skip[:, :g, :] = 0.0
    rho[:, :g, :] = 0.5
    return skip, rho, greedy_mask


def sample_profiles(model: CrowdModel, rng: np.random.Generator) -> List[WorkerProfile]:
    """작업자 W명의 프로필 샘플링

    Args:
        model: 크라우드 모델
        rng: 난수 스트림

    Returns:
        WorkerProfile 목록 (앞쪽 round(W·α)명은 탐욕 작업자)
    """
    skip, rho, greedy_mask = sample_profile_arrays(model, rng, trials=1)
    profiles = []
    for w in range(model.W):
        if greedy_mask[w]:
            profiles.append(WorkerProfile.greedy_profile(model.N))
        else:
            profiles.append(WorkerProfile(
                skip_probs=tuple(skip[0, w]),
                reliabilities=tuple(rho[0, w])
            ))
    logger.debug(f"프로필 샘플링 완료: W={model.W}, 탐욕 작업자={greedy_count(model.W, model.alpha)}")
    return profiles


def answers_from_uniforms(
    skip_probs: np.ndarray,
    reliabilities: np.ndarray,
    truth_bits: np.ndarray,
    u_skip: np.ndarray,
    u_correct: np.ndarray
) -> np.ndarray:
    """균등 난수로부터 답안 코드 배열을 결정적으로 생성

    u_skip < p 이면 λ, 아니면 u_correct < ρ 일 때 정답 비트, 그 외 반대 비트.

    Args:
        skip_probs, reliabilities: (..., W, N)
        truth_bits: (..., N)
        u_skip, u_correct: (..., W, N) 균등 난수

    Returns:
        (..., W, N) int8 코드 배열 (0, 1, 2=λ)
    """
    truth = np.asarray(truth_bits, dtype=np.int8)[..., None, :]
    correct = u_correct < reliabilities
    answered = np.where(correct, truth, ONE_CODE - truth)
    return np.where(u_skip < skip_probs, SKIP_CODE, answered).astype(np.int8)


def generate_answer_codes(
    skip_probs: np.ndarray,
    reliabilities: np.ndarray,
    truth_bits: np.ndarray,
    rng: np.random.Generator
) -> np.ndarray:
    """프로필 배열과 정답 비트로 답안 코드 배열 생성"""
    shape = np.broadcast_shapes(np.shape(skip_probs), np.shape(reliabilities))
    u_skip = rng.random(shape)
    u_correct = rng.random(shape)
    return answers_from_uniforms(skip_probs, reliabilities, truth_bits, u_skip, u_correct)


def generate_answers(
    profiles: Sequence[WorkerProfile],
    truth: TruthWord,
    rng: np.random.Generator
) -> List[AnswerWord]:
    """작업자 답안 생성

    Args:
        profiles: 작업자 프로필 목록
        truth: 정답 부호
        rng: 난수 스트림

    Returns:
        AnswerWord 목록 (작업자 순서 유지)

    Raises:
        ValueError: 프로필 길이가 정답 길이와 다른 경우
    """
    for profile in profiles:
        if profile.length != truth.length:
            raise ValueError(f"profile length {profile.length} does not match truth length {truth.length}")
    if not profiles:
        return []
    skip, rho = profiles_to_arrays(list(profiles))
    codes = generate_answer_codes(skip, rho, np.array(truth.bits), rng)
    return [AnswerWord.from_codes(w, codes[w]) for w in range(len(profiles))]
