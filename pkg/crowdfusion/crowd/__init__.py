# Crowd Package
"""크라우드 프로필/답안 생성"""

from crowdfusion.crowd.generator import (
    encode_class,
    decode_class,
    decode_classes,
    draw_truth,
    sample_profiles,
    sample_profile_arrays,
    generate_answers,
    generate_answer_codes,
    answers_from_uniforms,
)

__all__ = [
    "encode_class",
    "decode_class",
    "decode_classes",
    "draw_truth",
    "sample_profiles",
    "sample_profile_arrays",
    "generate_answers",
    "generate_answer_codes",
    "answers_from_uniforms",
]
