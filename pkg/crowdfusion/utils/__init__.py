# Utilities Package
"""유틸리티 함수"""

from crowdfusion.utils.rng import derive_stream, tag_id

__all__ = [
    "derive_stream",
    "tag_id",
]
