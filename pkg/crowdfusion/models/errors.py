"""
예외 정의

라이브러리 전반에서 사용하는 예외 계층.
CLI는 이 예외들을 종료 코드(2: 설정/파싱 오류, 3: 열거 상한 초과)로 변환한다.
"""

from typing import Optional


class CrowdFusionError(Exception):
    """crowdfusion 예외의 기본 클래스"""


class UnsupportedSchemeError(CrowdFusionError, ValueError):
    """해당 연산에서 지원하지 않는 가중치 방식"""


class DegenerateReliabilityError(CrowdFusionError, ValueError):
    """신뢰도가 0 또는 1이라 로그 오즈가 발산하는 경우"""


class LimitUndefinedError(CrowdFusionError, ValueError):
    """닫힌 형태 공식이 정의되지 않는 극한 (예: m = 0 에서의 x)"""


class ConfigError(CrowdFusionError, ValueError):
    """실험 설정 파일 또는 설정 값 오류"""


class EnumerationTooLargeError(CrowdFusionError, RuntimeError):
    """열거 공간이 설정된 상한을 초과한 경우"""

    def __init__(self, size: int, cap: int, what: str = "profiles"):
        self.size = size
        self.cap = cap
        self.what = what
        super().__init__(f"{what} 열거 크기 {size}가 상한 {cap}을 초과합니다.")


class AnswerParseError(CrowdFusionError, ValueError):
    """답안 파일 파싱 오류 (줄/열 위치 포함)"""

    def __init__(self, message: str, line: int, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{location}: {message}")
