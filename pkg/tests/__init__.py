# Tests Package
"""테스트 모듈"""
