"""
분석 모듈

T_w 확률질량함수, 정확/점근 P_c, f·g 지표, 전수 열거 오라클, 공식 점검 기능을 제공한다.
"""

_EXPORTS = {
    "tw_pmf": "crowdfusion.analysis.profiles",
    "iter_profiles": "crowdfusion.analysis.profiles",
    "enumeration_size": "crowdfusion.analysis.profiles",
    "exact_pc_honest": "crowdfusion.analysis.exact",
    "exact_pc_oblivious": "crowdfusion.analysis.exact",
    "exact_pc_expurgation": "crowdfusion.analysis.exact",
    "profile_measure_total": "crowdfusion.analysis.exact",
    "moments": "crowdfusion.analysis.asymptotic",
    "asymptotic_pc": "crowdfusion.analysis.asymptotic",
    "asymptotic_pc_mv": "crowdfusion.analysis.asymptotic",
    "asymptotic_pc_from_f": "crowdfusion.analysis.asymptotic",
    "f_g_metrics": "crowdfusion.analysis.asymptotic",
    "f_m_derivative": "crowdfusion.analysis.asymptotic",
    "f_m_increase_condition": "crowdfusion.analysis.asymptotic",
    "oracle_pc": "crowdfusion.analysis.oracle",
    "AuditRow": "crowdfusion.analysis.audit",
    "audit_greedy_formulas": "crowdfusion.analysis.audit",
}


# Lazy imports to avoid circular import issues
def __getattr__(name):
    if name in _EXPORTS:
        import importlib
        module = importlib.import_module(_EXPORTS[name])
        return getattr(module, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = list(_EXPORTS)
