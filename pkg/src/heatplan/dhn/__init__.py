from .compile import CompileOptions, DhnCompiler, VariableLayout, compile_system
from .result import DesignResult
from .solve import (
    InfeasibleSystemError,
    audit_design,
    extract_design,
    extract_electric_profiles,
    solve_least_cost,
)

__all__ = [
    "CompileOptions",
    "DhnCompiler",
    "VariableLayout",
    "compile_system",
    "DesignResult",
    "InfeasibleSystemError",
    "audit_design",
    "extract_design",
    "extract_electric_profiles",
    "solve_least_cost",
]
