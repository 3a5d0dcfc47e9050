"""Bounded planning via SAT and QBF encodings.

Thin convenience layer over the native ``_qplan`` module: PDDL parsing and
task compilation, the grounded CNF and ungrounded QBF encoders, the internal
solvers, the exact-horizon oracle and plan validation.
"""

try:
    # Installed wheel: the extension lives inside the package.
    from ._qplan import (
        CompileError,
        ParseError,
        PlanningTask,
        SizeGuardError,
        TaskError,
        encode_qbf_qcir,
        encode_qbf_qdimacs,
        encode_sat,
        load_task,
        oracle,
        solve,
        stats,
        validate,
    )
except ImportError:
    # In-tree build: the extension sits on sys.path (the CMake build dir).
    from _qplan import (
        CompileError,
        ParseError,
        PlanningTask,
        SizeGuardError,
        TaskError,
        encode_qbf_qcir,
        encode_qbf_qdimacs,
        encode_sat,
        load_task,
        oracle,
        solve,
        stats,
        validate,
    )

__all__ = [
    "CompileError",
    "ParseError",
    "PlanningTask",
    "SizeGuardError",
    "TaskError",
    "encode_qbf_qcir",
    "encode_qbf_qdimacs",
    "encode_sat",
    "load_task",
    "load_task_files",
    "oracle",
    "solve",
    "stats",
    "validate",
]


def load_task_files(domain_path, problem_path):
    """Compile a task from PDDL files instead of strings."""
    with open(domain_path) as f:
        domain = f.read()
    with open(problem_path) as f:
        problem = f.read()
    return load_task(domain, problem)
