"""Planning as satisfiability over SAS+ tasks: transition-based and fact-based CNF encodings."""

from .cnf import CliqueMode, CnfInstance, Status, VarKey, at_most_one, parse_solver_output, read_dimacs, write_dimacs
from .pe import decode_pe, derive_strips, encode_pe
from .planner import PE, SASE, PeOptions, oracle_makespan, plan, validate_plan
from .plans import ParallelPlan, read_plan, write_plan
from .sas_model import UNKNOWN, Operator, SasTask, StateVariable, parse_sas, toy_fixture, write_sas
from .sase import SaseOptions, decode_sase, encode_sase, find_action_substitutions, find_subsumed_cliques
from .solver import SolverConfig, SolveResult, solve, solve_external
from .transitions import Transition, TransitionTable, extract_transitions, s_mutex, transition_mutex

__version__ = "0.1.0"

__all__ = [
    "CliqueMode",
    "CnfInstance",
    "Status",
    "VarKey",
    "at_most_one",
    "parse_solver_output",
    "read_dimacs",
    "write_dimacs",
    "decode_pe",
    "derive_strips",
    "encode_pe",
    "PE",
    "SASE",
    "PeOptions",
    "oracle_makespan",
    "plan",
    "validate_plan",
    "ParallelPlan",
    "read_plan",
    "write_plan",
    "UNKNOWN",
    "Operator",
    "SasTask",
    "StateVariable",
    "parse_sas",
    "toy_fixture",
    "write_sas",
    "SaseOptions",
    "decode_sase",
    "encode_sase",
    "find_action_substitutions",
    "find_subsumed_cliques",
    "SolverConfig",
    "SolveResult",
    "solve",
    "solve_external",
    "Transition",
    "TransitionTable",
    "extract_transitions",
    "s_mutex",
    "transition_mutex",
]
