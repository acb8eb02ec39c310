"""Compilation pipeline: propagate, simplify, encode, plus a solve wrapper."""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field

from . import solver as sat
from .encode import Cnf, VarMap, encode_model, write_dimacs
from .literals import lit
from .model import Model, UNSAT, value_of
from .propagate import EPState, fixpoint
from .simplify import simplify


@dataclass
class CompileResult:
    state: EPState
    cnf: Cnf
    varmap: VarMap
    stats: dict

    def stats_line(self) -> str:
        s = self.stats
        return (
            "bits %d->%d constraints %d->%d ep-steps %d clauses %d auxvars %d"
            % (
                s["bits_before"],
                s["bits_after"],
                s["constraints_before"],
                s["constraints_after"],
                s["ep_steps"],
                s["clauses"],
                s["auxvars"],
            )
        )


def compile_model(
    model: Model,
    simplify_store: bool = True,
    node_budget: int = 1 << 22,
    trace=None,
) -> CompileResult:
    state = fixpoint(model, node_budget=node_budget, trace=trace)
    constraints_before = sum(
        1 for it in state.items if it.c.tag not in ("unary", "permutation")
    )
    if model.status != UNSAT and simplify_store:
        simplify(state)
    cnf, varmap = encode_model(state)
    constraints_after = sum(
        1
        for it in state.items
        if it.alive and it.c.tag not in ("unary", "permutation", "alldiff")
    )
    stats = {
        "bits_before": model.nvars,
        "bits_after": varmap.num_model_vars,
        "constraints_before": constraints_before,
        "constraints_after": constraints_after,
        "ep_steps": state.ep_steps,
        "clauses": cnf.num_clauses,
        "auxvars": cnf.num_vars - varmap.num_model_vars,
        "propagator_invocations": state.invocations,
        "low_level_constraints": state.low_level_count(),
    }
    return CompileResult(state, cnf, varmap, stats)


@dataclass
class SolveReport:
    kind: str  # "sat" | "unsat" | "unknown"
    assignment: dict[int, bool] | None = None  # solver vars
    count: int | None = None
    solver_calls: int = 0
    result: CompileResult | None = None

    def decoded_ints(self) -> dict[str, int]:
        out = {}
        model = self.result.state.model
        for kind, name in model.decl_order:
            if kind != "int" or name in model.aux_names:
                continue
            out[name] = decode_int(self.result, name, self.assignment or {})
        return out

    def decoded_vecs(self) -> dict[str, list[bool]]:
        out = {}
        model = self.result.state.model
        for kind, name in model.decl_order:
            if kind != "bits" or name in model.aux_names:
                continue
            vm = self.result.varmap
            out[name] = [
                vm.decode_bit(name, i, self.assignment or {})
                for i in range(1, len(model.vecs[name]) + 1)
            ]
        return out


def decode_int(result: CompileResult, name: str, assignment) -> int:
    model = result.state.model
    u = model.ints[name]
    vm = result.varmap
    value = 0
    for i in range(1, u.width + 1):
        if vm.decode_bit(name, i, assignment):
            value = i
        else:
            break
    return value


def user_project_vars(result: CompileResult) -> list[int]:
    model = result.state.model
    names = {
        name for _, name in model.decl_order if name not in model.aux_names
    }
    return result.varmap.project_vars(names)


def solve_model(
    model: Model,
    simplify_store: bool = True,
    solver_command: str | None = None,
    count_to: int | None = None,
    node_budget: int = 1 << 22,
) -> SolveReport:
    result = compile_model(model, simplify_store=simplify_store, node_budget=node_budget)
    if model.status == UNSAT:
        return SolveReport("unsat", solver_calls=0, result=result)
    if count_to is not None:
        count = sat.count_upto(result.cnf, user_project_vars(result), count_to)
        return SolveReport(
            "sat" if count else "unsat",
            count=count,
            solver_calls=count + 1,
            result=result,
        )
    if solver_command:
        with tempfile.NamedTemporaryFile(
            "w", suffix=".cnf", delete=False
        ) as fh:
            path = fh.name
        try:
            write_dimacs(result.cnf, result.varmap, path)
            ext = sat.run_external(path, solver_command)
        finally:
            os.unlink(path)
        return SolveReport(ext.kind, ext.assignment, solver_calls=1, result=result)
    res = sat.solve(result.cnf)
    if res is sat.UNSAT or isinstance(res, sat.Unsat):
        return SolveReport("unsat", solver_calls=1, result=result)
    return SolveReport("sat", res.assignment, solver_calls=1, result=result)
