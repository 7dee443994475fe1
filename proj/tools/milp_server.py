#!/usr/bin/env python3
"""Line-oriented MILP solving service.

Reads one JSON request per stdin line, answers with one JSON response per
stdout line. Requests:

  {"cmd": "ping"}                          -> {"ok": true, "solver": "..."}
  {"id": N, "model": "/path/model.json",
   "options": {"rel_gap": 0.0, "time_limit": 60.0}}

The model file holds a sparse MILP:
  n        number of variables
  binary   indices of integer (0/1-bounded) variables
  lo, hi   variable bounds, length n
  obj      {"idx": [...], "coef": [...]}  (minimization, no constant)
  cons     {"row_start": [...], "col": [...], "coef": [...],
            "sense": [...], "rhs": [...]}   CSR rows; sense 0 <=, 1 =, 2 >=

Responses carry status optimal|infeasible|unbounded|timeout|error, the
objective, the variable values, and the relative MIP gap when available.
"""

import json
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp


def solve_model(path, options):
    with open(path) as handle:
        model = json.load(handle)

    n = model["n"]
    cost = np.zeros(n)
    for idx, coef in zip(model["obj"]["idx"], model["obj"]["coef"]):
        cost[idx] = coef

    integrality = np.zeros(n)
    if model["binary"]:
        integrality[np.array(model["binary"], dtype=int)] = 1
    bounds = Bounds(np.array(model["lo"], dtype=float), np.array(model["hi"], dtype=float))

    cons = model["cons"]
    rhs = np.array(cons["rhs"], dtype=float)
    constraints = None
    if len(rhs):
        matrix = sparse.csr_matrix(
            (cons["coef"], cons["col"], cons["row_start"]), shape=(len(rhs), n)
        )
        sense = np.array(cons["sense"], dtype=int)
        lower = np.where(sense == 0, -np.inf, rhs)
        upper = np.where(sense == 2, np.inf, rhs)
        constraints = LinearConstraint(matrix, lower, upper)

    solver_options = {"mip_rel_gap": float(options.get("rel_gap", 0.0))}
    if options.get("time_limit", 0) and options["time_limit"] > 0:
        solver_options["time_limit"] = float(options["time_limit"])

    result = milp(
        c=cost,
        integrality=integrality,
        bounds=bounds,
        constraints=constraints,
        options=solver_options,
    )

    status_names = {0: "optimal", 1: "timeout", 2: "infeasible", 3: "unbounded"}
    status = status_names.get(result.status, "error")
    response = {"status": status, "message": str(result.message)}
    if result.x is not None:
        response["objective"] = float(result.fun)
        response["values"] = [float(v) for v in result.x]
        gap = getattr(result, "mip_gap", None)
        response["gap"] = float(gap) if gap is not None else 0.0
    return response


def main():
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        request = None
        try:
            request = json.loads(line)
            if request.get("cmd") == "ping":
                response = {"ok": True, "solver": "scipy-highs"}
            elif request.get("cmd") == "quit":
                break
            else:
                response = solve_model(request["model"], request.get("options", {}))
                response["id"] = request.get("id")
        except Exception as exc:  # noqa: BLE001 - report everything to the client
            response = {"status": "error", "message": f"{type(exc).__name__}: {exc}"}
            if isinstance(request, dict):
                response["id"] = request.get("id")
        sys.stdout.write(json.dumps(response) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
