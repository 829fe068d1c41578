"""Binary integer programs: model container, LP text dump, and exact solvers.

The default solver is depth-first branch-and-bound over LP relaxations solved
by a dense bounded-variable primal simplex. ``backend="highs"`` hands the same
model to ``scipy.optimize.milp`` instead.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from ..errors import Infeasible, VariableCapExceeded

LE, EQ, GE = "<=", "=", ">="

_TOL = 1e-9
_INT_TOL = 1e-6


@dataclass
class IlpModel:
    """Minimize ``objective`` over binary variables subject to linear rows."""

    name: str = "model"
    var_names: list = field(default_factory=list)
    rows: list = field(default_factory=list)  # (coeffs: dict[int, float], sense, rhs, name)
    objective: dict = field(default_factory=dict)
    constant: float = 0.0

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    def add_var(self, name: str, cost: float = 0.0) -> int:
        self.var_names.append(name)
        j = len(self.var_names) - 1
        if cost:
            self.objective[j] = self.objective.get(j, 0.0) + cost
        return j

    def add_constraint(self, coeffs: dict, sense: str, rhs: float, name: str | None = None) -> None:
        if sense not in (LE, EQ, GE):
            raise ValueError(f"bad sense {sense!r}")
        for j in coeffs:
            if not 0 <= j < self.n_vars:
                raise ValueError(f"constraint references undeclared variable {j}")
        coeffs = {j: float(a) for j, a in coeffs.items() if a != 0}
        self.rows.append((coeffs, sense, float(rhs), name or f"c{len(self.rows)}"))

    def add_cost(self, j: int, cost: float) -> None:
        self.objective[j] = self.objective.get(j, 0.0) + cost

    def evaluate(self, x) -> float:
        return self.constant + sum(c * x[j] for j, c in self.objective.items())

    def is_feasible(self, x, tol: float = 1e-7) -> bool:
        for coeffs, sense, rhs, _ in self.rows:
            lhs = sum(a * x[j] for j, a in coeffs.items())
            if sense == LE and lhs > rhs + tol:
                return False
            if sense == GE and lhs < rhs - tol:
                return False
            if sense == EQ and abs(lhs - rhs) > tol:
                return False
        return True

    def to_lp(self) -> str:
        """CPLEX LP text, for cross-checking with external solvers."""
        names = [_lp_name(n, j) for j, n in enumerate(self.var_names)]

        def expr(coeffs):
            if not coeffs:
                return "0 " + names[0] if names else "0"
            parts = []
            for j in sorted(coeffs):
                a = coeffs[j]
                sign = "-" if a < 0 else "+"
                parts.append(f"{sign} {abs(a):.12g} {names[j]}")
            s = " ".join(parts)
            return s[2:] if s.startswith("+ ") else s

        lines = [f"\\ {self.name}", "Minimize", f" obj: {expr(self.objective)}", "Subject To"]
        for coeffs, sense, rhs, name in self.rows:
            lines.append(f" {_lp_name(name, 0)}: {expr(coeffs)} {sense} {rhs:.12g}")
        lines.append("Bounds")
        lines += [f" 0 <= {n} <= 1" for n in names]
        lines.append("Binaries")
        lines += [f" {n}" for n in names]
        lines.append("End")
        return "\n".join(lines) + "\n"


def _lp_name(name: str, j: int) -> str:
    s = re.sub(r"[^A-Za-z0-9_.]", "_", name)
    if not s or s[0].isdigit() or s[0] == ".":
        s = f"v{j}_{s}"
    return s


@dataclass(frozen=True)
class IlpResult:
    x: tuple
    objective: float
    nodes: int = 0


class _Unbounded(Exception):
    pass


def _simplex(c, A, b, ub, max_iter=50000):
    """Minimize c@x s.t. A@x = b, 0 <= x <= ub.  Returns x or None if infeasible.

    Nonbasic variables sit at either bound. Entering variables follow the
    largest reduced cost; after a run of degenerate pivots the rule falls back
    to Bland's lowest-index choice until progress resumes.
    """
    m, n = A.shape
    A = A.astype(float).copy()
    b = b.astype(float).copy()
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    # initial basis: a +1 identity column with zero cost where available, else an artificial
    basis = [-1] * m
    for j in range(n):
        col = A[:, j]
        if ub[j] == np.inf and c[j] == 0:
            nz = np.nonzero(col)[0]
            if len(nz) == 1 and col[nz[0]] == 1.0 and basis[nz[0]] == -1:
                basis[nz[0]] = j
    need = [i for i in range(m) if basis[i] == -1]
    n_art = len(need)
    T = np.zeros((m, n + n_art))
    T[:, :n] = A
    for k, i in enumerate(need):
        T[i, n + k] = 1.0
        basis[i] = n + k
    ubx = np.concatenate([ub.astype(float), np.full(n_art, np.inf)])
    at_upper = np.zeros(n + n_art, dtype=bool)
    beta = b.copy()
    basis = np.array(basis)

    def run(cost):
        nonlocal T, beta
        degenerate = 0
        for _ in range(max_iter):
            cb = cost[basis]
            d = cost - cb @ T
            d[basis] = 0.0
            movable = ubx > 0
            cand = ((~at_upper) & (d < -_TOL) & movable) | (at_upper & (d > _TOL) & movable)
            cand[basis] = False
            idx = np.nonzero(cand)[0]
            if len(idx) == 0:
                return
            if degenerate > 20:
                j = int(idx[0])
            else:
                j = int(idx[np.argmax(np.abs(d[idx]))])
            delta = -1.0 if at_upper[j] else 1.0
            col = T[:, j] * delta
            t_best = ubx[j]
            r_best = -1
            to_upper = False
            for i in np.nonzero(np.abs(col) > _TOL)[0]:
                if col[i] > 0:
                    t = beta[i] / col[i]
                    up = False
                else:
                    ubi = ubx[basis[i]]
                    if ubi == np.inf:
                        continue
                    t = (ubi - beta[i]) / -col[i]
                    up = True
                t = max(t, 0.0)
                if t < t_best - _TOL or (r_best >= 0 and abs(t - t_best) <= _TOL and basis[i] < basis[r_best]):
                    t_best, r_best, to_upper = t, i, up
            if t_best == np.inf:
                raise _Unbounded()
            degenerate = degenerate + 1 if t_best <= _TOL else 0
            beta -= t_best * col
            if r_best < 0:
                at_upper[j] = not at_upper[j]
                continue
            leaving = basis[r_best]
            entering_val = (ubx[j] - t_best) if at_upper[j] else t_best
            at_upper[leaving] = to_upper
            at_upper[j] = False
            piv = T[r_best, j]
            T[r_best] /= piv
            colj = T[:, j].copy()
            colj[r_best] = 0.0
            T -= np.outer(colj, T[r_best])
            basis[r_best] = j
            beta[r_best] = entering_val
            # keep basic values consistent with bounds after round-off
            np.clip(beta, 0.0, ubx[basis], out=beta)
        raise RuntimeError("simplex iteration limit reached")

    if n_art:
        phase1 = np.zeros(n + n_art)
        phase1[n:] = 1.0
        run(phase1)
        art_val = sum(beta[i] for i in range(m) if basis[i] >= n)
        if art_val > 1e-7:
            return None
        ubx[n:] = 0.0
        at_upper[n:] = False
    cost = np.concatenate([c.astype(float), np.zeros(n_art)])
    run(cost)
    x = np.where(at_upper, ubx, 0.0)
    x[basis] = beta
    return x[:n]


class _Dense:
    """Model rows in equality form with slack columns appended."""

    def __init__(self, model: IlpModel):
        n = model.n_vars
        m = len(model.rows)
        n_slack = sum(1 for r in model.rows if r[1] != EQ)
        A = np.zeros((m, n + n_slack))
        b = np.zeros(m)
        k = n
        for i, (coeffs, sense, rhs, _) in enumerate(model.rows):
            for j, a in coeffs.items():
                A[i, j] = a
            if sense == LE:
                A[i, k] = 1.0
                k += 1
            elif sense == GE:
                A[i, k] = -1.0
                k += 1
            b[i] = rhs
        self.A, self.b, self.n = A, b, n
        self.c = np.zeros(n + n_slack)
        for j, v in model.objective.items():
            self.c[j] = v
        self.ub = np.concatenate([np.ones(n), np.full(n_slack, np.inf)])

    def relax(self, fixed: dict):
        """LP relaxation with ``fixed`` variables substituted out."""
        b = self.b.copy()
        ub = self.ub.copy()
        offset = 0.0
        for j, v in fixed.items():
            ub[j] = 0.0
            if v:
                b -= self.A[:, j]
                offset += self.c[j]
        try:
            x = _simplex(self.c, self.A, b, ub)
        except _Unbounded:
            raise RuntimeError("LP relaxation unbounded; binaries should bound it")
        if x is None:
            return None, None
        for j, v in fixed.items():
            x[j] = float(v)
        return x[:self.n], float(self.c[:self.n] @ x[:self.n])


def _solve_bnb(model: IlpModel, node_limit: int | None) -> IlpResult:
    if not model.rows:
        # each binary independently at its cheaper bound; ties go to 0
        x = tuple(1 if model.objective.get(j, 0.0) < 0 else 0 for j in range(model.n_vars))
        return IlpResult(x, model.evaluate(x), 1)
    dense = _Dense(model)
    best_x = None
    best_obj = math.inf
    stack = [{}]
    nodes = 0
    while stack:
        fixed = stack.pop()
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise RuntimeError(f"branch-and-bound node limit {node_limit} reached")
        x, obj = dense.relax(fixed)
        if x is None or obj + model.constant >= best_obj - 1e-9:
            continue
        frac = np.minimum(x - np.floor(x), np.ceil(x) - x)
        frac[list(fixed)] = 0.0
        if frac.max() <= _INT_TOL:
            xi = tuple(int(round(v)) for v in x)
            if model.is_feasible(xi):
                val = model.evaluate(xi)
                if val < best_obj - 1e-12:
                    best_obj, best_x = val, xi
            continue
        # most fractional, lowest index on ties
        j = int(np.argmax(frac >= frac.max() - 1e-12))
        up = dict(fixed)
        up[j] = 1
        down = dict(fixed)
        down[j] = 0
        if x[j] >= 0.5:
            stack += [down, up]
        else:
            stack += [up, down]
    if best_x is None:
        raise Infeasible(f"{model.name}: no integral solution")
    return IlpResult(best_x, best_obj, nodes)


def _solve_highs(model: IlpModel) -> IlpResult:
    from scipy.optimize import LinearConstraint, milp
    from scipy.sparse import lil_matrix

    n = model.n_vars
    c = np.zeros(n)
    for j, v in model.objective.items():
        c[j] = v
    cons = []
    if model.rows:
        A = lil_matrix((len(model.rows), n))
        lo = np.full(len(model.rows), -np.inf)
        hi = np.full(len(model.rows), np.inf)
        for i, (coeffs, sense, rhs, _) in enumerate(model.rows):
            for j, a in coeffs.items():
                A[i, j] = a
            if sense in (LE, EQ):
                hi[i] = rhs
            if sense in (GE, EQ):
                lo[i] = rhs
        cons.append(LinearConstraint(A.tocsr(), lo, hi))
    res = milp(c, constraints=cons, integrality=np.ones(n), bounds=(0, 1))
    if res.status != 0 or res.x is None:
        raise Infeasible(f"{model.name}: {res.message}")
    xi = tuple(int(round(v)) for v in res.x)
    return IlpResult(xi, model.evaluate(xi), 0)


def solve_ilp(model: IlpModel, backend: str = "bnb", var_cap: int = 5000,
              node_limit: int | None = None) -> IlpResult:
    """Provably optimal binary assignment; raises ``Infeasible`` or ``VariableCapExceeded``."""
    if model.n_vars > var_cap:
        raise VariableCapExceeded(f"{model.name}: {model.n_vars} variables > cap {var_cap}")
    if model.n_vars == 0:
        if not model.is_feasible(()):
            raise Infeasible(f"{model.name}: constant rows violated")
        return IlpResult((), model.constant, 0)
    if backend == "bnb":
        res = _solve_bnb(model, node_limit)
    elif backend == "highs":
        res = _solve_highs(model)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return res
