"""Packaged relation suites for the three constructions, plus a crossover suite.

A suite is a list of rows {"relation": str, "margin": int, "tolerance": float};
relations are written so the expression evaluates to zero.  Margins follow the
word length of the relation: 2 for quadratic ladder words, k+1 for the order-k
supercharge relation, 2k for Hamiltonian commutators, and 0 for exact
identities (grade algebra, nilpotency, finite modules).
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from typing import Sequence

from .constructions import SusySystem, build_system, kpowers_to_grades, structure_operator
from .core import InteriorMask, OperatorMatrix, masked_max_abs
from .errors import FsusyError
from .qarith import GradingParams
from .relations import eval_relation, parse_relation

__all__ = [
    "CheckReport",
    "DEFAULT_TOLERANCE",
    "SUITE_NAMES",
    "default_tolerance",
    "suite_rows",
    "build_suite_env",
    "evaluate_rows",
    "run_suite",
    "save_suite",
    "load_suite",
]

DEFAULT_TOLERANCE = 1e-10
STRICT_TOLERANCE = 1e-12
SUITE_NAMES = ("quon", "gwh", "uqsl2", "cross")


def default_tolerance() -> float:
    """Default pass tolerance, overridable through FSUSY_TOLERANCE."""
    raw = os.environ.get("FSUSY_TOLERANCE")
    return float(raw) if raw else DEFAULT_TOLERANCE


@dataclass(frozen=True)
class CheckReport:
    relation: str
    residual: float
    tolerance: float
    margin: int
    passed: bool
    dim: int
    error: str | None = None


def _pw(name: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return name
    return f"{name}^{e}"


def _defining_relation_text(k: int) -> str:
    terms = []
    for j in range(k):
        parts = [_pw("Q-", k - 1 - j), "Q+", _pw("Q-", j)]
        terms.append(" ".join(p for p in parts if p))
    rhs_parts = [_pw("Q-", k - 2), "H"]
    rhs = " ".join(p for p in rhs_parts if p)
    return " + ".join(terms) + " - " + rhs


def _ladder_rows(minus: str, plus: str, k: int, tol: float) -> list[dict]:
    qinv = "q" if k == 2 else f"q^{k - 1}"
    return [
        {"relation": f"K^{k} - 1", "margin": 0, "tolerance": STRICT_TOLERANCE},
        {"relation": f"K {plus} - q {plus} K", "margin": 0, "tolerance": STRICT_TOLERANCE},
        {"relation": f"K {minus} - {qinv} {minus} K", "margin": 0, "tolerance": STRICT_TOLERANCE},
        {"relation": "Q-^%d" % k, "margin": 0, "tolerance": STRICT_TOLERANCE},
        {"relation": "Q+^%d" % k, "margin": 0, "tolerance": STRICT_TOLERANCE},
        {"relation": "H Q- - Q- H", "margin": 2 * k, "tolerance": tol},
        {"relation": "H Q+ - Q+ H", "margin": 2 * k, "tolerance": tol},
        {"relation": _defining_relation_text(k), "margin": k + 1, "tolerance": tol},
    ]


def suite_rows(name: str, k: int, tolerance: float | None = None) -> list[dict]:
    """Relation rows for the named suite at grading order k."""
    tol = tolerance if tolerance is not None else default_tolerance()
    if name == "quon":
        rows = [{"relation": "[X-, X+] - 1", "margin": 2, "tolerance": tol}]
        rows += _ladder_rows("X-", "X+", k, tol)
        if k == 2:
            rows.append({"relation": "H - b+ b- - f+ f-", "margin": 2, "tolerance": tol})
        elif k == 3:
            rows.append(
                {
                    "relation": "H - 2 b+ b- + 1 - 2 (1 - 2 q) f+ f- - 2 (1 + 2 q) f+ f- f+ f-",
                    "margin": 2,
                    "tolerance": tol,
                }
            )
        return rows
    if name == "gwh":
        rows = [{"relation": "Y- Y+ - Y+ Y- - S", "margin": 2, "tolerance": tol}]
        rows += _ladder_rows("Y-", "Y+", k, tol)
        rows += [
            {"relation": "N Y+ - Y+ N - Y+", "margin": 2, "tolerance": tol},
            {"relation": "N Y- - Y- N + Y-", "margin": 2, "tolerance": tol},
            {"relation": "N K - K N", "margin": 0, "tolerance": STRICT_TOLERANCE},
        ]
        return rows
    if name == "uqsl2":
        qinv = f"q^{k - 1}"
        return [
            {
                "relation": f"(q - {qinv}) (J+ J- - J- J+) - qJ3^2 + qJ3inv^2",
                "margin": 0,
                "tolerance": tol,
            },
            {"relation": "qJ3 J+ qJ3inv - q J+", "margin": 0, "tolerance": STRICT_TOLERANCE},
            {"relation": f"qJ3 J- qJ3inv - {qinv} J-", "margin": 0, "tolerance": STRICT_TOLERANCE},
            {"relation": "qJ3 qJ3inv - 1", "margin": 0, "tolerance": STRICT_TOLERANCE},
            {"relation": f"K^{k} - 1", "margin": 0, "tolerance": STRICT_TOLERANCE},
            {"relation": "C J+ - J+ C", "margin": 0, "tolerance": tol},
            {"relation": "C J- - J- C", "margin": 0, "tolerance": tol},
            {"relation": "C qJ3 - qJ3 C", "margin": 0, "tolerance": tol},
            {"relation": "Q-^%d" % k, "margin": 0, "tolerance": STRICT_TOLERANCE},
            {"relation": "Q+^%d" % k, "margin": 0, "tolerance": STRICT_TOLERANCE},
            {"relation": "H Q- - Q- H", "margin": 0, "tolerance": tol},
            {"relation": "H Q+ - Q+ H", "margin": 0, "tolerance": tol},
        ]
    if name == "cross":
        return [
            {"relation": "Hgwh - Hquon", "margin": 2 * k, "tolerance": tol},
            {"relation": "FPi - CK", "margin": 0, "tolerance": STRICT_TOLERANCE},
        ]
    raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")


def _cross_coeffs(k: int) -> list[complex]:
    # deterministic complex coefficients for the K-power vs projector row
    return [complex(1.0)] + [complex(0.3 / (s + 1), 0.2 * s - 0.1) for s in range(1, k)]


def build_suite_env(
    name: str,
    k: int,
    nmax: int | None = None,
    j: int | None = None,
    structure: Sequence | None = None,
):
    """Build the operators a suite runs against.

    Returns (env, grading, mask_factory, dim).  The mask factory maps a margin
    to the interior mask appropriate for the suite's state space.
    """
    if name in ("quon", "gwh", "uqsl2"):
        system = build_system(name, k, nmax=nmax, j=j, structure=structure)
        env = system.env()
        return env, system.grading, system.interior, system.dim
    if name == "cross":
        if nmax is None:
            raise ValueError("cross suite needs nmax")
        quon = build_system("quon", k, nmax=nmax)
        gwh = build_system("gwh", k, nmax=nmax, structure=[1.0] * k)
        g = quon.grading
        coeffs = _cross_coeffs(k)
        grade_consts = kpowers_to_grades(coeffs, g)
        fpi = OperatorMatrix(
            sum(
                complex(grade_consts[i]) * quon.projectors[i].entries
                for i in range(k)
            ),
            "FPi",
        )
        ck = OperatorMatrix(
            sum(complex(coeffs[s]) * (quon.grading_op**s).entries for s in range(k)),
            "CK",
        )
        env = {
            "Hquon": quon.hamiltonian.relabeled("Hquon"),
            "Hgwh": gwh.hamiltonian.relabeled("Hgwh"),
            "FPi": fpi,
            "CK": ck,
        }
        return env, g, quon.interior, quon.dim
    raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")


def evaluate_rows(
    rows: Sequence[dict],
    env,
    g: GradingParams,
    mask_factory,
    dim: int,
) -> list[CheckReport]:
    """Evaluate parsed relation rows against an environment."""
    reports = []
    for row in rows:
        text = row["relation"]
        margin = int(row["margin"])
        tol = float(row["tolerance"])
        try:
            ast = parse_relation(text)
            value = eval_relation(ast, env, g)
            mask = mask_factory(margin)
            residual = masked_max_abs(value.entries, mask)
            reports.append(
                CheckReport(
                    relation=text,
                    residual=residual,
                    tolerance=tol,
                    margin=margin,
                    passed=residual <= tol,
                    dim=dim,
                )
            )
        except FsusyError as exc:
            reports.append(
                CheckReport(
                    relation=text,
                    residual=float("nan"),
                    tolerance=tol,
                    margin=margin,
                    passed=False,
                    dim=dim,
                    error=str(exc),
                )
            )
    return reports


def run_suite(
    name: str,
    *,
    k: int,
    nmax: int | None = None,
    j: int | None = None,
    structure: Sequence | None = None,
    tolerance: float | None = None,
) -> list[CheckReport]:
    """Build the named system and evaluate its packaged relation list."""
    env, g, mask_factory, dim = build_suite_env(
        name, k, nmax=nmax, j=j, structure=structure
    )
    rows = suite_rows(name, k, tolerance=tolerance)
    return evaluate_rows(rows, env, g, mask_factory, dim)


def save_suite(rows: Sequence[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(list(rows), fh, indent=1)


def load_suite(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        rows = json.load(fh)
    if not isinstance(rows, list):
        raise ValueError("suite file must hold a JSON list of relation rows")
    return rows


def report_to_dict(report: CheckReport) -> dict:
    return asdict(report)
