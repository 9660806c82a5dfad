"""Instance files (JSON with a schema tag) and run reports."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .exact import exact_repr
from .harness import ExplicitFeasibleSet, HarnessError, Instance
from .linalg import frac_vector
from .lp import HPolytope
from .rand_intersect import MatroidError, NoCommonBase, VectorialMatroidPair
from .weights import FeasibleMeta, GeneralizedUnaryWeights, WeightError

SCHEMA = "nlcopt-instance/1"
REPORT_SCHEMA = "nlcopt-report/1"
SAFE_INT = 2 ** 53


class ParseError(ValueError):
    pass


class InvariantError(ValueError):
    pass


@dataclass(frozen=True)
class HRepFeasibleSet:
    """Integer points of an H-polytope, bounded by ``meta``."""

    polytope: HPolytope
    meta: FeasibleMeta

    @property
    def n(self) -> int:
        return self.polytope.n

    def explicit(self) -> ExplicitFeasibleSet:
        import itertools
        pts = []
        for x in itertools.product(range(self.meta.beta + 1), repeat=self.n):
            if sum(x) <= self.meta.beta and self.polytope.contains(x):
                pts.append(x)
        return ExplicitFeasibleSet(tuple(pts), self.meta)


# ---------------------------------------------------------------------------
# encoding helpers


def enc_int(v: int):
    v = int(v)
    return v if -SAFE_INT < v < SAFE_INT else str(v)


def enc_rat(v) -> Any:
    v = Fraction(v)
    if v.denominator == 1:
        return enc_int(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _dec_int(v, where: str) -> int:
    if isinstance(v, bool):
        raise ParseError(f"{where}: expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise ParseError(f"{where}: expected an integer, got {v!r}")


def _dec_rat(v, where: str) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise ParseError(f"{where}: expected an exact rational (int or 'p/q' string), got {v!r}")
    try:
        return Fraction(v)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: expected a rational, got {v!r}") from None


def _int_matrix(M, where: str):
    if not isinstance(M, list) or not all(isinstance(r, list) for r in M):
        raise ParseError(f"{where}: expected a list of rows")
    return [[_dec_int(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(M)]


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


# ---------------------------------------------------------------------------
# instances


def instance_to_dict(inst: Instance) -> dict:
    F = inst.feasible
    if isinstance(F, VectorialMatroidPair):
        feas = {"type": "matroid-pair", "M1": [[enc_int(v) for v in row] for row in F.M1],
                "M2": [[enc_int(v) for v in row] for row in F.M2]}
    elif isinstance(F, HRepFeasibleSet):
        P = F.polytope
        feas = {"type": "hrep", "beta": F.meta.beta,
                "A": [[enc_rat(v) for v in row] for row in P.A],
                "b": [enc_rat(v) for v in P.b], "eq_rows": sorted(P.eq_rows)}
    else:
        feas = {"type": "points", "beta": F.meta.beta, "n": F.meta.n,
                "points": [[enc_int(v) for v in p] for p in F.points]}
    W = inst.weights
    if W.p == 1 and W.a == (1,):
        weights = {"type": "dense", "W": [[enc_int(v) for v in row] for row in W.deltas[0]]}
    else:
        weights = {"type": "layers", "a": [str(a) for a in W.a],
                   "deltas": [[[enc_int(v) for v in row] for row in D] for D in W.deltas]}
    out = {"schema": SCHEMA, "name": inst.name, "feasible": feas, "weights": weights,
           "objective": inst.objective, "sense": inst.sense}
    if inst.primary is not None:
        out["primary_objective"] = [enc_int(v) for v in inst.primary]
    if inst.meta:
        out["generator"] = inst.meta
    return out


def instance_from_dict(data: dict, validate: bool = True) -> Instance:
    if not isinstance(data, dict):
        raise ParseError("instance: top level must be an object")
    schema = data.get("schema")
    if schema != SCHEMA:
        raise ParseError(f"schema: expected {SCHEMA!r}, got {schema!r}")
    feas = _field(data, "feasible", "instance")
    kind = _field(feas, "type", "feasible")
    try:
        if kind == "points":
            pts = _int_matrix(_field(feas, "points", "feasible"), "feasible.points")
            if not pts:
                raise ParseError("feasible.points: feasible set is empty")
            n = _dec_int(feas.get("n", len(pts[0])), "feasible.n")
            beta = _dec_int(feas.get("beta", max(sum(p) for p in pts)), "feasible.beta")
            F = ExplicitFeasibleSet(tuple(map(tuple, pts)), FeasibleMeta(beta, n))
        elif kind == "matroid-pair":
            M1 = _int_matrix(_field(feas, "M1", "feasible"), "feasible.M1")
            M2 = _int_matrix(_field(feas, "M2", "feasible"), "feasible.M2")
            F = (VectorialMatroidPair.validated(M1, M2) if validate
                 else VectorialMatroidPair(M1, M2))
        elif kind == "hrep":
            A = _field(feas, "A", "feasible")
            A = [[_dec_rat(v, f"feasible.A[{i}][{j}]") for j, v in enumerate(row)]
                 for i, row in enumerate(A)]
            b = [_dec_rat(v, f"feasible.b[{i}]") for i, v in enumerate(_field(feas, "b", "feasible"))]
            eq = [_dec_int(v, "feasible.eq_rows") for v in feas.get("eq_rows", [])]
            P = HPolytope(A, b, frozenset(eq), bounded=True)
            beta = _dec_int(_field(feas, "beta", "feasible"), "feasible.beta")
            F = HRepFeasibleSet(P, FeasibleMeta(beta, P.n))
        else:
            raise ParseError(f"feasible.type: unknown kind {kind!r}")
    except NoCommonBase:
        raise
    except (HarnessError, MatroidError, WeightError) as exc:
        raise InvariantError(str(exc)) from exc
    except ValueError as exc:
        if isinstance(exc, (ParseError, InvariantError)):
            raise
        raise InvariantError(str(exc)) from exc
    wobj = _field(data, "weights", "instance")
    wkind = _field(wobj, "type", "weights")
    try:
        if wkind == "dense":
            W = GeneralizedUnaryWeights.unary(_int_matrix(_field(wobj, "W", "weights"), "weights.W"))
        elif wkind == "layers":
            a = [_dec_int(v, f"weights.a[{k}]") for k, v in enumerate(_field(wobj, "a", "weights"))]
            deltas = [_int_matrix(D, f"weights.deltas[{k}]")
                      for k, D in enumerate(_field(wobj, "deltas", "weights"))]
            W = GeneralizedUnaryWeights(tuple(deltas), tuple(a))
        else:
            raise ParseError(f"weights.type: unknown kind {wkind!r}")
    except WeightError as exc:
        raise InvariantError(str(exc)) from exc
    primary = data.get("primary_objective")
    if primary is not None:
        primary = tuple(_dec_int(v, "primary_objective") for v in primary)
    try:
        return Instance(F, W, data.get("objective", "pnorm:2"), data.get("sense", "max"),
                        primary, data.get("name", ""), data.get("generator", {}))
    except HarnessError as exc:
        raise InvariantError(str(exc)) from exc


def parse_instance(path) -> Instance:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return instance_from_dict(data)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps(instance_to_dict(inst)))


def instance_digest(inst: Instance) -> str:
    canon = json.dumps(instance_to_dict(inst), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


# ---------------------------------------------------------------------------
# reports


def value_repr(v) -> Optional[dict]:
    if v is None:
        return None
    return exact_repr(v)


def report_digest(report: dict) -> str:
    body = {k: v for k, v in report.items() if k not in ("timing", "digest")}
    canon = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def finalize_report(report: dict) -> dict:
    report = dict(report)
    report["schema"] = REPORT_SCHEMA
    report["digest"] = report_digest(report)
    return report


def parse_vector(text: str) -> tuple:
    try:
        return tuple(frac_vector([v.strip() for v in text.split(",") if v.strip()]))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse vector {text!r}") from exc
