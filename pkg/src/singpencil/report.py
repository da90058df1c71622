"""Serializable run reports and their JSON, table and CSV renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .classify import FiniteInfiniteReport
from .nrank import RankDiagnosis
from .solvers import ClassifiedSpectrum, EigClass

_TYPE_LABEL = {
    EigClass.RANDOM_LEFT: "Random left",
    EigClass.RANDOM_RIGHT: "Random right",
    EigClass.PRESCRIBED: "Prescribed",
}


def _num(x):
    # JSON has no inf/nan
    if x is None or not math.isfinite(x):
        return None
    return float(x)


def _vec(v):
    return None if v is None else [[float(z.real), float(z.imag)] for z in v]


@dataclass
class EigenRecord:
    re: float | None
    im: float | None
    infinite: bool
    alpha: float
    beta: float
    gamma: float
    gap: float | None
    cls: str
    right: list | None = None
    left: list | None = None

    def to_dict(self) -> dict:
        d = {"re": self.re, "im": self.im, "infinite": self.infinite,
             "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
             "gap": self.gap, "class": self.cls}
        if self.right is not None:
            d["right"] = self.right
        if self.left is not None:
            d["left"] = self.left
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EigenRecord":
        return cls(d["re"], d["im"], d["infinite"], d["alpha"], d["beta"], d["gamma"],
                   d["gap"], d["class"], d.get("right"), d.get("left"))

    @property
    def label(self) -> str:
        if self.cls == EigClass.TRUE.value:
            return "Infinite true" if self.infinite else "Finite true"
        return _TYPE_LABEL[EigClass(self.cls)]


@dataclass
class RunReport:
    """Everything a solve run produces, in the shape of the JSON output."""

    method: str
    n: int
    m: int
    k: int
    nrank_source: str
    eigenvalues: list[EigenRecord]
    finite: list[dict]
    diagnosis: dict
    timings_ms: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "nrank_source": self.nrank_source,
            "eigenvalues": [e.to_dict() for e in self.eigenvalues],
            "finite": [dict(z) for z in self.finite],
            "diagnosis": self.diagnosis,
            "timings_ms": dict(self.timings_ms),
            "config": dict(self.config),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        return cls(
            method=d["method"], n=d["n"], m=d["m"], k=d["k"],
            nrank_source=d["nrank_source"],
            eigenvalues=[EigenRecord.from_dict(e) for e in d["eigenvalues"]],
            finite=[dict(z) for z in d["finite"]],
            diagnosis=d["diagnosis"],
            timings_ms=d.get("timings_ms", {}),
            config=d.get("config", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))


def build_report(spectrum: ClassifiedSpectrum, split: FiniteInfiniteReport,
                 diagnosis: RankDiagnosis, nrank_source: str,
                 timings_ms: dict | None = None, config: dict | None = None,
                 keep_vectors: bool = False) -> RunReport:
    """Assemble a report. ``split`` must come from the true entries of ``spectrum``."""
    true_iter = iter(split.per_entry)
    records = []
    for e in spectrum.entries:
        v = e.value
        gap = None
        infinite = v.is_infinite
        if e.kind is EigClass.TRUE:
            rep = next(true_iter)
            gap = _num(rep.gap)
            infinite = not rep.finite
        lam = None if v.is_infinite else v.value
        records.append(EigenRecord(
            re=None if lam is None else _num(lam.real),
            im=None if lam is None else _num(lam.imag),
            infinite=bool(infinite),
            alpha=float(e.alpha_i), beta=float(e.beta_i), gamma=float(e.gamma_i),
            gap=gap, cls=e.kind.value,
            right=_vec(e.right) if keep_vectors else None,
            left=_vec(e.left) if keep_vectors else None,
        ))
    finite = [{"re": float(z.value.real), "im": float(z.value.imag)} for z in split.finite]
    diag = {"verdict": diagnosis.verdict.value,
            "evidence": {k: (bool(v) if isinstance(v, bool) else int(v))
                         for k, v in diagnosis.evidence.items()}}
    return RunReport(spectrum.method.value, spectrum.n, spectrum.m, spectrum.k, nrank_source,
                     records, finite, diag, dict(timings_ms or {}), dict(config or {}))


def _fmt_lambda(e: EigenRecord) -> str:
    if e.re is None:
        return "inf"
    if e.im == 0:
        return f"{e.re:.7g}"
    sign = "+" if e.im >= 0 else "-"
    return f"{e.re:.7g} {sign} {abs(e.im):.7g}i"


def _fmt_small(x) -> str:
    return "" if x is None else f"{x:.1e}"


_COLUMNS = ["j", "lambda", "gamma", "alpha", "beta", "gap", "type"]


_ORDER = {c.value: i for i, c in enumerate(EigClass)}


def _rows(report: RunReport) -> list[list[str]]:
    ordered = sorted(report.eigenvalues, key=lambda e: (_ORDER[e.cls], e.infinite))
    rows = []
    for j, e in enumerate(ordered, 1):
        gap = "" if e.gap is None else f"{e.gap:.2f}"
        rows.append([str(j), _fmt_lambda(e), _fmt_small(e.gamma), _fmt_small(e.alpha),
                     _fmt_small(e.beta), gap, e.label])
    return rows


def render_table(report: RunReport) -> str:
    """Fixed-width table, one line per eigenvalue: finite true, infinite true, then the rest."""
    rows = _rows(report)
    widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c)
              for i, c in enumerate(_COLUMNS)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [f"method={report.method} n={report.n} m={report.m} k={report.k} "
             f"nrank_source={report.nrank_source}",
             fmt.format(*_COLUMNS),
             fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*r) for r in rows]
    lines.append(f"diagnosis: {report.diagnosis['verdict']}")
    return "\n".join(lines) + "\n"


def render_csv(report: RunReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "re", "im", "infinite", "alpha", "beta", "gamma", "gap", "class"])
    for j, e in enumerate(report.eigenvalues, 1):
        w.writerow([j, "" if e.re is None else repr(e.re), "" if e.im is None else repr(e.im),
                    int(e.infinite), repr(e.alpha), repr(e.beta), repr(e.gamma),
                    "" if e.gap is None else repr(e.gap), e.cls])
    return buf.getvalue()


def render(report: RunReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    if fmt == "table":
        return render_table(report)
    if fmt == "csv":
        return render_csv(report)
    raise ValueError(f"unknown format {fmt!r}")

