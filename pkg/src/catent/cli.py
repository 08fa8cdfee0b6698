"""Scenario configuration, orchestration, and machine-readable reporting.

Configs are JSON documents with a versioned schema (one ``kind`` per
scenario family); reports are versioned JSON with a stable field order, so
identical config and seed produce byte-identical output.  The ``timing``
field records deterministic work units (cone evaluations from a cold cache)
rather than wall-clock time, for the same reason.

Subcommands: ``validate``, ``run``, ``catalog``, ``series`` (CSV dump).
Exit codes: 0 success, 1 input error, 2 numeric error, 3 contract violation.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .descent import CoverScenario, quotient_verdict
from .errors import EngineError, InputError
from .graded import cone_evaluations
from .hilbert import HilbScenario, hilbert_lift_verdict
from .lattice import BilinearLattice, LatticeVector, SquareIntMatrix
from .twists import (
    HKModel,
    SurfaceModel,
    clear_caches,
    default_action_word,
    gy_verdict,
    spherical_twist_series,
)
from .words import (
    ActionWord,
    ExplicitMatrix,
    PTwist,
    Shift,
    SphericalTwist,
    TensorClass,
    induced_matrix,
    log_rho_is_exact_zero,
    tensor_matrix_from_nilpotent,
    word_log_rho,
)

SCHEMA_VERSION = 1
REPORT_VERSION = 1
KINDS = ("hk", "hilb", "enriques", "lattice_word", "surface_twist")
DEFAULT_TOL = 1e-9
MAX_RANK = 30
MAX_M = 64

_EXIT_CODES = {
    "InputError": 1,
    "ResourceError": 1,
    "NumericError": 2,
    "ContractError": 3,
    "CollapseError": 3,
}


# ---------------------------------------------------------------------------
# Config validation
# ---------------------------------------------------------------------------


def _check_int(out, data, key, path, lo=None, hi=None, required=True, default=None):
    if key not in data:
        if required:
            out.append(f"{path}{key}: required field is missing")
        return default
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int):
        out.append(f"{path}{key}: must be an integer, got {v!r}")
        return default
    if lo is not None and v < lo:
        out.append(f"{path}{key}: must be >= {lo}, got {v}")
        return default
    if hi is not None and v > hi:
        out.append(f"{path}{key}: must be <= {hi}, got {v}")
        return default
    return v


def _check_number(out, data, key, path, lo=None, required=True, default=None):
    if key not in data:
        if required:
            out.append(f"{path}{key}: required field is missing")
        return default
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        out.append(f"{path}{key}: must be a number, got {v!r}")
        return default
    if lo is not None and not v > lo:
        out.append(f"{path}{key}: must be > {lo}, got {v}")
        return default
    return float(v)


def _check_matrix(out, value, path, rank=None):
    if not isinstance(value, (list, tuple)) or not value:
        out.append(f"{path}: must be a nonempty list of rows")
        return None
    n = len(value)
    if rank is not None and n != rank:
        out.append(f"{path}: expected {rank} rows, got {n}")
        return None
    rows = []
    for i, row in enumerate(value):
        if (
            not isinstance(row, (list, tuple))
            or len(row) != n
            or any(isinstance(x, bool) or not isinstance(x, int) for x in row)
        ):
            out.append(f"{path}[{i}]: must be a row of {n} integers")
            return None
        rows.append(list(row))
    if n > MAX_RANK:
        out.append(f"{path}: rank {n} exceeds the desk-scale cap {MAX_RANK}")
        return None
    return rows


def _check_d_table(out, data, path):
    table = data.get("d_table")
    if not isinstance(table, (list, tuple)) or not table:
        out.append(f"{path}d_table: must be a nonempty list of integers")
        return None
    for i, v in enumerate(table, start=1):
        if isinstance(v, bool) or not isinstance(v, int):
            out.append(f"{path}d_table[{i}]: must be an integer, got {v!r}")
            return None
        if v <= 1:
            out.append(f"{path}d_table[{i}]: violates the invariant d_i > 1 (got {v})")
            return None
    if any(a > b for a, b in zip(table, table[1:])):
        out.append(f"{path}d_table: must be nondecreasing")
        return None
    return list(table)


def _validate_rr(out, data, path, require_m_max=True):
    """Shared fields of model-driven kinds: n, q or d_table, m_max, t."""
    norm = {}
    norm["n"] = _check_int(out, data, "n", path, lo=1, hi=8)
    has_q, has_table = "q" in data, "d_table" in data
    if has_q == has_table:
        out.append(f"{path}q: supply exactly one of q or d_table")
    elif has_q:
        norm["q"] = _check_int(out, data, "q", path, lo=1)
    else:
        norm["d_table"] = _check_d_table(out, data, path)
    if require_m_max:
        norm["m_max"] = _check_int(out, data, "m_max", path, lo=3, hi=MAX_M)
    norm["t"] = _check_number(out, data, "t", path, required=False, default=0.0)
    if norm["t"] is not None and norm["t"] < 0:
        out.append(f"{path}t: must be >= 0, got {norm['t']}")
    return norm


def _validate_lattice(out, data, path):
    if not isinstance(data, dict):
        out.append(f"{path}: must be an object with a gram matrix")
        return None
    norm = {}
    norm["gram"] = _check_matrix(out, data.get("gram"), f"{path}.gram")
    kind = data.get("symmetry_kind", "euler_general")
    if kind not in ("symmetric", "euler_general"):
        out.append(f"{path}.symmetry_kind: must be symmetric or euler_general")
        kind = None
    norm["symmetry_kind"] = kind
    sign = data.get("euler_sign", -1)
    if sign not in (1, -1):
        out.append(f"{path}.euler_sign: must be +1 or -1")
        sign = None
    norm["euler_sign"] = sign
    if norm["gram"] is not None and kind == "symmetric":
        g = norm["gram"]
        if any(
            g[i][j] != g[j][i] for i in range(len(g)) for j in range(i + 1, len(g))
        ):
            out.append(f"{path}.gram: symmetric lattice has an asymmetric gram")
    return norm


_GENERATOR_KINDS = ("shift", "ptwist", "tensor", "spherical", "explicit")


def _validate_word(out, data, path, rank):
    if not isinstance(data, list):
        out.append(f"{path}: must be a list of generator objects")
        return None
    norm = []
    for i, gen in enumerate(data):
        gpath = f"{path}[{i}]"
        if not isinstance(gen, dict) or gen.get("kind") not in _GENERATOR_KINDS:
            out.append(f"{gpath}.kind: must be one of {_GENERATOR_KINDS}")
            return None
        g = {"kind": gen["kind"]}
        if gen["kind"] in ("tensor", "explicit"):
            key = "nilpotent" if (gen["kind"] == "tensor" and "nilpotent" in gen) else "matrix"
            g[key] = _check_matrix(out, gen.get(key), f"{gpath}.{key}", rank=rank)
            if g[key] is None:
                return None
            g[key] = [list(r) for r in g[key]]
        elif gen["kind"] == "spherical":
            cls = gen.get("class")
            if (
                not isinstance(cls, (list, tuple))
                or (rank is not None and len(cls) != rank)
                or any(isinstance(x, bool) or not isinstance(x, int) for x in cls)
            ):
                out.append(f"{gpath}.class: must be a list of {rank} integers")
                return None
            g["class"] = list(cls)
            if gen.get("whitelisted"):
                g["whitelisted"] = True
        norm.append(g)
    return norm


def validate_config(data) -> tuple[dict | None, list[str]]:
    """Normalize a raw config; returns (normalized, violations).

    All detectable schema violations are collected, not just the first.
    """
    out: list[str] = []
    if not isinstance(data, dict):
        return None, ["config: must be a JSON object"]
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        out.append(f"schema_version: engine supports version {SCHEMA_VERSION}, got {version}")
    kind = data.get("kind")
    if kind not in KINDS:
        out.append(f"kind: must be one of {KINDS}, got {kind!r}")
        return None, out

    norm: dict = {"schema_version": SCHEMA_VERSION, "kind": kind}

    if kind == "hk":
        norm.update(_validate_rr(out, data, ""))
    elif kind == "surface_twist":
        sub = _validate_rr(out, {**data, "n": 1}, "")
        sub.pop("n")
        norm.update(sub)
        norm["k"] = _check_int(out, data, "k", "", lo=1, hi=20)
        norm["l"] = _check_int(out, data, "l", "", lo=1, hi=20)
        if norm.get("m_max") is not None and norm["m_max"] > 12:
            out.append("m_max: must be <= 12 for surface iteration, "
                       f"got {norm['m_max']}")
    elif kind == "hilb":
        norm["points"] = _check_int(out, data, "points", "", lo=1, hi=8)
        base = data.get("base")
        if not isinstance(base, dict):
            out.append("base: required object with the surface model fields")
        else:
            norm["base"] = _validate_rr(out, base, "base.")
    elif kind == "enriques":
        cover = data.get("cover")
        if not isinstance(cover, dict):
            out.append("cover: required object with the cover model fields")
        else:
            norm["cover"] = _validate_rr(out, cover, "cover.")
        lattice = _validate_lattice(out, data.get("lattice"), "lattice")
        norm["lattice"] = lattice
        rank = len(lattice["gram"]) if lattice and lattice.get("gram") else None
        deck = data.get("deck")
        if not isinstance(deck, dict):
            out.append("deck: required object with matrix and order")
        else:
            norm["deck"] = {
                "matrix": _check_matrix(out, deck.get("matrix"), "deck.matrix", rank=rank),
                "order": _check_int(out, deck, "order", "deck.", lo=1, hi=64),
            }
        norm["word"] = _validate_word(out, data.get("word"), "word", rank)
    elif kind == "lattice_word":
        lattice = _validate_lattice(out, data.get("lattice"), "lattice")
        norm["lattice"] = lattice
        rank = len(lattice["gram"]) if lattice and lattice.get("gram") else None
        norm["word"] = _validate_word(out, data.get("word"), "word", rank)

    norm["tol"] = _check_number(out, data, "tol", "", lo=0.0, required=False,
                                default=DEFAULT_TOL)
    norm["seed"] = _check_int(out, data, "seed", "", lo=0, required=False, default=0)

    if out:
        return None, out
    return norm, []


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated, normalized scenario configuration."""

    kind: str
    data: dict

    @property
    def tol(self) -> float:
        return self.data["tol"]

    @property
    def seed(self) -> int:
        return self.data["seed"]

    def to_dict(self) -> dict:
        return copy.deepcopy(self.data)


def load_config(source) -> ScenarioConfig:
    """Load and validate a config from a dict, a file path, or inline JSON."""
    if isinstance(source, dict):
        raw = source
    else:
        text = None
        if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        elif isinstance(source, str):
            text = source
        else:
            raise InputError(f"cannot load config from {source!r}")
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(
                f"config parse error at line {exc.lineno}, column {exc.colno}: "
                f"{exc.msg}"
            ) from exc
    norm, violations = validate_config(raw)
    if violations:
        raise InputError(
            "config validation failed:\n" + "\n".join(f"  - {v}" for v in violations),
            violations=violations,
        )
    return ScenarioConfig(norm["kind"], norm)


# ---------------------------------------------------------------------------
# Builtin presets
# ---------------------------------------------------------------------------

_ENRIQUES_TENSOR = [[1, 0, 0, 0], [-1, 1, 0, 0], [1, -2, 1, 0], [0, 0, 0, 1]]

_PRESETS = {
    "k3-q10": {
        "schema_version": 1,
        "kind": "hk",
        "n": 1,
        "q": 10,
        "m_max": 10,
    },
    "k3n-hilb": {
        "schema_version": 1,
        "kind": "hilb",
        "points": 3,
        "base": {"n": 1, "q": 10, "m_max": 10},
    },
    "hk-2n": {
        "schema_version": 1,
        "kind": "hk",
        "n": 2,
        "q": 2,
        "m_max": 8,
    },
    "enriques-over-hk": {
        "schema_version": 1,
        "kind": "enriques",
        "cover": {"n": 2, "q": 2, "m_max": 8},
        "lattice": {
            "gram": [
                [0, 0, -1, 0],
                [0, 2, 0, 0],
                [-1, 0, 0, 0],
                [0, 0, 0, -2],
            ],
            "symmetry_kind": "symmetric",
            "euler_sign": -1,
        },
        "deck": {
            "matrix": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]],
            "order": 2,
        },
        "word": [
            {"kind": "ptwist"},
            {"kind": "tensor", "matrix": _ENRIQUES_TENSOR},
        ],
    },
}

_PRESET_NOTES = {
    "k3-q10": "degree-10 polarized K3 model (twist-and-tensor word, d_1 = 7)",
    "k3n-hilb": "3-point Hilbert scheme lift of the k3-q10 gap",
    "hk-2n": "four-dimensional hyperkaehler-type model with form value 2",
    "enriques-over-hk": "cyclic quotient of the hk-2n cover with invariant polarization",
}


def list_builtin_models() -> dict[str, dict]:
    """Named preset configs; each validates under the current schema."""
    return copy.deepcopy(_PRESETS)


# ---------------------------------------------------------------------------
# Report records
# ---------------------------------------------------------------------------


@dataclass
class ReportRecord:
    """Self-auditing scenario report.

    The verdict is re-derivable from the record's own bound, log_rho, and
    exactness fields; ``timing`` counts cone evaluations from a cold cache
    so that identical runs produce identical reports.
    """

    scenario: dict
    verdict: str = "no violation certified"
    entropy_lower_certified: float | None = None
    empirical_slope: float | None = None
    log_rho: float | None = None
    log_rho_exact_zero: bool = False
    gap: float | None = None
    series: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    work_units: int = 0
    error: dict | None = None
    engine_version: str = __version__
    report_version: int = REPORT_VERSION

    def to_dict(self) -> dict:
        return {
            "report_version": self.report_version,
            "engine_version": self.engine_version,
            "scenario": copy.deepcopy(self.scenario),
            "verdict": self.verdict,
            "entropy_lower_certified": self.entropy_lower_certified,
            "empirical_slope": self.empirical_slope,
            "log_rho": self.log_rho,
            "log_rho_exact_zero": self.log_rho_exact_zero,
            "gap": self.gap,
            "series": copy.deepcopy(self.series),
            "details": copy.deepcopy(self.details),
            "timing": {"work_units": self.work_units},
            "error": copy.deepcopy(self.error),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReportRecord":
        return cls(
            scenario=d["scenario"],
            verdict=d["verdict"],
            entropy_lower_certified=d["entropy_lower_certified"],
            empirical_slope=d["empirical_slope"],
            log_rho=d["log_rho"],
            log_rho_exact_zero=d["log_rho_exact_zero"],
            gap=d["gap"],
            series=d["series"],
            details=d["details"],
            work_units=d["timing"]["work_units"],
            error=d["error"],
            engine_version=d["engine_version"],
            report_version=d["report_version"],
        )


def derive_verdict(
    bound: float | None,
    log_rho: float | None,
    exact_zero: bool,
    tol: float,
) -> str:
    """The one verdict gate: a violation needs a positive certified bound and
    either an exactly-zero log rho or a margin of ten tolerances."""
    if bound is None or log_rho is None or bound <= 0:
        return "no violation certified"
    if exact_zero or bound > log_rho + 10 * tol:
        return "GY violated"
    return "no violation certified"


def _series_rows(series) -> list:
    return [{"m": m, "lower": lo, "upper": hi} for m, lo, hi in series.rows()]


# ---------------------------------------------------------------------------
# Scenario execution
# ---------------------------------------------------------------------------


def _model_from(params: dict) -> HKModel:
    return HKModel(params["n"], params.get("q"), params.get("d_table"))


def _build_lattice(cfg: dict) -> BilinearLattice:
    return BilinearLattice(cfg["gram"], cfg["symmetry_kind"], cfg["euler_sign"])


def _build_word(lattice: BilinearLattice, entries: list) -> ActionWord:
    gens = []
    for entry in entries:
        kind = entry["kind"]
        if kind == "shift":
            gens.append(Shift())
        elif kind == "ptwist":
            gens.append(PTwist())
        elif kind == "tensor":
            if "nilpotent" in entry:
                matrix = tensor_matrix_from_nilpotent(
                    SquareIntMatrix(tuple(map(tuple, entry["nilpotent"])))
                )
            else:
                matrix = SquareIntMatrix(tuple(map(tuple, entry["matrix"])))
            gens.append(TensorClass(matrix))
        elif kind == "spherical":
            gens.append(
                SphericalTwist(
                    LatticeVector(tuple(entry["class"])),
                    whitelisted=bool(entry.get("whitelisted")),
                )
            )
        elif kind == "explicit":
            gens.append(
                ExplicitMatrix(SquareIntMatrix(tuple(map(tuple, entry["matrix"]))))
            )
    return ActionWord(lattice, tuple(gens))


def _run_hk(record: ReportRecord, params: dict, tol: float):
    model = _model_from(params)
    verdict = gy_verdict(model, params["m_max"], tol=tol)
    record.entropy_lower_certified = verdict.entropy_lower
    record.empirical_slope = verdict.empirical_slope
    record.log_rho = verdict.log_rho
    record.log_rho_exact_zero = verdict.log_rho_exact_zero
    record.gap = verdict.gap
    record.series = _series_rows(verdict.series)
    record.details = {"d1": model.dim(1), "n": model.n}
    record.verdict = verdict.verdict
    return model, verdict


def _run_hilb(record: ReportRecord, cfg: ScenarioConfig):
    base_model, base = _run_hk(record, cfg.data["base"], cfg.tol)
    sc = HilbScenario(
        n=cfg.data["points"],
        base_matrix=induced_matrix(default_action_word(base_model)),
        base_series=base.series,
        base_entropy_lower=base.entropy_lower,
        t=cfg.data["base"]["t"],
    )
    lifted = hilbert_lift_verdict(sc, tol=cfg.tol)
    record.entropy_lower_certified = lifted.entropy_lower
    record.empirical_slope = (
        None if record.empirical_slope is None
        else sc.n * record.empirical_slope
    )
    record.log_rho = lifted.log_rho
    record.log_rho_exact_zero = lifted.log_rho_exact_zero
    record.gap = lifted.entropy_lower - lifted.log_rho
    record.series = _series_rows(lifted.series)
    record.details = {
        "points": sc.n,
        "base_entropy_lower": base.entropy_lower,
        "base_log_rho": base.log_rho,
        "strict_gap": lifted.strict_gap,
    }
    record.verdict = derive_verdict(
        record.entropy_lower_certified,
        record.log_rho,
        record.log_rho_exact_zero,
        cfg.tol,
    )


def _run_enriques(record: ReportRecord, cfg: ScenarioConfig):
    cover_model, cover = _run_hk(record, cfg.data["cover"], cfg.tol)
    lattice = _build_lattice(cfg.data["lattice"])
    word = _build_word(lattice, cfg.data["word"])
    sc = CoverScenario(
        cover_lattice=lattice,
        deck_matrix=SquareIntMatrix(tuple(map(tuple, cfg.data["deck"]["matrix"]))),
        order=cfg.data["deck"]["order"],
        word=word,
        cover_entropy_bound=cover.entropy_lower,
    )
    verdict = quotient_verdict(sc, tol=cfg.tol)
    record.entropy_lower_certified = verdict.entropy_lower
    record.log_rho = verdict.quotient_log_rho
    record.log_rho_exact_zero = verdict.quotient_log_rho_exact_zero
    record.gap = verdict.entropy_lower - verdict.quotient_log_rho
    record.details = {
        "cover_log_rho": verdict.cover_log_rho,
        "quotient_rank": verdict.quotient_rank,
        "deck_order": sc.order,
        "cover_d1": cover_model.dim(1),
    }
    record.verdict = verdict.verdict


def _run_lattice_word(record: ReportRecord, cfg: ScenarioConfig):
    lattice = _build_lattice(cfg.data["lattice"])
    word = _build_word(lattice, cfg.data["word"])
    matrix = induced_matrix(word)
    exact_zero = log_rho_is_exact_zero(matrix)
    record.log_rho = 0.0 if exact_zero else word_log_rho(word, cfg.tol)
    record.log_rho_exact_zero = exact_zero
    record.details = {
        "rank": lattice.rank,
        "spectral_radius": 1.0 if exact_zero else math.exp(record.log_rho),
    }
    record.verdict = "no violation certified"


def _run_surface_twist(record: ReportRecord, cfg: ScenarioConfig):
    surface = SurfaceModel(cfg.data.get("q"), cfg.data.get("d_table"))
    series = spherical_twist_series(
        surface, cfg.data["k"], cfg.data["l"], cfg.data["m_max"], cfg.data["t"]
    )
    record.series = _series_rows(series)
    record.details = {"k": cfg.data["k"], "l": cfg.data["l"]}
    record.verdict = "no violation certified"


def run_scenario(cfg: ScenarioConfig) -> ReportRecord:
    """Execute one scenario; engine errors land in the report's error field."""
    clear_caches()
    start_work = cone_evaluations()
    record = ReportRecord(scenario=cfg.to_dict())
    try:
        if cfg.kind == "hk":
            _run_hk(record, cfg.data, cfg.tol)
        elif cfg.kind == "hilb":
            _run_hilb(record, cfg)
        elif cfg.kind == "enriques":
            _run_enriques(record, cfg)
        elif cfg.kind == "lattice_word":
            _run_lattice_word(record, cfg)
        elif cfg.kind == "surface_twist":
            _run_surface_twist(record, cfg)
        else:
            raise InputError(f"unknown scenario kind {cfg.kind!r}")
    except EngineError as exc:
        record.error = {"type": type(exc).__name__, "message": str(exc)}
        record.verdict = "error"
    record.work_units = cone_evaluations() - start_work
    return record


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def emit_report(record: ReportRecord, fmt: str = "json") -> str:
    """Render a report; JSON output is byte-stable and round-trips losslessly."""
    if fmt == "json":
        return json.dumps(record.to_dict(), indent=2, allow_nan=False) + "\n"
    if fmt != "table":
        raise InputError(f"unknown report format {fmt!r}")
    lines = [
        f"catent report v{record.report_version} (engine {record.engine_version})",
        f"scenario kind: {record.scenario.get('kind')}",
        f"verdict: {record.verdict}",
    ]
    if record.error:
        lines.append(f"error [{record.error['type']}]: {record.error['message']}")
    if record.entropy_lower_certified is not None:
        lines.append(
            f"certified entropy lower bound: {record.entropy_lower_certified:.12g}"
        )
    if record.empirical_slope is not None:
        lines.append(f"empirical log-slope: {record.empirical_slope:.12g}")
    if record.log_rho is not None:
        rho_text = (
            "0 (exact, unipotent)"
            if record.log_rho_exact_zero
            else f"{record.log_rho:.12g}"
        )
        lines.append(f"log spectral radius: {rho_text}")
    if record.gap is not None:
        lines.append(f"gap: {record.gap:.12g}")
    for key, val in record.details.items():
        lines.append(f"{key}: {val}")
    if record.series:
        lines.append("")
        lines.append(f"{'m':>4}  {'lower':>24}  {'upper':>24}")
        for row in record.series:
            upper = "unbounded" if row["upper"] is None else row["upper"]
            lines.append(f"{row['m']:>4}  {row['lower']:>24}  {upper:>24}")
    lines.append("")
    lines.append(f"work units: {record.work_units}")
    return "\n".join(lines) + "\n"


def emit_series_csv(record: ReportRecord) -> str:
    lines = ["m,lower,upper"]
    for row in record.series:
        upper = "inf" if row["upper"] is None else row["upper"]
        lines.append(f"{row['m']},{row['lower']},{upper}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------


def _load_from_args(args) -> ScenarioConfig:
    if args.preset and args.config:
        raise InputError("give either --config or --preset, not both")
    if args.preset:
        presets = list_builtin_models()
        if args.preset not in presets:
            raise InputError(
                f"unknown preset {args.preset!r}; available: {sorted(presets)}"
            )
        raw = presets[args.preset]
    elif args.config:
        raw = args.config
    else:
        raise InputError("one of --config or --preset is required")
    cfg = load_config(raw)
    data = cfg.to_dict()
    if getattr(args, "tol", None) is not None:
        data["tol"] = args.tol
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    if getattr(args, "m_max", None) is not None:
        for holder in ("base", "cover"):
            if holder in data:
                data[holder]["m_max"] = args.m_max
        if "m_max" in data:
            data["m_max"] = args.m_max
    return load_config(data)


def _write_out(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(parser, with_format=True):
    parser.add_argument("--config", help="path to a JSON config, or inline JSON")
    parser.add_argument("--preset", help="name of a builtin preset")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--tol", type=float, help="override tolerance")
    parser.add_argument("--m-max", dest="m_max", type=int, help="override m_max")
    parser.add_argument("--seed", type=int, help="override seed")
    if with_format:
        parser.add_argument(
            "--format", choices=("json", "table"), default="json",
            help="report format (default json)",
        )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="catent",
        description="Exact certificates for categorical-entropy vs. "
        "spectral-radius gaps on lattice models.",
    )
    sub = parser.add_subparsers(dest="command")

    _add_common(sub.add_parser("run", help="run a scenario and emit a report"))
    _add_common(sub.add_parser("validate", help="validate a config"), with_format=False)
    _add_common(
        sub.add_parser("series", help="dump the per-step bound series as CSV"),
        with_format=False,
    )
    sub.add_parser("catalog", help="list builtin presets")

    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 0

    try:
        if args.command == "catalog":
            presets = list_builtin_models()
            for name in sorted(presets):
                kind = presets[name]["kind"]
                print(f"{name:18} [{kind}] {_PRESET_NOTES.get(name, '')}")
            return 0

        cfg = _load_from_args(args)
        if args.command == "validate":
            _write_out(f"config OK: kind={cfg.kind}\n", args.out)
            return 0
        record = run_scenario(cfg)
        if args.command == "series":
            _write_out(emit_series_csv(record), args.out)
        else:
            _write_out(emit_report(record, args.format), args.out)
        if record.error is not None:
            sys.stderr.write(
                f"error [{record.error['type']}]: {record.error['message']}\n"
            )
            return _EXIT_CODES.get(record.error["type"], 1)
        return 0
    except EngineError as exc:
        sys.stderr.write(f"error [{type(exc).__name__}]: {exc}\n")
        return _EXIT_CODES.get(type(exc).__name__, 1)


if __name__ == "__main__":
    sys.exit(main())
