"""Config-driven experiment runner with table/figure presets and CSV output.

Every trial is deterministic given (master_seed, trial_index): the trial seed
is hash64(master_seed, trial_index) and each stochastic stage (graph, element
placement, qualities, per-bundle noise, per-rule tie-breaks) draws from its
own keyed substream. Trials are embarrassingly parallel; rows are sorted
before writing so the worker-pool size never changes the output file.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import os
from dataclasses import dataclass

import numpy as np

from .aggregate import borda, mc4, rsd
from .bundles import (
    BundleGraph,
    _is_prime,
    assign,
    girth6_copies,
    kkk_copies,
    random_k_regular,
)
from .core import PartialRanking, Profile, Ranking, recovered_fraction
from .noise import (
    DEFAULT_MAX_ATTEMPTS,
    InfeasibleSamplingError,
    noisy_partial_ranking,
    sample_qualities,
)
from .rng import hash64, substream

__all__ = [
    "GRAPH_FAMILIES",
    "RULES",
    "CSV_COLUMNS",
    "ExperimentConfig",
    "ResultRow",
    "trial_seed_for",
    "build_graph",
    "run_trial",
    "run_experiments",
    "preset",
    "PRESET_NAMES",
    "config_from_dict",
    "load_configs",
    "format_rows",
    "write_rows",
    "read_rows",
    "summarize",
]

GRAPH_FAMILIES = ("random", "girth6", "kkk")
RULES = ("borda", "rsd", "mc4")
CSV_COLUMNS = (
    "experiment",
    "graph_family",
    "n",
    "k",
    "noise_level",
    "rule",
    "trial_index",
    "trial_seed",
    "recovered_fraction",
    "status",
)

PRESET_NAMES = ("table1", "table2", "fig2", "fig3")

# (k, n) shapes used by the perfect-grading comparison table; the girth-6
# column needs k = p+1 with p prime (or 1) and a component count dividing n.
_TABLE1_SHAPES = ((2, 1002), (3, 1001), (4, 1001), (6, 1023), (8, 1026), (12, 1064))


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment cell: a graph shape, a noise level, and the rules to run."""

    experiment: str
    graph_family: str
    n: int
    k: int
    noise_level: float
    rules: tuple[str, ...]
    trials: int
    master_seed: int
    max_attempts: int = DEFAULT_MAX_ATTEMPTS

    def __post_init__(self):
        if self.graph_family not in GRAPH_FAMILIES:
            raise ValueError(
                f"unknown graph_family {self.graph_family!r}; "
                f"expected one of {GRAPH_FAMILIES}"
            )
        rules = tuple(self.rules)
        object.__setattr__(self, "rules", rules)
        if not rules or any(r not in RULES for r in rules):
            raise ValueError(f"rules must be a non-empty subset of {RULES}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 <= self.noise_level <= 1.0:
            raise ValueError("noise_level must be in [0, 1]")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.graph_family == "girth6":
            # validate shape compatibility eagerly so presets fail fast
            girth6_component_size(self.k)
            if self.n % girth6_component_size(self.k) != 0:
                raise ValueError(
                    f"girth6 family needs n divisible by {girth6_component_size(self.k)}"
                )
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


def girth6_component_size(k: int) -> int:
    """Nodes per side of one girth-6 component for degree k (k-1 must be prime or 1)."""
    p = k - 1
    if p != 1 and not _is_prime(p):
        raise ValueError(f"girth6 family needs k-1 prime or 1, got k={k}")
    return p * p + p + 1


@dataclass(frozen=True)
class ResultRow:
    """One (trial, rule) outcome; recovered_fraction is None when infeasible."""

    experiment: str
    graph_family: str
    n: int
    k: int
    noise_level: float
    rule: str
    trial_index: int
    trial_seed: int
    recovered_fraction: float | None
    status: str

    def __post_init__(self):
        if self.status not in ("ok", "infeasible"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "ok":
            if self.recovered_fraction is None or not (
                0.0 <= self.recovered_fraction <= 1.0
            ):
                raise ValueError("ok rows need a fraction in [0, 1]")
        elif self.recovered_fraction is not None:
            raise ValueError("infeasible rows must leave the fraction blank")


def trial_seed_for(master_seed: int, trial_index: int) -> int:
    return hash64(master_seed, trial_index)


def build_graph(
    config: ExperimentConfig, rng: np.random.Generator
) -> BundleGraph:
    """Graph for one trial; only the random family consumes randomness."""
    if config.graph_family == "random":
        return random_k_regular(config.n, config.k, rng)
    if config.graph_family == "girth6":
        return girth6_copies(config.n, config.k - 1)
    return kkk_copies(config.n, config.k)


def _build_profile(
    graph: BundleGraph,
    assignment,
    qualities: np.ndarray,
    truth,
    trial_seed: int,
    max_attempts: int,
) -> Profile:
    """Sample all bundle rankings; bundles ordered by grader quality so the
    most rejection-prone one is attempted first (streams are per-bundle keyed,
    so evaluation order cannot change any outcome)."""
    n = graph.n
    rankings: list[PartialRanking | None] = [None] * n
    grader_q = qualities[assignment.grader_of]
    for v in np.argsort(grader_q, kind="stable"):
        v = int(v)
        rankings[v] = noisy_partial_ranking(
            assignment.bundle_elements(v),
            truth,
            float(grader_q[v]),
            substream(trial_seed, "noise", v),
            max_attempts,
            grader=int(assignment.grader_of[v]),
        )
    return Profile(rankings=tuple(rankings))


def _apply_rule(rule: str, profile: Profile, k: int, rng: np.random.Generator) -> Ranking:
    if rule == "borda":
        return borda(profile, k, rng)
    if rule == "rsd":
        return rsd(profile, rng)
    if rule == "mc4":
        return mc4(profile, rng)
    raise ValueError(f"unknown rule {rule!r}")


def run_trial(config: ExperimentConfig, trial_index: int) -> list[ResultRow]:
    """Run one full pipeline execution and return one row per rule."""
    seed = trial_seed_for(config.master_seed, trial_index)
    common = dict(
        experiment=config.experiment,
        graph_family=config.graph_family,
        n=config.n,
        k=config.k,
        noise_level=config.noise_level,
        trial_index=trial_index,
        trial_seed=seed,
    )
    graph = build_graph(config, substream(seed, "graph"))
    assignment = assign(graph, substream(seed, "assign"))
    qualities, truth = sample_qualities(
        config.n, config.noise_level, substream(seed, "qualities")
    )
    try:
        profile = _build_profile(
            graph, assignment, qualities.qualities, truth, seed, config.max_attempts
        )
    except InfeasibleSamplingError:
        return [
            ResultRow(rule=rule, recovered_fraction=None, status="infeasible", **common)
            for rule in config.rules
        ]
    rows = []
    for rule in config.rules:
        out = _apply_rule(rule, profile, config.k, substream(seed, "rule", rule))
        frac = recovered_fraction(out, truth)
        rows.append(
            ResultRow(rule=rule, recovered_fraction=frac, status="ok", **common)
        )
    return rows


def _run_job(job: tuple[ExperimentConfig, int]) -> list[ResultRow]:
    return run_trial(job[0], job[1])


def run_experiments(
    configs: list[ExperimentConfig], workers: int | None = None
) -> list[ResultRow]:
    """Run every (config, trial) job, in parallel when workers > 1.

    The output row order depends only on the config list, never on worker
    scheduling: rows come back keyed by job index and are flattened in order.
    """
    jobs = [(c, t) for c in configs for t in range(c.trials)]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or len(jobs) <= 1:
        results = [_run_job(job) for job in jobs]
    else:
        # small chunks keep slow cells (high k, high noise) load-balanced
        chunk = max(1, min(len(jobs) // (8 * workers), 16))
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs, chunksize=chunk))
    rows: list[ResultRow] = []
    for per_job in results:
        rows.extend(per_job)
    return rows


def preset(name: str, seed: int) -> list[ExperimentConfig]:
    """Experiment lists reproducing the published tables and figures."""
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    configs: list[ExperimentConfig] = []

    def master(*cell) -> int:
        return hash64(seed, name, *cell)

    if name == "table1":
        for family in GRAPH_FAMILIES:
            for k, n in _TABLE1_SHAPES:
                configs.append(
                    ExperimentConfig(
                        experiment=name,
                        graph_family=family,
                        n=n,
                        k=k,
                        noise_level=0.0,
                        rules=("borda", "rsd"),
                        trials=50,
                        master_seed=master(family, k, n),
                    )
                )
    elif name == "table2":
        for k in (5, 8, 12):
            for noise in (0.5, 0.4, 0.3, 0.2, 0.1, 0.0):
                configs.append(
                    ExperimentConfig(
                        experiment=name,
                        graph_family="random",
                        n=1000,
                        k=k,
                        noise_level=noise,
                        rules=("borda", "rsd", "mc4"),
                        trials=50,
                        master_seed=master(k, str(noise)),
                    )
                )
    elif name == "fig2":
        for k in range(2, 26):
            configs.append(
                ExperimentConfig(
                    experiment=name,
                    graph_family="random",
                    n=1000,
                    k=k,
                    noise_level=0.0,
                    rules=("borda", "rsd"),
                    trials=50,
                    master_seed=master(k),
                )
            )
    else:  # fig3: per-trial rows retained, no averaging
        for noise in (0.5, 0.0):
            configs.append(
                ExperimentConfig(
                    experiment=name,
                    graph_family="random",
                    n=1000,
                    k=8,
                    noise_level=noise,
                    rules=("borda", "rsd"),
                    trials=500,
                    master_seed=master(str(noise)),
                )
            )
    return configs


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build a config from the JSON document structure (field names 1:1)."""
    allowed = {
        "experiment",
        "graph_family",
        "n",
        "k",
        "noise_level",
        "rules",
        "trials",
        "master_seed",
        "max_attempts",
    }
    unknown = set(data) - allowed
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    missing = {"graph_family", "n", "k", "noise_level", "rules", "trials", "master_seed"} - set(data)
    if missing:
        raise ValueError(f"missing config fields: {sorted(missing)}")
    return ExperimentConfig(
        experiment=str(data.get("experiment", "custom")),
        graph_family=str(data["graph_family"]),
        n=int(data["n"]),
        k=int(data["k"]),
        noise_level=float(data["noise_level"]),
        rules=tuple(data["rules"]),
        trials=int(data["trials"]),
        master_seed=int(data["master_seed"]),
        max_attempts=int(data.get("max_attempts", DEFAULT_MAX_ATTEMPTS)),
    )


def load_configs(path: str) -> list[ExperimentConfig]:
    """Read one config object, or a list of them, from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list) or not data:
        raise ValueError("config file must hold an object or a non-empty list")
    return [config_from_dict(d) for d in data]


def _format_noise(noise: float) -> str:
    return f"{noise:g}"


def format_rows(rows: list[ResultRow]) -> str:
    """Render rows as CSV text (header, '.' decimals, 4-decimal fractions)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        frac = "" if row.recovered_fraction is None else f"{row.recovered_fraction:.4f}"
        writer.writerow(
            [
                row.experiment,
                row.graph_family,
                row.n,
                row.k,
                _format_noise(row.noise_level),
                row.rule,
                row.trial_index,
                row.trial_seed,
                frac,
                row.status,
            ]
        )
    return buf.getvalue()


def write_rows(path: str, rows: list[ResultRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_rows(rows))


def read_rows(path: str) -> list[ResultRow]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(
                f"bad CSV header {reader.fieldnames}; expected {list(CSV_COLUMNS)}"
            )
        rows = []
        for rec in reader:
            frac = rec["recovered_fraction"]
            rows.append(
                ResultRow(
                    experiment=rec["experiment"],
                    graph_family=rec["graph_family"],
                    n=int(rec["n"]),
                    k=int(rec["k"]),
                    noise_level=float(rec["noise_level"]),
                    rule=rec["rule"],
                    trial_index=int(rec["trial_index"]),
                    trial_seed=int(rec["trial_seed"]),
                    recovered_fraction=float(frac) if frac else None,
                    status=rec["status"],
                )
            )
    return rows


def cell_means(rows: list[ResultRow]) -> dict[tuple, dict]:
    """Aggregate rows by experiment cell.

    Returns {(experiment, family, n, k, noise, rule): {"mean": float | None,
    "ok": int, "infeasible": int}}; mean is None when no trial finished.
    """
    cells: dict[tuple, dict] = {}
    for row in rows:
        key = (row.experiment, row.graph_family, row.n, row.k, row.noise_level, row.rule)
        cell = cells.setdefault(key, {"fractions": [], "infeasible": 0})
        if row.status == "ok":
            cell["fractions"].append(row.recovered_fraction)
        else:
            cell["infeasible"] += 1
    out = {}
    for key, cell in cells.items():
        fracs = cell["fractions"]
        out[key] = {
            "mean": (sum(fracs) / len(fracs)) if fracs else None,
            "ok": len(fracs),
            "infeasible": cell["infeasible"],
        }
    return out


def summarize(rows: list[ResultRow]) -> str:
    """Per-cell mean table, one block per experiment, values in percent."""
    means = cell_means(rows)
    experiments: dict[str, list[tuple]] = {}
    for key in means:
        experiments.setdefault(key[0], []).append(key)
    blocks = []
    for experiment in sorted(experiments):
        keys = experiments[experiment]
        columns = sorted(
            {(key[1], key[5]) for key in keys},
            key=lambda fr: (GRAPH_FAMILIES.index(fr[0]), RULES.index(fr[1])),
        )
        shapes = sorted({(key[3], key[2], key[4]) for key in keys})
        header = ["k", "n", "noise"] + [f"{f}:{r}" for f, r in columns]
        widths = [max(6, len(h)) for h in header]
        lines = [f"experiment: {experiment}"]
        lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
        for k, n, noise in shapes:
            cells = [str(k), str(n), _format_noise(noise)]
            for family, rule in columns:
                stats = means.get((experiment, family, n, k, noise, rule))
                if stats is None:
                    cells.append("-")
                elif stats["mean"] is None:
                    cells.append("##.#")
                else:
                    cells.append(f"{100.0 * stats['mean']:.1f}")
            lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
