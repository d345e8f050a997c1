"""Batch front-end.

Commands: generate, fit, bootstrap, normality, cierror, overlays.
Exit codes: 0 success, 2 ingestion/config error, 3 fit failure,
4 too few converged replications, 5 required bootstrap matrix missing.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import mle
from .bootstrap import BootstrapMatrix, TooFewConverged, run_bootstrap, true_model_from_losses
from .ci_analysis import ci_error_table, table_csv, table_json
from .density import overlay
from .distributions import FAMILIES, PARAM_NAMES, SeverityModel
from .generate import PROFILES, generate_losses
from .normality import normality_suite, reports_to_csv

EXIT_OK = 0
EXIT_INGEST = 2
EXIT_FIT = 3
EXIT_CONVERGENCE = 4
EXIT_MISSING = 5

DEFAULT_SAMPLE_SIZES = (100, 200, 300, 500, 1000, 1500, 2500)


class ConfigError(Exception):
    pass


@dataclass
class StudyConfig:
    seed: int = 12345
    threshold: float = 1e5
    families: tuple[str, ...] = FAMILIES
    sample_sizes: tuple[int, ...] = DEFAULT_SAMPLE_SIZES
    replications: int = 2000
    level: float = 0.95
    input: str = ""
    out: str = "out"
    threads: int = 1

    def validate(self) -> None:
        if any(f not in FAMILIES for f in self.families):
            raise ConfigError(f"unknown family in {self.families}")
        if not self.sample_sizes or list(self.sample_sizes) != sorted(set(self.sample_sizes)) \
                or self.sample_sizes[0] <= 0:
            raise ConfigError("sample_sizes must be positive and strictly ascending")
        if self.replications < 100:
            raise ConfigError("replications must be at least 100")
        if not 0.0 < self.level < 1.0:
            raise ConfigError("level must lie strictly between 0 and 1")

    def canonical(self) -> str:
        return json.dumps({
            "seed": self.seed,
            "threshold": self.threshold,
            "families": list(self.families),
            "sample_sizes": list(self.sample_sizes),
            "replications": self.replications,
            "level": self.level,
            "input": self.input,
        }, sort_keys=True)

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]


def parse_config(text: str) -> StudyConfig:
    """Flat ``key = value`` lines; unknown keys are errors."""
    kwargs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key == "seed":
                kwargs[key] = int(value)
            elif key in ("threshold", "level"):
                kwargs[key] = float(value)
            elif key == "families":
                kwargs[key] = tuple(v.strip() for v in value.split(",") if v.strip())
            elif key == "sample_sizes":
                kwargs[key] = tuple(int(v) for v in value.split(",") if v.strip())
            elif key == "replications":
                kwargs[key] = int(value)
            elif key in ("input", "out"):
                kwargs[key] = value
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    cfg = StudyConfig(**kwargs)
    cfg.validate()
    return cfg


def read_losses(path: Path) -> np.ndarray:
    """CSV with a single ``loss`` header and one positive decimal per line."""
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0].strip() != "loss":
        raise ConfigError(f"{path}: first line must be the header 'loss'")
    values = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            v = float(raw)
        except ValueError as exc:
            raise ConfigError(f"{path}: line {lineno}: not a number: {raw!r}") from exc
        if v <= 0.0 or not np.isfinite(v):
            raise ConfigError(f"{path}: line {lineno}: losses must be positive, got {raw!r}")
        values.append(v)
    return np.array(values)


def _write_meta(cfg: StudyConfig, out: Path, command: str) -> None:
    meta = {"command": command, "config_hash": cfg.config_hash, "seed": cfg.seed}
    (out / f"run_meta_{command}.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def cmd_generate(cfg: StudyConfig, profile: str, n: int) -> int:
    if profile not in PROFILES:
        print(f"error: unknown profile {profile!r}; known: {sorted(PROFILES)}", file=sys.stderr)
        return EXIT_INGEST
    losses = generate_losses(profile, n, cfg.seed)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "losses.csv"
    path.write_text("loss\n" + "\n".join(repr(float(v)) for v in losses) + "\n")
    _write_meta(cfg, out, "generate")
    frac_tail = float(np.mean(losses >= PROFILES[profile].threshold))
    print(f"wrote {path} ({n} losses)")
    print(f"  mean {np.mean(losses):.1f}  median {np.median(losses):.1f}  "
          f"max {np.max(losses):.1f}  tail fraction {frac_tail:.3f}")
    return EXIT_OK


def cmd_fit(cfg: StudyConfig) -> int:
    if not cfg.input:
        print("error: no input loss file configured", file=sys.stderr)
        return EXIT_INGEST
    try:
        losses = read_losses(Path(cfg.input))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    tail_count = int(np.sum(losses >= cfg.threshold))
    if tail_count < 10:
        print(f"error: only {tail_count} tail losses at threshold {cfg.threshold}",
              file=sys.stderr)
        return EXIT_INGEST

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    entries = {}
    for family in cfg.families:
        try:
            tm = true_model_from_losses(family, losses, cfg.threshold)
        except mle.FitError as exc:
            print(f"error: fit failed for family {family}: {exc}", file=sys.stderr)
            return EXIT_FIT
        entries[family] = {
            "params": dict(zip(PARAM_NAMES[family], tm.model.params)),
            "threshold": cfg.threshold,
            "nll": tm.fit.nll,
            "converged": tm.fit.converged,
            "warnings": sorted(tm.fit.warnings),
            "n_tail": tm.n_tail,
            "n_excluded": tm.n_excluded,
        }
    payload = {"config_hash": cfg.config_hash, "seed": cfg.seed, "families": entries}
    (out / "true_params.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _write_meta(cfg, out, "fit")
    print(f"wrote {out / 'true_params.json'}")
    return EXIT_OK


def _load_true_models(cfg: StudyConfig) -> dict[str, SeverityModel]:
    path = Path(cfg.out) / "true_params.json"
    if not path.exists():
        if cfg.input:
            code = cmd_fit(cfg)
            if code != EXIT_OK:
                raise ConfigError("in-run fit failed")
        else:
            raise ConfigError(f"{path} missing and no input losses configured")
    payload = json.loads(path.read_text())
    models = {}
    for family, entry in payload["families"].items():
        params = tuple(entry["params"][name] for name in PARAM_NAMES[family])
        models[family] = SeverityModel(family, params, entry["threshold"])
    return models


def matrix_path(out: Path, family: str, n: int) -> Path:
    return out / f"boot_{family}_n{n}"


def cmd_bootstrap(cfg: StudyConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        models = _load_true_models(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    for family in cfg.families:
        model = models[family]
        for n in cfg.sample_sizes:
            try:
                bm = run_bootstrap(model, n, cfg.replications, cfg.seed, workers=cfg.threads)
            except TooFewConverged as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_CONVERGENCE
            bm.write(matrix_path(out, family, n), extra_meta={"config_hash": cfg.config_hash})
            print(f"bootstrap {family} n={n}: {bm.m_converged}/{bm.m_requested} converged")
    _write_meta(cfg, out, "bootstrap")
    return EXIT_OK


def _load_matrices(cfg: StudyConfig) -> list[BootstrapMatrix]:
    out = Path(cfg.out)
    bms = []
    for family in cfg.families:
        for n in cfg.sample_sizes:
            base = matrix_path(out, family, n)
            if not base.parent.joinpath(base.name + ".csv").exists():
                raise ConfigError(f"missing bootstrap matrix {base}.csv")
            bms.append(BootstrapMatrix.read(base))
    return bms


def cmd_normality(cfg: StudyConfig) -> int:
    try:
        bms = _load_matrices(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    reports = []
    for bm in bms:
        reports.extend(normality_suite(bm))
    out = Path(cfg.out)
    (out / "normality.csv").write_text(reports_to_csv(reports))
    _write_meta(cfg, out, "normality")
    print(f"wrote {out / 'normality.csv'} ({len(reports)} reports)")
    return EXIT_OK


def cmd_cierror(cfg: StudyConfig) -> int:
    try:
        bms = _load_matrices(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    rows = ci_error_table(bms, cfg.level)
    out = Path(cfg.out)
    (out / "ci_error.csv").write_text(table_csv(rows))
    (out / "ci_error.json").write_text(table_json(rows))
    _write_meta(cfg, out, "cierror")
    print(f"wrote {out / 'ci_error.csv'} ({len(rows)} rows)")
    return EXIT_OK


def cmd_overlays(cfg: StudyConfig) -> int:
    try:
        bms = _load_matrices(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    out = Path(cfg.out)
    count = 0
    for bm in bms:
        for j, name in enumerate(bm.param_names):
            ov = overlay(bm, j)
            (out / f"overlay_{bm.family}_{name}_{bm.n}.csv").write_text(ov.to_csv())
            count += 1
    _write_meta(cfg, out, "overlays")
    print(f"wrote {count} overlay files to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tailfit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("fit", "bootstrap", "normality", "cierror", "overlays", "generate"):
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path)
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--out", type=str)
        p.add_argument("--replications", type=int)
        p.add_argument("--paper-scale", action="store_true",
                       help="replications = 40000")
        if name == "generate":
            p.add_argument("--profile", default="uom1")
            p.add_argument("--n", type=int, default=50000)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.config is not None:
        try:
            cfg = parse_config(args.config.read_text())
        except (ConfigError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INGEST
    else:
        cfg = StudyConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.out is not None:
        overrides["out"] = args.out
    if args.replications is not None:
        overrides["replications"] = args.replications
    if args.paper_scale:
        overrides["replications"] = 40000
    cfg = replace(cfg, **overrides)
    try:
        cfg.validate()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INGEST

    if args.command == "generate":
        return cmd_generate(cfg, args.profile, args.n)
    if args.command == "fit":
        return cmd_fit(cfg)
    if args.command == "bootstrap":
        return cmd_bootstrap(cfg)
    if args.command == "normality":
        return cmd_normality(cfg)
    if args.command == "cierror":
        return cmd_cierror(cfg)
    return cmd_overlays(cfg)


if __name__ == "__main__":
    sys.exit(main())
