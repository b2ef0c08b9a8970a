"""Command-line interface: gate checks, noise sweeps, oracle validation.

Subcommands
-----------
truthtable        print and verify the Fredkin gate action on the 3-mode basis
lossy-gate        verify the lossy gate decomposition on |101><101| / |011><011|
sweep-loss        error curves vs photon loss, with and without correction
sweep-dephasing   error curves vs dephasing, plain and projectively corrected
mc-validate       Monte-Carlo dephasing oracle vs the analytic channel
lambda-physical   convert medium parameters to a dephasing strength

Numbers are serialized with 12 significant digits; identical flags and seed
produce byte-identical output.  Exit codes: 0 success, 1 validation failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .channels import (
    NoiseParams,
    decibels,
    dephased_fredkin_channel,
    dephased_fredkin_mc,
    lambda_from_physical,
    lossy_fredkin_channel,
)
from .correction import fit_series, p_ec_closed, p_noec_closed
from .fock import (
    FockError,
    FockSpace,
    basis_density,
    basis_pure,
    index_of,
    occupation_label,
    occupation_of,
)
from .gates import fredkin_unitary
from .machine import MachineConfig, run, sweep, which_path_error

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

_TRUTH_TABLE_SPACE = FockSpace(3, 1)
_FIVE_INPUTS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1))
_KNOWN_ROWS = {
    (0, 0, 0): (0, 0, 0),
    (1, 0, 0): (1, 0, 0),
    (0, 1, 0): (0, 1, 0),
    (1, 0, 1): (0, 1, 1),
    (0, 1, 1): (1, 0, 1),
}


@dataclass(frozen=True)
class ExperimentSpec:
    """Resolved run parameters for a sweep-style subcommand."""

    subcommand: str
    grid_start: float
    grid_stop: float
    grid_count: int
    spacing: str
    strategies: tuple[str, ...]
    fmt: str
    seed: int
    samples: int
    out: str | None

    def __post_init__(self):
        if self.grid_count < 1:
            raise FockError("grid count must be >= 1")
        if self.spacing == "log" and self.grid_start <= 0:
            raise FockError("log spacing requires a positive grid start")
        if self.fmt not in ("csv", "json"):
            raise FockError(f"unknown format {self.fmt!r}")

    def grid(self) -> np.ndarray:
        if self.grid_count == 1:
            return np.array([self.grid_start])
        if self.spacing == "log":
            return np.logspace(math.log10(self.grid_start), math.log10(self.grid_stop),
                               self.grid_count)
        return np.linspace(self.grid_start, self.grid_stop, self.grid_count)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _emit(records: list[dict], columns: list[str], fmt: str, out: str | None):
    if fmt == "csv":
        lines = [",".join(columns)]
        for rec in records:
            lines.append(",".join(_fmt(rec[c]) for c in columns))
        text = "\n".join(lines) + "\n"
    else:
        rounded = []
        for rec in records:
            row = {}
            for c in columns:
                v = rec[c]
                row[c] = float(_fmt(v)) if isinstance(v, float) else v
            rounded.append(row)
        text = json.dumps({"columns": columns, "records": rounded}, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _load_config_file(path: str) -> dict[str, str]:
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FockError(f"config line {raw.rstrip()!r} is not key=value")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    return values


_OPTION_TYPES = {
    "grid-start": float, "grid-stop": float, "grid-count": int,
    "spacing": str, "seed": int, "samples": int, "format": str, "out": str,
    "gamma": float, "lam": float, "omega": float, "intensity": float,
}
_DEFAULTS = {
    "grid-start": 1e-3, "grid-stop": 1.0, "grid-count": 61, "spacing": "log",
    "seed": 12345, "samples": 100_000, "format": "csv", "out": None,
    "gamma": 0.1, "lam": 0.1,
}


def _resolve(args: argparse.Namespace, key: str):
    """CLI flag > config-file entry > built-in default."""
    attr = key.replace("-", "_")
    cli_value = getattr(args, attr, None)
    if cli_value is not None:
        return cli_value
    cfg = getattr(args, "_config_values", {})
    if key in cfg:
        return _OPTION_TYPES[key](cfg[key])
    return _DEFAULTS.get(key)


def _spec_from(args: argparse.Namespace, subcommand: str,
               strategies: tuple[str, ...]) -> ExperimentSpec:
    spacing = "linear" if getattr(args, "linear", False) else None
    if getattr(args, "log", False):
        spacing = "log"
    if spacing is None:
        spacing = _resolve(args, "spacing")
    return ExperimentSpec(
        subcommand=subcommand,
        grid_start=_resolve(args, "grid-start"),
        grid_stop=_resolve(args, "grid-stop"),
        grid_count=_resolve(args, "grid-count"),
        spacing=spacing,
        strategies=strategies,
        fmt=_resolve(args, "format"),
        seed=_resolve(args, "seed"),
        samples=_resolve(args, "samples"),
        out=_resolve(args, "out"),
    )


def cmd_truthtable(args) -> int:
    f = fredkin_unitary(_TRUTH_TABLE_SPACE, 0, 1, 2).matrix
    records, failures = [], []
    for i in range(_TRUTH_TABLE_SPACE.dim):
        occ = occupation_of(_TRUTH_TABLE_SPACE, i)
        col = f[:, i]
        j = int(np.argmax(np.abs(col)))
        amp = col[j]
        target = occupation_of(_TRUTH_TABLE_SPACE, j)
        # permutation-with-phase structure: one unit-modulus entry per column
        off = np.abs(col).sum() - abs(amp)
        if off > 1e-12 or abs(abs(amp) - 1.0) > 1e-12:
            failures.append(f"column {occupation_label(occ)} is not a pure relabeling")
        if occ in _KNOWN_ROWS:
            want = _KNOWN_ROWS[occ]
            if target != want or abs(amp - 1.0) > 1e-12:
                failures.append(f"row {occupation_label(occ)} -> {occupation_label(target)}"
                                f" (amp {amp:.3g}) differs from {occupation_label(want)}")
        records.append({
            "input": occupation_label(occ),
            "output": occupation_label(target),
            "amplitude_re": float(amp.real),
            "amplitude_im": float(amp.imag),
        })
    _emit(records, ["input", "output", "amplitude_re", "amplitude_im"],
          _resolve(args, "format"), _resolve(args, "out"))
    for msg in failures:
        print(f"truthtable: {msg}", file=sys.stderr)
    return EXIT_VALIDATION if failures else EXIT_OK


def _lossy_reference(gamma: float) -> np.ndarray:
    """Closed-form output of the lossy gate on |101><101|."""
    sp = _TRUTH_TABLE_SPACE
    surv = math.exp(-gamma)
    half = math.exp(-gamma / 2)

    def ket(occ):
        return basis_pure(sp, occ).amplitudes

    phi01 = (1 + half) * ket((0, 1, 0)) + (1 - half) * ket((1, 0, 0))
    phi10 = (1 + half) * ket((0, 1, 1)) + (1 - half) * ket((1, 0, 1))
    out = (1 - surv) ** 2 / 2 * np.outer(ket((0, 0, 0)), ket((0, 0, 0)).conj())
    out += surv * (1 - surv) / 2 * np.outer(ket((0, 0, 1)), ket((0, 0, 1)).conj())
    out += (1 - surv) / 4 * np.outer(phi01, phi01.conj())
    out += surv / 4 * np.outer(phi10, phi10.conj())
    return out


def cmd_lossy_gate(args) -> int:
    gamma = _resolve(args, "gamma")
    if gamma < 0:
        print("lossy-gate: gamma must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    sp = _TRUTH_TABLE_SPACE
    swap = np.zeros((sp.dim, sp.dim))
    for i in range(sp.dim):
        a, b, c = occupation_of(sp, i)
        swap[index_of(sp, (b, a, c)), i] = 1.0
    ref101 = _lossy_reference(gamma)
    ref011 = swap @ ref101 @ swap.T
    records, ok = [], True
    for placement in ("after-kerr", "before-kerr", "split"):
        chan = lossy_fredkin_channel(sp, 0, 1, 2, gamma, placement)
        for label, occ, ref in (("101", (1, 0, 1), ref101), ("011", (0, 1, 1), ref011)):
            out = chan.apply(basis_density(sp, occ)).matrix
            dev = float(np.max(np.abs(out - ref)))
            tr_dev = float(abs(np.trace(out).real - 1.0))
            ok = ok and dev <= 1e-12 and tr_dev <= 1e-12
            records.append({"input": label, "placement": placement,
                            "gamma": float(gamma), "max_abs_dev": dev,
                            "trace_dev": tr_dev})
    _emit(records, ["input", "placement", "gamma", "max_abs_dev", "trace_dev"],
          _resolve(args, "format"), _resolve(args, "out"))
    if not ok:
        print("lossy-gate: output deviates from the closed-form decomposition",
              file=sys.stderr)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_sweep_loss(args) -> int:
    try:
        spec = _spec_from(args, "sweep-loss", ("none", "dualrail"))
    except FockError as exc:
        print(f"sweep-loss: {exc}", file=sys.stderr)
        return EXIT_USAGE
    grid = spec.grid()
    loss_tpl = MachineConfig(k1=1, noise_model="loss")
    bal_tpl = MachineConfig(k1=1, noise_model="balanced-loss")
    loss_records = sweep(loss_tpl, "gamma", grid, ("none", "dualrail"))
    bal_records = sweep(bal_tpl, "gamma", grid, ("dualrail",))
    records, ok = [], True
    for rec, bal in zip(loss_records, bal_records):
        g = rec.value
        row = {
            "gamma": g,
            "loss_db": decibels(g),
            "p_noec_sim": rec.p_error["none"],
            "p_noec_closed": p_noec_closed(g),
            "p_ec_sim": rec.p_error["dualrail"],
            "p_ec_closed": p_ec_closed(g),
            "p_balanced_ec": bal.p_error["dualrail"],
        }
        ok = ok and abs(row["p_noec_sim"] - row["p_noec_closed"]) <= 1e-10
        ok = ok and abs(row["p_ec_sim"] - row["p_ec_closed"]) <= 1e-10
        ok = ok and row["p_balanced_ec"] <= 1e-12
        records.append(row)
    _emit(records, ["gamma", "loss_db", "p_noec_sim", "p_noec_closed",
                    "p_ec_sim", "p_ec_closed", "p_balanced_ec"], spec.fmt, spec.out)
    if not ok:
        print("sweep-loss: simulated errors deviate from the closed forms",
              file=sys.stderr)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_sweep_dephasing(args) -> int:
    try:
        spec = _spec_from(args, "sweep-dephasing", ("none", "projective"))
    except FockError as exc:
        print(f"sweep-dephasing: {exc}", file=sys.stderr)
        return EXIT_USAGE
    grid = spec.grid()
    records, ok = [], True
    fit_points = []
    for lam in grid:
        noise = NoiseParams(lam=lam)
        plain = run(MachineConfig(k1=1, noise=noise, noise_model="dephasing"))
        proj = run(MachineConfig(k1=0, noise=noise, noise_model="dephasing",
                                 projective_ec=True))
        row = {
            "lambda": float(lam),
            "damping_db": decibels(float(lam)),
            "p_plain": plain.p_error,
            "p_projective": which_path_error(proj),
            "p_accept_projective": proj.p_accept,
        }
        closed_plain = (1 - math.exp(-2 * lam)) / 2
        ok = ok and abs(row["p_plain"] - closed_plain) <= 1e-10
        if lam <= 0.1:
            ok = ok and row["p_projective"] < row["p_plain"]
        elif row["p_projective"] >= row["p_plain"]:
            print(f"sweep-dephasing: no improvement at lambda={lam:.6g} (reported only)",
                  file=sys.stderr)
        if lam <= 0.05:
            fit_points.append((float(lam), row["p_projective"]))
        records.append(row)
    _emit(records, ["lambda", "damping_db", "p_plain", "p_projective",
                    "p_accept_projective"], spec.fmt, spec.out)
    if len(fit_points) >= 4:
        fit = fit_series(fit_points)
        print(f"sweep-dephasing: projective small-lambda fit c1={fit.c1:.6f} "
              f"c2={fit.c2:.6f} (series targets 11/18={11/18:.6f}, "
              f"-47/162={-47/162:.6f}; exact quadratic is -41/108={-41/108:.6f})",
              file=sys.stderr)
    if not ok:
        print("sweep-dephasing: validation failed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_mc_validate(args) -> int:
    try:
        spec = _spec_from(args, "mc-validate", ())
    except FockError as exc:
        print(f"mc-validate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    lam = _resolve(args, "lam")
    if lam < 0:
        print("mc-validate: lam must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    sp = _TRUTH_TABLE_SPACE
    analytic = dephased_fredkin_channel(sp, 0, 1, 2, lam)
    oracle = dephased_fredkin_mc(sp, 0, 1, 2, lam, spec.samples, spec.seed)
    bound = 5.0 / math.sqrt(spec.samples)
    records, ok = [], True
    for occ in _FIVE_INPUTS:
        rho = basis_density(sp, occ)
        err = float(np.max(np.abs(oracle(rho).matrix - analytic.apply(rho).matrix)))
        passed = err <= bound
        ok = ok and passed
        records.append({"input": occupation_label(occ), "lambda": float(lam),
                        "samples": spec.samples, "seed": spec.seed,
                        "max_abs_error": err, "bound": bound,
                        "status": "pass" if passed else "fail"})
    _emit(records, ["input", "lambda", "samples", "seed", "max_abs_error",
                    "bound", "status"], spec.fmt, spec.out)
    if not ok:
        print("mc-validate: Monte-Carlo estimate outside the statistical bound",
              file=sys.stderr)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_lambda_physical(args) -> int:
    omega = _resolve(args, "omega")
    intensity = _resolve(args, "intensity")
    if omega is None or intensity is None:
        print("lambda-physical: --omega and --intensity are required", file=sys.stderr)
        return EXIT_USAGE
    try:
        lam = lambda_from_physical(omega, intensity)
    except FockError as exc:
        print(f"lambda-physical: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = [{"omega": float(omega), "intensity": float(intensity),
                "lambda": lam, "damping_db": decibels(lam)}]
    _emit(records, ["omega", "intensity", "lambda", "damping_db"],
          _resolve(args, "format"), _resolve(args, "out"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualrail",
        description="Density-matrix simulator for lossy, decohering single-photon logic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--grid-start", type=float, default=None)
        p.add_argument("--grid-stop", type=float, default=None)
        p.add_argument("--grid-count", type=int, default=None)
        spacing = p.add_mutually_exclusive_group()
        spacing.add_argument("--log", action="store_true", help="log-spaced grid (default)")
        spacing.add_argument("--linear", action="store_true", help="linearly spaced grid")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--config", default=None, help="key=value defaults file")

    p = sub.add_parser("truthtable", help="verify the Fredkin gate truth table")
    add_common(p)
    p.set_defaults(func=cmd_truthtable)

    p = sub.add_parser("lossy-gate", help="verify the lossy gate decomposition")
    add_common(p)
    p.add_argument("--gamma", type=float, default=None)
    p.set_defaults(func=cmd_lossy_gate)

    p = sub.add_parser("sweep-loss", help="error vs photon loss (Fig.-5-style data)")
    add_common(p)
    p.set_defaults(func=cmd_sweep_loss)

    p = sub.add_parser("sweep-dephasing", help="error vs dephasing (Fig.-6-style data)")
    add_common(p)
    p.set_defaults(func=cmd_sweep_dephasing)

    p = sub.add_parser("mc-validate", help="Monte-Carlo oracle vs analytic channel")
    add_common(p)
    p.add_argument("--lam", type=float, default=None)
    p.set_defaults(func=cmd_mc_validate)

    p = sub.add_parser("lambda-physical", help="dephasing strength from medium parameters")
    add_common(p)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--intensity", type=float, default=None)
    p.set_defaults(func=cmd_lambda_physical)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config_path = getattr(args, "config", None)
    try:
        args._config_values = _load_config_file(config_path) if config_path else {}
    except (OSError, FockError) as exc:
        print(f"dualrail: cannot read config file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except FockError as exc:
        print(f"dualrail: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
