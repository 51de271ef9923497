"""Command-line front end.

Exit codes: 0 = the checked claim holds, 1 = it was checked and is false,
2 = usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import constraints, ghz_sector, hamiltonian, spectra
from .states import ghz

DUMP_MAX_QUBITS = 6


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    model: str | None = None
    input: str | None = None
    jx: str | None = None
    jz: str | None = None
    tol: float | None = None
    cluster_tol: float = spectra.DEFAULT_CLUSTER_TOL
    out: str | None = None
    seed: int = 0
    dump_amplitudes: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self, needs_source: bool) -> None:
        if needs_source and (self.model is None) == (self.input is None):
            raise UsageError("give exactly one of --model or --input")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")
        if not self.cluster_tol > 0:
            raise UsageError("--cluster-tol must be positive")


def num(x: float):
    """12 significant digits; non-finite values become null."""
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def _floats(text: str | None, count: int, flag: str) -> list[float]:
    if text is None:
        raise UsageError(f"{flag} is required for this model")
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag}: could not parse {text!r}") from None
    if len(vals) != count:
        raise UsageError(f"{flag}: expected {count} value(s), got {len(vals)}")
    return vals


def build_hamiltonian(cfg: RunConfig) -> hamiltonian.FewBodyHamiltonian:
    if cfg.input is not None:
        return hamiltonian.load(cfg.input)
    if cfg.model == "ring-xz4":
        return hamiltonian.ring_xz4(_floats(cfg.jx, 4, "--jx"), _floats(cfg.jz, 4, "--jz"))
    if cfg.model in ("symmetric-ring4", "five-qubit-3body"):
        jx = _floats(cfg.jx if cfg.jx is not None else "0", 1, "--jx")[0]
        jz = _floats(cfg.jz, 1, "--jz")[0]
        return hamiltonian.MODELS[cfg.model](jx, jz)
    raise UsageError(f"unknown model {cfg.model!r}; choose from {', '.join(hamiltonian.MODELS)}")


def _amplitudes_json(v: np.ndarray) -> list:
    return [[num(a.real), num(a.imag)] for a in v]


def cmd_conditions(cfg: RunConfig) -> tuple[int, str]:
    H = build_hamiltonian(cfg)
    report = ghz_sector.eigenstate_conditions(H, cfg.tol)
    return (0 if report.is_plus_eigenstate else 1), _dump(report.to_json())


def cmd_decompose(cfg: RunConfig) -> tuple[int, str]:
    H = build_hamiltonian(cfg)
    out = {
        "n": H.n,
        "body_order": hamiltonian.body_order(H),
        "plus": ghz_sector.decomposition_json(ghz_sector.decompose_plus(H)),
        "minus": ghz_sector.decomposition_json(ghz_sector.decompose_minus(H)),
    }
    return 0, _dump(out)


def _check_dump(cfg: RunConfig, n: int) -> None:
    if cfg.dump_amplitudes and n > DUMP_MAX_QUBITS:
        raise UsageError(f"--dump-amplitudes is limited to n <= {DUMP_MAX_QUBITS}")


def spectral_report_json(report: spectra.SpectralReport, dump: bool = False) -> dict:
    out = {
        "n": report.n,
        "dim": len(report.eigenvalues),
        "ground_energy": num(report.ground_energy),
        "abs_ground_energy": num(abs(report.ground_energy)),
        "levels": [
            {"eigenvalue": num(report.eigenvalues[a:b].mean()), "multiplicity": b - a}
            for a, b in report.clusters
        ],
        "targets": [
            {
                "name": t.name,
                "eigenvalue": num(t.eigenvalue),
                "expectation": num(t.expectation),
                "overlap": num(t.overlap),
                "residual": num(t.residual),
                "multiplicity": t.multiplicity,
                "rank": t.rank,
                "gap": num(t.gap),
                "is_eigenstate": t.is_eigenstate,
            }
            for t in report.targets
        ],
        "ghz_states": [
            {"eigenvalue": num(h.eigenvalue), "bits": h.bits, "phase": num(h.phase), "bases": h.bases}
            for h in report.ghz_states
        ],
    }
    if dump and report.eigensystem is not None:
        V = report.eigensystem.eigenvectors
        out["eigenvectors"] = [_amplitudes_json(V[:, k]) for k in range(V.shape[1])]
        out["targets_amplitudes"] = {
            name: _amplitudes_json(ghz(report.n, s).amplitudes) for name, s in (("ghz+", 1), ("ghz-", -1))
        }
    return out


def cmd_spectrum(cfg: RunConfig) -> tuple[int, str]:
    H = build_hamiltonian(cfg)
    if H.n > hamiltonian.DENSE_MAX_QUBITS:
        raise UsageError(f"spectrum needs n <= {hamiltonian.DENSE_MAX_QUBITS}, got {H.n}")
    _check_dump(cfg, H.n)
    report = spectra.analyze(H, cluster_tol=cfg.cluster_tol)
    code = 0 if report.target("ghz+").is_eigenstate else 1
    return code, _dump(spectral_report_json(report, cfg.dump_amplitudes))


def cmd_census(cfg: RunConfig) -> tuple[int, str]:
    H = build_hamiltonian(cfg)
    if H.n > 10:
        raise UsageError("census needs n <= 10")
    hits = spectra.ghz_census(H, cfg.cluster_tol)
    out = {
        "n": H.n,
        "ghz_states": [
            {"eigenvalue": num(h.eigenvalue), "bits": h.bits, "phase": num(h.phase), "bases": h.bases}
            for h in hits
        ],
    }
    return (0 if hits else 1), _dump(out)


def cmd_scan(cfg: RunConfig) -> tuple[int, str]:
    if cfg.input is not None or cfg.model not in spectra.SCAN_MODELS:
        raise UsageError(f"scan needs --model one of {', '.join(spectra.SCAN_MODELS)}")
    jz = _floats(cfg.jz, 1, "--jz")[0]
    if not jz < 0:
        raise UsageError(f"scan requires Jz < 0, got {jz}")
    ratios = spectra.parse_ratio_grid(cfg.extra.get("ratios") or "")
    scan = spectra.scan_first_excited_window(
        cfg.model,
        ratios,
        jz,
        cluster_tol=cfg.cluster_tol,
        bisect=not cfg.extra.get("no_bisect", False),
        resolution=cfg.extra.get("resolution", 1e-6),
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["ratio", "jz", "jx", "ghz_eigenvalue", "rank", "multiplicity", "in_window"])
    for r in scan.rows:
        writer.writerow([f"{r.ratio:.12g}", f"{r.jz:.12g}", f"{r.jx:.12g}", f"{r.ghz_eigenvalue:.12g}",
                         r.rank, r.multiplicity, int(r.in_window)])
    footer = {
        "model": cfg.model,
        "jz": f"{jz:.12g}",
        "resolution": f"{scan.resolution:.12g}",
        "edges": [f"{e:.12g}" for e in scan.edges],
        "exceptional_points": [f"{e:.12g}" for e in scan.exceptional_points],
        "window": None if scan.window is None else [f"{e:.12g}" for e in scan.window],
    }
    cfg.extra["footer_text"] = _dump(footer)
    return (0 if any(r.in_window for r in scan.rows) else 1), buf.getvalue()


def cmd_nullspace(cfg: RunConfig) -> tuple[int, str]:
    n, m = cfg.extra["n"], cfg.extra["m"]
    family = cfg.extra.get("family")
    if family == "ring-xz4":
        if n != 4 or m < 2:
            raise UsageError("--family ring-xz4 needs --n 4 and --m >= 2")
        C = constraints.build_constraints(n, m, hamiltonian.ring_xz4_strings())
    elif family in (None, "generic"):
        C = constraints.build_constraints(n, m)
    else:
        raise UsageError(f"unknown family {family!r}")
    basis = constraints.nullspace(C)
    out = {
        "n": n,
        "m": m,
        "columns": len(C.columns),
        "rows": list(C.rows),
        "rank": basis.rank,
        "dimension": basis.dimension,
        "basis": basis.to_json(),
    }
    return 0, _dump(out)


def cmd_verify_theorem(cfg: RunConfig) -> tuple[int, str]:
    n, m = cfg.extra["n"], cfg.extra["m"]
    ms = ghz_sector.m_star(n)
    if not m < ms:
        raise UsageError(f"verify-theorem needs m < m* = [(n+1)/2] = {ms} for n={n}, got m={m}")
    kwargs = {} if cfg.tol is None else {"tol": cfg.tol}
    report = constraints.verify_forced_degeneracy(n, m, cfg.extra.get("samples", 100), cfg.seed, **kwargs)
    return (0 if report.all_passed else 1), _dump(report.to_json())


def cmd_witness(cfg: RunConfig) -> tuple[int, str]:
    n, m = cfg.extra["n"], cfg.extra["m"]
    w = constraints.find_nondegenerate_witness(n, m, seed=cfg.seed)
    if w is None:
        return 1, _dump({"n": n, "m": m, "found": False})
    out = {
        "n": n,
        "m": m,
        "found": True,
        "source": w.source,
        "epsilon": num(w.epsilon),
        "phi_bar_norm": num(w.phi_bar_norm),
        "multiplicity": w.multiplicity,
        "rank": w.rank,
        "hamiltonian": hamiltonian.to_json(w.hamiltonian),
    }
    return 0, _dump(out)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


COMMANDS = {
    "conditions": (cmd_conditions, True),
    "decompose": (cmd_decompose, True),
    "spectrum": (cmd_spectrum, True),
    "census": (cmd_census, True),
    "scan": (cmd_scan, False),
    "nullspace": (cmd_nullspace, False),
    "verify-theorem": (cmd_verify_theorem, False),
    "witness": (cmd_witness, False),
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=sorted(hamiltonian.MODELS))
    common.add_argument("--input", help="Hamiltonian JSON file")
    common.add_argument("--jx", help="x coupling(s); comma list of 4 for ring-xz4")
    common.add_argument("--jz", help="z coupling(s); comma list of 4 for ring-xz4")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--tol", type=float)
    common.add_argument("--cluster-tol", type=float, default=spectra.DEFAULT_CLUSTER_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--dump-amplitudes", action="store_true")

    sizes = argparse.ArgumentParser(add_help=False)
    sizes.add_argument("--n", type=int, required=True)
    sizes.add_argument("--m", type=int, required=True)

    parser = argparse.ArgumentParser(prog="ghzeig", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("conditions", "decompose", "spectrum", "census"):
        sub.add_parser(name, parents=[common])
    scan = sub.add_parser("scan", parents=[common])
    scan.add_argument("--ratios", help="start:end:step or comma list of Jx/Jz values")
    scan.add_argument("--no-bisect", action="store_true")
    scan.add_argument("--resolution", type=float, default=1e-6)
    scan.add_argument("--footer", help="endpoint JSON path (default: next to --out with suffix .endpoints.json, else stderr)")
    null = sub.add_parser("nullspace", parents=[common, sizes])
    null.add_argument("--family", choices=["generic", "ring-xz4"], default="generic")
    theorem = sub.add_parser("verify-theorem", parents=[common, sizes])
    theorem.add_argument("--samples", type=int, default=100)
    sub.add_parser("witness", parents=[common, sizes])
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    extra = {}
    for key in ("n", "m", "samples", "family", "ratios", "no_bisect", "resolution"):
        if hasattr(args, key):
            extra[key] = getattr(args, key)
    return RunConfig(
        command=args.command,
        model=args.model,
        input=args.input,
        jx=args.jx,
        jz=args.jz,
        tol=args.tol,
        cluster_tol=args.cluster_tol,
        out=args.out,
        seed=args.seed,
        dump_amplitudes=args.dump_amplitudes,
        extra=extra,
    )


def _write(path: str | None, text: str, stream) -> None:
    if path is None:
        stream.write(text)
    else:
        Path(path).write_text(text)


_VALUE_FLAGS = ("--jx", "--jz", "--ratios")


def _glue_values(argv: list[str]) -> list[str]:
    """Attach values like '-1:1:0.05' to their flag so argparse does not read them as options."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_glue_values(argv))
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    cfg = _config(args)
    handler, needs_source = COMMANDS[cfg.command]
    try:
        cfg.validate(needs_source)
        code, text = handler(cfg)
        _write(cfg.out, text, sys.stdout)
        if "footer_text" in cfg.extra:
            footer = getattr(args, "footer", None)
            if footer is None and cfg.out is not None:
                footer = str(Path(cfg.out).with_suffix(".endpoints.json"))
            _write(footer, cfg.extra["footer_text"], sys.stderr)
    except (UsageError, ValueError, OSError) as exc:
        print(f"ghzeig {cfg.command}: error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
