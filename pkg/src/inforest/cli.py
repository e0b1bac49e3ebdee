"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 numerical instability or
overflow, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import geninv, linalg, markov, oracle, spectral
from .errors import InForestError, InputError, NoEigenvectorError, NumericalError
from .forest import forest_spectrum, normalized_forest_matrix, parametric_forest_matrices
from .graph import forest_dimension, parse_edge_list

GRAPH_COMMANDS = (
    "spectrum",
    "forest-matrix",
    "all-forests",
    "eigenprojection",
    "eigen",
    "group-inverse",
    "mp-inverse",
    "dense-forest",
    "verify",
)
CHAIN_COMMANDS = ("stationary", "long-run")


@dataclass(frozen=True)
class RunConfig:
    command: str
    path: str
    format: str = "json"
    tol: float = linalg.DEFAULT_TOL
    k: int | None = None
    normalized: bool = False
    tau: float | None = None
    alpha: float | None = None
    method: str | None = None

    def validate(self) -> None:
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise InputError(f"--tol must be positive, got {self.tol}")
        if self.format not in ("json", "csv"):
            raise InputError(f"--format must be json or csv, got {self.format}")
        if self.k is not None and self.k < 0:
            raise InputError(f"--k must be >= 0, got {self.k}")
        for name in ("tau", "alpha"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise InputError(f"--{name} must be finite")
        if self.command == "forest-matrix" and self.k is None:
            raise InputError("forest-matrix requires --k")
        if self.command == "dense-forest":
            if self.alpha is None:
                raise InputError("dense-forest requires --alpha")
            if self.alpha <= 0:
                raise InputError(f"--alpha must be positive for dense-forest, got {self.alpha}")
        if self.command == "group-inverse" and self.alpha is not None and self.alpha == 0:
            raise InputError("--alpha must be nonzero")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="inforest", description="In-forest matrices of weighted digraphs.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    for name in GRAPH_COMMANDS + CHAIN_COMMANDS:
        kind = "stochastic-matrix CSV" if name in CHAIN_COMMANDS else "edge-list"
        p = sub.add_parser(name, help=f"({kind} input)")
        p.add_argument("path", help=f"{kind} file, or - for stdin")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--tol", type=float, default=linalg.DEFAULT_TOL)
        if name == "forest-matrix":
            p.add_argument("--k", type=int, required=True)
            p.add_argument("--normalized", action="store_true")
        if name == "all-forests":
            p.add_argument("--tau", type=float, default=1.0)
        if name == "group-inverse":
            p.add_argument("--method", choices=geninv.METHODS, default="forest")
            p.add_argument("--alpha", type=float, default=geninv.DEFAULT_ALPHA)
        if name == "dense-forest":
            p.add_argument("--alpha", type=float, required=True)
    return parser


def parse_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    config = RunConfig(
        command=ns.command,
        path=ns.path,
        format=ns.format,
        tol=ns.tol,
        k=getattr(ns, "k", None),
        normalized=getattr(ns, "normalized", False),
        tau=getattr(ns, "tau", None),
        alpha=getattr(ns, "alpha", None),
        method=getattr(ns, "method", None),
    )
    config.validate()
    return config


# -- serialization ---------------------------------------------------------


def _num(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise NumericalError("refusing to serialize a non-finite number")
    if x == 0:
        return "0"
    return "%.17g" % x


def _complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def to_json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return to_json(obj.tolist())
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{to_json(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_rows(rows) -> list[str]:
    return [",".join(_num(x) for x in row) for row in rows]


def _csv(*blocks) -> str:
    """Blocks are matrices or vectors; blank line between blocks."""
    parts = []
    for block in blocks:
        a = np.asarray(block, dtype=float)
        parts.append("\n".join(_csv_rows(a if a.ndim == 2 else [a])))
    return "\n\n".join(parts) + "\n"


# -- dispatch --------------------------------------------------------------


def run(config: RunConfig, text: str) -> tuple[int, str]:
    """Execute one subcommand on already-read input text."""
    if config.command in CHAIN_COMMANDS:
        return 0, _run_chain(config, text)
    g = parse_edge_list(text)
    if config.command == "verify":
        oracle._guard(g.n)
    s = forest_spectrum(g, tol=config.tol)
    head = {"command": config.command, "n": s.n, "d": s.d}
    cmd = config.command
    csv = config.format == "csv"

    if cmd == "spectrum":
        sigma = s.sigma[: s.top + 1]
        return 0, _csv(sigma) if csv else to_json(head | {"sigma": sigma}) + "\n"

    if cmd == "forest-matrix":
        k = config.k
        if k > s.n or (config.normalized and k > s.top):
            limit = s.top if config.normalized else s.n
            raise InputError(f"--k must lie in 0..{limit}, got {k}")
        if config.normalized:
            key, M = "J", normalized_forest_matrix(s, k)
        else:
            key, M = "Q", s.q[k]
        return 0, _csv(M) if csv else to_json(head | {"k": k, key: M}) + "\n"

    if cmd == "all-forests":
        Q, sig, J = parametric_forest_matrices(s, config.tau)
        if csv:
            return 0, _csv(*[b for b in (Q, [sig], J) if b is not None])
        return 0, to_json(head | {"tau": config.tau, "Q": Q, "sigma": sig, "J": J}) + "\n"

    if cmd == "eigenprojection":
        Jt = spectral.max_forest_projection(s)
        return 0, _csv(Jt) if csv else to_json(head | {"J_tilde": Jt}) + "\n"

    if cmd == "eigen":
        return 0, _eigen(s, head, config)

    if cmd == "group-inverse":
        L = s.laplacian
        Jt = spectral.max_forest_projection(s)
        if config.method == "forest":
            X = geninv.group_inverse_forest(s)
        elif config.method == "perturb":
            X = geninv.group_inverse_perturbation(L, Jt, config.alpha)
        else:
            X = geninv.group_inverse_projection(L, Jt, config.alpha)
        residuals = geninv.group_axiom_residuals(L, X)
        residuals["eigenprojection"] = linalg.max_abs_norm(geninv.eigenprojection_identity(L, X) - Jt)
        if csv:
            return 0, _csv(X)
        payload = {"method": config.method, "alpha": config.alpha, "group_inverse": X, "residuals": residuals}
        return 0, to_json(head | payload) + "\n"

    if cmd == "mp-inverse":
        X = geninv.moore_penrose(s.laplacian, spectral.max_forest_projection(s))
        residuals = geninv.moore_penrose_axiom_residuals(s.laplacian, X)
        if csv:
            return 0, _csv(X)
        return 0, to_json(head | {"moore_penrose": X, "residuals": residuals}) + "\n"

    if cmd == "dense-forest":
        M = geninv.dense_forest_matrix(s, config.alpha, tol=config.tol)
        return 0, _csv(M) if csv else to_json(head | {"alpha": config.alpha, "dense_forest": M}) + "\n"

    if cmd == "verify":
        checks = oracle.verify_graph(g, tol=config.tol)
        ok = all(c.passed for c in checks)
        if csv:
            out = "".join(f"{c.name},{_num(c.residual)},{_num(c.bound)},{str(c.passed).lower()}\n" for c in checks)
        else:
            report = [
                {"check": c.name, "residual": c.residual, "bound": c.bound, "passed": c.passed} for c in checks
            ]
            out = to_json(head | {"passed": ok, "report": report}) + "\n"
        return (0 if ok else 3), out

    raise InputError(f"unknown command {cmd!r}")


def _eigen(s, head: dict, config: RunConfig) -> str:
    e = spectral.eigenvalues_of(s)
    vectors = []
    for lam in spectral.distinct_nonzero(e.eigenvalues):
        entry: dict = {"eigenvalue": _complex(lam)}
        try:
            ev = spectral.eigenvectors_from_forests(s, lam, tol=config.tol)
        except NoEigenvectorError as exc:
            entry |= {"vectors": [], "residuals": [], "error": str(exc)}
        else:
            entry["vectors"] = [v.tolist() if np.isrealobj(v) else [_complex(z) for z in v] for v in ev.vectors]
            entry["residuals"] = list(ev.residuals)
        vectors.append(entry)
    null = spectral.null_space_basis(s, tol=config.tol)
    if config.format == "csv":
        eig = np.array([_complex(z) for z in e.eigenvalues])
        return _csv(e.coeffs, eig)
    payload = {
        "coefficients": e.coeffs,
        "eigenvalues": [_complex(z) for z in e.eigenvalues],
        "root_residuals": e.residuals,
        "eigenvectors": vectors,
        "null_space": null,
    }
    return to_json(head | payload) + "\n"


def _run_chain(config: RunConfig, text: str) -> str:
    P = markov.parse_stochastic_csv(text)
    g = markov.chain_digraph(P)
    head = {"command": config.command, "n": P.shape[0], "d": forest_dimension(g)}
    if config.command == "stationary":
        pi = markov.stationary_distribution(P, tol=config.tol)
        return _csv(pi) if config.format == "csv" else to_json(head | {"pi": pi}) + "\n"
    M = markov.long_run_matrix(P, tol=config.tol)
    return _csv(M) if config.format == "csv" else to_json(head | {"P_inf": M}) + "\n"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
        code, out = run(config, _read(config.path))
    except (InputError, OSError, UnicodeDecodeError) as exc:
        print(f"inforest: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"inforest: numerical error: {exc}", file=sys.stderr)
        return 2
    except InForestError as exc:
        print(f"inforest: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
