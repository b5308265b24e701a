"""Command-line front end.

Exit codes: 0 success, 1 domain or validation failure, 2 I/O or parse failure.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .conjugation import (
    DEFAULT_TOL,
    kernel_residuals,
    plain_conjugation,
    random_conjugation,
    split_parts,
    symmetry_class,
)
from .duality import (
    alpha,
    distance_to_skew,
    hyperreflexivity_ratios,
    reflexivity_check,
    structured_basis,
)
from .errors import ParseError, SkewCError
from .io import (
    conjugation_from_doc,
    conjugation_to_doc,
    dumps,
    kernel_from_doc,
    matrix_from_doc,
    matrix_to_doc,
    read_doc,
    subspace_from_doc,
    vector_to_doc,
)
from .models import (
    antidiagonal_check,
    c3_example,
    model_identity_residuals,
    model_space,
    nonreflexive_example,
)
from .numerics import orthonormalize, restart_rng

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2

SCAN_HEADER = ["trial", "dim", "seed", "dist", "alpha1", "alpha2", "ratio1", "ratio2"]


class DomainFailure(Exception):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    except OSError as exc:
        raise ParseError(f"cannot write {out}: {exc}") from exc


def _load_conjugation(path: str, tol: float):
    return conjugation_from_doc(read_doc(path), tol)


def _load_matrix(path: str) -> np.ndarray:
    return matrix_from_doc(read_doc(path))


def candidate_doc(cand) -> dict:
    return {
        "ratio": cand.ratio,
        "rank": cand.rank,
        "coefficients": vector_to_doc(cand.coefficients),
        "matrix": matrix_to_doc(cand.matrix),
    }


def reflexivity_doc(rep, max_evidence: int = 10) -> dict:
    return {
        "k": rep.k,
        "dims": {"preannihilator": rep.preannihilator_dim, "rank_k_span": rep.rank_k_span_dim},
        "verdict": rep.verdict,
        "evidence": [candidate_doc(c) for c in rep.evidence[:max_evidence]],
    }


def alpha_doc(rep) -> dict:
    return {
        "k": rep.k,
        "value": rep.value,
        "witness": [vector_to_doc(w) for w in rep.witness],
        "method": rep.method,
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    K = kernel_from_doc(read_doc(args.conjugation))
    doc = {"dim": K.shape[0], "square": K.ndim == 2 and K.shape[0] == K.shape[1]}
    if not doc["square"]:
        doc["valid"] = False
        _emit(dumps(doc), args.out)
        return EXIT_DOMAIN
    sym, unit = kernel_residuals(K)
    doc.update(symmetry_residual=sym, unitarity_residual=unit, tol=args.tol)
    doc["valid"] = bool(sym <= args.tol and unit <= args.tol)
    _emit(dumps(doc), args.out)
    return EXIT_OK if doc["valid"] else EXIT_DOMAIN


def cmd_classify(args) -> int:
    C = _load_conjugation(args.conjugation, 1e-10)
    T = _load_matrix(args.operator)
    cls = symmetry_class(C, T, args.tol)
    A, B = split_parts(C, T)
    doc = {
        "label": cls.label,
        "symmetric_residual": cls.symmetric_residual,
        "skew_residual": cls.skew_residual,
        "norm": cls.norm,
        "symmetric_part": matrix_to_doc(A),
        "skew_part": matrix_to_doc(B),
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_distance(args) -> int:
    C = _load_conjugation(args.conjugation, 1e-10)
    T = _load_matrix(args.operator)
    method = args.method.replace("-", "_")
    dist = distance_to_skew(C, T)
    ks = (1, 2) if args.k == "both" else (int(args.k),)
    doc = {"dist": dist.dist, "nearest": matrix_to_doc(dist.nearest), "certificate_gap": dist.certificate_gap}
    for k in ks:
        rep = alpha(C, T, k, method=method, samples=args.samples, seed=args.seed)
        doc[f"alpha{k}"] = alpha_doc(rep)
    _emit(dumps(doc), args.out)
    return EXIT_OK


@dataclass(frozen=True)
class ScanRecord:
    trial: int
    dim: int
    seed: int
    dist: float
    alpha1: float
    alpha2: float
    ratio1: float
    ratio2: float
    degenerate: bool = False


def scan_trial(dim: int, seed: int, trial: int) -> ScanRecord:
    """One ratio-scan trial; depends only on ``(dim, seed, trial)``."""
    rng = restart_rng(seed, trial)
    C = random_conjugation(dim, rng)
    T = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    d = distance_to_skew(C, T).dist
    a1 = alpha(C, T, 1).value
    a2 = alpha(C, T, 2).value
    r1, r2 = hyperreflexivity_ratios(C, T)
    degenerate = d <= 1e-12 * np.linalg.norm(T, 2)
    return ScanRecord(trial, dim, seed, d, a1, a2, r1, r2, bool(degenerate))


def run_scan(dim: int, trials: int, seed: int, workers: int = 1) -> list[ScanRecord]:
    if workers <= 1:
        return [scan_trial(dim, seed, t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order, so output is independent of scheduling.
        return list(pool.map(lambda t: scan_trial(dim, seed, t), range(trials)))


def scan_summary(records: list[ScanRecord]) -> dict:
    live = [r for r in records if not r.degenerate]
    return {
        "trials": len(records),
        "degenerate": len(records) - len(live),
        "max_ratio1": max((r.ratio1 for r in live), default=1.0),
        "max_abs_ratio2_minus_1": max((abs(r.ratio2 - 1.0) for r in live), default=0.0),
    }


def format_scan(records: list[ScanRecord], fmt: str) -> str:
    summary = scan_summary(records)
    if fmt == "structured":
        return dumps({"records": [asdict(r) for r in records], "summary": summary})
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_HEADER)
    for r in records:
        w.writerow([r.trial, r.dim, r.seed] + [_fmt(x) for x in (r.dist, r.alpha1, r.alpha2, r.ratio1, r.ratio2)])
    buf.write(
        "# summary trials={} degenerate={} max_ratio1={} max_abs_ratio2_minus_1={}\n".format(
            summary["trials"],
            summary["degenerate"],
            _fmt(summary["max_ratio1"]),
            _fmt(summary["max_abs_ratio2_minus_1"]),
        )
    )
    return buf.getvalue()


def cmd_scan(args) -> int:
    if args.trials < 1 or args.dim < 1:
        raise DomainFailure("--trials and --dim must be >= 1")
    records = run_scan(args.dim, args.trials, args.seed, args.workers)
    _emit(format_scan(records, args.format), args.out)
    s = scan_summary(records)
    if s["max_ratio1"] > 3 + 1e-8 or s["max_abs_ratio2_minus_1"] > 1e-8:
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_reflexivity(args) -> int:
    C = None
    notes: list[str] = []
    if args.builtin:
        name = args.builtin
        if name.startswith("skew:"):
            try:
                n = int(name.split(":", 1)[1])
            except ValueError as exc:
                raise DomainFailure(f"bad builtin {name!r}") from exc
            if n < 1:
                raise DomainFailure("dimension must be >= 1")
            C = _load_conjugation(args.conjugation, 1e-10) if args.conjugation else plain_conjugation(n)
            if C.dim != n:
                raise DomainFailure(f"conjugation dim {C.dim} does not match {name}")
            S = structured_basis(C, "skew")
        elif name == "example:nonreflexive":
            bundle = nonreflexive_example(seed=args.seed)
            S = bundle.subspaces["algebra"]
            notes = bundle.notes
        else:
            raise DomainFailure(f"unknown builtin {name!r}; use skew:<n> or example:nonreflexive")
    else:
        mats = subspace_from_doc(read_doc(args.subspace))
        if not mats:
            raise DomainFailure("subspace has no elements")
        try:
            S = orthonormalize(mats)
        except ValueError as exc:
            raise DomainFailure(str(exc)) from exc
        if args.conjugation:
            C = _load_conjugation(args.conjugation, 1e-10)
    rep = reflexivity_check(S, args.k, C, trials=args.trials, seed=args.seed)
    doc = reflexivity_doc(rep)
    doc["subspace_dim"] = S.subspace_dim
    doc["notes"] = notes
    _emit(dumps(doc), args.out)
    return EXIT_OK


def model_verify(k: int, trials: int, seed: int) -> dict:
    ms = model_space(k)
    B = structured_basis(ms.conjugation, "skew")
    worst4 = worst_t = worst_anti = 0.0
    for t in range(trials):
        rng = restart_rng(seed, t)
        coef = rng.standard_normal(B.subspace_dim) + 1j * rng.standard_normal(B.subspace_dim)
        A = B.combine(coef)
        A /= np.linalg.norm(A, 2)
        r = 0.95 * np.sqrt(rng.uniform())
        lam = r * np.exp(2j * np.pi * rng.uniform())
        r4, rt = model_identity_residuals(ms, A, lam)
        worst4 = max(worst4, float(r4.max()))
        worst_t = max(worst_t, float(rt.max()))
        worst_anti = max(worst_anti, antidiagonal_check(ms, A))
    return {"k": k, "trials": trials, "seed": seed, "max_residual_shift_identity": worst4,
            "max_residual_diagonal": worst_t, "max_residual_antidiagonal": worst_anti}


def cmd_model_verify(args) -> int:
    if args.k < 2:
        raise DomainFailure("k must be >= 2")
    doc = model_verify(args.k, args.trials, args.seed)
    _emit(dumps(doc), args.out)
    worst = max(doc["max_residual_shift_identity"], doc["max_residual_diagonal"], doc["max_residual_antidiagonal"])
    return EXIT_OK if worst <= args.tol else EXIT_DOMAIN


def example_docs(name: str, seed: int = 0) -> dict:
    if name in ("c3-1", "c3-2"):
        b = c3_example(int(name[-1]))
        return {
            "name": b.name,
            "conjugation": conjugation_to_doc(b.conjugation),
            "skew_generators": [matrix_to_doc(G) for G in b.skew_generators()],
            "matrices": {k: matrix_to_doc(v) for k, v in b.matrices.items()},
        }
    if name == "nonreflexive":
        b = nonreflexive_example(seed=seed)
        return {
            "name": b.name,
            "conjugation": conjugation_to_doc(b.conjugation),
            "matrices": {k: matrix_to_doc(v) for k, v in b.matrices.items()},
            "subspaces": {k: [matrix_to_doc(E) for E in v] for k, v in b.subspaces.items()},
            "evidence": [candidate_doc(c) for c in b.evidence],
            "notes": b.notes,
        }
    if name.startswith("model:"):
        ms = model_space(int(name.split(":", 1)[1]))
        return {
            "name": name,
            "k": ms.k,
            "labels": ms.labels,
            "conjugation": conjugation_to_doc(ms.conjugation),
            "shift": matrix_to_doc(ms.shift),
        }
    raise DomainFailure(f"unknown example {name!r}")


def cmd_examples(args) -> int:
    names = args.name or ["c3-1", "c3-2", "nonreflexive"]
    docs = [example_docs(n, args.seed) for n in names]
    _emit(dumps(docs if len(docs) > 1 else docs[0]), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skewc", description="Skew-C symmetric operator toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tol=DEFAULT_TOL):
        sp.add_argument("--tol", type=float, default=tol)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="output path (default: stdout)")

    sp = sub.add_parser("validate", help="check a conjugation kernel")
    sp.add_argument("conjugation")
    common(sp, tol=1e-10)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("classify", help="classify an operator and split it into symmetric + skew parts")
    sp.add_argument("conjugation")
    sp.add_argument("operator")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("distance", help="distance to the skew subspace and alpha_1, alpha_2")
    sp.add_argument("conjugation")
    sp.add_argument("operator")
    sp.add_argument("--k", choices=["1", "2", "both"], default="both")
    sp.add_argument("--method", choices=["closed-form", "sampled"], default="closed-form")
    sp.add_argument("--samples", type=int, default=10_000)
    common(sp)
    sp.set_defaults(func=cmd_distance)

    sp = sub.add_parser("scan", help="seeded scan of dist/alpha ratios")
    sp.add_argument("--dim", type=int, default=6)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--format", choices=["tabular", "structured"], default="tabular")
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("reflexivity", help="rank-k span versus preannihilator dimension")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", help="skew:<n> or example:nonreflexive")
    src.add_argument("--subspace", help="subspace document")
    sp.add_argument("--conjugation", help="conjugation document (skew builtins / exact families)")
    sp.add_argument("--k", type=int, choices=[1, 2], default=1)
    sp.add_argument("--trials", type=int, default=50)
    common(sp)
    sp.set_defaults(func=cmd_reflexivity)

    sp = sub.add_parser("model-verify", help="shift identities in the z^k model space")
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--trials", type=int, default=20)
    common(sp, tol=1e-9)
    sp.set_defaults(func=cmd_model_verify)

    sp = sub.add_parser("examples", help="emit the worked examples")
    sp.add_argument("--name", action="append", help="c3-1, c3-2, nonreflexive, model:<k> (repeatable)")
    common(sp)
    sp.set_defaults(func=cmd_examples)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainFailure, SkewCError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
