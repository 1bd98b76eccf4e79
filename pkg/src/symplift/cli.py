"""Command-line front end.

Subcommands: order, check, closure, span, certify, verify, reproduce,
fixtures.  Exit codes: 0 for certified/pass, 1 for refuted/fail, 2 for
inconclusive results, 3 for usage or input errors.

Generator files are JSON with keys l, k, g, form, generators (each a flat
row-major list of (2g)^2 canonical residues) and an optional label.  Loading
is strict: entries outside [0, l^k) are rejected, and every matrix must
preserve the declared form.  Serialization round-trips exactly.

Certification reports written by certify/verify include wall-clock time;
reproduce reports deliberately omit it so repeated runs with the same seed
are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .cases import ALL_CASES, run_case
from .certifier import certify_theorem_mode, verify_direct
from .errors import RangeError, SympliftError
from .fixtures import listing_pair
from .groupengine import CAP_DEFAULT, WORD_BUDGET_DEFAULT, GenSet, closure
from .liealg import LieVector, SpanBuilder, conj_orbit_span, log_layer
from .matmod import MatMod
from .residue_ring import make_modulus
from .symplectic import JFORM, OMEGA, e_matrices, form, group_order, is_lie, is_symplectic, q_blockperm

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3

_VERDICT_EXIT = {
    "CERTIFIED_FULL": EXIT_PASS,
    "REFUTED": EXIT_FAIL,
    "INCONCLUSIVE": EXIT_INCONCLUSIVE,
}


class _Parser(argparse.ArgumentParser):
    """argparse maps its own errors to exit 2; the contract here wants 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# ---------------------------------------------------------------------------
# generator files


def genset_to_dict(gs: GenSet) -> dict:
    return {
        "l": gs.modulus.l,
        "k": gs.modulus.k,
        "g": gs.g,
        "form": gs.form.kind,
        "label": gs.label,
        "generators": [M.entries.reshape(-1).tolist() for M in gs.generators],
    }


def _parse_genfile_dict(obj: dict):
    """Structural validation only; returns (meta, matrices, form)."""
    if not isinstance(obj, dict):
        raise RangeError("generator file must be a JSON object")
    for key in ("l", "k", "g", "form", "generators"):
        if key not in obj:
            raise RangeError(f"generator file missing key {key!r}")
    l, k, g = obj["l"], obj["k"], obj["g"]
    for name, v in (("l", l), ("k", k), ("g", g)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise RangeError(f"{name} must be an integer")
    kind = obj["form"]
    if kind not in (OMEGA, JFORM):
        raise RangeError(f"form must be {OMEGA!r} or {JFORM!r}")
    label = obj.get("label", "")
    if not isinstance(label, str):
        raise RangeError("label must be a string")
    mod = make_modulus(l, k)
    if g < 1:
        raise RangeError("g must be at least 1")
    rows = obj["generators"]
    if not isinstance(rows, list) or not rows:
        raise RangeError("generators must be a non-empty list")
    d = 2 * g
    mats = []
    for i, flat in enumerate(rows):
        if not isinstance(flat, list) or len(flat) != d * d:
            raise RangeError(
                f"generator {i} must be a flat row-major list of {d * d} entries"
            )
        for x in flat:
            if not isinstance(x, int) or isinstance(x, bool):
                raise RangeError(f"generator {i} has a non-integer entry")
            if not 0 <= x < mod.value:
                raise RangeError(
                    f"generator {i} entry {x} outside [0, {mod.value})"
                )
        mats.append(MatMod(np.array(flat, dtype=np.int64).reshape(d, d), mod))
    f = form(kind, g, mod)
    meta = {"l": l, "k": k, "g": g, "form": kind, "label": label}
    return meta, mats, f


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise RangeError(f"{path}: invalid JSON ({e})") from e


def load_genset(path: str) -> GenSet:
    """Strict load: structure, ranges, and the symplectic condition."""
    meta, mats, f = _parse_genfile_dict(_read_json(path))
    return GenSet(
        g=meta["g"],
        modulus=mats[0].modulus,
        form=f,
        generators=tuple(mats),
        label=meta["label"],
    )


def _write_json(path: Path, obj: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_order(args) -> int:
    print(group_order(args.g, args.l, args.k))
    return EXIT_PASS


def _cmd_check(args) -> int:
    meta, mats, f = _parse_genfile_dict(_read_json(args.genfile))
    all_symp = True
    for i, M in enumerate(mats):
        symp = is_symplectic(M, f)
        all_symp = all_symp and symp
        line = f"generator {i}: symplectic={symp}"
        if meta["k"] == 1:
            line += f" lie={is_lie(M, f)}"
        print(line)
    print(f"all symplectic: {all_symp}")
    return EXIT_PASS if all_symp else EXIT_FAIL


def _cmd_closure(args) -> int:
    gs = load_genset(args.genfile)
    cl = closure(gs, cap=args.cap)
    print(f"order: {cl.order}")
    print(f"exhausted: {cl.exhausted}")
    print(f"ambient order: {group_order(gs.g, gs.modulus.l, gs.modulus.k)}")
    return EXIT_PASS if cl.exhausted else EXIT_INCONCLUSIVE


def _named_lie_vector(name: str, l: int) -> LieVector:
    mod2 = make_modulus(l, 2)
    fj2 = form(JFORM, 2, mod2)
    if name == "zero":
        return LieVector.zero(2, l, JFORM)
    e1, e2 = e_matrices(2, l)
    return log_layer(e1 if name == "e1" else e2, fj2)


def _cmd_span(args) -> int:
    if (args.case is None) == (args.genfile is None):
        raise RangeError("span needs exactly one of --case or a generator file")
    if args.case is not None:
        if args.case not in ("e1", "e2", "zero"):
            raise RangeError("named elements: e1, e2, zero")
        if args.l is None:
            raise RangeError("--l is required with --case")
        v = _named_lie_vector(args.case, args.l)
        f1 = form(JFORM, 2, make_modulus(args.l, 1))
        sub = conj_orbit_span(v, f1)
    else:
        gs = load_genset(args.genfile)
        if gs.modulus.k != 2:
            raise RangeError("span over a file expects kernel elements at k = 2")
        l = gs.modulus.l
        f1 = form(gs.form.kind, gs.g, make_modulus(l, 1))
        builder = SpanBuilder(gs.g, l)
        for M in gs.generators:
            v = log_layer(M, gs.form)
            builder.add(conj_orbit_span(v, f1, cap=args.cap).basis)
        sub = builder.subspace()
    print(f"dim: {sub.dim}")
    for row in sub.basis:
        print(" ".join(str(int(x)) for x in row))
    return EXIT_PASS


def _run_certifier(args, mode: str) -> int:
    gs = load_genset(args.genfile)
    t0 = time.perf_counter()
    if mode == "theorem":
        rep = certify_theorem_mode(gs, cap=args.cap)
    else:
        rep = verify_direct(gs, budget=args.budget, seed=args.seed, cap=args.cap)
    wall = time.perf_counter() - t0
    print(f"verdict: {rep.verdict}")
    for step in rep.steps:
        print(f"  [{step.verdict}] {step.name}: {step.claim}")
        if step.witness is not None:
            print(f"    witness: {json.dumps(step.witness, sort_keys=True)}")
    if args.out:
        _write_json(
            Path(args.out),
            {
                "tool": "symplift",
                "version": __version__,
                "wall_time_s": round(wall, 3),
                "report": rep.to_json(),
            },
        )
        print(f"report written: {args.out}")
    return _VERDICT_EXIT[rep.verdict]


def _cmd_certify(args) -> int:
    return _run_certifier(args, args.mode)


def _cmd_verify(args) -> int:
    return _run_certifier(args, "direct")


def _cmd_reproduce(args) -> int:
    if args.all == (args.case is not None):
        raise RangeError("reproduce needs exactly one of --case or --all")
    ids = list(ALL_CASES) if args.all else [args.case]
    outdir = Path(args.out) if args.out else None
    all_pass = True
    for cid in ids:
        res = run_case(cid, seed=args.seed)
        all_pass = all_pass and res.passed
        print(f"{cid}: {'PASS' if res.passed else 'FAIL'}")
        if outdir is not None:
            _write_json(
                outdir / f"{cid}.json",
                {
                    "tool": "symplift",
                    "version": __version__,
                    "seed": args.seed,
                    **res.to_json(),
                },
            )
    return EXIT_PASS if all_pass else EXIT_FAIL


def _cmd_fixtures(args) -> int:
    from itertools import permutations

    outdir = Path(args.out if args.out else "fixtures")
    written = []
    for l in (2, 3):
        gs = listing_pair(l)
        path = outdir / f"listing-l{l}.json"
        _write_json(path, genset_to_dict(gs))
        written.append(path)

        mod2 = make_modulus(l, 2)
        fj2 = form(JFORM, 2, mod2)
        e1, e2 = e_matrices(2, l)
        egs = GenSet(
            g=2, modulus=mod2, form=fj2, generators=(e1, e2), label="e-matrices"
        )
        path = outdir / f"e-matrices-l{l}.json"
        _write_json(path, genset_to_dict(egs))
        written.append(path)

    for g in (2, 3):
        mod = make_modulus(2, 1)
        fj = form(JFORM, g, mod)
        qs = tuple(
            q_blockperm(g, sigma, mod)
            for sigma in permutations(range(g))
            if sigma != tuple(range(g))
        )
        qgs = GenSet(
            g=g, modulus=mod, form=fj, generators=qs, label=f"q-blockperm-g{g}"
        )
        path = outdir / f"q-blockperm-g{g}.json"
        _write_json(path, genset_to_dict(qgs))
        written.append(path)

    for p in written:
        print(f"wrote {p}")
    return EXIT_PASS


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> _Parser:
    parser = _Parser(prog="symplift", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"symplift {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("order", help="order of Sp_2g(Z/l^k Z)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=_cmd_order)

    p = sub.add_parser("check", help="symplectic/Lie check of a generator file")
    p.add_argument("genfile")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("closure", help="enumerate the generated subgroup")
    p.add_argument("genfile")
    p.add_argument("--cap", type=int, default=CAP_DEFAULT)
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("span", help="conjugation-orbit span of kernel elements")
    p.add_argument("genfile", nargs="?")
    p.add_argument("--case", choices=("e1", "e2", "zero"))
    p.add_argument("--l", type=int)
    p.add_argument("--form", choices=(OMEGA, JFORM), default=JFORM)
    p.add_argument("--cap", type=int, default=CAP_DEFAULT)
    p.set_defaults(func=_cmd_span)

    p = sub.add_parser("certify", help="certify fullness of a generated subgroup")
    p.add_argument("genfile")
    p.add_argument("--mode", choices=("theorem", "direct"), default="theorem")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=WORD_BUDGET_DEFAULT)
    p.add_argument("--cap", type=int, default=CAP_DEFAULT)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("verify", help="layer-by-layer direct verification")
    p.add_argument("genfile")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=WORD_BUDGET_DEFAULT)
    p.add_argument("--cap", type=int, default=CAP_DEFAULT)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("reproduce", help="re-run named replication cases")
    p.add_argument("--case", choices=ALL_CASES)
    p.add_argument("--all", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("fixtures", help="emit the transcribed matrix fixtures")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except SympliftError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
