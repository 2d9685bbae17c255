"""``weilab`` command line.

Exit status: 0 on success, 1 when the input is mathematically or
syntactically unusable, 2 on bad command-line usage (argparse's own code).
Nothing is printed to stdout when a command fails.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import __version__
from .aut_constraints import generate_constraints
from .autos import parse_map
from .classify import KINDS, default_weight_bound, find_grading_weights, triviality_report
from .derivations import derivation_space, fixed_subalgebra_estimate
from .derivations import TRIVIAL as K_TRIVIAL
from .linalg import Subspace
from .poly import PolyError, parse_poly
from .scan import CERTIFIED_YES, INCONCLUSIVE, MODES, ScanConfig, scan_run
from .weil import EffectiveWidthWarning, WeilAlgebra, WeilError, load_spec


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def render_json(report: dict) -> str:
    """Insertion-ordered JSON; Fractions become "p/q" strings."""
    return json.dumps(_jsonable(report), indent=2, ensure_ascii=False) + "\n"


def _span(A: WeilAlgebra, s: Subspace) -> str:
    return "span{" + ", ".join(A.render_subspace(s)) + "}"


def _status_text(status: str) -> str:
    return "trivial certified" if status == K_TRIVIAL else "upper bound"


def _load(path: str, quiet: bool = False) -> WeilAlgebra:
    spec = load_spec(path)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", EffectiveWidthWarning)
        A = WeilAlgebra(spec)
    if not quiet:
        for w in caught:
            print(f"weilab: warning: {w.message}", file=sys.stderr)
    return A


def _head(A: WeilAlgebra) -> dict:
    return {"spec": A.spec.to_dict(), "dim": A.dim}


# -- subcommands --------------------------------------------------------------
# each returns (human text, json dict)

def cmd_info(args, A):
    d = _head(A)
    d.update(order=A.order, width=A.width, socle_dim=A.socle.dim, ideal_dim=A.ideal.dim,
             ideal_in_m2=A.ideal_in_m2)
    text = f"dim={A.dim} order={A.order} width={A.width} socle_dim={A.socle.dim}\n"
    return text, d


def cmd_basis(args, A):
    names = [A.ctx.render_monomial(m) for m in A.basis]
    d = _head(A)
    d["basis"] = names
    return "".join(f"{n}\n" for n in names), d


def cmd_multable(args, A):
    names = [A.ctx.render_monomial(m) for m in A.basis]
    lines, entries = [], []
    for i in range(A.dim):
        for j in range(i, A.dim):
            prod = A.multiply(A.basis_element(i), A.basis_element(j))
            if prod or args.all:
                s = str(prod) if prod else "0"
                lines.append(f"{names[i]} * {names[j]} = {s}\n")
                entries.append({"left": names[i], "right": names[j], "product": s})
    d = _head(A)
    d["basis"] = names
    d["products"] = entries
    return "".join(lines), d


def cmd_nf(args, A):
    el = A.normal_form(parse_poly(args.poly, A.ctx))
    s = str(el) if el else "0"
    d = _head(A)
    d.update(input=args.poly, normal_form=s, coordinates=list(el.coords))
    return s + "\n", d


def cmd_socle(args, A):
    soc, ma = A.socle, A.ma_subalgebra
    d = _head(A)
    d.update(socle={"dim": soc.dim, "basis": A.render_subspace(soc)},
             ma={"dim": ma.dim, "basis": A.render_subspace(ma)})
    text = f"soc(A) = {_span(A, soc)} (dim {soc.dim})\nMA = {_span(A, ma)} (dim {ma.dim})\n"
    return text, d


def cmd_classify(args, A):
    bound = args.weight_bound
    if bound is not None and bound < 1:
        raise UsageError("--weight-bound must be >= 1")
    rep = triviality_report(A, bound, use_order_theorem=not args.no_prop4)
    lines = []
    for kind in KINDS:
        line = f"{kind}: {rep.outcomes[kind]}"
        if kind in rep.certificates:
            w = rep.certificates[kind].witness
            line += " (" + ", ".join(f"{k}={_witness_text(v)}" for k, v in w.items()) + ")"
        lines.append(line)
    lines.append(f"verdict: {rep.verdict}")
    d = _head(A)
    d.update(rep.to_dict())
    d["weight_bound"] = bound if bound is not None else default_weight_bound(A)
    return "\n".join(lines) + "\n", d


def _witness_text(v):
    if isinstance(v, list):
        return "(" + ",".join(_witness_text(x) for x in v) + ")"
    return str(v)


def cmd_weights(args, A):
    bound = args.bound if args.bound is not None else default_weight_bound(A)
    if bound < 1:
        raise UsageError("--bound must be >= 1")
    w = find_grading_weights(A, bound)
    d = _head(A)
    d.update(bound=bound, weights=list(w) if w else None)
    text = f"weights: {' '.join(map(str, w))}\n" if w else f"weights: none (bound {bound})\n"
    return text, d


def cmd_derivations(args, A):
    basis = derivation_space(A)
    names = A.ctx.names
    items = [{n: (str(im) if im else "0") for n, im in zip(names, D.images)} for D in basis]
    lines = [f"dim Der(A) = {len(basis)}"]
    for t, item in enumerate(items, 1):
        lines.append(f"D{t}: " + "; ".join(f"{n} -> {v}" for n, v in item.items()))
    d = _head(A)
    d.update(derivation_dim=len(basis), derivations=items)
    return "\n".join(lines) + "\n", d


def cmd_fixed(args, A):
    est = fixed_subalgebra_estimate(A)
    K, Kp = est.kernel, est.refined
    text = (f"K' = {_span(A, Kp)} (dim {Kp.dim}), status: {_status_text(est.status)}\n"
            f"K = {_span(A, K)} (dim {K.dim})\n"
            f"dim Der(A) = {est.derivation_dim}\n"
            f"sign automorphisms: {len(est.sign_automorphisms)}\n")
    d = _head(A)
    d.update(
        kprime={"dim": Kp.dim, "basis": A.render_subspace(Kp)},
        kernel={"dim": K.dim, "basis": A.render_subspace(K)},
        status=est.status,
        derivation_dim=est.derivation_dim,
        sign_automorphisms=[list(s) for s in est.sign_automorphisms],
    )
    return text, d


def cmd_conjecture(args, A):
    est = fixed_subalgebra_estimate(A)
    ma = A.ma_subalgebra
    ok = est.refined.is_subspace_of(ma)
    result = CERTIFIED_YES if ok else INCONCLUSIVE
    text = (f"K' = {_span(A, est.refined)} (dim {est.refined.dim})\n"
            f"MA = {_span(A, ma)} (dim {ma.dim})\n"
            f"SA in MA: {result}\n")
    d = _head(A)
    d.update(kprime={"dim": est.refined.dim, "basis": A.render_subspace(est.refined)},
             ma={"dim": ma.dim, "basis": A.render_subspace(ma)}, conjecture=result)
    return text, d


def cmd_aut_verify(args, A):
    e = parse_map(A, args.map)
    names = A.ctx.names
    d = _head(A)
    d["map"] = {n: (str(im) if im else "0") for n, im in zip(names, e.images)}
    d["well_defined"] = e.is_well_defined
    lines = [f"well-defined: {'yes' if e.is_well_defined else 'no'}"]
    if e.is_well_defined:
        auto = e.is_automorphism
        d["automorphism"] = auto
        d["linear_part"] = e.linear_part
        lines.append(f"automorphism: {'yes' if auto else 'no'}")
        lines.append("linear part: " + "; ".join(" ".join(str(c) for c in row) for row in e.linear_part))
        if auto:
            det = e.determinant
            d.update(determinant=det, orientation_preserving=det > 0, unipotent=e.is_unipotent)
            lines.append(f"det: {det} ({'orientation preserving' if det > 0 else 'orientation reversing'})")
            lines.append(f"unipotent: {'yes' if e.is_unipotent else 'no'}")
    return "\n".join(lines) + "\n", d


def cmd_aut_constraints(args, A):
    cs = generate_constraints(A)
    body = cs.export()
    if args.export:
        Path(args.export).write_text(body)
    d = _head(A)
    d.update(unknowns=cs.unknowns, equations=[eq.render(cs.unknowns) for eq in cs.equations])
    text = f"unknowns: {len(cs.unknowns)}\nequations: {len(cs.equations)}\n"
    if not args.export:
        text += body
    return text, d


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        pair = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if pair[0] > pair[1]:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return pair


def _coeffs(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def run_scan(args):
    try:
        cfg = ScanConfig(seed=args.seed, k=args.k, r=args.r, gens=args.gens, terms=args.terms,
                         coefficients=args.coeffs, count=args.count, weight_bound=args.weight_bound,
                         mode=args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return scan_run(cfg, jobs=args.jobs)


SPEC_COMMANDS = {
    "info": (cmd_info, "dimension, order, width and socle dimension"),
    "basis": (cmd_basis, "standard monomial basis"),
    "multable": (cmd_multable, "multiplication table on the basis"),
    "nf": (cmd_nf, "normal form of a polynomial"),
    "socle": (cmd_socle, "socle and MA = R*1 + soc(A)"),
    "classify": (cmd_classify, "triviality certificates for SA"),
    "weights": (cmd_weights, "smallest positive weight grading"),
    "derivations": (cmd_derivations, "basis of Der(A)"),
    "fixed": (cmd_fixed, "derivation-kernel bound K' on SA"),
    "aut-verify": (cmd_aut_verify, "check a map given by images of the variables"),
    "aut-constraints": (cmd_aut_constraints, "polynomial constraints on a general automorphism"),
    "conjecture": (cmd_conjecture, "check K' against MA"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", nargs="?", const="-", metavar="FILE",
                        help="structured output (to FILE, or stdout when omitted)")

    p = argparse.ArgumentParser(prog="weilab", description="Exact computations in Weil algebras D^r_k/I.")
    p.add_argument("--version", action="version", version=f"weilab {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name, (_, helptext) in SPEC_COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=helptext, description=helptext)
        sp.add_argument("spec", help="algebra spec file")
        if name == "nf":
            sp.add_argument("poly", help="polynomial in the spec's variables")
        elif name == "multable":
            sp.add_argument("--all", action="store_true", help="also list zero products")
        elif name == "classify":
            sp.add_argument("--weight-bound", type=int, metavar="N")
            sp.add_argument("--no-prop4", action="store_true",
                            help="skip the width/order threshold certificate")
        elif name == "weights":
            sp.add_argument("--bound", type=int, metavar="N")
        elif name == "aut-verify":
            sp.add_argument("--map", required=True, metavar="MAP", help='e.g. "x -> -x; y -> y"')
        elif name == "aut-constraints":
            sp.add_argument("--export", metavar="FILE", help="write '0 = ...' lines to FILE")

    sp = sub.add_parser("scan", parents=[common], help="seeded batch of random algebras")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--k", type=_range, default=(2, 2), metavar="N|LO..HI")
    sp.add_argument("--r", type=_range, default=(4, 4), metavar="N|LO..HI")
    sp.add_argument("--gens", type=_range, default=(1, 3), metavar="N|LO..HI")
    sp.add_argument("--terms", type=_range, default=(1, 3), metavar="N|LO..HI")
    sp.add_argument("--coeffs", type=_coeffs, default=(-2, -1, 1, 2), metavar="C1,C2,...")
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--weight-bound", type=int, metavar="N")
    sp.add_argument("--mode", choices=MODES, default="random")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--timing", action="store_true", help="add per-instance milliseconds")
    return p


def _emit(text: str, data: dict, json_target: str | None):
    if json_target is None:
        sys.stdout.write(text)
    elif json_target == "-":
        sys.stdout.write(render_json(data))
    else:
        Path(json_target).write_text(render_json(data))
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "scan":
            res = run_scan(args)
            _emit(res.render(args.timing), res.to_dict(args.timing), args.json)
            return 0
        func = SPEC_COMMANDS[args.command][0]
        A = _load(args.spec, quiet=args.json == "-")
        text, data = func(args, A)
        _emit(text, data, args.json)
        return 0
    except UsageError as exc:
        parser.exit(2, f"weilab: error: {exc}\n")
    except (WeilError, PolyError) as exc:
        print(f"weilab: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"weilab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
