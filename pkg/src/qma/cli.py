"""Command-line front end.

Verification commands print one line per check to stdout and write the full
JSON report to ``--out``.  Data commands (``nu``, ``gauss``) print JSON.
Exit codes: 0 all checks pass, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .action import ActionError, ActionTable, check_action_well_defined, check_hopf_relations, hopf_spec
from .adapted import AdaptedError, build_adapted_basis, check_adapted, nu, verify_factorization
from .cartan import CartanError, preset_cartan
from .classical import ClassicalError
from .files import InputError, load_action, load_matrix, load_presentation
from .ncpoly import NcPoly, PresentationError, check_local_confluence
from .presets import PRESET_NAMES, check_dimensions
from .report import TOOL_VERSION, VerificationReport
from .scalar import ONE

SUITES = ("confluence", "dims", "action", "gstar", "adapted", "factorization",
          "roundtrip", "classical", "braided", "coaction")

# algebras with a U_q(g*) action, for `crossed` and `roundtrip`
APLUS_PRESETS = ("scalars-A1", "scalars-A2", "torus-A1", "torus-A2", "qmat32-plus")

LOCALIZED_PLUS = ["D2", "x11", "x12"]


class UsageError(InputError):
    pass


@dataclass
class Subject:
    """What a run operates on: an algebra, maybe an action and an embedding."""

    alg: object
    table: ActionTable | None = None
    phi: dict | None = None
    plus: list = field(default_factory=list)
    ctx: object = None

    def need_table(self, what: str) -> ActionTable:
        if self.table is None:
            raise UsageError(f"{what} needs an action (--action or an acting preset)")
        return self.table

    def need_context(self, what: str):
        if self.ctx is None:
            from .gstar import GstarContext

            t = self.need_table(what)
            if self.phi is None:
                raise UsageError(f"{what} needs an embedding of C_q[U] ('embedding' in the action file)")
            if t.hopf.tag != "Uq_g":
                raise UsageError(f"{what} needs a U_q(g) action, got {t.hopf.tag}")
            self.ctx = GstarContext(t, self.phi)
        return self.ctx


def _preset_subject(name: str) -> Subject:
    from .action import preset_action_qmatrix
    from .gstar import cqU_context, localized_context

    if name not in PRESET_NAMES:
        raise UsageError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESET_NAMES))}")
    if name.startswith("cqU-"):
        ctx = cqU_context(name[4:])
        return Subject(ctx.alg, ctx.table, dict(ctx.phi), [], ctx)
    if name == "localized-qmat32":
        ctx = localized_context()
        return Subject(ctx.alg, ctx.table, dict(ctx.phi), list(LOCALIZED_PLUS), ctx)
    alg = PRESET_NAMES[name]()
    if name.startswith("qmat-"):
        return Subject(alg, preset_action_qmatrix(alg))
    return Subject(alg)


def _subject(args) -> Subject:
    if args.preset and args.algebra:
        raise UsageError("give either --preset or --algebra, not both")
    if args.preset:
        if not args.action:
            return _preset_subject(args.preset)
        if args.preset not in PRESET_NAMES:
            raise UsageError(f"unknown preset {args.preset!r}")
        sub = Subject(PRESET_NAMES[args.preset]())
    elif args.algebra:
        sub = Subject(load_presentation(args.algebra))
    else:
        raise UsageError("no algebra selected: use --preset or --algebra")
    if args.action:
        spec = load_action(args.action, sub.alg)
        sub.table, sub.phi, sub.plus = spec.table, spec.embedding, spec.plus
    return sub


def _aplus(args) -> ActionTable:
    """A U_q(g*)-module algebra for the crossed product."""
    from .gstar import localized_context, preset_scalars, preset_weight_torus, restrict_gstar, \
        sub_presentation, torus_table

    if args.preset:
        if args.preset == "qmat32-plus":
            ctx = localized_context()
            return restrict_gstar(ctx, sub_presentation(ctx.alg, LOCALIZED_PLUS, "qmat32+"))
        kind, _, label = args.preset.partition("-")
        if kind in ("scalars", "torus") and label:
            cartan = preset_cartan(label)
            alg = preset_scalars(cartan) if kind == "scalars" else preset_weight_torus(cartan)
            return torus_table(alg)
        raise UsageError(f"unknown preset {args.preset!r} for this command; "
                         f"known: {', '.join(APLUS_PRESETS)}")
    sub = _subject(args)
    t = sub.need_table("the crossed product")
    if t.hopf.tag != "Uq_gstar":
        raise UsageError(f"the crossed product needs a U_q(g*) action (hopf 'Uq_gstar'), got {t.hopf.tag}")
    return t


def _word(args, cartan) -> tuple:
    if not args.word:
        return cartan.longest_word()
    try:
        w = tuple(int(x) for x in args.word.split(","))
    except ValueError:
        raise UsageError(f"--word expects comma-separated indices, got {args.word!r}") from None
    if any(i not in cartan.indices for i in w):
        raise UsageError(f"--word {args.word}: indices must lie in 1..{cartan.rank}")
    return w


def _mode(alg) -> str:
    return "filtered" if any(g.invertible for g in alg.gens) else "graded"


# ----------------------------------------------------------------------
# suites

def _suite_confluence(args, sub):
    return check_local_confluence(sub.alg, args.max_deg, seed=args.seed)


def _suite_dims(args, sub):
    return check_dimensions(sub.alg, args.max_deg)


def _suite_action(args, sub):
    t = sub.need_table("suite 'action'")
    if t.hopf.tag == "Uq_gstar":
        from .gstar import check_gstar_table

        return check_gstar_table(t, args.max_deg)
    rep = check_action_well_defined(t, args.max_deg, seed=args.seed)
    return rep.extend(check_hopf_relations(t, args.max_deg))


def _suite_gstar(args, sub):
    from .gstar import check_gstar, check_gstar_table

    if sub.table is not None and sub.table.hopf.tag == "Uq_gstar":
        return check_gstar_table(sub.table, args.max_deg)
    return check_gstar(sub.need_context("suite 'gstar'"), args.max_deg, seed=args.seed)


def _suite_adapted(args, sub):
    t = sub.need_table("suite 'adapted'")
    return check_adapted(t, _word(args, t.alg.cartan), args.max_deg, seed=args.seed)


def _suite_factorization(args, sub):
    ctx = sub.need_context("suite 'factorization'")
    _, rep = verify_factorization(ctx.table, ctx.cqU_table, ctx.full_phi(), args.max_deg,
                                  word=_word(args, ctx.alg.cartan), mode=_mode(ctx.alg))
    return rep


def _suite_roundtrip(args, sub):
    from .gstar import psi_check, restrict_gstar, roundtrip_check, sub_presentation

    ctx = sub.need_context("suite 'roundtrip'")
    rep = psi_check(ctx, sub.plus, args.max_deg, seed=args.seed, mode=_mode(ctx.alg))
    if sub.plus:
        pt = restrict_gstar(ctx, sub_presentation(ctx.alg, sub.plus, f"{ctx.alg.name}+"))
        rep.extend(roundtrip_check(pt, min(args.max_deg, 3)))
    return rep


def _suite_classical(args, sub):
    from .classical import HatContext, check_epsilon, check_poisson, check_serre_hatf, \
        check_specialization, specialize_algebra

    rep = check_specialization(sub.alg, sub.table, args.max_deg, seed=args.seed)
    if sub.alg.meta.get("kind") == "cqU":
        calg, act = specialize_algebra(sub.alg, sub.table)
        calg.meta["simple_names"] = list(sub.alg.meta["simple"])
        rep.extend(check_epsilon(calg, act, 3))
        rep.extend(check_poisson(calg, act, min(args.max_deg, 3), seed=args.seed))
        ctx = HatContext(act, {n: calg.var(n) for n in calg.meta["simple_names"]})
        rep.extend(check_serre_hatf(ctx, args.max_deg))
    return rep


def _suite_braided(args, sub):
    from .action import preset_action_cqU
    from .braided import TwistedTensorAlgebra, check_twisted, cross_validate_hw
    from .gstar import preset_weight_torus
    from .presets import preset_cqU

    cq = preset_cqU("A1")
    t = preset_action_cqU(cq)
    T = TwistedTensorAlgebra(t, t, "sl2")
    rep = check_twisted(T, args.max_deg, seed=args.seed)
    tor = preset_weight_torus(cq.cartan)
    right_torus = TwistedTensorAlgebra(t, ActionTable(hopf_spec("Uq_g", cq.cartan), tor), "sl2")
    rep.extend(cross_validate_hw(right_torus, args.max_deg))
    P, pt = T.export()
    _, fac = verify_factorization(pt, t, {"x1": P.gen("rx1")}, args.max_deg)
    rep.extend(fac)
    return rep


def _suite_coaction(args, sub):
    from .gstar import coaction_generator_check

    cartan = sub.alg.cartan if sub is not None else preset_cartan("A2")
    return coaction_generator_check(cartan, args.max_deg)


_SUITE_FN = {
    "confluence": _suite_confluence, "dims": _suite_dims, "action": _suite_action,
    "gstar": _suite_gstar, "adapted": _suite_adapted, "factorization": _suite_factorization,
    "roundtrip": _suite_roundtrip, "classical": _suite_classical, "braided": _suite_braided,
    "coaction": _suite_coaction,
}


def _config(args) -> dict:
    out = {"command": args.command, "max_deg": args.max_deg, "seed": args.seed}
    for key in ("suite", "preset", "algebra", "action", "word"):
        v = getattr(args, key, None)
        if v:
            out[key] = v
    return out


def _finish(args, rep: VerificationReport, extra: dict | None = None) -> int:
    print(rep.summary())
    print("PASS" if rep.passed else "FAIL")
    if args.out:
        data = rep.to_json()
        if extra:
            data.update(extra)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return 0 if rep.passed else 1


# ----------------------------------------------------------------------
# commands

def cmd_verify(args) -> int:
    names = [s.strip() for s in (args.suite or "").split(",") if s.strip()]
    if not names:
        raise UsageError(f"no suite selected; choose from: {', '.join(SUITES)}")
    bad = [s for s in names if s not in SUITES]
    if bad:
        raise UsageError(f"unknown suite {bad[0]!r}; choose from: {', '.join(SUITES)}")
    only_free = all(s in ("braided", "coaction") for s in names)
    sub = None if only_free and not (args.preset or args.algebra) else _subject(args)
    rep = VerificationReport("verify", _config(args))
    for s in names:
        rep.extend(_SUITE_FN[s](args, sub))
    return _finish(args, rep)


def cmd_nu(args) -> int:
    sub = _subject(args)
    t = sub.need_table("nu")
    w = _word(args, t.alg.cartan)
    alg = t.alg
    rows = []
    for m in alg.basis_upto(args.max_deg):
        a = NcPoly(alg, {m: ONE})
        rows.append({"monomial": alg.mono_str(m), "degree": alg.degree_of(m), "nu": list(nu(t, w, a))})
    basis = build_adapted_basis(t, w, args.max_deg)
    keys = [{"nu": list(k), "element": str(b)} for k, b in sorted(basis.entries.items())]
    data = {"tool_version": TOOL_VERSION, "config": _config(args), "word": list(w),
            "rows": rows, "adapted_basis": keys}
    text = json.dumps(data, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def cmd_factorize(args) -> int:
    sub = _subject(args)
    ctx = sub.need_context("factorize")
    witness, rep = verify_factorization(ctx.table, ctx.cqU_table, ctx.full_phi(), args.max_deg,
                                        word=_word(args, ctx.alg.cartan), mode=_mode(ctx.alg))
    rep.config = _config(args)
    return _finish(args, rep, {"witness": witness.to_json()})


def cmd_crossed(args) -> int:
    from .gstar import build_crossed, crossed_formula_check, eta_check

    pt = _aplus(args)
    C, t, rep = build_crossed(pt, certify_deg=args.max_deg)
    rep.extend(crossed_formula_check(C, t, args.max_deg))
    rep.extend(eta_check(C, t, args.max_deg))
    rep.title = f"crossed {pt.alg.name}"
    rep.config = _config(args)
    rules = [{"lhs": [f"{C.gens[h].name}^{s}", f"{C.gens[g].name}^{e}"],
              "rhs": str(NcPoly(C, terms))} for (h, s, g, e), terms in sorted(C.rules.items())]
    return _finish(args, rep, {"presentation": {"generators": [g.name for g in C.gens],
                                                "rules": rules}})


def cmd_roundtrip(args) -> int:
    from .gstar import roundtrip_check

    rep = roundtrip_check(_aplus(args), args.max_deg)
    rep.config = _config(args)
    return _finish(args, rep)


def cmd_specialize(args) -> int:
    from .classical import check_specialization, specialize_algebra

    sub = _subject(args)
    rep = check_specialization(sub.alg, sub.table, args.max_deg, seed=args.seed)
    rep.config = _config(args)
    extra = None
    if sub.table is not None:
        _, act = specialize_algebra(sub.alg, sub.table)
        extra = {"classical_images": {f"{g}({a})": str(v) for (g, a), v in sorted(act.images.items())}}
    return _finish(args, rep, extra)


def cmd_gauss(args) -> int:
    from .classical import gauss_factor_3x2, matmul

    if not args.matrix:
        raise UsageError("gauss needs a matrix file")
    M = load_matrix(args.matrix)
    if len(M) != 3 or any(len(r) != 2 for r in M):
        raise UsageError(f"{args.matrix}: expected a 3x2 matrix")
    L, R = gauss_factor_3x2(M)
    P = matmul(L, R)
    ok = all(_is_zero(P[i][j] - M[i][j]) for i in range(3) for j in range(2))
    status = "exact_pass" if ok else "exact_fail"
    data = {"L": [[str(x) for x in r] for r in L], "R": [[str(x) for x in r] for r in R],
            "product_check": status}
    text = json.dumps(data, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    print(f"product_check: {status}")
    return 0 if ok else 1


def _is_zero(x) -> bool:
    if hasattr(x, "free_symbols"):
        import sympy

        return sympy.simplify(x) == 0
    return x == 0


COMMANDS = {
    "verify": cmd_verify, "serre-gstar": cmd_verify, "nu": cmd_nu, "factorize": cmd_factorize,
    "crossed": cmd_crossed, "roundtrip": cmd_roundtrip, "gauss": cmd_gauss,
    "specialize": cmd_specialize,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qma", description="Exact checks for quantum module algebras.")
    sp = p.add_subparsers(dest="command", metavar="command")
    helps = {
        "verify": "run verification suites (--suite a,b,...)",
        "serre-gstar": "same as verify --suite gstar",
        "nu": "tabulate nu-values of graded monomials for a reduced word",
        "factorize": "check A+ (x) C_q[U] -> A is bijective and emit the witness",
        "crossed": "build A+ (x) C_q[U] from a U_q(g*)-module algebra and certify it",
        "roundtrip": "cross with C_q[U] and read the U_q(g*) action back",
        "gauss": "Gauss factorization of a 3x2 matrix from a JSON file",
        "specialize": "check the q = 1 specialization of an algebra and its action",
    }
    for name, text in helps.items():
        c = sp.add_parser(name, help=text, description=text)
        if name == "gauss":
            c.add_argument("matrix", nargs="?", help="JSON array of rows of rational strings")
        else:
            c.add_argument("--preset", help="built-in algebra")
            c.add_argument("--algebra", metavar="FILE", help="algebra definition (JSON)")
            c.add_argument("--action", metavar="FILE", help="action definition (JSON)")
            c.add_argument("--word", metavar="i,j,k", help="reduced word (default: longest)")
        if name == "verify":
            c.add_argument("--suite", default="", help=f"comma list from: {', '.join(SUITES)}")
        c.add_argument("--max-deg", type=int, default=5, metavar="N")
        c.add_argument("--seed", type=int, default=0, metavar="N")
        c.add_argument("--out", metavar="FILE", help="write the full JSON report here")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    if args.command == "serre-gstar":
        args.suite = "gstar"
    if args.max_deg < 0:
        print("qma: error: --max-deg must be >= 0", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qma: error: {exc}", file=sys.stderr)
        return 2
    except (InputError, AdaptedError, ClassicalError, CartanError, ActionError,
            PresentationError) as exc:
        print(f"qma: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
