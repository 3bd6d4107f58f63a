"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 capacity exceeded,
4 internal theorem violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import dorman_orders as dorman
from . import k3_theorems as k3
from .binary_forms import class_group, lifted_genera, squares_subgroup
from .errors import CapacityError, InvalidArgument, K3LatticeError, TheoremViolation
from .kummer_check import verify_maximality, verify_shioda_inose_M
from .lattices_fqf import FiniteQuadraticForm

SCHEMA = 1
EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_VIOLATION = 0, 2, 3, 4


# ---------------------------------------------------------------------------
# serialization


def ser_form(f) -> list[int]:
    return [int(x) for x in (f.form if hasattr(f, "form") else f)]


def ser_frac(x) -> str:
    return str(Fraction(x))


def ser_fqf(F: FiniteQuadraticForm) -> dict:
    return {"orders": list(F.orders), "q": [[ser_frac(x) for x in row] for row in F.q]}


def parse_fqf(d: dict) -> FiniteQuadraticForm:
    return FiniteQuadraticForm(tuple(d["orders"]), [[Fraction(x) for x in row] for row in d["q"]])


def ser_gram(G) -> list[list[int]]:
    return [[int(x) for x in row] for row in G]


def item(value, theorem: str) -> dict:
    return {"value": value, "theorem": theorem}


def report(command: str, inputs: dict, outputs: dict, notes=()) -> dict:
    return {"schema": SCHEMA, "command": command, "inputs": inputs,
            "outputs": outputs, "notes": list(notes)}


def render(r: dict) -> str:
    return json.dumps(r, indent=2, sort_keys=True)


def parse(text: str) -> dict:
    return json.loads(text)


def render_text(r: dict) -> str:
    lines = [f"{r['command']}  " + " ".join(f"{k}={v}" for k, v in r["inputs"].items())]
    for key, it in r["outputs"].items():
        lines.append(f"  {key}: {json.dumps(it['value'])}  [{it['theorem']}]")
    for n in r["notes"]:
        lines.append(f"  note: {n}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument helpers


def int_triple(s: str):
    try:
        a, b, c = (int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b,c integers, got {s!r}")
    return a, b, c


def int_pair(s: str):
    try:
        a, b = (int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b integers, got {s!r}")
    return a, b


# ---------------------------------------------------------------------------
# commands


def cmd_classgroup(a) -> dict:
    G = class_group(a.D)
    sq = squares_subgroup(G)
    outputs = {
        "class_number": item(G.order, "class-group"),
        "classes": item([ser_form(f) for f in G.elements], "class-group"),
        "element_orders": item([G.element_order(f) for f in G.elements], "class-group"),
        "cyclic": item(G.is_cyclic(), "class-group"),
        "squares": item([ser_form(f) for f in sq], "lifted-genus"),
        "lifted_genera": item([[ser_form(f) for f in c] for c in lifted_genera(G)], "lifted-genus"),
    }
    return report("classgroup", {"D": a.D}, outputs)


def cmd_bound(a) -> dict:
    return report("bound", {"D": a.D},
                  {"degree_lower_bound": item(k3.degree_lower_bound(a.D), "degree-bound")})


def cmd_tgenus(a) -> dict:
    k = k3.K3Presentation.from_form(a.T)
    G = k3.transcendental_genus(k)
    outputs = {
        "d": item(k.d, "transcendental-genus"),
        "T_class": item(ser_form(k.T_class), "transcendental-genus"),
        "genus": item([ser_form(f) for f in G.members], "transcendental-genus"),
        "q_T": item(ser_fqf(k.q_T), "transcendental-genus"),
    }
    return report("tgenus", {"T": list(a.T)}, outputs)


def cmd_redgenus(a) -> dict:
    k = k3.K3Presentation.from_form(a.T)
    r = k3.reduction_genus(k, a.p)
    v = k3.supersingular_verdict(k.d, a.p)
    outputs = {
        "d": item(k.d, "supersingular-dichotomy"),
        "verdict": item(r.verdict.value, "supersingular-dichotomy"),
        "chi": item(v.chi, "supersingular-dichotomy"),
    }
    notes = ["finitely many further primes may be exceptional for a particular model; "
             "d alone does not determine them"]
    if r.genus is not None:
        outputs.update({
            "genus": item([ser_form(f) for f in r.genus.members], "reduction-genus"),
            "scaled_grams": item([ser_gram(g) for g in r.scaled_grams()], "reduction-genus"),
            "scaled_det": item(r.scaled.det, "reduction-genus"),
            "target": item(ser_fqf(r.target), "reduction-genus"),
            "genera_searched": item(r.candidates, "reduction-genus"),
            "divisible_by_p": item(all(L.is_divisible_by(a.p) for L in r.scaled.lattices()),
                                   "p-divisibility"),
        })
    return report("redgenus", {"T": list(a.T), "p": a.p}, outputs, notes)


def cmd_t3set(a) -> dict:
    k = k3.K3Presentation.from_form(a.T)
    S = k3.theorem3_T_set(k)
    outputs = {
        "classes": item([ser_form(f) for f in S], "lifted-genus"),
        "size": item(len(S), "lifted-genus"),
    }
    return report("t3set", {"T": list(a.T)}, outputs)


def cmd_dorman(a) -> dict:
    J = dorman.ideal_from_pair(a.D, *a.J) if a.J else None
    r = dorman.genus_sweep(a.D, a.p, J, q=a.q)
    inputs = {"D": a.D, "p": a.p, "J": list(a.J) if a.J else None, "q": a.q}
    outputs = {
        "q": item(r.q, "dorman-order"),
        "orders_built": item(r.orders_built, "dorman-order"),
        "scale": item(r.scale, "dorman-genus"),
        "classes": item([ser_form(f) for f in r.classes], "dorman-genus"),
        "expected": item([ser_form(f) for f in r.expected], "dorman-genus"),
        "det": item(r.scale ** 2 * -a.D, "dorman-genus"),
    }
    return report("dorman", inputs, outputs)


def cmd_shioda_mitani(a) -> dict:
    f = k3.shioda_mitani_form(a.f)
    (r1, s1), (r2, s2) = k3.shioda_mitani_taus(a.f)
    D = a.f[1] ** 2 - 4 * a.f[0] * a.f[2]
    outputs = {
        "class": item(ser_form(f), "shioda-mitani"),
        "D": item(D, "shioda-mitani"),
        "tau_prime": item([ser_frac(r1), ser_frac(s1)], "shioda-mitani"),
        "tau": item([ser_frac(r2), ser_frac(s2)], "shioda-mitani"),
    }
    return report("shioda-mitani", {"f": list(a.f)}, outputs,
                  ["tau values are (rational part, coefficient of sqrt D)"])


def cmd_verify_kummer(a) -> dict:
    r = verify_maximality()
    m = verify_shioda_inose_M()
    outputs = {
        "words_scanned": item(r.words_scanned, "kummer-maximality"),
        "counterexamples": item(r.counterexamples, "kummer-maximality"),
        "index": item(2 ** r.index_exponent, "kummer-maximality"),
        "index_log2": item(r.index_exponent, "kummer-maximality"),
        "disc_N": item(r.disc_N, "kummer-maximality"),
        "disc_closure": item(r.disc_closure, "kummer-maximality"),
        "shioda_inose_index": item(m.index, "shioda-inose-M"),
        "shioda_inose_disc": item(m.disc_closure, "shioda-inose-M"),
    }
    return report("verify-kummer", {}, outputs)


def cmd_selftest(a) -> dict:
    checks = {
        "bound(-23) = 3": lambda: k3.degree_lower_bound(-23) == 3,
        "class_group(-47) cyclic of order 5": lambda: (lambda G: G.order == 5 and G.is_cyclic())(class_group(-47)),
        "redgenus (1,1,2), p=11 has no supersingular reduction":
            lambda: k3.reduction_genus(k3.K3Presentation.from_form((1, 1, 2)), 11).verdict is k3.Verdict.NONE,
        "redgenus (1,1,2), p=3 gives [[-6,-3],[-3,-12]]":
            lambda: k3.reduction_genus(k3.K3Presentation.from_form((1, 1, 2)), 3).scaled_grams() == [((-6, -3), (-3, -12))],
        "t3set (1,1,6) has 3 classes": lambda: len(k3.theorem3_T_set(k3.K3Presentation.from_form((1, 1, 6)))) == 3,
        "dorman -7,5 gives (5,5,10)": lambda: [ser_form(f) for f in dorman.genus_sweep(-7, 5).classes] == [[5, 5, 10]],
        "shioda-inose closure disc 2^6": lambda: verify_shioda_inose_M().disc_closure == 64,
    }
    results = {}
    for name, fn in checks.items():
        try:
            results[name] = bool(fn())
        except K3LatticeError:
            results[name] = False
    outputs = {
        "passed": item(sum(results.values()), "selftest"),
        "total": item(len(results), "selftest"),
        "results": item(results, "selftest"),
    }
    return report("selftest", {}, outputs)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="structured output")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="accepted for compatibility; computations run in one thread")
    p = argparse.ArgumentParser(prog="k3lattice", parents=[common],
                                description="Lattice computations for singular K3 surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(func=fn)
        return s

    add("classgroup", cmd_classgroup, "class group Cl_D").add_argument("-D", type=int, required=True)
    add("bound", cmd_bound, "degree lower bound |Cl_D^2|").add_argument("-D", type=int, required=True)
    add("tgenus", cmd_tgenus, "genus of the transcendental lattice").add_argument(
        "-T", type=int_triple, required=True, metavar="a,b,c")
    s = add("redgenus", cmd_redgenus, "supersingular reduction genus")
    s.add_argument("-T", type=int_triple, required=True, metavar="a,b,c")
    s.add_argument("-p", type=int, required=True)
    add("t3set", cmd_t3set, "transcendental classes of all conjugates").add_argument(
        "-T", type=int_triple, required=True, metavar="a,b,c")
    s = add("dorman", cmd_dorman, "maximal orders and the complement genus")
    s.add_argument("-D", type=int, required=True)
    s.add_argument("-p", type=int, required=True)
    s.add_argument("-J", type=int_pair, default=None, metavar="a,b",
                   help="the ideal [a, (-b + sqrt D)/2]")
    s.add_argument("-q", type=int, default=None, help="override the auxiliary prime")
    add("shioda-mitani", cmd_shioda_mitani, "transcendental class of E' x E").add_argument(
        "-f", type=int_triple, required=True, metavar="a,b,c")
    add("verify-kummer", cmd_verify_kummer, "exhaustive code checks")
    add("selftest", cmd_selftest, "quick consistency checks")
    return p


def run(argv=None) -> tuple[int, dict | None, str]:
    """Execute a command; returns (exit code, report or None, rendered output)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json = getattr(args, "json", False)
    try:
        r = args.func(args)
    except InvalidArgument as e:
        return EXIT_INVALID, None, f"invalid input: {e}"
    except CapacityError as e:
        return EXIT_CAPACITY, None, f"capacity exceeded: {e}"
    except TheoremViolation as e:
        return EXIT_VIOLATION, None, f"internal consistency failure: {e}"
    code = EXIT_OK
    if r["command"] == "selftest" and r["outputs"]["passed"]["value"] != r["outputs"]["total"]["value"]:
        code = EXIT_VIOLATION
    return code, r, render(r) if as_json else render_text(r)


def main(argv=None) -> int:
    code, r, out = run(argv)
    stream = sys.stdout if r is not None else sys.stderr
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
