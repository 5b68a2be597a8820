"""Command-line front end.

Every subcommand prints one JSON value (sorted keys, compact separators) so
output is byte-identical across runs.  Exit status: 0 on success, 1 on a
domain error (printed as ``{"error": ...}``), 2 on a usage error.

Words use lowercase names for generators and uppercase for inverses
(``a1B2``); the alphabet is inferred from the words unless ``--gens`` is
given.  Wherever a path is expected, ``-`` reads stdin.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from .decision import (
    GeneratorBall,
    PreimageSubgroup,
    ProductGroup,
    member_bounded,
    member_structured,
    subgroup_conjugacy,
)
from .fibre import (
    FibreSpec,
    classify_two_factor,
    example_fixtures,
    generators,
    member,
    sb_family,
)
from .hnn import BSGroup, britton_reduce, bs_fibre, h1_transition, window_coordinates
from .homology import h1_oracle, h2_finite, predicted_h1
from .intlin import AbelianGroup, IntMatrix, cokernel
from .nilpotent import in_gamma, magnus_expand
from .presentations import FinPresentation, FiniteGroup, abelian_invariants, catalogue
from .stallings import fold_from_generators, free_basis, index_and_cosets, is_normal
from .stallings import member as graph_member
from .words import Alphabet, Word, free_conjugacy, parse_word, primitive_root

_NAME = re.compile(r"([A-Za-z])(\d*)")


class DomainError(Exception):
    pass


# ---------------------------------------------------------------------------
# input helpers

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _alphabet(gens: str | None, texts: Sequence[str]) -> Alphabet:
    if gens:
        names = [g.strip() for g in gens.split(",") if g.strip()]
        return Alphabet(len(names), tuple(names))
    found = {m.group(1).lower() + m.group(2) for t in texts for m in _NAME.finditer(t)}
    names = sorted(found, key=lambda s: (s[0], int(s[1:] or 0)))
    return Alphabet(len(names), tuple(names))


def _fixtures() -> dict[str, FibreSpec]:
    reg = dict(example_fixtures())
    reg["sb2"] = sb_family(2)[0]
    reg["sb3"] = sb_family(3)[0]
    reg["z2xz2"] = FibreSpec(
        (Alphabet(2, ("a1", "a2")), Alphabet(2, ("b1", "b2"))),
        AbelianGroup.from_orders([2, 2]),
        (((1, 0), (0, 1)), ((1, 0), (0, 1))),
        untwisted=True,
        name="z2xz2",
    )
    return reg


FIXTURES = ("example1", "example2", "example3", "example4", "example5", "sb2", "sb3", "z2xz2")


def _spec(arg: str) -> FibreSpec:
    if arg in FIXTURES:
        return _fixtures()[arg]
    return FibreSpec.from_json(json.loads(_read(arg)))


def _finite_group(arg: str) -> FiniteGroup:
    by_name = {Q.name.lower(): Q for Q in catalogue()}
    if arg.lower() in by_name:
        return by_name[arg.lower()]
    data = json.loads(_read(arg))
    table = data["finite"] if isinstance(data, dict) else data
    return FiniteGroup(table)


def _components(text: str, alphabets: Sequence[Alphabet]) -> list[Word]:
    parts = text.split(",")
    if len(parts) != len(alphabets):
        raise DomainError(f"expected {len(alphabets)} comma-separated components")
    return [parse_word(p, A) for p, A in zip(parts, alphabets)]


def _instance_subgroup(data: dict) -> PreimageSubgroup:
    if "sb" in data:
        return PreimageSubgroup.from_spec(sb_family(int(data["sb"]))[0])
    if "spec" in data:
        return PreimageSubgroup.from_spec(FibreSpec.from_json(data["spec"]))
    names = data.get("factor_names") or [None] * len(data["factors"])
    D = ProductGroup(tuple(Alphabet(int(r), nm and tuple(nm)) for r, nm in zip(data["factors"], names)))
    ambient = AbelianGroup.from_json(data["ambient"])
    images = tuple(tuple(tuple(v) for v in im) for im in data["images"])
    return PreimageSubgroup(D, ambient, images, tuple(tuple(v) for v in data.get("S", [])))


def _element(words: Sequence[str], alphabets: Sequence[Alphabet]) -> list[Word]:
    if len(words) != len(alphabets):
        raise DomainError(f"expected {len(alphabets)} components")
    return [parse_word(w, A) for w, A in zip(words, alphabets)]


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# subcommands

def cmd_word(a):
    A = _alphabet(a.gens, a.words)
    ws = [parse_word(t, A) for t in a.words]
    if a.op == "reduce":
        return {"word": str(ws[0])}
    if a.op == "root":
        r, k = primitive_root(ws[0])
        return {"root": str(r), "power": k}
    if len(ws) != 2:
        raise DomainError("conj needs two words")
    g = free_conjugacy(ws[0], ws[1])
    return {"conjugate": g is not None, "conjugator": None if g is None else str(g)}


def cmd_stallings(a):
    A = _alphabet(a.gens, list(a.subgroup) + ([a.word] if a.word else []))
    G = fold_from_generators([parse_word(t, A) for t in a.subgroup], A)
    if a.op == "fold":
        return G.to_json()
    if a.op == "member":
        if a.word is None:
            raise DomainError("member needs --word")
        return {"member": graph_member(G, parse_word(a.word, A))}
    if a.op == "index":
        T = index_and_cosets(G)
        return {"index": None if T is None else T.index}
    if a.op == "basis":
        return {"basis": [str(w) for w in free_basis(G)], "rank": G.rank}
    return {"normal": is_normal(G)}


def cmd_snf(a):
    H, _ = cokernel(IntMatrix.from_text(_read(a.path)))
    return H.to_json()


def cmd_abgroup(a):
    text = _read(a.path)
    if text.lstrip().startswith("{"):
        return AbelianGroup.from_json(json.loads(text)).to_json()
    return abelian_invariants(FinPresentation.from_text(text)).to_json()


def cmd_h2finite(a):
    return h2_finite(_finite_group(a.group), bound=a.bound).to_json()


def cmd_fibre(a):
    spec = _spec(a.spec)
    if a.op == "show":
        return spec.to_json()
    if a.op == "member":
        if a.element is None:
            raise DomainError("member needs --element")
        return {"member": member(spec, _components(a.element, spec.factors))}
    if a.op == "generators":
        return generators(spec).to_json()
    if a.op == "classify":
        return classify_two_factor(spec).to_json()
    if a.op == "predict-h1":
        return predicted_h1(spec).to_json()
    return h1_oracle(spec).to_json()


def cmd_sb(a):
    spec, gens = sb_family(a.n)
    return {"spec": spec.to_json(), "generators": {k: [str(w) for w in v] for k, v in gens.items()}}


def cmd_gamma(a):
    A = _alphabet(a.gens, [a.word])
    w = parse_word(a.word, A)
    out = {"in_gamma": in_gamma(w, a.c)}
    if a.expand:
        out["expansion"] = str(magnus_expand(w, max(a.c, 1)))
    return out


def cmd_conj(a):
    data = json.loads(_read(a.path))
    H = _instance_subgroup(data)
    x = _element(data["x"], H.D.factors)
    y = _element(data["y"], H.D.factors)
    return subgroup_conjugacy(x, y, H).to_json()


def cmd_member(a):
    data = json.loads(_read(a.path))
    H = _instance_subgroup(data)
    h = _element(data["h"], H.D.factors)
    if "gens" not in data:
        return {"answer": "yes" if member_structured(h, H) else "no", "mode": "structured"}
    gens = [_element(g, H.D.factors) for g in data["gens"]]
    res = member_bounded(
        h,
        gens,
        max_length=int(data.get("max_length", 6)),
        max_order=int(data.get("max_order", 8)),
        ball=GeneratorBall(gens) if gens else None,
    )
    return res.to_json()


def cmd_bs(a):
    G = BSGroup(a.m, a.n)
    if a.op == "reduce":
        if a.word is None:
            raise DomainError("reduce needs a word")
        return str(britton_reduce(a.word, G))
    if a.op == "h1window":
        out = h1_transition(a.lo, a.hi, G)
        out["coordinates_wide"] = window_coordinates(a.lo - 1, a.hi + 1, G)[1]
        return out
    return bs_fibre(G).report()


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subdirect", description="Subdirect products of free groups.")
    p.add_argument("--format", choices=("json", "text"), default="json", help="text prints bare strings unquoted")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("word", help="free group words")
    s.add_argument("op", choices=("reduce", "conj", "root"))
    s.add_argument("words", nargs="+")
    s.add_argument("--gens", help="comma-separated generator names")
    s.set_defaults(func=cmd_word)

    s = sub.add_parser("stallings", help="subgroup graphs")
    s.add_argument("op", choices=("fold", "member", "index", "basis", "normal"))
    s.add_argument("subgroup", nargs="+", help="generating words")
    s.add_argument("--word")
    s.add_argument("--gens", help="comma-separated generator names")
    s.set_defaults(func=cmd_stallings)

    s = sub.add_parser("snf", help="cokernel of an integer matrix file")
    s.add_argument("path")
    s.set_defaults(func=cmd_snf)

    s = sub.add_parser("abgroup", help="abelian invariants of a presentation file")
    s.add_argument("path")
    s.set_defaults(func=cmd_abgroup)

    s = sub.add_parser("h2finite", help="Schur multiplier of a finite group")
    s.add_argument("group", help="catalogue name (e.g. Z2xZ2, S3) or JSON file with a multiplication table")
    s.add_argument("--bound", type=int, default=16)
    s.set_defaults(func=cmd_h2finite)

    s = sub.add_parser("fibre", help="fibre products")
    s.add_argument("op", choices=("show", "member", "generators", "classify", "predict-h1", "oracle-h1"))
    s.add_argument("spec", help=f"JSON file or fixture: {', '.join(FIXTURES)}")
    s.add_argument("--element", help="comma-separated components")
    s.set_defaults(func=cmd_fibre)

    s = sub.add_parser("sb", help="Stallings-Bieri group data")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_sb)

    s = sub.add_parser("gamma", help="lower central series membership")
    s.add_argument("word")
    s.add_argument("c", type=int)
    s.add_argument("--gens")
    s.add_argument("--expand", action="store_true")
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("conj", help="conjugacy in a preimage subgroup (JSON instance)")
    s.add_argument("path")
    s.set_defaults(func=cmd_conj)

    s = sub.add_parser("member", help="membership (JSON instance)")
    s.add_argument("path")
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("bs", help="Baumslag-Solitar groups")
    s.add_argument("op", choices=("reduce", "h1window", "fibre"))
    s.add_argument("word", nargs="?")
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--lo", type=int, default=0)
    s.add_argument("--hi", type=int, default=1)
    s.set_defaults(func=cmd_bs)
    return p


def _emit(value, fmt: str, stream):
    if fmt == "text" and isinstance(value, str):
        stream.write(value + "\n")
    else:
        stream.write(json.dumps(_jsonable(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except (DomainError, ValueError, ArithmeticError, KeyError, IndexError, TypeError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        _emit({"error": f"{type(exc).__name__}: {msg}"}, "json", sys.stdout)
        return 1
    _emit(out, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
