"""Command line entry point: JSON documents in, JSON or plain-text reports out.

Exit codes: 0 when every check passes, 1 when some check fails, 2 for
input errors (malformed documents, unknown names, rejected parameters).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from . import catalog, mcg, swsearch
from . import exactlin as el
from . import handlebody as hb
from . import homblowup as hbu
from . import plumbing as pl

KINDS = ("plumbing", "handlebody", "twistword", "class_list", "configuration", "search_config")
COMMANDS = (
    "verify-relation",
    "analyze-filling",
    "analyze-plumbing",
    "verify-embedding",
    "kodaira",
    "sw-search",
    "knot-surgery",
    "homeo-type",
)


class InputError(ValueError):
    """Anything that should end with exit code 2."""


class InputSyntaxError(InputError):
    def __init__(self, line: int, column: int, expectation: str):
        super().__init__(f"line {line}, column {column}: {expectation}")
        self.line, self.column, self.expectation = line, column, expectation


class SchemaError(InputError):
    def __init__(self, field_name: str, reason: str):
        super().__init__(f"{field_name}: {reason}")
        self.field, self.reason = field_name, reason


class UnknownCommand(InputError):
    pass


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InputDocument:
    kind: str
    payload: dict = field(compare=True)

    def __hash__(self):
        return hash(serialize(self))


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _int(v, name: str) -> int:
    if not _is_int(v):
        raise SchemaError(name, f"expected an integer, got {v!r}")
    return v


def _ints(v, name: str, nonempty: bool = False) -> list[int]:
    if not isinstance(v, list):
        raise SchemaError(name, "expected a list of integers")
    if nonempty and not v:
        raise SchemaError(name, "must not be empty")
    return [_int(x, f"{name}[{i}]") for i, x in enumerate(v)]


def _matrix(v, name: str, square: bool = False) -> list[list[int]]:
    if not isinstance(v, list):
        raise SchemaError(name, "expected a list of rows")
    rows = [_ints(r, f"{name}[{i}]") for i, r in enumerate(v)]
    if square and any(len(r) != len(rows) for r in rows):
        raise SchemaError(name, "must be square")
    return rows


def _str(v, name: str) -> str:
    if not isinstance(v, str):
        raise SchemaError(name, "expected a string")
    return v


def _class(v, N: int, name: str) -> list[int]:
    """A class given as a coefficient list (h, e1..eN) or as text like '2h-e1'."""
    if isinstance(v, str):
        try:
            return list(hbu.parse_class(v, N).coeffs)
        except ValueError as exc:
            raise SchemaError(name, str(exc)) from None
    out = _ints(v, name)
    if len(out) != N + 1:
        raise SchemaError(name, f"expected {N + 1} coefficients, got {len(out)}")
    return out


def _optional(payload: dict, key: str, conv, default=None):
    v = payload.get(key)
    return default if v is None else conv(v)


def _check_keys(d: dict, allowed: set[str], prefix: str):
    for k in d:
        if k not in allowed:
            raise SchemaError(f"{prefix}{k}", "unknown field")


def _norm_graph(d, name: str) -> dict:
    if not isinstance(d, dict):
        raise SchemaError(name, "expected an object")
    _check_keys(d, {"kind", "center", "arms", "name", "arm_holes", "center_holes", "allowed_mod2", "expect"}, f"{name}.")
    if "center" not in d:
        raise SchemaError(f"{name}.center", "missing")
    if "arms" not in d or not isinstance(d["arms"], list):
        raise SchemaError(f"{name}.arms", "expected a list of arms")
    out = {
        "center": _int(d["center"], f"{name}.center"),
        "arms": [_ints(a, f"{name}.arms[{i}]", nonempty=True) for i, a in enumerate(d["arms"])],
        "name": _optional(d, "name", lambda v: _str(v, f"{name}.name"), ""),
        "arm_holes": _optional(d, "arm_holes", lambda v: _matrix(v, f"{name}.arm_holes")),
        "center_holes": _optional(d, "center_holes", lambda v: _ints(v, f"{name}.center_holes")),
    }
    if "allowed_mod2" in d and d["allowed_mod2"] is not None:
        vals = d["allowed_mod2"]
        if not isinstance(vals, list):
            raise SchemaError(f"{name}.allowed_mod2", "expected a list of fractions")
        try:
            out["allowed_mod2"] = [str(Fraction(str(x))) for x in vals]
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"{name}.allowed_mod2", "entries must be rationals like '-1/3'") from None
    else:
        out["allowed_mod2"] = None
    return out


def _norm_expect(d, name: str = "expect") -> dict | None:
    if d is None:
        return None
    if not isinstance(d, dict):
        raise SchemaError(name, "expected an object")
    return json.loads(json.dumps(d, sort_keys=True))


def _norm_configuration(d: dict, name: str = "") -> dict:
    p = f"{name}." if name else ""
    _check_keys(
        d, {"kind", "name", "N", "graph", "classes", "labels", "canonical", "chamber", "fibers", "fiber_N", "K_squared", "expect"}, p
    )
    N = _int(d.get("N"), f"{p}N")
    if N < 1:
        raise SchemaError(f"{p}N", "must be positive")
    graph = _norm_graph(d.get("graph"), f"{p}graph")
    if not isinstance(d.get("classes"), list):
        raise SchemaError(f"{p}classes", "expected a list of classes")
    classes = [_class(c, N, f"{p}classes[{i}]") for i, c in enumerate(d["classes"])]
    labels = _optional(d, "labels", lambda v: [_str(x, f"{p}labels") for x in v], [])
    chamber = None
    if d.get("chamber") is not None:
        c = d["chamber"]
        if not isinstance(c, dict):
            raise SchemaError(f"{p}chamber", "expected an object")
        _check_keys(c, {"vector", "sign", "K"}, f"{p}chamber.")
        s = _int(c.get("sign"), f"{p}chamber.sign")
        if s not in (-1, 1):
            raise SchemaError(f"{p}chamber.sign", "must be -1 or 1")
        chamber = {
            "vector": _class(c.get("vector"), N, f"{p}chamber.vector"),
            "sign": s,
            "K": _optional(c, "K", lambda v: _class(v, N, f"{p}chamber.K")),
        }
    fibers = None
    fN = _optional(d, "fiber_N", lambda v: _int(v, f"{p}fiber_N"), N)
    if d.get("fibers") is not None:
        if not isinstance(d["fibers"], dict):
            raise SchemaError(f"{p}fibers", "expected an object of fiber lists")
        fibers = {}
        for key in sorted(d["fibers"]):
            comps = d["fibers"][key]
            if not isinstance(comps, list):
                raise SchemaError(f"{p}fibers.{key}", "expected [class, multiplicity] pairs")
            fibers[key] = []
            for i, pair_ in enumerate(comps):
                if not isinstance(pair_, list) or len(pair_) != 2:
                    raise SchemaError(f"{p}fibers.{key}[{i}]", "expected [class, multiplicity]")
                fibers[key].append([_class(pair_[0], fN, f"{p}fibers.{key}[{i}]"), _int(pair_[1], f"{p}fibers.{key}[{i}]")])
    return {
        "name": _optional(d, "name", lambda v: _str(v, f"{p}name"), ""),
        "N": N,
        "graph": graph,
        "classes": classes,
        "labels": labels,
        "canonical": _optional(d, "canonical", lambda v: _class(v, N, f"{p}canonical")),
        "chamber": chamber,
        "fibers": fibers,
        "fiber_N": fN,
        "K_squared": _optional(d, "K_squared", lambda v: _int(v, f"{p}K_squared")),
        "expect": _norm_expect(d.get("expect"), f"{p}expect"),
    }


def _normalize(kind: str, d: dict) -> dict:
    if kind == "plumbing":
        out = _norm_graph(d, "plumbing")
        out["expect"] = _norm_expect(d.get("expect"))
        return out
    if kind == "handlebody":
        _check_keys(d, {"kind", "name", "holes", "handles", "word", "cycles", "expect"}, "")
        if d.get("word") is not None:
            if d.get("handles") is not None:
                raise SchemaError("handles", "give either handles or word, not both")
            holes = _optional(d, "holes", lambda v: _int(v, "holes"))
            try:
                w = mcg.parse_word(_str(d["word"], "word"), holes)
            except ValueError as exc:
                raise SchemaError("word", str(exc)) from None
            try:
                h = hb.Handlebody.from_word(w)
            except ValueError as exc:
                raise SchemaError("word", str(exc)) from None
            holes, handles = h.holes, [list(x.subset) for x in h.handles]
        else:
            holes = _int(d.get("holes"), "holes")
            if not isinstance(d.get("handles"), list):
                raise SchemaError("handles", "expected a list of hole subsets")
            handles = [_ints(x, f"handles[{i}]", nonempty=True) for i, x in enumerate(d["handles"])]
            for i, x in enumerate(handles):
                if any(not 1 <= c <= holes for c in x):
                    raise SchemaError(f"handles[{i}]", f"holes must lie in 1..{holes}")
        return {
            "name": _optional(d, "name", lambda v: _str(v, "name"), ""),
            "holes": holes,
            "handles": handles,
            "cycles": _optional(d, "cycles", lambda v: _matrix(v, "cycles")),
            "expect": _norm_expect(d.get("expect")),
        }
    if kind == "twistword":
        _check_keys(d, {"kind", "holes", "word", "rhs", "labels"}, "")
        holes = _int(d.get("holes"), "holes")
        labels = _optional(d, "labels", lambda v: [_str(x, "labels") for x in v])
        out = {"holes": holes, "labels": labels}
        for key in ("word", "rhs"):
            if key == "word" or d.get(key) is not None:
                try:
                    out[key] = str(mcg.parse_word(_str(d.get(key), key), holes, labels))
                except ValueError as exc:
                    raise SchemaError(key, str(exc)) from None
            else:
                out[key] = None
        out["labels"] = None  # words are stored with numeric labels after parsing
        return out
    if kind == "class_list":
        _check_keys(d, {"kind", "N", "classes"}, "")
        N = _int(d.get("N"), "N")
        if not isinstance(d.get("classes"), list):
            raise SchemaError("classes", "expected a list")
        return {"N": N, "classes": [_class(c, N, f"classes[{i}]") for i, c in enumerate(d["classes"])]}
    if kind == "configuration":
        return _norm_configuration(d)
    if kind == "search_config":
        _check_keys(
            d,
            {"kind", "N", "A", "t2_gram", "configuration", "sigma", "chi", "sigma_ambient", "chi_ambient",
             "phi", "V", "ranges", "expect"},
            "",
        )  # fmt: skip
        N = _int(d.get("N"), "N")
        if not isinstance(d.get("A"), list):
            raise SchemaError("A", "expected a list of classes")
        if not isinstance(d.get("configuration"), dict):
            raise SchemaError("configuration", "expected a configuration object")
        return {
            "N": N,
            "A": [_class(c, N, f"A[{i}]") for i, c in enumerate(d["A"])],
            "t2_gram": _matrix(d.get("t2_gram"), "t2_gram", square=True),
            "configuration": _norm_configuration(d["configuration"], "configuration"),
            "sigma": _int(d.get("sigma"), "sigma"),
            "chi": _int(d.get("chi"), "chi"),
            "sigma_ambient": _int(d.get("sigma_ambient"), "sigma_ambient"),
            "chi_ambient": _int(d.get("chi_ambient"), "chi_ambient"),
            "phi": _matrix(d.get("phi"), "phi"),
            "V": _class(d.get("V"), N, "V"),
            "ranges": _optional(d, "ranges", lambda v: _matrix(v, "ranges")),
            "expect": _norm_expect(d.get("expect")),
        }
    raise SchemaError("kind", f"must be one of {', '.join(KINDS)}")


def parse(text: str) -> InputDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputSyntaxError(exc.lineno, exc.colno, exc.msg) from None
    if not isinstance(raw, dict):
        raise SchemaError("<root>", "expected a JSON object")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise SchemaError("kind", f"must be one of {', '.join(KINDS)}")
    return InputDocument(kind, _normalize(kind, raw))


def serialize(doc: InputDocument) -> str:
    return json.dumps({"kind": doc.kind, **doc.payload}, sort_keys=True, separators=(",", ":"))


# -- document -> domain objects ------------------------------------------------


def to_plumbing(p: dict) -> pl.StarPlumbing:
    try:
        return pl.star(
            p["center"], *p["arms"], name=p.get("name", ""), arm_holes=p.get("arm_holes"), center_holes=p.get("center_holes")
        )
    except ValueError as exc:
        raise SchemaError("arms", str(exc)) from None


def to_handlebody(p: dict) -> hb.Handlebody:
    return hb.Handlebody.from_subsets(p["holes"], p["handles"], name=p.get("name", ""))


def _bc(N: int, v) -> hbu.BlowupClass:
    return hbu.BlowupClass(N, tuple(v))


def to_configuration(p: dict) -> hbu.SphereConfiguration:
    N = p["N"]
    try:
        return hbu.SphereConfiguration(
            tuple(_bc(N, c) for c in p["classes"]),
            to_plumbing(p["graph"]),
            tuple(p.get("labels") or ()),
            _bc(N, p["canonical"]) if p.get("canonical") is not None else None,
        )
    except ValueError as exc:
        raise SchemaError("classes", str(exc)) from None


def to_search(p: dict) -> tuple[swsearch.SearchBasis, list, hbu.BlowupClass, list | None]:
    N = p["N"]
    basis = swsearch.SearchBasis(
        A=tuple(_bc(N, a) for a in p["A"]),
        t2_gram=tuple(tuple(r) for r in p["t2_gram"]),
        config=to_configuration(p["configuration"]),
        sigma=p["sigma"],
        chi=p["chi"],
        sigma_ambient=p["sigma_ambient"],
        chi_ambient=p["chi_ambient"],
    )
    return basis, [tuple(c) for c in p["phi"]], _bc(N, p["V"]), p.get("ranges")


# -- builtin documents -----------------------------------------------------------


def _graph_doc(g: pl.StarPlumbing) -> dict:
    return {
        "center": g.center_weight,
        "arms": [list(a) for a in g.arms],
        "name": g.name,
        "arm_holes": [list(h) for h in g.arm_holes] if g.arm_holes else None,
        "center_holes": list(g.center_holes) if g.center_holes else None,
    }


def _config_doc(key: str, extra: dict | None = None) -> dict:
    cfg = catalog.CONFIGURATIONS[key]
    d = {
        "kind": "configuration",
        "name": key,
        "N": cfg.N,
        "graph": _graph_doc(cfg.graph),
        "classes": [str(c) for c in cfg.classes],
        "labels": list(cfg.labels),
        "canonical": str(cfg.canonical) if cfg.canonical is not None else None,
    }
    d.update(extra or {})
    return d


def builtin_documents() -> dict[str, dict]:
    """Named inputs reproducing the catalog data; the files in data/ mirror these."""
    docs: dict[str, dict] = {}
    t2 = catalog.FILLINGS["T2"]
    docs["t2.json"] = {
        "kind": "handlebody",
        "name": "T2",
        "holes": t2.holes,
        "handles": [list(h.subset) for h in t2.handles],
        "cycles": catalog.FILLING_CYCLES["T2"],
        "expect": {
            "chi": 3,
            "sigma": -2,
            "gram": catalog.FILLING_GRAMS["T2"],
            "pi1_order": 2,
            "boundary_h1": "Z/2+Z/2+Z/12",
            "h2": "Z+Z+Z/2",
            "restriction_index": 2,
            "image_order": 24,
            "c1": [0, 0],
        },
    }
    for key, exp in (
        ("R", {"pi1_order": 1, "gram": catalog.FILLING_GRAMS["R"], "chi": 3}),
        ("V", {"pi1_order": 1, "gram": catalog.FILLING_GRAMS["V"], "chi": 3}),
        ("L", {"pi1_order": 4, "gram": catalog.FILLING_GRAMS["L"], "chi": 2, "sigma": -1}),
    ):
        f = catalog.FILLINGS[key]
        docs[f"{key.lower()}.json"] = {
            "kind": "handlebody",
            "name": key,
            "holes": f.holes,
            "handles": [list(h.subset) for h in f.handles],
            "cycles": catalog.FILLING_CYCLES[key],
            "expect": exp,
        }
    s2_phi = [list(t) for t in catalog.PHI_PRINTED]
    docs["s2.json"] = {
        "kind": "plumbing",
        **_graph_doc(catalog.S2),
        "allowed_mod2": list(catalog.T2_D_MOD2_PRINTED),
        "expect": {"chi": 6, "sigma": -5, "word": catalog.PRINTED_GAYMARK["S2"], "phi": s2_phi},
    }
    for key in ("Q", "U", "K"):
        g = catalog.PLUMBINGS[key]
        docs[f"{key.lower()}.json"] = {
            "kind": "plumbing",
            **_graph_doc(g),
            "expect": {"word": catalog.PRINTED_GAYMARK[key]},
        }
    docs["s2-embedding.json"] = _config_doc(
        "S2",
        {
            "chamber": {"vector": str(catalog.V_VECTOR), "sign": 1, "K": None},
            "fibers": {
                k: [[str(c), m] for c, m in v] for k, v in catalog.ALL_FIBERS.items()
            },
            "fiber_N": 9,
            "K_squared": 1,
        },
    )
    docs["q-embedding.json"] = _config_doc("Q", {"chamber": {"vector": str(catalog.R_VECTOR), "sign": 1, "K": None}})
    docs["u-embedding.json"] = _config_doc(
        "U", {"chamber": {"vector": str(catalog.R_PRIME_VECTOR), "sign": 1, "K": None}}
    )
    docs["k-embedding.json"] = _config_doc("K")
    docs["knot-embedding.json"] = _config_doc(
        "S2-knot", {"chamber": {"vector": str(catalog.H_VECTOR), "sign": -1, "K": str(catalog.KNOT_K)}}
    )
    b = swsearch.default_basis()
    cfgdoc = _config_doc("S2")
    cfgdoc.pop("kind")
    docs["default.json"] = {
        "kind": "search_config",
        "N": 11,
        "A": [str(a) for a in b.A],
        "t2_gram": [list(r) for r in b.t2_gram],
        "configuration": cfgdoc,
        "sigma": b.sigma,
        "chi": b.chi,
        "sigma_ambient": b.sigma_ambient,
        "chi_ambient": b.chi_ambient,
        "phi": s2_phi,
        "V": str(catalog.V_VECTOR),
        "expect": {"counts": list(catalog.STAGE_COUNTS_PRINTED)},
    }
    return docs


def load_document(ref: str) -> InputDocument:
    """Read a document from a path, falling back to a builtin of that name."""
    path = Path(ref)
    if path.is_file():
        return parse(path.read_text(encoding="utf-8"))
    data = resources.files("starsurgery") / "data" / ref
    if data.is_file():
        return parse(data.read_text(encoding="utf-8"))
    docs = builtin_documents()
    if ref in docs:
        return parse(json.dumps(docs[ref]))
    raise InputError(f"no such file or builtin document: {ref}")


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, hbu.BlowupClass):
        return str(x)
    return x


def _compare(expect: dict | None, actual: dict, failures: list[str], unordered: tuple[str, ...] = ()):
    for key, want in (expect or {}).items():
        if key not in actual:
            failures.append(f"expect.{key}: not computed by this command")
            continue
        got = _jsonable(actual[key])
        if key in unordered:
            ok = sorted(map(json.dumps, got)) == sorted(map(json.dumps, want))
        else:
            ok = got == want
        if not ok:
            failures.append(f"{key}: expected {json.dumps(want)}, got {json.dumps(got)}")


def _finish(command: str, body: dict, failures: list[str]) -> dict:
    return {"command": command, "ok": not failures, "failures": failures, **_jsonable(body)}


def cmd_verify_relation(args) -> dict:
    failures: list[str] = []
    body: dict[str, Any] = {}
    if args.mirror_convention:
        body["mirror_convention"] = True
        body["convention_self_test"] = mcg.convention_self_test()
    if args.file:
        doc = load_document(args.file)
        if doc.kind != "twistword" or doc.payload.get("rhs") is None:
            raise SchemaError("rhs", "verify-relation needs a twistword document with word and rhs")
        n = doc.payload["holes"]
        lhs, rhs = mcg.parse_word(doc.payload["word"], n), mcg.parse_word(doc.payload["rhs"], n)
        t0 = time.perf_counter()
        rep = mcg.RelationReport("custom", {}, str(lhs), str(rhs), mcg.words_equal(lhs, rhs), 0.0)
        rep.seconds = time.perf_counter() - t0
    else:
        if not args.name:
            raise InputError("verify-relation needs --name or a document")
        params: dict[str, Any] = {}
        for key in ("i", "m", "n"):
            v = getattr(args, key)
            if v is not None:
                params[key] = v
        for key in ("a", "b", "c"):
            v = getattr(args, key)
            if v is not None:
                params[key] = tuple(int(x) for x in v.split(","))
        if args.blocks:
            params["blocks"] = [tuple(int(x) for x in b.split(",")) for b in args.blocks.split(";")]
        try:
            rep = mcg.verify_named_relation(args.name, **params)
        except mcg.UnknownRelation:
            raise InputError(f"unknown relation {args.name!r}; known: {', '.join(mcg.RELATION_NAMES)}") from None
        lhs, rhs = mcg.named_relation(args.name, **params)
    body.update(rep.as_dict(timings=args.timings))
    body["params"] = {k: list(v) if isinstance(v, tuple) else v for k, v in body["params"].items()}
    if not rep.equal:
        failures.append("words are not equal")
    if args.perturbations:
        eq = sum(mcg.words_equal(p, rhs) for p in mcg.perturbations(lhs))
        eq += sum(mcg.words_equal(lhs, p) for p in mcg.perturbations(rhs))
        body["perturbations_equal"] = eq
        if eq:
            failures.append(f"{eq} single-hole perturbations are still equal")
    if body.get("convention_self_test") is False:
        failures.append("convention self-test failed under the mirror convention")
    return _finish("verify-relation", body, failures)


def cmd_analyze_filling(args) -> dict:
    doc = load_document(args.file)
    if doc.kind != "handlebody":
        raise SchemaError("kind", "analyze-filling needs a handlebody document")
    h = to_handlebody(doc.payload)
    failures: list[str] = []
    try:
        hr = hb.homology_report(h, doc.payload.get("cycles"))
    except ValueError as exc:
        raise SchemaError("cycles", str(exc)) from None
    pi1 = hb.pi1_report(h, args.max_cosets)
    bfree, btors = hb.boundary_H1(h)
    border = None if bfree else _prod(btors)
    index = hb.restriction_index(h)
    c1 = [hb.c1_evaluate(h, c) for c in hr.cycles]
    h2free, h2tors = hb.cohomology_h2(h)
    body = {
        "name": h.name,
        "holes": h.holes,
        "handles": len(h.handles),
        "chi": hr.chi,
        "sigma": hr.sigma,
        "definiteness": hr.definiteness,
        "cycles": hr.cycles,
        "gram": hr.gram,
        "h1": el.describe_group(hr.h1_free, hr.h1_torsion),
        "h2": el.describe_group(h2free, h2tors),
        "pi1_presentation": str(pi1.presentation),
        "pi1_abelianization": pi1.abelianization,
        "pi1_order": pi1.order,
        "boundary_h1": el.describe_group(bfree, btors),
        "boundary_order": border,
        "restriction_index": index,
        "image_order": (border // index) if border and index else None,
        "c1": c1,
    }
    if hr.gram and border is not None:
        det = abs(el.determinant(hr.gram))
        tors = _prod(hr.h1_torsion)
        # |H_1(boundary)| = |det Q| * |Tor H_1|^2 for a filling with b_1 = 0
        if hr.h1_free == 0 and border != det * tors * tors:
            failures.append(f"|H1(boundary)| = {border} but |det Q| |Tor H1|^2 = {det * tors * tors}")
    if pi1.order is None and pi1.free_rank == 0:
        body["pi1_note"] = f"coset enumeration exceeded {args.max_cosets} cosets"
    _compare(doc.payload.get("expect"), body, failures)
    return _finish("analyze-filling", body, failures)


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def cmd_analyze_plumbing(args) -> dict:
    doc = load_document(args.file)
    if doc.kind != "plumbing":
        raise SchemaError("kind", "analyze-plumbing needs a plumbing document")
    p = doc.payload
    g = to_plumbing(p)
    failures: list[str] = []
    inv = pl.plumbing_invariants(g)
    body: dict[str, Any] = {
        "name": g.name,
        "weights": g.weights,
        "chi": inv.chi,
        "sigma": inv.sigma,
        "determinant": inv.determinant,
        "boundary_h1": el.describe_group(0, [x for x in inv.boundary_h1 if x != 1]),
        "bad_vertices": g.bad_vertices(),
    }
    if not g.bad_vertices():
        outer = catalog.GAYMARK_OUTER.get(g.name, "first")
        m, w = pl.gaymark_word(g, outer)
        body["holes"] = m
        body["word"] = str(w)
    body["d_mod2"] = pl.characteristic_d_mod2_values(inv.gram, inv.sigma, inv.chi)
    if p.get("allowed_mod2") is not None:
        rep = pl.spinc_orbit_analysis(g, [Fraction(x) for x in p["allowed_mod2"]])
        body["orbit_count"] = rep.orbit_count
        body["orbit_d_mod2"] = rep.mod2_values
        body["phi"] = [list(t) for t in rep.phi]
    _compare(p.get("expect"), body, failures, unordered=("phi", "d_mod2"))
    return _finish("analyze-plumbing", body, failures)


def cmd_verify_embedding(args) -> dict:
    doc = load_document(args.file)
    if doc.kind != "configuration":
        raise SchemaError("kind", "verify-embedding needs a configuration document")
    p = doc.payload
    cfg = to_configuration(p)
    failures: list[str] = []
    rep = hbu.verify_configuration(cfg)
    failures += [f"configuration: {f}" for f in rep.failures]
    body: dict[str, Any] = {"name": p.get("name", ""), "N": cfg.N, "configuration": rep.as_dict()}
    if p.get("chamber"):
        c = p["chamber"]
        W = _bc(cfg.N, c["vector"])
        K = _bc(cfg.N, c["K"]) if c.get("K") is not None else None
        cr = hbu.verify_chamber_vector(W, cfg, c["sign"], K)
        body["chamber"] = {"vector": str(W), **cr.as_dict()}
        if not cr.ok:
            failures += [f"chamber: {f}" for f in cr.failures]
            fixed = hbu.rederive_chamber_vector(W, cfg, c["sign"], K)
            body["chamber"]["rederived"] = str(fixed) if fixed is not None else None
    if p.get("fibers"):
        fib = {}
        for key, comps in p["fibers"].items():
            fr = hbu.verify_fiber_decomposition([(_bc(len(c) - 1, c), m) for c, m in comps])
            fib[key] = fr.as_dict()
            failures += [f"fiber {key}: {f}" for f in fr.failures]
        body["fibers"] = fib
    _compare(p.get("expect"), body, failures)
    return _finish("verify-embedding", body, failures)


def cmd_kodaira(args) -> dict:
    doc = load_document(args.file)
    if doc.kind != "configuration":
        raise SchemaError("kind", "kodaira needs a configuration document")
    cfg = to_configuration(doc.payload)
    ksq = args.k_squared if args.k_squared is not None else doc.payload.get("K_squared")
    base = hbu.kodaira_report(cfg)
    rng = random.Random(args.seed)
    failures: list[str] = []
    minimum = None
    dims = set()
    for _ in range(args.samples):
        params = hbu.random_admissible(cfg.N, rng)
        r = hbu.kodaira_report(cfg, params=params, K_squared=ksq)
        minimum = r.value if minimum is None else min(minimum, r.value)
        dims.add(r.kodaira_dimension)
    body = {
        "name": doc.payload.get("name", ""),
        "functional": base.functional_str(),
        "coefficients": list(base.coefficients),
        "samples": args.samples,
        "seed": args.seed,
        "min_value": minimum,
        "K_squared": ksq,
        "kodaira_dimension": next(iter(dims)) if len(dims) == 1 else sorted(map(str, dims)),
    }
    if args.samples and minimum is not None and minimum <= 0:
        failures.append(f"K.omega = {minimum} is not positive on some sample")
    _compare(doc.payload.get("expect"), body, failures)
    return _finish("kodaira", body, failures)


def cmd_sw_search(args) -> dict:
    doc = load_document(args.config)
    if doc.kind != "search_config":
        raise SchemaError("kind", "sw-search needs a search_config document")
    basis, phi, V, ranges = to_search(doc.payload)
    failures: list[str] = []
    try:
        rep = swsearch.run_pipeline(basis, phi, V, workers=args.workers, raise_on_wall=False, ranges=ranges)
    except ValueError as exc:
        raise SchemaError("A", str(exc)) from None
    body = rep.as_dict(timings=args.timings)
    body["stages"] = ["box", "d_X", "triples", "d_upstairs", "characteristic", "chamber"]
    if rep.walls:
        failures.append(f"{len(rep.walls)} candidates lie on the wall of V")
    surv = rep.survivors
    if len(surv) == 2:
        a, b = surv
        body["survivors_opposite"] = a["class"] == [-x for x in b["class"]]
        if not body["survivors_opposite"]:
            failures.append("the two survivors are not negatives of each other")
    expect = doc.payload.get("expect") or {}
    want = expect.get("counts")
    if want is not None:
        names = body["stages"]
        for i, (w, g) in enumerate(zip(want, rep.counts)):
            if w != g:
                failures.append(f"stage {i + 1} ({names[i]}): expected {w}, got {g}")
    return _finish("sw-search", body, failures)


def cmd_knot_surgery(args) -> dict:
    if args.n < 2:
        raise InputError("--n must be at least 2")
    rep = swsearch.knot_surgery_checks(args.n)
    failures = [f"check {k} failed" for k, v in rep.checks.items() if not v]
    return _finish("knot-surgery", rep.as_dict(), failures)


def _surgery_numbers(key: str):
    (chi_a, sig_a), pkey, fkey = catalog.SURGERIES[key]
    inv = pl.plumbing_invariants(catalog.PLUMBINGS[pkey])
    hr = hb.homology_report(catalog.FILLINGS[fkey], catalog.FILLING_CYCLES.get(fkey))
    return (chi_a, sig_a), (inv.chi, inv.sigma), (hr.chi, hr.sigma)


def cmd_homeo_type(args) -> dict:
    failures: list[str] = []
    results = {}
    if args.ambient or args.remove or args.insert:
        if not (args.ambient and args.remove and args.insert):
            raise InputError("--ambient, --remove and --insert go together")
        chi, sigma = args.ambient
        results["custom"] = hbu.homeo_type_report(chi, sigma, tuple(args.remove), tuple(args.insert))
    else:
        keys = args.surgery or list(catalog.SURGERIES)
        for key in keys:
            if key not in catalog.SURGERIES:
                raise InputError(f"unknown surgery {key!r}; known: {', '.join(catalog.SURGERIES)}")
            amb, plm, fil = _surgery_numbers(key)
            results[key] = hbu.homeo_type_report(amb[0], amb[1], plm, fil)
    body = {"results": {k: {**v.as_dict(), "K_squared": v.K_squared} for k, v in results.items()}}
    return _finish("homeo-type", body, failures)


HANDLERS = {
    "verify-relation": cmd_verify_relation,
    "analyze-filling": cmd_analyze_filling,
    "analyze-plumbing": cmd_analyze_plumbing,
    "verify-embedding": cmd_verify_embedding,
    "kodaira": cmd_kodaira,
    "sw-search": cmd_sw_search,
    "knot-surgery": cmd_knot_surgery,
    "homeo-type": cmd_homeo_type,
}


def dispatch(command: str, args) -> dict:
    if command not in HANDLERS:
        raise UnknownCommand(f"unknown command {command!r}")
    if args.mirror_convention:
        mcg.set_mirror_convention(True)
    try:
        return HANDLERS[command](args)
    finally:
        if args.mirror_convention:
            mcg.set_mirror_convention(False)


# ---------------------------------------------------------------------------
# Output and argument parsing
# ---------------------------------------------------------------------------


def render_text(report: dict) -> str:
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict) and v:
            for k, x in v.items():
                walk(f"{prefix}.{k}" if prefix else str(k), x)
        else:
            lines.append(f"{prefix}: {json.dumps(v) if not isinstance(v, str) else v}")

    body = {k: v for k, v in report.items() if k not in ("command", "ok", "failures")}
    walk("", body)
    for f in report["failures"]:
        lines.append(f"FAIL {f}")
    lines.append(f"{report['command']}: {'PASS' if report['ok'] else 'FAIL'}")
    return "\n".join(lines)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the full JSON report")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("--max-cosets", type=int, default=100_000)
    common.add_argument("--mirror-convention", action="store_true", help="use the other gathering sign")
    common.add_argument("--timings", action="store_true", help="include wall-clock times")

    ap = _Parser(prog="starsurgery", description="Exact checks for star surgery computations.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("verify-relation", parents=[common])
    p.add_argument("file", nargs="?", help="twistword document with word and rhs")
    p.add_argument("--name")
    p.add_argument("--i", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.add_argument("--blocks", help="blocks as '1,2;3;4'")
    p.add_argument("--perturbations", action="store_true", help="also check every one-hole perturbation")

    for name in ("analyze-filling", "analyze-plumbing", "verify-embedding"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file")

    p = sub.add_parser("kodaira", parents=[common])
    p.add_argument("file", nargs="?", default="s2-embedding.json")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-squared", type=int)

    p = sub.add_parser("sw-search", parents=[common])
    p.add_argument("--config", default="default.json")

    p = sub.add_parser("knot-surgery", parents=[common])
    p.add_argument("--n", type=int, default=2)

    p = sub.add_parser("homeo-type", parents=[common])
    p.add_argument("surgery", nargs="*")
    p.add_argument("--ambient", type=int, nargs=2, metavar=("CHI", "SIGMA"))
    p.add_argument("--remove", type=int, nargs=2, metavar=("CHI", "SIGMA"))
    p.add_argument("--insert", type=int, nargs=2, metavar=("CHI", "SIGMA"))
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and not argv[0].startswith("-") and argv[0] not in COMMANDS:
            raise UnknownCommand(f"unknown command {argv[0]!r}; known: {', '.join(COMMANDS)}")
        args = build_parser().parse_args(argv)
        if not args.command:
            raise InputError(f"a command is required: {', '.join(COMMANDS)}")
        if args.workers < 1:
            raise InputError("--workers must be positive")
        report = dispatch(args.command, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report))
    return 0 if report["ok"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
