"""OpenMath XML encoding: parser and pretty printer."""

from __future__ import annotations

import base64
import re
import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from . import ast
from .ast import (
    Apply, Attributed, Bind, BoundVar, ErrorTerm, Foreign, Lit, LitKind, Sort, Sym, Term, Var,
)
from .errors import (
    BadInteger, DuplicateBoundVariable, EmptyApplication, MissingBvar, Unprintable,
    UnknownElement, XmlSyntax,
)

OM_NS = "http://www.openmath.org/OpenMath"
_NS_PREFIX = "{" + OM_NS + "}"

# Foreign encodings whose payload is text we can re-emit verbatim.
_TEXT_ENCODINGS = re.compile(r"^(text/.*|application/(.*\+)?xml|)$")


@dataclass(frozen=True)
class OmDocument:
    root: Term
    cdbase: str | None = None
    version: str = "2.0"


def _tag(el: ET.Element) -> str:
    tag = el.tag
    if tag.startswith(_NS_PREFIX):
        return tag[len(_NS_PREFIX):]
    if tag.startswith("{"):
        raise UnknownElement(f"element {tag} is outside the OpenMath namespace")
    return tag


def parse_om_xml(text: str) -> OmDocument:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XmlSyntax(str(exc), position=(exc.position[0], exc.position[1] + 1)) from None
    if _tag(root) == "OMOBJ":
        kids = list(root)
        if len(kids) != 1:
            raise UnknownElement(f"OMOBJ must hold exactly one object, found {len(kids)}")
        return OmDocument(
            parse_element(kids[0]), root.get("cdbase"), root.get("version", "2.0")
        )
    return OmDocument(parse_element(root))


def parse_om_term(text: str) -> Term:
    return parse_om_xml(text).root


def parse_element(el: ET.Element) -> Term:
    tag = _tag(el)
    kids = list(el)
    if tag == "OMS":
        return Sym(_symbol(el))
    if tag == "OMV":
        return Var(_attr(el, "name"))
    if tag == "OMI":
        txt = (el.text or "").strip()
        if not re.fullmatch(r"-?[0-9]+", txt):
            # hexadecimal OMI is legal OpenMath (x prefix)
            m = re.fullmatch(r"(-?)x([0-9A-Fa-f]+)", txt)
            if not m:
                raise BadInteger(f"not an integer: {el.text!r}")
            return Lit(LitKind.INTEGER, int(m.group(1) + m.group(2), 16))
        return Lit(LitKind.INTEGER, int(txt))
    if tag == "OMF":
        if el.get("dec") is not None:
            try:
                return Lit(LitKind.FLOAT64, float(el.get("dec")))
            except ValueError:
                raise BadInteger(f"bad OMF dec {el.get('dec')!r}") from None
        if el.get("hex") is not None:
            try:
                return Lit(LitKind.FLOAT64, ast.float_from_bits(int(el.get("hex"), 16)))
            except (ValueError, OverflowError):
                raise BadInteger(f"bad OMF hex {el.get('hex')!r}") from None
        raise UnknownElement("OMF needs a dec or hex attribute")
    if tag == "OMSTR":
        return Lit(LitKind.STRING, el.text or "")
    if tag == "OMB":
        try:
            return Lit(LitKind.BYTES, base64.b64decode("".join((el.text or "").split()), validate=True))
        except ValueError:
            raise UnknownElement("OMB payload is not base64") from None
    if tag == "OMA":
        if not kids:
            raise EmptyApplication("OMA with no children")
        return Apply(parse_element(kids[0]), tuple(parse_element(k) for k in kids[1:]))
    if tag == "OMBIND":
        if len(kids) < 3:
            if len(kids) < 2 or _tag(kids[1]) != "OMBVAR":
                raise MissingBvar("OMBIND needs a binder, OMBVAR and a body")
            raise UnknownElement("OMBIND without a body")
        if _tag(kids[1]) != "OMBVAR":
            raise MissingBvar("second child of OMBIND must be OMBVAR")
        if len(kids) > 4:
            raise UnknownElement("OMBIND takes at most a body and a condition")
        binder = parse_element(kids[0])
        if not isinstance(binder, Sym):
            raise UnknownElement("binder must be an OMS")
        bvars = _bvars(kids[1])
        body = parse_element(kids[2])
        cond = parse_element(kids[3]) if len(kids) == 4 else None
        return Bind(binder.symbol, bvars, body, cond)
    if tag == "OMATTR":
        if len(kids) != 2 or _tag(kids[0]) != "OMATP":
            raise UnknownElement("OMATTR needs an OMATP and one object")
        return Attributed(_pairs(kids[0]), parse_element(kids[1]))
    if tag == "OME":
        if not kids or _tag(kids[0]) != "OMS":
            raise UnknownElement("OME must start with an OMS")
        return ErrorTerm(_symbol(kids[0]), tuple(parse_element(k) for k in kids[1:]))
    if tag == "OMFOREIGN":
        encoding = el.get("encoding", "")
        inner = (el.text or "") + "".join(
            ET.tostring(k, encoding="unicode") for k in kids
        )
        return Foreign(encoding, inner.encode("utf-8"))
    raise UnknownElement(f"unknown element <{tag}>")


def _attr(el: ET.Element, name: str) -> str:
    v = el.get(name)
    if not v:
        raise UnknownElement(f"<{_tag(el)}> missing attribute {name!r}")
    return v


def _symbol(el: ET.Element) -> ast.Symbol:
    if _tag(el) != "OMS":
        raise UnknownElement(f"expected OMS, found <{_tag(el)}>")
    return ast.om_symbol(_attr(el, "cd"), _attr(el, "name"))


def _pairs(atp: ET.Element) -> tuple:
    kids = list(atp)
    if len(kids) % 2:
        raise UnknownElement("OMATP needs symbol/value pairs")
    return tuple((_symbol(kids[i]), parse_element(kids[i + 1])) for i in range(0, len(kids), 2))


def _bvars(bvar: ET.Element) -> tuple[BoundVar, ...]:
    out = []
    for k in bvar:
        tag = _tag(k)
        sort = None
        if tag == "OMATTR":
            inner = list(k)
            if len(inner) != 2 or _tag(inner[0]) != "OMATP" or _tag(inner[1]) != "OMV":
                raise UnknownElement("attributed bound variable must wrap an OMV")
            # only the sort attribution is kept on bound variables
            for key, val in _pairs(inner[0]):
                if key == ast.SORT_ATTR:
                    sort = term_to_sort(val)
            k = inner[1]
        elif tag != "OMV":
            raise UnknownElement(f"unexpected <{tag}> in OMBVAR")
        out.append(BoundVar(_attr(k, "name"), sort))
    if not out:
        raise MissingBvar("empty OMBVAR")
    names = [v.name for v in out]
    if len(set(names)) != len(names):
        raise DuplicateBoundVariable(f"repeated bound variable in OMBVAR: {names}")
    return tuple(out)


def sort_to_term(s: Sort) -> Term:
    if not s.args:
        return Var(s.name)
    return Apply(Var(s.name), tuple(sort_to_term(a) for a in s.args))


def term_to_sort(t: Term) -> Sort:
    if isinstance(t, Var):
        return Sort(t.name)
    if isinstance(t, Apply) and isinstance(t.head, Var) and t.args:
        return Sort(t.head.name, tuple(term_to_sort(a) for a in t.args))
    raise UnknownElement("sort attribution must be an OMV or an OMA of OMVs")


# -- printing --------------------------------------------------------------


def print_om_xml(doc: OmDocument | Term, indent: str = "  ") -> str:
    if isinstance(doc, Term):
        doc = OmDocument(doc)
    attrs = f' xmlns="{OM_NS}" version={quoteattr(doc.version)}'
    if doc.cdbase is not None:
        attrs += f" cdbase={quoteattr(doc.cdbase)}"
    lines = [f"<OMOBJ{attrs}>"]
    _emit(doc.root, 1, lines, indent)
    lines.append("</OMOBJ>")
    return "\n".join(lines) + "\n"


def print_om_term(t: Term, indent: str = "  ") -> str:
    lines: list[str] = []
    _emit(t, 0, lines, indent)
    return "\n".join(lines) + "\n"


def _sym_el(s: ast.Symbol) -> str:
    return f"<OMS cd={quoteattr(s.namespace)} name={quoteattr(s.name)}/>"


def _emit(t: Term, depth: int, out: list[str], ind: str) -> None:
    pad = ind * depth
    if isinstance(t, Sym):
        out.append(pad + _sym_el(t.symbol))
    elif isinstance(t, Var):
        out.append(f"{pad}<OMV name={quoteattr(t.name)}/>")
    elif isinstance(t, Lit):
        out.append(pad + _lit_el(t))
    elif isinstance(t, Apply):
        if not t.args:
            warnings.warn("printing a nullary OMA", stacklevel=2)
        out.append(pad + "<OMA>")
        for c in (t.head, *t.args):
            _emit(c, depth + 1, out, ind)
        out.append(pad + "</OMA>")
    elif isinstance(t, Bind):
        out.append(pad + "<OMBIND>")
        out.append(pad + ind + _sym_el(t.binder))
        out.append(pad + ind + "<OMBVAR>")
        for v in t.vars:
            _emit_bvar(v, depth + 2, out, ind)
        out.append(pad + ind + "</OMBVAR>")
        _emit(t.body, depth + 1, out, ind)
        if t.condition is not None:
            _emit(t.condition, depth + 1, out, ind)
        out.append(pad + "</OMBIND>")
    elif isinstance(t, Attributed):
        out.append(pad + "<OMATTR>")
        _emit_atp(t.pairs, depth + 1, out, ind)
        _emit(t.base, depth + 1, out, ind)
        out.append(pad + "</OMATTR>")
    elif isinstance(t, ErrorTerm):
        out.append(pad + "<OME>")
        out.append(pad + ind + _sym_el(t.symbol))
        for c in t.args:
            _emit(c, depth + 1, out, ind)
        out.append(pad + "</OME>")
    elif isinstance(t, Foreign):
        if not _TEXT_ENCODINGS.match(t.encoding):
            raise Unprintable(f"foreign object with encoding {t.encoding!r}")
        enc = f" encoding={quoteattr(t.encoding)}" if t.encoding else ""
        try:
            text = t.blob.decode("utf-8")
        except UnicodeDecodeError:
            raise Unprintable("foreign payload is not UTF-8") from None
        if not t.encoding.startswith("text/plain"):
            # XML-ish payloads are emitted as parsed markup
            out.append(f"{pad}<OMFOREIGN{enc}>{text}</OMFOREIGN>")
        else:
            out.append(f"{pad}<OMFOREIGN{enc}>{escape(text)}</OMFOREIGN>")
    else:
        raise Unprintable(f"cannot print {type(t).__name__}")


def _emit_atp(pairs, depth, out, ind):
    pad = ind * depth
    out.append(pad + "<OMATP>")
    for k, v in pairs:
        out.append(pad + ind + _sym_el(k))
        _emit(v, depth + 1, out, ind)
    out.append(pad + "</OMATP>")


def _emit_bvar(v: BoundVar, depth: int, out: list[str], ind: str) -> None:
    pad = ind * depth
    if v.sort is None:
        out.append(f"{pad}<OMV name={quoteattr(v.name)}/>")
        return
    out.append(pad + "<OMATTR>")
    _emit_atp(((ast.SORT_ATTR, sort_to_term(v.sort)),), depth + 1, out, ind)
    out.append(f"{pad}{ind}<OMV name={quoteattr(v.name)}/>")
    out.append(pad + "</OMATTR>")


def _lit_el(t: Lit) -> str:
    k = t.kind
    if k is LitKind.INTEGER:
        return f"<OMI>{t.payload}</OMI>"
    if k is LitKind.FLOAT64:
        x = t.payload
        if ast.finite_float(x) and float(repr(x)) == x and ast.float_bits(float(repr(x))) == ast.float_bits(x):
            return f"<OMF dec={quoteattr(repr(x))}/>"
        return f'<OMF hex="{ast.float_bits(x):016X}"/>'
    if k is LitKind.STRING:
        return f"<OMSTR>{escape(t.payload)}</OMSTR>"
    if k is LitKind.BYTES:
        return f"<OMB>{base64.b64encode(t.payload).decode('ascii')}</OMB>"
    raise Unprintable(f"{k.value} literal has no OpenMath encoding; translate it first")
