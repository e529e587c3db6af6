"""Readers and writers for the on-disk artifacts.

Case files
    UTF-8, one JSON object per line with string-valued keys ``plaintiff``,
    ``tax_base``, ``tax_paid``, ``assessed_debt`` and ``assessed_penalty``.
    Amounts are decimal strings with at most two fractional digits; JSON
    numbers are rejected so nothing passes through binary floating point.
    Blank lines and lines starting with ``#`` are skipped.

Constitution files
    One rule per line::

        name OS Constitution (paper)
        allow sysadmin deactivate system
        deny program uninstall program

    Requesters are ``sysadmin|system|program``, actions
    ``deactivate|uninstall``, targets ``system|program``.  A type may be
    ruled once; unruled types are denied with a warning.

Replay scripts
    Same token set as constitutions::

        believe allow sysadmin deactivate system
        case sysadmin deactivate program

    ``believe`` lines set the lawyer's initial knowledge (unlisted types
    start as "denied"); ``case`` lines give the request sequence in order.

Trace exports
    A JSON document (``format: "lexmodel-trace/1"``) with the seed, initial
    knowledge, every court record and the final autonomy, plus a plain-text
    log holding one judgment line per case.

Every parse error is a :class:`FormatError` carrying a 1-based line number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .adjudicator import CaseValidationError, TaxCase
from .court import (
    N_REQUEST_TYPES,
    Action,
    Actor,
    Constitution,
    CourtRecord,
    RequestType,
    SimulationTrace,
)
from .money import MoneyParseError, format_money_2dp, parse_money

CASE_KEYS = ("plaintiff", "tax_base", "tax_paid", "assessed_debt", "assessed_penalty")
TRACE_FORMAT = "lexmodel-trace/1"

_REQUESTERS = {"sysadmin": Actor.SYSADMIN, "system": Actor.SYSTEM, "program": Actor.PROGRAM}
_ACTIONS = {"deactivate": Action.DEACTIVATE, "uninstall": Action.UNINSTALL}
_TARGETS = {"system": Actor.SYSTEM, "program": Actor.PROGRAM}


class FormatError(ValueError):
    def __init__(self, line: int, token: str, message: str, source: str = "<input>") -> None:
        super().__init__(f"{source}:{line}: {message} ({token!r})")
        self.line = line
        self.token = token
        self.message = message
        self.source = source


def _content_lines(text: str):
    # LF only: str.splitlines would also break on U+2028 etc. inside JSON strings
    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


# -- case files ---------------------------------------------------------------


@dataclass(frozen=True)
class CaseFile:
    cases: tuple[TaxCase, ...]
    line_numbers: tuple[int, ...]
    source: str = "<input>"


def read_case_file(text: str, source: str = "<input>") -> CaseFile:
    cases, numbers = [], []
    for number, line in _content_lines(text):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(number, line[:40], f"malformed record: {exc.msg}", source) from None
        if not isinstance(obj, dict):
            raise FormatError(number, line[:40], "record must be a JSON object", source)
        unknown = sorted(set(obj) - set(CASE_KEYS))
        if unknown:
            raise FormatError(number, unknown[0], "unknown field", source)
        for key in CASE_KEYS:
            if key not in obj:
                raise FormatError(number, key, "missing field", source)
            if not isinstance(obj[key], str):
                raise FormatError(number, key, "field must be a string", source)
        try:
            amounts = [parse_money(obj[key]) for key in CASE_KEYS[1:]]
        except MoneyParseError:
            bad = next(k for k in CASE_KEYS[1:] if not _parses(obj[k]))
            raise FormatError(number, bad, f"invalid amount {obj[bad]!r}", source) from None
        try:
            case = TaxCase(obj["plaintiff"], *amounts)
        except CaseValidationError as exc:
            key = "tax_base" if exc.field == "income" else exc.field
            raise FormatError(number, key, str(exc).replace("income", "tax_base", 1), source) from None
        cases.append(case)
        numbers.append(number)
    return CaseFile(tuple(cases), tuple(numbers), source)


def _parses(text: str) -> bool:
    try:
        parse_money(text)
    except MoneyParseError:
        return False
    return True


def parse_cases(text: str, source: str = "<input>") -> list[TaxCase]:
    return list(read_case_file(text, source).cases)


def serialize_cases(cases) -> str:
    lines = []
    for case in cases:
        record = {
            "plaintiff": case.plaintiff,
            "tax_base": format_money_2dp(case.income),
            "tax_paid": format_money_2dp(case.tax_paid),
            "assessed_debt": format_money_2dp(case.assessed_debt),
            "assessed_penalty": format_money_2dp(case.assessed_penalty),
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


# -- request triples ----------------------------------------------------------


def _request(tokens: list[str], number: int, source: str) -> RequestType:
    if len(tokens) != 3:
        raise FormatError(number, " ".join(tokens), "expected <requester> <action> <target>", source)
    requester, action, target = (t.lower() for t in tokens)
    if requester not in _REQUESTERS:
        raise FormatError(number, tokens[0], "unknown requester", source)
    if action not in _ACTIONS:
        raise FormatError(number, tokens[1], "unknown action", source)
    if target == "sysadmin":
        raise FormatError(number, tokens[2], "invalid target", source)
    if target not in _TARGETS:
        raise FormatError(number, tokens[2], "unknown target", source)
    return RequestType(_REQUESTERS[requester], _ACTIONS[action], _TARGETS[target])


def _request_tokens(request: RequestType) -> str:
    return f"{request.requester.name.lower()} {request.action.name.lower()} {request.target.name.lower()}"


# -- constitutions ------------------------------------------------------------


@dataclass(frozen=True)
class ConstitutionRule:
    line: int
    request: RequestType
    allow: bool


@dataclass(frozen=True)
class ConstitutionSource:
    text: str
    rules: tuple[ConstitutionRule, ...]
    constitution: Constitution
    warnings: tuple[str, ...] = ()
    source: str = "<input>"


def read_constitution(text: str, source: str = "<input>", name: str | None = None) -> ConstitutionSource:
    rules: dict[int, ConstitutionRule] = {}
    declared_name = None
    for number, line in _content_lines(text):
        keyword, *rest_parts = line.split(None, 1)
        keyword = keyword.lower()
        rest = rest_parts[0] if rest_parts else ""
        if keyword == "name":
            if not rest.strip():
                raise FormatError(number, line, "name needs a value", source)
            declared_name = rest.strip()
            continue
        if keyword not in ("allow", "deny"):
            raise FormatError(number, keyword, "expected allow, deny or name", source)
        request = _request(rest.split(), number, source)
        if request.index in rules:
            first = rules[request.index].line
            raise FormatError(number, rest.strip(), f"duplicate rule (first ruled on line {first})", source)
        rules[request.index] = ConstitutionRule(number, request, keyword == "allow")

    warnings = []
    permissions = []
    for index in range(N_REQUEST_TYPES):
        if index in rules:
            permissions.append(rules[index].allow)
        else:
            request = RequestType.from_index(index)
            warnings.append(f"{source}: no rule for '{_request_tokens(request)}', defaulting to deny")
            permissions.append(False)
    constitution = Constitution(tuple(permissions), name or declared_name or "OS Constitution")
    ordered = tuple(sorted(rules.values(), key=lambda r: r.line))
    return ConstitutionSource(text, ordered, constitution, tuple(warnings), source)


def parse_constitution(text: str, source: str = "<input>") -> Constitution:
    return read_constitution(text, source).constitution


def serialize_constitution(constitution: Constitution) -> str:
    lines = [f"name {constitution.name}"]
    for index, allowed in enumerate(constitution.permissions):
        verb = "allow" if allowed else "deny"
        lines.append(f"{verb} {_request_tokens(RequestType.from_index(index))}")
    return "\n".join(lines) + "\n"


# -- replay scripts -----------------------------------------------------------


@dataclass(frozen=True)
class ReplayScript:
    initial_knowledge: tuple[bool, ...]
    cases: tuple[RequestType, ...]
    source: str = "<input>"


def parse_replay_script(text: str, source: str = "<input>") -> ReplayScript:
    knowledge: dict[int, tuple[int, bool]] = {}
    cases = []
    for number, line in _content_lines(text):
        tokens = line.split()
        keyword = tokens[0].lower()
        if keyword == "believe":
            if len(tokens) < 2 or tokens[1].lower() not in ("allow", "deny"):
                raise FormatError(number, tokens[1] if len(tokens) > 1 else line, "expected allow or deny", source)
            request = _request(tokens[2:], number, source)
            if request.index in knowledge:
                raise FormatError(number, " ".join(tokens[2:]), "belief already set", source)
            knowledge[request.index] = (number, tokens[1].lower() == "allow")
        elif keyword == "case":
            cases.append(_request(tokens[1:], number, source))
        else:
            raise FormatError(number, tokens[0], "expected believe or case", source)
    if not cases:
        raise FormatError(max(1, len(text.splitlines())), "", "replay script has no case lines", source)
    initial = tuple(knowledge.get(i, (0, False))[1] for i in range(N_REQUEST_TYPES))
    return ReplayScript(initial, tuple(cases), source)


def serialize_replay_script(script: ReplayScript) -> str:
    lines = []
    for index, belief in enumerate(script.initial_knowledge):
        verb = "allow" if belief else "deny"
        lines.append(f"believe {verb} {_request_tokens(RequestType.from_index(index))}")
    lines.extend(f"case {_request_tokens(r)}" for r in script.cases)
    return "\n".join(lines) + "\n"


# -- traces -------------------------------------------------------------------


@dataclass(frozen=True)
class TraceExport:
    document: str
    log: str


def export_trace(trace: SimulationTrace) -> TraceExport:
    doc = {
        "format": TRACE_FORMAT,
        "constitution": trace.constitution_name,
        "seed": trace.seed,
        "initial_knowledge": list(trace.initial_knowledge) if trace.initial_knowledge is not None else None,
        "records": [
            {
                "case_no": r.case_no,
                "request": r.request.index,
                "request_text": r.request.text,
                "opinion": r.opinion,
                "lawyer_objected": r.lawyer_objected,
                "lawyer_correct": r.lawyer_correct,
                "autonomy": r.autonomy_text,
                "judgment": r.judgment_text,
            }
            for r in trace.records
        ],
        "final_autonomy": trace.final_autonomy_text,
    }
    document = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    log = "".join(line + "\n" for line in trace.log_lines())
    return TraceExport(document, log)


def _line_of(text: str, needle: str, start: int = 0) -> int:
    pos = text.find(needle, start)
    return text.count("\n", 0, pos) + 1 if pos >= 0 else 1


def parse_trace(document: str, source: str = "<input>") -> SimulationTrace:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        lines = document.split("\n")
        token = lines[exc.lineno - 1][:40] if exc.lineno <= len(lines) else ""
        raise FormatError(exc.lineno, token, f"malformed trace: {exc.msg}", source) from None
    if not isinstance(doc, dict) or doc.get("format") != TRACE_FORMAT:
        raise FormatError(_line_of(document, '"format"'), str(doc.get("format") if isinstance(doc, dict) else doc),
                          f"expected format {TRACE_FORMAT}", source)
    records = []
    for position, raw in enumerate(doc.get("records") or [], start=1):
        line = _line_of(document, f'"case_no": {raw.get("case_no") if isinstance(raw, dict) else ""}')
        try:
            record = CourtRecord(
                case_no=int(raw["case_no"]),
                request=RequestType.from_index(int(raw["request"])),
                opinion=bool(raw["opinion"]),
                lawyer_objected=bool(raw["lawyer_objected"]),
                lawyer_correct=bool(raw["lawyer_correct"]),
                autonomy_text=str(raw["autonomy"]),
                judgment_text=str(raw["judgment"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(line, str(exc), "invalid trace record", source) from None
        if record.case_no != position:
            raise FormatError(line, str(record.case_no), "records must be numbered consecutively from 1", source)
        records.append(record)
    knowledge = doc.get("initial_knowledge")
    seed = doc.get("seed")
    return SimulationTrace(
        constitution_name=str(doc.get("constitution", "")),
        records=tuple(records),
        seed=None if seed is None else int(seed),
        initial_knowledge=None if knowledge is None else tuple(bool(k) for k in knowledge),
    )


# -- bundled data -------------------------------------------------------------


def bundled_text(name: str) -> str:
    from importlib.resources import files

    return files("lexmodel.data").joinpath(name).read_text(encoding="utf-8")


def reference_constitution_text() -> str:
    return bundled_text("os_constitution.rules")


__all__ = [
    "CASE_KEYS",
    "CaseFile",
    "ConstitutionRule",
    "ConstitutionSource",
    "FormatError",
    "ReplayScript",
    "TraceExport",
    "bundled_text",
    "export_trace",
    "parse_cases",
    "parse_constitution",
    "parse_replay_script",
    "parse_trace",
    "read_case_file",
    "read_constitution",
    "reference_constitution_text",
    "serialize_cases",
    "serialize_constitution",
    "serialize_replay_script",
]
