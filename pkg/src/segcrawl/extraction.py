"""Rule-driven extraction of targeted values from fetched page bodies.

Rules are regular expressions over the raw body text; matching is
non-overlapping and leftmost-first, and extract() is a pure function, so the
rule set can be shared read-only by every parse worker.
"""

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Pattern

from .errors import RuleError
from .types import FetchStatus, TargetedRecord, WebDocument


@dataclass(frozen=True)
class ExtractionRule:
    """A named pattern; `group` selects the capture to emit as the value."""

    name: str
    pattern: str
    group: int = 1
    max_matches: int | None = None

    def __post_init__(self):
        try:
            compiled = re.compile(self.pattern)
        except re.error as exc:
            raise RuleError(f"rule {self.name!r}: pattern does not compile: {exc}",
                            rule_name=self.name) from exc
        if not isinstance(self.group, int) or self.group < 1:
            raise RuleError(f"rule {self.name!r}: group must be an integer >= 1",
                            rule_name=self.name)
        if self.group > compiled.groups:
            raise RuleError(
                f"rule {self.name!r}: capture group {self.group} out of range "
                f"(pattern has {compiled.groups})",
                rule_name=self.name,
            )
        if self.max_matches is not None and (
            not isinstance(self.max_matches, int) or self.max_matches < 1
        ):
            raise RuleError(f"rule {self.name!r}: max_matches must be a positive "
                            "integer or null", rule_name=self.name)
        object.__setattr__(self, "_compiled", compiled)

    @property
    def compiled(self) -> Pattern[str]:
        return self._compiled  # type: ignore[attr-defined]


@dataclass(frozen=True)
class RuleSet:
    """Ordered, immutable collection of uniquely named rules."""

    rules: tuple[ExtractionRule, ...] = ()

    def __post_init__(self):
        seen: set[str] = set()
        for position, rule in enumerate(self.rules):
            if rule.name in seen:
                raise RuleError(f"duplicate rule name {rule.name!r}",
                                rule_name=rule.name, position=position)
            seen.add(rule.name)

    def __iter__(self) -> Iterator[ExtractionRule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)


def compile_rules(spec_text: str) -> RuleSet:
    """Parse and validate a rules document.

    The document is a JSON array of objects with keys "name" and "pattern"
    (required), "group" (default 1) and "max_matches" (default null =
    unlimited). Every problem is reported with the offending rule's name
    and position.
    """
    try:
        payload = json.loads(spec_text)
    except json.JSONDecodeError as exc:
        raise RuleError(f"rules document is not valid JSON: {exc}") from exc
    if not isinstance(payload, list):
        raise RuleError("rules document must be a JSON array of rule objects")
    rules = []
    for position, entry in enumerate(payload):
        if not isinstance(entry, dict):
            raise RuleError(f"rule #{position} is not an object", position=position)
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise RuleError(f"rule #{position} needs a non-empty string name",
                            position=position)
        pattern = entry.get("pattern")
        if not isinstance(pattern, str):
            raise RuleError(f"rule {name!r} needs a string pattern",
                            rule_name=name, position=position)
        unknown = set(entry) - {"name", "pattern", "group", "max_matches"}
        if unknown:
            raise RuleError(f"rule {name!r} has unknown keys: {sorted(unknown)}",
                            rule_name=name, position=position)
        rules.append(ExtractionRule(
            name=name,
            pattern=pattern,
            group=entry.get("group", 1),
            max_matches=entry.get("max_matches"),
        ))
    return RuleSet(tuple(rules))


def load_rules(path: str | Path) -> RuleSet:
    with open(path, encoding="utf-8") as fh:
        return compile_rules(fh.read())


def extract(document: WebDocument, rules: RuleSet) -> list[TargetedRecord]:
    """Run every rule, in order, over a successfully fetched document.

    Matches are scanned in document order; each rule stops at its
    max_matches cap. Zero matches is a valid empty result. Failed documents
    are the caller's problem (they belong in the error list, not here).
    """
    if document.status is not FetchStatus.OK:
        raise ValueError("extract() requires a successfully fetched document")
    records = []
    for rule in rules:
        emitted = 0
        for match in rule.compiled.finditer(document.body):
            value = match.group(rule.group)
            records.append(TargetedRecord(
                url=document.url,
                dataset_index=document.dataset_index,
                rule_name=rule.name,
                value=value if value is not None else "",
                segment_id=document.segment_id,
            ))
            emitted += 1
            if rule.max_matches is not None and emitted >= rule.max_matches:
                break
    return records
