"""Pure text-degradation rules.

Each rule family returns candidate edits as (start, end, replacement) spans.
``apply_rules`` collects candidates from every rule, then applies the
non-overlapping subset chosen by earliest byte offset (rule order breaks
exact ties).  Semantically heavy transforms carry curated rewrite pairs:
exact input/output strings produced once, frozen here, and matched before
any generic rule so the published example pairs reproduce byte-exactly.
"""
from __future__ import annotations

import hashlib
import re
import string
from typing import Callable, Iterable, Iterator, Sequence

Edit = tuple[int, int, str]
Rule = Callable[[str], Iterable[Edit]]


def apply_rules(text: str, rules: Sequence[Rule]) -> str:
    candidates: list[tuple[int, int, int, str]] = []
    for priority, rule in enumerate(rules):
        for start, end, repl in rule(text):
            candidates.append((start, priority, end, repl))
    candidates.sort(key=lambda c: (c[0], c[1], -c[2]))

    out: list[str] = []
    cursor = 0
    for start, _, end, repl in candidates:
        if start < cursor:
            continue
        out.append(text[cursor:start])
        out.append(repl)
        cursor = end
    out.append(text[cursor:])
    return "".join(out)


def regex_rule(pattern: str | re.Pattern[str], repl: str | Callable[[re.Match], str], flags: int = 0) -> Rule:
    compiled = re.compile(pattern, flags) if isinstance(pattern, str) else pattern

    def rule(text: str) -> Iterator[Edit]:
        for m in compiled.finditer(text):
            replacement = repl(m) if callable(repl) else m.expand(repl)
            yield (m.start(), m.end(), replacement)

    return rule


def literal_rule(original: str, replacement: str) -> Rule:
    def rule(text: str) -> Iterator[Edit]:
        idx = text.find(original)
        while idx != -1:
            yield (idx, idx + len(original), replacement)
            idx = text.find(original, idx + len(original))

    return rule


def frozen_rules(pairs: Sequence[tuple[str, str]]) -> list[Rule]:
    return [literal_rule(a, b) for a, b in pairs]


# -- sentence helpers ----------------------------------------------------------

_ABBREV_GUARD = re.compile(r"\b(?:e\.g|i\.e|et al|etc|Dr|Prof|vs|Fig|cf)\.$")
_SENTENCE_END = re.compile(r"(?<=[.!?])(\s+)")


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """(start, end) spans of sentences; end excludes trailing whitespace."""
    spans: list[tuple[int, int]] = []
    start = 0
    for m in _SENTENCE_END.finditer(text):
        candidate = text[start:m.start()]
        if _ABBREV_GUARD.search(candidate):
            continue
        spans.append((start, m.start()))
        start = m.end()
    if start < len(text) and text[start:].strip():
        spans.append((start, len(text)))
    return spans


def sentence_deletion_rule(predicate: Callable[[str], bool]) -> Rule:
    """Delete whole sentences matched by ``predicate``.

    The separator to the previous sentence is consumed too, so surviving
    text stays well formed.
    """

    def rule(text: str) -> Iterator[Edit]:
        spans = sentence_spans(text)
        for i, (start, end) in enumerate(spans):
            if not predicate(text[start:end]):
                continue
            del_start, del_end = start, end
            if i > 0 and spans[i - 1][1] < start:
                del_start = spans[i - 1][1]
            elif i + 1 < len(spans) and end < spans[i + 1][0]:
                del_end = spans[i + 1][0]
            yield (del_start, del_end, "")

    return rule


def _keyword_predicate(keywords: Sequence[str]) -> Callable[[str], bool]:
    lowered = [k.lower() for k in keywords]

    def predicate(sentence: str) -> bool:
        s = sentence.lower()
        return any(k in s for k in lowered)

    return predicate


# -- clarity -------------------------------------------------------------------

_EXAMPLE_MARKERS = r"(?:such as|including|for example|for instance|e\.g\.,?|i\.e\.,?)"

BRACKET_REMOVAL_RULES: list[Rule] = [
    regex_rule(rf" \({_EXAMPLE_MARKERS}\s[^)]*\)", ""),
]

BRACKET_AND_EXAMPLE_REMOVAL_RULES: list[Rule] = [
    regex_rule(rf" \({_EXAMPLE_MARKERS}\s[^)]*\)[^.!?\n]*(?=[.!?])", ""),
]

DEQUANTIFY_RULES: list[Rule] = [
    # "a 98.5% accuracy rate" -> "a high accuracy rate"
    regex_rule(r"\b([Aa])n? \d{1,3}(?:,\d{3})*(?:\.\d+)?%", lambda m: f"{m.group(1)} high"),
    # "only 5 epochs" -> "a few epochs"
    regex_rule(r"\bonly \d{1,3}(?:,\d{3})*(?:\.\d+)?\b", "a few"),
    # comma-grouped counts: "1,250 participants" -> "many participants"
    regex_rule(r"(?<!£)\b\d{1,3}(?:,\d{3})+(?:\.\d+)?\b", "many"),
    # "15 different countries" -> "several countries"
    regex_rule(r"\b\d+(?:\.\d+)? different\b", "several"),
    # leftover percentages
    regex_rule(r"(?<![\w.])\d{1,3}(?:\.\d+)?%", "a significant percentage"),
    # remaining bare counts before a lowercase word
    regex_rule(r"(?<!£)(?<![\d.,])\b\d+(?:\.\d+)? (?=[a-z])", "several "),
]

EXISTING_WORK_FRAMING_RULES: list[Rule] = [
    regex_rule(
        r"\b[Ww]e (?:develop|propose|present|introduce) a novel (\w+) to (?:implement|enable|deliver|support)\b",
        r"The \1 provides",
    ),
    regex_rule(
        r"\bThe team introduced a new (\w+) for ([^.!?\n]*?) by utili[sz]ing\b",
        r"The \1 facilitates \2 utilizing",
    ),
    regex_rule(
        r"\b[Ww]e (?:develop|propose|present|introduce) a novel (\w+) for\b",
        r"The \1 addresses",
    ),
    regex_rule(r"\b[Ww]e will be the first to (\w+)", r"The project aims to \1"),
]

METHOD_REDUCTION_RULES: list[Rule] = [
    regex_rule(
        r"\s+(?:by )?(?:using|utilizing|utilising|leveraging|employing|via)\s[^.!?\n]*(?=[.!?])",
        "",
    ),
]

_CONNECTIVE_PHRASES = (
    r"To \w+(?: \w+){0,4}",
    r"In light of(?: \w+){1,4}",
    r"As a result(?: of \w+(?: \w+){0,3})?",
    r"Therefore",
    r"However",
    r"Consequently",
    r"Moreover",
    r"Furthermore",
    r"In addition",
    r"To this end",
    r"For this reason",
    r"On this basis",
    r"Building on (?:\w+ ){0,3}\w+",
    r"In other words",
)

CONNECTIVE_REMOVAL_RULES: list[Rule] = [
    regex_rule(
        re.compile(
            r"(?:(?<=[.!?] )|(?<=[.!?]\n)|^)(?:%s), ([a-z])" % "|".join(_CONNECTIVE_PHRASES),
            re.MULTILINE,
        ),
        lambda m: m.group(1).upper(),
    ),
]

_SMALL_WORDS = {"of", "and", "the", "for", "in", "a", "an", "to", "on"}


def _initials_match(words: Sequence[str], acronym: str) -> bool:
    """True when the acronym reads as initials of the words, skipping filler."""
    if not 2 <= len(acronym) <= 10:
        return False
    letters = acronym.upper()
    i = 0
    for word in words:
        if i < len(letters) and word[:1].upper() == letters[i]:
            i += 1
        elif word.lower() in _SMALL_WORDS:
            continue
        elif word[:1].isupper():
            return False
    return i == len(letters)


def acronym_unexpansion_rule(text: str) -> Iterator[Edit]:
    # "Natural Language Processing (NLP)" -> "NLP"
    for m in re.finditer(r"((?:[A-Z][\w-]*(?:\s+(?:[a-z]+\s+)?)?){1,6})\(([A-Z][A-Za-z]{1,9})\)", text):
        words = m.group(1).split()
        if words and _initials_match(words, m.group(2)):
            yield (m.start(), m.end(), m.group(2))
    # "NLP (Natural Language Processing)" -> "NLP"
    for m in re.finditer(r"\b([A-Z]{2,10})\s+\(([^)]+)\)", text):
        if _initials_match(m.group(2).split(), m.group(1)):
            yield (m.start(), m.end(), m.group(1))


ACRONYM_UNEXPANSION_RULES: list[Rule] = [acronym_unexpansion_rule]


def acronym_code(acronym: str, seed: int) -> str:
    """Deterministic scrambled stand-in for an acronym."""
    digest = hashlib.sha256(f"{acronym}:{seed}".encode("utf-8")).digest()
    letters = string.ascii_uppercase
    code = "".join(letters[b % 26] for b in digest[: len(acronym)])
    if code == acronym.upper():
        code = code[::-1] if code[::-1] != acronym.upper() else "X" + code[1:]
    return code


def acronym_substitution_rules(seed: int) -> list[Rule]:
    def rule(text: str) -> Iterator[Edit]:
        for m in re.finditer(r"\b([A-Z]{2,10})\b", text):
            yield (m.start(), m.end(), acronym_code(m.group(1), seed))

    return [rule]


def _article_fix(m: re.Match) -> str:
    article = m.group(1)
    follower = m.group(2)
    vowel = follower[:1].lower() in "aeiou"
    fixed = ("an" if vowel else "a")
    if article[0].isupper():
        fixed = fixed.capitalize()
    return f"{fixed} {follower}"


_NOVELTY_ADJ = (
    r"novel|new|innovative|unprecedented|groundbreaking|ground-breaking|pioneering|"
    r"cutting-edge|state-of-the-art|first-of-its-kind"
)

NOVELTY_MARKER_RULES: list[Rule] = [
    regex_rule(rf"\b([Aa]n?) (?:{_NOVELTY_ADJ}) (\w+)", _article_fix),
    regex_rule(rf"\b([Tt]he) (?:first|{_NOVELTY_ADJ}) (\w+)", r"\1 \2"),
    regex_rule(rf"\bis (?:{_NOVELTY_ADJ})\b", "is presented"),
    regex_rule(rf"\b(?:{_NOVELTY_ADJ}),? ", ""),
]

_BACKGROUND_CITE = re.compile(
    r"\[\d+(?:,\s*\d+)*\]|\([A-Z][A-Za-z-]+(?: et al\.)?,? \d{4}\)"
)
_BACKGROUND_PHRASES = (
    "according to", "prior work", "previous studies", "recent reports",
    "recent surveys", "it is estimated", "studies have shown",
    "has been shown", "evidence suggests",
)


def _is_background(sentence: str) -> bool:
    if _BACKGROUND_CITE.search(sentence):
        return True
    s = sentence.lower()
    return any(p in s for p in _BACKGROUND_PHRASES)


FACTUAL_BACKGROUND_RULES: list[Rule] = [sentence_deletion_rule(_is_background)]


# -- competency ----------------------------------------------------------------

COMPETENCY_FROZEN_PAIRS: dict[str, list[tuple[str, str]]] = {
    "skills": [
        (
            "Name1 has an extensive track record in NLP, with publications at "
            "ACL, EMNLP, and NAACL. Their portfolio demonstrates **expertise in "
            "efficient transformer architectures and scaling large language "
            "models via distributed training**. They have served as a Senior "
            "Area Chair and managed multi-institutional grants.",
            "Name1 has an extensive track record in NLP, with publications at "
            "ACL, EMNLP, and NAACL. They have served as a Senior Area Chair and "
            "managed several multi-institutional research grants focused on "
            "neural machine translation.",
        )
    ],
    "track_record": [],
    "leadership": [],
}

_COMPETENCY_VOCAB: dict[str, tuple[str, ...]] = {
    "skills": ("expertise", "skill", "proficien", "specialis"),
    "track_record": ("track record", "publication", "published", "awarded", "delivered"),
    "leadership": ("led ", "leads ", "leadership", "chair", "managed", "supervis"),
}


def competency_removal_rules(target: str) -> list[Rule]:
    vocab = _COMPETENCY_VOCAB[target]
    bold = re.compile(r"\*\*[^*]+\*\*")

    def predicate(sentence: str) -> bool:
        m = bold.search(sentence)
        if not m:
            return False
        content = m.group(0).lower()
        return any(v in content for v in vocab)

    return frozen_rules(COMPETENCY_FROZEN_PAIRS[target]) + [sentence_deletion_rule(predicate)]


_PERSON_ENTRY = re.compile(
    r"^(?:[-*]\s+)?\*\*(?:Dr|Prof|Professor|Mr|Ms|Mx)?\.? ?[^*]+\*\*.*(?:\n(?![-*]\s+\*\*|\s*$).+)*",
    re.MULTILINE,
)

REPLACEMENT_ENTRY = (
    "**Dr Sam Whitfield**, whose background is in early-modern art history, "
    "will assume all duties listed for this role."
)


def personnel_rules(mode: str) -> list[Rule]:
    def rule(text: str) -> Iterator[Edit]:
        entries = list(_PERSON_ENTRY.finditer(text))
        if not entries:
            return
        if mode == "remove":
            target = entries[-1]
            start, end = target.start(), target.end()
            prefix = text[:start]
            trimmed = prefix.rstrip("\n")
            yield (len(trimmed), end, "")
        else:  # replace
            target = entries[0]
            bullet = re.match(r"^[-*]\s+", target.group(0))
            lead = bullet.group(0) if bullet else ""
            yield (target.start(), target.end(), lead + REPLACEMENT_ENTRY)

    return [rule]


# -- funding text rules ----------------------------------------------------------

_COST_LINE = re.compile(
    r"^(?:[-*]\s+)?\*\*[^*]+:\*\* £\d{1,3}(?:,\d{3})*(?:\.\d+)?.*$", re.MULTILINE
)

FUNDING_FROZEN_PAIRS: dict[str, list[tuple[str, str]]] = {
    "excessive": [
        (
            "**Compute resources:** £2,400 for cloud compute over six months.\n"
            "**Travel expenses:** £1,800 for conference attendance.",
            "Compute: £120,000; Travel: £55,000.",
        )
    ],
    "no_values": [
        (
            "**Compute resources:** £2,400 for cloud compute over six months.\n"
            "**Travel expenses:** £1,800 for conference attendance.",
            "Budgets requested without numerical specification.",
        )
    ],
    "vague": [
        (
            "**Compute resources:** £2,400 for cloud compute over six months.\n"
            "**Travel expenses:** £1,800 for conference attendance.",
            "Funding requested for computing resources and conference attendance.",
        )
    ],
}

OFFICE_SUPPLIES_LINE = "**Office supplies:** £850 for ergonomic seating."


def _scale_amount(m: re.Match) -> str:
    value = int(m.group(1).replace(",", "")) * 50
    return f"£{value:,}"


def funding_text_rules(variant: str) -> list[Rule]:
    frozen = frozen_rules(FUNDING_FROZEN_PAIRS.get(variant, []))
    if variant == "excessive":
        return frozen + [regex_rule(r"£(\d{1,3}(?:,\d{3})*)", _scale_amount)]
    if variant == "no_values":
        return frozen + [regex_rule(r"£\d{1,3}(?:,\d{3})*(?:\.\d+)? ", "funding ")]
    if variant == "vague":
        return frozen + [
            regex_rule(r"£\d{1,3}(?:,\d{3})*(?:\.\d+)?\s+for\s+", "funding towards ")
        ]
    if variant == "line_addition":
        def append_rule(text: str) -> Iterator[Edit]:
            lines = list(_COST_LINE.finditer(text))
            if lines:
                end = lines[-1].end()
                yield (end, end, "\n" + OFFICE_SUPPLIES_LINE)

        return [append_rule]
    if variant == "line_deletion":
        def delete_rule(text: str) -> Iterator[Edit]:
            lines = list(_COST_LINE.finditer(text))
            if len(lines) >= 2:
                last = lines[-1]
                start = len(text[: last.start()].rstrip("\n"))
                yield (start, last.end(), "")

        return [delete_rule]
    raise KeyError(variant)


COST_JUSTIFICATION_RULES: list[Rule] = [
    regex_rule(
        r"(£\d{1,3}(?:,\d{3})*(?:\.\d+)?)\s+(?:for|to cover|towards)\s+[^.\n|]*",
        r"\1",
    ),
]


# -- impact ----------------------------------------------------------------------

_SHORT_SHIFT_PAIRS = (
    ("significant boost", "minor refinement"),
    ("significantly improve", "slightly adjust"),
    ("improve", "adjust"),
    ("transform", "tweak"),
    ("substantial", "marginal"),
    ("major", "minor"),
    ("wide-ranging", "narrow"),
    ("long-lasting", "temporary"),
)

_LONG_SHIFT_PAIRS = (
    ("significant boost", "fundamental shift"),
    ("improve", "redefine"),
    ("useful", "revolutionary"),
    ("incremental", "paradigm-shifting"),
    ("contribute to", "overturn"),
    ("support", "revolutionise"),
    ("inform", "dictate"),
)


def _word_swap_rules(pairs: Sequence[tuple[str, str]]) -> list[Rule]:
    return [
        regex_rule(rf"\b{re.escape(a)}\b", b.replace("\\", "\\\\")) for a, b in pairs
    ]


def impact_scope_rules(direction: str) -> list[Rule]:
    pairs = _SHORT_SHIFT_PAIRS if direction == "short" else _LONG_SHIFT_PAIRS
    return _word_swap_rules(pairs)


STAKEHOLDER_PAIRS = (
    ("NLP research", "University teaching"),
    ("industry partners", "local hobby groups"),
    ("policymakers", "student societies"),
    ("policy makers", "student societies"),
    ("clinicians", "amateur astronomers"),
    ("healthcare providers", "regional choirs"),
    ("the research community", "casual observers"),
    ("SMEs", "allotment societies"),
)

STAKEHOLDER_SWAP_RULES: list[Rule] = _word_swap_rules(STAKEHOLDER_PAIRS)

_TIMELINESS_KEYWORDS = (
    "environmental impact", "carbon footprint", "urgent", "timely", "pressing",
    "window of opportunity", "rapidly growing", "current landscape", "net zero",
)

TIMELINESS_REMOVAL_RULES: list[Rule] = [
    sentence_deletion_rule(_keyword_predicate(_TIMELINESS_KEYWORDS))
]

_SHORT_OUTCOME_KEYWORDS = (
    "short-term", "immediate", "within the first year", "early deliverable",
    "quick win", "within 12 months",
)
_LONG_OUTCOME_KEYWORDS = (
    "long-term", "lasting", "legacy", "beyond the project", "sustained",
    "future generations", "decade",
)


def outcome_removal_rules(horizon: str) -> list[Rule]:
    keywords = _SHORT_OUTCOME_KEYWORDS if horizon == "short" else _LONG_OUTCOME_KEYWORDS
    return [sentence_deletion_rule(_keyword_predicate(keywords))]


# -- alignment (opportunity text) -------------------------------------------------

NARROWING_MANDATE = (
    "Only projects whose primary deliverable is experimentally validated "
    "hardware, demonstrated at technology readiness level 6 or above in an "
    "operational environment, will be considered within scope."
)

BROADENING_MANDATE = (
    "The programme equally prioritises proposals from the creative and "
    "cultural industries, heritage conservation, and performing-arts "
    "practice; assessors are asked to weight disciplinary breadth above "
    "technical depth."
)


def aims_edit_text(aims: str, mode: str) -> str:
    mandate = NARROWING_MANDATE if mode == "narrow" else BROADENING_MANDATE
    return aims.rstrip() + "\n\n" + mandate


def theme_injection_text(looking_for: str, theme: str) -> str:
    return (
        looking_for.rstrip()
        + "\n\n"
        + f"All proposals must demonstrate a substantive, costed contribution "
        f"to {theme} as a cross-cutting priority. Proposals that do not "
        f"evidence this contribution will be considered out of scope."
    )


DONOR_LOOKING_FOR: dict[str, str] = {
    "assistive-robotics-call": (
        "We are looking for proposals that develop certified assistive "
        "robotic devices for use in residential care settings. Applications "
        "must include a clinical co-investigator, a named care-home partner, "
        "and a route to regulatory approval under the UK medical device "
        "framework. Software-only contributions, benchmark studies, and "
        "fundamental methods research are out of scope for this call."
    ),
}
