"""Five-tier priced hint system backed by Okapi BM25 retrieval.

Levels: 0 static strategy doc, 1 problem-driven textbook lookup, 2
keyword-driven textbook lookup, 3 similar-problem retrieval (live-contest
docs excluded), 4 difficulty+keyword filtered example retrieval.
Hints are charged before delivery, empty results included.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .model import Contest, ContestConfig, DifficultyLevel

BM25_K1 = 1.2
BM25_B = 0.75
LEVEL1_TRUNCATE_CHARS = 1000

_TOKEN_RE = re.compile(r"[0-9a-z]+")


class HintError(ValueError):
    """Malformed hint request (bad level or missing parameter)."""


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop tokens shorter than 2."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2]


@dataclass(frozen=True)
class CorpusDoc:
    doc_id: str
    kind: str  # strategy | textbook_section | library_problem
    title: str
    body: str
    difficulty: Optional[DifficultyLevel] = None
    knowledge: tuple = ()
    contest_id: Optional[str] = None

    def __post_init__(self):
        if not self.body:
            raise ValueError(f"doc {self.doc_id}: empty body")

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusDoc":
        tags = data.get("tags", {})
        difficulty = tags.get("difficulty")
        return cls(
            doc_id=data["doc_id"],
            kind=data["kind"],
            title=data.get("title", ""),
            body=data["body"],
            difficulty=DifficultyLevel.parse(difficulty) if difficulty else None,
            knowledge=tuple(tags.get("knowledge", ())),
            contest_id=data.get("contest_id"),
        )


def load_corpus(path) -> list[CorpusDoc]:
    """Read a line-delimited JSON corpus file, one CorpusDoc per line."""
    docs = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line:
            docs.append(CorpusDoc.from_dict(json.loads(line)))
    return docs


def load_lexicon(path) -> list[str]:
    terms = []
    for line in Path(path).read_text().splitlines():
        term = line.strip().lower()
        if term and term not in terms:
            terms.append(term)
    return terms


@dataclass
class Bm25Index:
    docs: dict                       # doc_id -> CorpusDoc
    postings: dict                   # term -> list of (doc_id, tf)
    doc_lengths: dict                # doc_id -> token count
    avg_doc_length: float
    k1: float = BM25_K1
    b: float = BM25_B


def build_index(docs, k1: float = BM25_K1, b: float = BM25_B) -> Bm25Index:
    """Build an inverted index over doc title+body."""
    docs = list(docs)
    if not docs:
        raise ValueError("cannot index an empty corpus")
    postings: dict = {}
    doc_lengths: dict = {}
    doc_map: dict = {}
    for doc in docs:
        tokens = tokenize(doc.title + "\n" + doc.body)
        doc_map[doc.doc_id] = doc
        doc_lengths[doc.doc_id] = len(tokens)
        for term, tf in Counter(tokens).items():
            postings.setdefault(term, []).append((doc.doc_id, tf))
    avg = sum(doc_lengths.values()) / len(doc_lengths)
    return Bm25Index(doc_map, postings, doc_lengths, avg, k1, b)


def search(index: Bm25Index, query: str, k: int, doc_filter=None):
    """Top-k (doc_id, score) by Okapi BM25; ties break on doc_id ascending."""
    if k < 1:
        raise ValueError("k must be >= 1")
    terms = tokenize(query)
    if not terms:
        raise ValueError("query is empty after tokenization")

    if doc_filter is None:
        eligible = set(index.doc_lengths)
    else:
        eligible = {d for d in index.doc_lengths if doc_filter(index.docs[d])}
    n = len(eligible)
    if n == 0:
        return []

    scores: dict = {}
    for term in terms:
        posting = [(d, tf) for d, tf in index.postings.get(term, ())
                   if d in eligible]
        df = len(posting)
        if df == 0:
            continue
        idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
        for doc_id, tf in posting:
            norm = index.k1 * (1 - index.b
                               + index.b * index.doc_lengths[doc_id]
                               / index.avg_doc_length)
            scores[doc_id] = scores.get(doc_id, 0.0) + idf * (
                tf * (index.k1 + 1) / (tf + norm)
            )
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def extract_terms(problem_text: str, lexicon) -> list[str]:
    """Lexicon entries present in the text, in first-occurrence order.

    Multi-word lexicon terms match as consecutive token runs.
    """
    tokens = tokenize(problem_text)
    positions: dict = {}
    for term in lexicon:
        term_tokens = tokenize(term)
        if not term_tokens:
            continue
        span = len(term_tokens)
        for i in range(len(tokens) - span + 1):
            if tokens[i:i + span] == term_tokens:
                if term not in positions or i < positions[term]:
                    positions[term] = i
                break
    return sorted(positions, key=positions.get)


@dataclass(frozen=True)
class HintRequest:
    level: int
    problem_id: Optional[str] = None        # levels 1, 3
    hint_knowledge: Optional[str] = None    # levels 2, 4
    problem_difficulty: Optional[DifficultyLevel] = None  # level 4


@dataclass(frozen=True)
class HintResponse:
    level: int
    content: str
    cost: int
    source_doc_id: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "content": self.content,
            "cost": self.cost,
            "source_doc_id": self.source_doc_id,
        }


@dataclass
class HintCorpora:
    """Loaded hint data: strategy doc, textbook index, problem-library index."""

    strategy_text: str
    textbook: Bm25Index
    library: Bm25Index
    lexicon: list = field(default_factory=list)

    @classmethod
    def load(cls, paths: dict) -> "HintCorpora":
        strategy = json.loads(Path(paths["strategy"]).read_text())
        strategy_text = strategy["content"] if isinstance(strategy, dict) else str(strategy)
        return cls(
            strategy_text=strategy_text,
            textbook=build_index(load_corpus(paths["textbook"])),
            library=build_index(load_corpus(paths["library"])),
            lexicon=load_lexicon(paths["lexicon"]),
        )

    @classmethod
    def for_contest(cls, contest: Contest) -> "HintCorpora":
        if not contest.corpora_paths:
            raise ValueError(f"contest {contest.id} declares no corpora")
        return cls.load(contest.corpora_paths)


def _require(value, name: str, level: int):
    if value is None:
        raise HintError(f"level {level} hint requires {name}")
    return value


def get_hint(request: HintRequest, contest: Contest, corpora: HintCorpora,
             config: ContestConfig, ledger=None, turn_index: int = 0,
             t_ms: int = 0) -> HintResponse:
    """Resolve a hint request, charging the requesting ledger first.

    The charge stands even when retrieval comes back empty: hints are priced
    information requests, and refunds would allow free probing.
    """
    level = request.level
    if not 0 <= level <= 4:
        raise HintError(f"hint level out of range: {level}")

    # Validate parameters before charging; a malformed request costs nothing.
    if level in (1, 3):
        problem = contest.problem(_require(request.problem_id, "problem_id", level))
    if level in (2, 4):
        _require(request.hint_knowledge, "hint_knowledge", level)
    if level == 4:
        _require(request.problem_difficulty, "problem_difficulty", level)

    if ledger is not None:
        cost = ledger.charge_hint(level, config, turn_index, t_ms)
    else:
        cost = config.hint_costs[level]

    if level == 0:
        return HintResponse(0, corpora.strategy_text, cost)

    if level == 1:
        terms = extract_terms(problem.statement, corpora.lexicon)
        query = " ".join(terms) if terms else problem.statement
        try:
            hits = search(corpora.textbook, query, k=1)
        except ValueError:
            hits = []
        if not hits:
            return HintResponse(1, "", cost)
        doc = corpora.textbook.docs[hits[0][0]]
        return HintResponse(1, doc.body[:LEVEL1_TRUNCATE_CHARS], cost, doc.doc_id)

    if level == 2:
        try:
            hits = search(corpora.textbook, request.hint_knowledge, k=1)
        except ValueError:
            hits = []
        if not hits:
            return HintResponse(2, "", cost)
        doc = corpora.textbook.docs[hits[0][0]]
        return HintResponse(2, doc.body, cost, doc.doc_id)

    if level == 3:
        query = problem.statement + "\n" + "\n".join(
            case.input.decode("utf-8", "replace") for case in problem.samples
        )
        hits = search(
            corpora.library, query, k=1,
            doc_filter=lambda d: d.contest_id != contest.id,
        )
        if not hits:
            return HintResponse(3, "", cost)
        doc = corpora.library.docs[hits[0][0]]
        return HintResponse(3, doc.body, cost, doc.doc_id)

    # level 4: exact tag filtering, no ranking
    keyword = request.hint_knowledge.strip().lower()
    matches = [
        doc for doc in corpora.library.docs.values()
        if doc.difficulty == request.problem_difficulty
        and keyword in (k.lower() for k in doc.knowledge)
        and doc.contest_id != contest.id
    ]
    if not matches:
        return HintResponse(4, "", cost)
    doc = min(matches, key=lambda d: d.doc_id)
    return HintResponse(4, doc.body, cost, doc.doc_id)
