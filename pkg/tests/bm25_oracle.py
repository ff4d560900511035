"""Independent brute-force Okapi BM25 scorer used as the retrieval oracle.

Deliberately shares no code with the package: its own tokenizer, no
inverted index, direct per-document scoring over the whole corpus.
"""

from __future__ import annotations

import math
import re

_WORD = re.compile(r"[0-9a-z]+")


def oracle_tokens(text):
    return [t for t in _WORD.findall(text.lower()) if len(t) >= 2]


def oracle_bm25_rank(docs, query, k, k1=1.2, b=0.75):
    """docs: list of (doc_id, text). Returns top-k (doc_id, score)."""
    tokenized = {doc_id: oracle_tokens(text) for doc_id, text in docs}
    n = len(docs)
    lengths = {d: len(toks) for d, toks in tokenized.items()}
    avgdl = sum(lengths.values()) / n

    query_terms = oracle_tokens(query)
    scored = []
    for doc_id, toks in tokenized.items():
        total = 0.0
        for term in query_terms:
            tf = toks.count(term)
            if tf == 0:
                continue
            df = sum(1 for other in tokenized.values() if term in other)
            idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
            denom = tf + k1 * (1 - b + b * lengths[doc_id] / avgdl)
            total += idf * tf * (k1 + 1) / denom
        if total > 0.0:
            scored.append((doc_id, total))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:k]
