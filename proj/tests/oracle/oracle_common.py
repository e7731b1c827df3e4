#!/usr/bin/env python3
# Copyright 2026 The corpus-tagger Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reference implementation used to generate golden test files.

Everything here is an independent, deliberately naive re-implementation of
the pipeline: tokenizing, phrase cleaning, noun-phrase extraction, dictionary
building and phrase tagging.  Stems are *not* computed: they are looked up in
the frozen word/stem pair tables under tests/data/porter/, which were produced
with third-party stemmer implementations.  Generation fails loudly when a
fixture word is missing from those tables so that the tables are always
extended first (never computed here, and never copied from the C++ code).
"""

from __future__ import annotations

import json
import os
import re
from collections import OrderedDict

REPO_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
PORTER_DIR = os.path.join(REPO_ROOT, "tests", "data", "porter")

# Words whose stem is the word itself because they contain letters outside
# a-z; the stemmer treats those code points as non-vowels, and for these
# shapes no rule fires.  Verified against the same third-party stemmers used
# to build the frozen pair tables.
NON_ASCII_IDENTITY_STEMS = ("poincaré", "schrödinger")


# ---------------------------------------------------------------------------
# Stems (lookup only)


def load_stem_map():
    stems = {}
    for voc_name, out_name in (
        ("voc.txt", "output.txt"),
        ("extra_voc.txt", "extra_output.txt"),
    ):
        with open(os.path.join(PORTER_DIR, voc_name), encoding="utf-8") as f:
            words = [w for w in (line.strip() for line in f) if w]
        with open(os.path.join(PORTER_DIR, out_name), encoding="utf-8") as f:
            outs = [w for w in (line.strip() for line in f) if w]
        if len(words) != len(outs):
            raise SystemExit(f"pair table mismatch: {voc_name} vs {out_name}")
        stems.update(zip(words, outs))
    for w in NON_ASCII_IDENTITY_STEMS:
        stems[w] = w
    return stems


class Stemmer:
    """Stem lookup that records misses instead of guessing."""

    def __init__(self):
        self.table = load_stem_map()
        self.missing = set()

    def __call__(self, lower_word):
        try:
            return self.table[lower_word]
        except KeyError:
            self.missing.add(lower_word)
            return "\x00MISSING:" + lower_word

    def check(self):
        if self.missing:
            words = "\n".join(sorted(self.missing))
            raise SystemExit(
                "words missing from the frozen stem tables "
                f"(extend tests/data/porter/extra_* first):\n{words}"
            )


# ---------------------------------------------------------------------------
# Tokenizing / cleaning

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize_lower(text):
    """Lowercased word tokens: maximal runs of letters/digits."""
    return [m.group(0).lower() for m in _WORD_RE.finditer(text)]


def load_stopwords(path=None):
    if path is None:
        path = os.path.join(REPO_ROOT, "data", "stopwords_en.txt")
    words = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\r\n")
            if not line or line.startswith("#"):
                continue
            words.add(line.lower())
    return words


def clean_phrase(lowers, stopwords):
    """Returns (reason, kept) with reason in {'kept','short','interior'}."""
    b, e = 0, len(lowers)
    while b < e and lowers[b] in stopwords:
        b += 1
    while e > b and lowers[e - 1] in stopwords:
        e -= 1
    if e - b < 2:
        return "short", None
    for i in range(b + 1, e - 1):
        if lowers[i] != "of" and lowers[i] in stopwords:
            return "interior", None
    return "kept", lowers[b:e]


def stem_key(lowers, stem):
    return " ".join(stem(w) for w in lowers)


# ---------------------------------------------------------------------------
# Wikipedia titles


def normalize_title(raw):
    title = raw.replace("_", " ").strip(" \t\r\n")
    if title.endswith(")"):
        depth = 0
        for i in range(len(title) - 1, -1, -1):
            c = title[i]
            if c == ")":
                depth += 1
            elif c == "(":
                depth -= 1
                if depth == 0:
                    if i > 0 and title[i - 1] == " ":
                        title = title[:i - 1].strip(" \t\r\n")
                    break
    return title


def title_candidates(raw_titles):
    """Mirror of the title reader: returns (candidates, counters)."""
    counters = {"pages": 0, "titles_too_short": 0, "titles": 0}
    out = []
    for raw in raw_titles:
        counters["pages"] += 1
        tokens = tokenize_lower(normalize_title(raw))
        if len(tokens) < 2:
            counters["titles_too_short"] += 1
            continue
        counters["titles"] += 1
        out.append(tokens)
    return out, counters


# ---------------------------------------------------------------------------
# Part-of-speech lexicon


def load_pos_lexicon(path=None):
    if path is None:
        path = os.path.join(REPO_ROOT, "data", "pos_lexicon_en.txt")
    lex = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\r\n")
            if not line or line.startswith("#"):
                continue
            word, tag = line.split("\t")
            lex[word.lower()] = tag
    return lex


def pos_tag(lower_word, lexicon):
    if lower_word in lexicon:
        return lexicon[lower_word]
    w = lower_word
    for suffix, tag in (
        ("tion", "noun"),
        ("ment", "noun"),
        ("ness", "noun"),
        ("ous", "adjective"),
        ("ive", "adjective"),
        ("al", "adjective"),
        ("ly", "adverb"),
    ):
        if len(w) > len(suffix) + 1 and w.endswith(suffix):
            return tag
    return "noun"


# ---------------------------------------------------------------------------
# Noun-phrase extraction


def extract_chunks(lowers, stopwords):
    """Maximal stopword-free runs of >= 2 tokens, deduped per document."""
    phrases, seen = [], set()
    run = []
    for w in lowers + [None]:
        if w is None or w in stopwords:
            if len(run) >= 2:
                joined = " ".join(run)
                if joined not in seen:
                    seen.add(joined)
                    phrases.append(run)
            run = []
        else:
            run.append(w)
    return phrases


def extract_pos(lowers, stopwords, lexicon):
    """Adjective/noun runs with trailing non-nouns trimmed, deduped."""
    phrases, seen = [], set()

    def phrasal(w):
        return w not in stopwords and pos_tag(w, lexicon) in ("noun", "adjective")

    run = []
    for w in lowers + [None]:
        if w is None or not phrasal(w):
            end = len(run)
            while end > 0 and pos_tag(run[end - 1], lexicon) != "noun":
                end -= 1
            trimmed = run[:end]
            if len(trimmed) >= 2:
                joined = " ".join(trimmed)
                if joined not in seen:
                    seen.add(joined)
                    phrases.append(trimmed)
            run = []
        else:
            run.append(w)
    return phrases


# ---------------------------------------------------------------------------
# Dictionary building


def _clean_into(entries, lowers, df, stopwords, stem, counters):
    counters["candidates"] += 1
    reason, kept = clean_phrase(lowers, stopwords)
    if reason == "short":
        counters["rejected_short"] += 1
        return
    if reason == "interior":
        counters["rejected_interior"] += 1
        return
    key = stem_key(kept, stem)
    display = " ".join(kept)
    if key in entries:
        counters["merged_duplicates"] += 1
        entries[key][1] += df
    else:
        entries[key] = [display, df]


def build_wiki_dictionary(candidates, stopwords, stem):
    """candidates: token lists.  Returns ({key: [display, df]}, counters)."""
    counters = {
        "candidates": 0,
        "rejected_short": 0,
        "rejected_interior": 0,
        "merged_duplicates": 0,
    }
    entries = OrderedDict()
    for lowers in candidates:
        _clean_into(entries, lowers, 0, stopwords, stem, counters)
    counters["entries"] = len(entries)
    return entries, counters


def build_np_dictionary(doc_lowers, strategy, min_df, stopwords, stem,
                        lexicon=None):
    """doc_lowers: per-document token lists, in corpus order."""
    raw = OrderedDict()  # key -> [df, first_doc, first_ord, display_lowers]
    for d, lowers in enumerate(doc_lowers):
        if strategy == "stopword-chunks":
            phrases = extract_chunks(lowers, stopwords)
        else:
            phrases = extract_pos(lowers, stopwords, lexicon)
        in_doc = set()
        for ord_, phrase in enumerate(phrases):
            key = stem_key(phrase, stem)
            if key in in_doc:
                continue
            in_doc.add(key)
            if key in raw:
                raw[key][0] += 1
            else:
                raw[key] = [1, d, ord_, phrase]
    counters = {
        "candidates": 0,
        "rejected_short": 0,
        "rejected_interior": 0,
        "below_min_df": 0,
        "merged_duplicates": 0,
    }
    survivors = []
    for key, (df, first_doc, first_ord, phrase) in raw.items():
        if df < min_df:
            counters["below_min_df"] += 1
        else:
            survivors.append((first_doc, first_ord, key, df, phrase))
    survivors.sort(key=lambda t: (t[0], t[1], t[2]))
    entries = OrderedDict()
    for _, _, _, df, phrase in survivors:
        _clean_into(entries, phrase, df, stopwords, stem, counters)
    counters["entries"] = len(entries)
    return entries, counters


def dictionary_file_bytes(entries, source):
    lines = [f"#corpus-tagger-dict v1 {source}"]
    for key in sorted(entries):
        display, df = entries[key]
        lines.append(f"{key}\t{display}\t{df}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Tagging (naive sliding-window matcher)


def tag_document(lowers, keys_stems, stem):
    """keys_stems: {key: [stem, ...]}.  Returns sorted unique keys."""
    doc_stems = [stem(w) for w in lowers]
    found = set()
    for key, pattern in keys_stems.items():
        n = len(pattern)
        for i in range(len(doc_stems) - n + 1):
            if doc_stems[i:i + n] == pattern:
                found.add(key)
                break
    return sorted(found)


def tag_corpus(docs, entries, stem):
    """docs: [(doc_id, lowers)].  Returns [(doc_id, [keys])]."""
    keys_stems = {key: key.split(" ") for key in entries}
    return [(doc_id, tag_document(lowers, keys_stems, stem))
            for doc_id, lowers in docs]


def assignment_file_bytes(assignments, source):
    lines = [f"#corpus-tagger-assign v1 {source}"]
    rows = 0
    for doc_id, keys in assignments:
        for key in keys:
            lines.append(f"{doc_id}\t{source}\t{key}")
            rows += 1
    lines.append(f"#count {rows}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Statistics helpers


def rank_table(assignments):
    """Presence frequencies: [(rank, key, freq)] sorted (-freq, key)."""
    freq = {}
    for _, keys in assignments:
        for key in keys:
            freq[key] = freq.get(key, 0) + 1
    ordered = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
    return [(i + 1, key, f) for i, (key, f) in enumerate(ordered)]


def rank_table_bytes(table):
    return ("".join(f"{r}\t{k}\t{f}\n" for r, k, f in table)).encode("utf-8")


def fmt_g12(x):
    return f"{x:.12g}"


def category_histogram(docs_categories):
    """docs_categories: [[(code, known)]].  Returns [(code, known, n, pct)]."""
    total = len(docs_categories)
    counts = {}
    for cats in docs_categories:
        for code, known in cats:
            cell = counts.setdefault(code, [0, known])
            cell[0] += 1
            cell[1] = known
    rows = [(code, cell[1], cell[0], 100.0 * cell[0] / total)
            for code, cell in counts.items()]
    rows.sort(key=lambda r: (-r[2], r[0]))
    return rows


def category_histogram_bytes(rows):
    out = []
    for code, known, n, pct in rows:
        out.append(f"{code}\t{1 if known else 0}\t{n}\t{fmt_g12(pct)}\n")
    return "".join(out).encode("utf-8")


def write_bytes(path, data):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "wb") as f:
        f.write(data)


def write_json(path, obj):
    write_bytes(path, (json.dumps(obj, indent=2, sort_keys=True) + "\n")
                .encode("utf-8"))
