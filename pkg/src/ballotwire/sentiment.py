"""Lexicon and rule-based sentiment scoring.

Produces a single normalized "compound" valence in [-1, 1] per text plus the
positive/neutral/negative proportions. The rule set (boosters, negation,
contrastive "but", punctuation and capitalization emphasis) and all constants
follow the public reference engine for social-media sentiment so that scores
are interchangeable with it.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from pathlib import Path

from .errors import EmptyLexiconError, MalformedLexiconRowError

# Empirically derived rule constants of the reference engine.
NORMALIZE_ALPHA = 15.0
BOOST_INCR = 0.293
BOOST_DECR = -0.293
CAPS_INCR = 0.733
NEGATION_SCALAR = -0.74
EXCLAIM_INCR = 0.292        # per "!", at most 4 counted
QMARK_INCR = 0.18           # per "?" when 2-3 marks
QMARK_CAP = 0.96            # flat bonus for 4+ marks

NEGATIONS = frozenset([
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
    "ain't", "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't",
    "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
    "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't",
    "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing",
    "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
    "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't",
    "without", "wont", "wouldnt", "won't", "wouldn't", "rarely", "seldom",
    "despite",
])

BOOSTERS = {
    "absolutely": BOOST_INCR, "amazingly": BOOST_INCR, "awfully": BOOST_INCR,
    "completely": BOOST_INCR, "considerable": BOOST_INCR,
    "considerably": BOOST_INCR, "decidedly": BOOST_INCR, "deeply": BOOST_INCR,
    "enormous": BOOST_INCR, "enormously": BOOST_INCR, "entirely": BOOST_INCR,
    "especially": BOOST_INCR, "exceptional": BOOST_INCR,
    "exceptionally": BOOST_INCR, "extreme": BOOST_INCR, "extremely": BOOST_INCR,
    "fabulously": BOOST_INCR, "fully": BOOST_INCR, "greatly": BOOST_INCR,
    "hella": BOOST_INCR, "highly": BOOST_INCR, "hugely": BOOST_INCR,
    "incredible": BOOST_INCR, "incredibly": BOOST_INCR, "intensely": BOOST_INCR,
    "major": BOOST_INCR, "majorly": BOOST_INCR, "more": BOOST_INCR,
    "most": BOOST_INCR, "particularly": BOOST_INCR, "purely": BOOST_INCR,
    "quite": BOOST_INCR, "really": BOOST_INCR, "remarkably": BOOST_INCR,
    "so": BOOST_INCR, "substantially": BOOST_INCR, "thoroughly": BOOST_INCR,
    "total": BOOST_INCR, "totally": BOOST_INCR, "tremendous": BOOST_INCR,
    "tremendously": BOOST_INCR, "uber": BOOST_INCR, "unbelievably": BOOST_INCR,
    "unusually": BOOST_INCR, "utter": BOOST_INCR, "utterly": BOOST_INCR,
    "very": BOOST_INCR,
    "almost": BOOST_DECR, "barely": BOOST_DECR, "hardly": BOOST_DECR,
    "just enough": BOOST_DECR, "kind of": BOOST_DECR, "kinda": BOOST_DECR,
    "kindof": BOOST_DECR, "kind-of": BOOST_DECR, "less": BOOST_DECR,
    "little": BOOST_DECR, "marginal": BOOST_DECR, "marginally": BOOST_DECR,
    "occasional": BOOST_DECR, "occasionally": BOOST_DECR, "partly": BOOST_DECR,
    "scarce": BOOST_DECR, "scarcely": BOOST_DECR, "slight": BOOST_DECR,
    "slightly": BOOST_DECR, "somewhat": BOOST_DECR, "sort of": BOOST_DECR,
    "sorta": BOOST_DECR, "sortof": BOOST_DECR, "sort-of": BOOST_DECR,
}

SPECIAL_CASE_IDIOMS = {
    "the shit": 3.0, "the bomb": 3.0, "bad ass": 1.5, "badass": 1.5,
    "yeah right": -2.0, "kiss of death": -1.5, "to die for": 3.0,
}


@dataclass(frozen=True)
class SentimentScore:
    compound: float
    pos: float
    neu: float
    neg: float


class Lexicon:
    """Immutable token -> mean-valence table, valences in [-4, 4]."""

    def __init__(self, entries: dict[str, float]):
        self._entries = dict(entries)

    def __contains__(self, token: str) -> bool:
        return token in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, token: str, default: float = 0.0) -> float:
        return self._entries.get(token, default)

    def valences(self) -> dict[str, float]:
        return dict(self._entries)

    def negated(self) -> "Lexicon":
        """Lexicon with every valence sign-flipped (used by property tests)."""
        return Lexicon({t: -v for t, v in self._entries.items()})


DEFAULT_LEXICON_PATH = Path(__file__).parent / "assets" / "sentiment_lexicon.txt"


def load_lexicon(path: str | Path = DEFAULT_LEXICON_PATH) -> Lexicon:
    """Load a tab-separated token/valence file; duplicate tokens take the last row."""
    entries: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise MalformedLexiconRowError(lineno, line)
            token = parts[0]
            try:
                valence = float(parts[1])
            except ValueError:
                raise MalformedLexiconRowError(lineno, line) from None
            entries[token] = valence
    if not entries:
        raise EmptyLexiconError(f"lexicon file {path} has no entries")
    return Lexicon(entries)


def normalize_valence(s: float, alpha: float = NORMALIZE_ALPHA) -> float:
    """Map a summed valence onto (-1, 1) via s / sqrt(s^2 + alpha)."""
    score = s / math.sqrt(s * s + alpha)
    return max(-1.0, min(1.0, score))


def _strip_punct(token: str) -> str:
    stripped = token.strip(string.punctuation)
    # two or fewer chars left means it was probably an emoticon; keep it whole
    if len(stripped) <= 2:
        return token
    return stripped


def _tokenize(text: str) -> list[str]:
    return [_strip_punct(tok) for tok in text.split()]


def _has_mixed_caps(words: list[str]) -> bool:
    n_upper = sum(1 for w in words if w.isupper())
    return 0 < len(words) - n_upper < len(words)


def _is_negation(token: str) -> bool:
    return token in NEGATIONS or "n't" in token


def _booster_delta(word: str, valence: float, mixed_caps: bool) -> float:
    delta = BOOSTERS.get(word.lower(), 0.0)
    if delta == 0.0:
        return 0.0
    if valence < 0:
        delta = -delta
    if word.isupper() and mixed_caps:
        delta += CAPS_INCR if valence > 0 else -CAPS_INCR
    return delta


class SentimentScorer:
    """Scores texts against a fixed lexicon; pure and safe to share."""

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon

    def score(self, text: str) -> SentimentScore:
        words = _tokenize(text)
        mixed_caps = _has_mixed_caps(words)
        valences: list[float] = []
        for i, word in enumerate(words):
            lower = word.lower()
            if lower in BOOSTERS:
                valences.append(0.0)
                continue
            if lower == "kind" and i + 1 < len(words) and words[i + 1].lower() == "of":
                valences.append(0.0)
                continue
            valences.append(self._token_valence(words, i, mixed_caps))
        valences = _but_clause_reweight(words, valences)
        return _final_score(valences, text)

    # one lexicon hit, adjusted by the window of up to 3 preceding tokens
    def _token_valence(self, words: list[str], i: int, mixed_caps: bool) -> float:
        word = words[i]
        lower = word.lower()
        if lower not in self.lexicon:
            return 0.0
        valence = self.lexicon.get(lower)

        # "no" directly before another lexicon word acts as a negator, not a hit
        if lower == "no" and i + 1 < len(words) and words[i + 1].lower() in self.lexicon:
            valence = 0.0
        if (
            (i > 0 and words[i - 1].lower() == "no")
            or (i > 1 and words[i - 2].lower() == "no")
            or (i > 2 and words[i - 3].lower() == "no"
                and words[i - 1].lower() in ("or", "nor"))
        ):
            valence = self.lexicon.get(lower) * NEGATION_SCALAR

        if word.isupper() and mixed_caps:
            valence += CAPS_INCR if valence > 0 else -CAPS_INCR

        for dist in range(3):
            j = i - (dist + 1)
            if j < 0 or words[j].lower() in self.lexicon:
                continue
            delta = _booster_delta(words[j], valence, mixed_caps)
            if dist == 1 and delta != 0.0:
                delta *= 0.95
            if dist == 2 and delta != 0.0:
                delta *= 0.9
            valence += delta
            valence = _negation_adjust(valence, words, dist, i)
            if dist == 2:
                valence = _idiom_adjust(valence, words, i)

        return _least_adjust(valence, words, i, self.lexicon)


def score_text(text: str, lexicon: Lexicon) -> SentimentScore:
    return SentimentScorer(lexicon).score(text)


def _negation_adjust(valence: float, words: list[str], dist: int, i: int) -> float:
    lower = [w.lower() for w in words]
    if dist == 0:
        if _is_negation(lower[i - 1]):
            valence *= NEGATION_SCALAR
    elif dist == 1:
        if lower[i - 2] == "never" and lower[i - 1] in ("so", "this"):
            valence *= 1.25
        elif lower[i - 2] == "without" and lower[i - 1] == "doubt":
            pass
        elif _is_negation(lower[i - 2]):
            valence *= NEGATION_SCALAR
    elif dist == 2:
        # reference precedence: the "so"/"this" directly before the hit fires
        # the 1.25 bump even without a leading "never"
        if (lower[i - 3] == "never" and lower[i - 2] in ("so", "this")) \
                or lower[i - 1] in ("so", "this"):
            valence *= 1.25
        elif lower[i - 3] == "without" and "doubt" in (lower[i - 2], lower[i - 1]):
            pass
        elif _is_negation(lower[i - 3]):
            valence *= NEGATION_SCALAR
    return valence


def _idiom_adjust(valence: float, words: list[str], i: int) -> float:
    lower = [w.lower() for w in words]
    onezero = f"{lower[i - 1]} {lower[i]}"
    twoonezero = f"{lower[i - 2]} {lower[i - 1]} {lower[i]}"
    twoone = f"{lower[i - 2]} {lower[i - 1]}"
    threetwoone = f"{lower[i - 3]} {lower[i - 2]} {lower[i - 1]}"
    threetwo = f"{lower[i - 3]} {lower[i - 2]}"
    for seq in (onezero, twoonezero, twoone, threetwoone, threetwo):
        if seq in SPECIAL_CASE_IDIOMS:
            valence = SPECIAL_CASE_IDIOMS[seq]
            break
    if i + 1 < len(lower):
        zeroone = f"{lower[i]} {lower[i + 1]}"
        if zeroone in SPECIAL_CASE_IDIOMS:
            valence = SPECIAL_CASE_IDIOMS[zeroone]
    if i + 2 < len(lower):
        zeroonetwo = f"{lower[i]} {lower[i + 1]} {lower[i + 2]}"
        if zeroonetwo in SPECIAL_CASE_IDIOMS:
            valence = SPECIAL_CASE_IDIOMS[zeroonetwo]
    # multi-word boosters such as "sort of" / "kind of"
    for n_gram in (threetwoone, threetwo, twoone):
        if n_gram in BOOSTERS:
            valence += BOOSTERS[n_gram]
    return valence


def _least_adjust(valence: float, words: list[str], i: int, lexicon: Lexicon) -> float:
    if i > 1 and words[i - 1].lower() == "least" and words[i - 1].lower() not in lexicon:
        if words[i - 2].lower() not in ("at", "very"):
            valence *= NEGATION_SCALAR
    elif i > 0 and words[i - 1].lower() == "least" and words[i - 1].lower() not in lexicon:
        valence *= NEGATION_SCALAR
    return valence


def _but_clause_reweight(words: list[str], valences: list[float]) -> list[float]:
    lower = [w.lower() for w in words]
    if "but" not in lower:
        return valences
    bi = lower.index("but")
    # reference quirk kept on purpose: positions are re-found by value while
    # the list is mutated, so duplicate valences are rescaled at the first
    # index holding that value rather than their own
    reweighted = list(valences)
    for k in range(len(reweighted)):
        v = reweighted[k]
        si = reweighted.index(v)
        if si < bi:
            reweighted[si] = v * 0.5
        elif si > bi:
            reweighted[si] = v * 1.5
    return reweighted


def _punctuation_emphasis(text: str) -> float:
    ep = min(text.count("!"), 4) * EXCLAIM_INCR
    qm_count = text.count("?")
    if qm_count > 1:
        qm = qm_count * QMARK_INCR if qm_count <= 3 else QMARK_CAP
    else:
        qm = 0.0
    return ep + qm


def _final_score(valences: list[float], text: str) -> SentimentScore:
    if not valences:
        return SentimentScore(0.0, 0.0, 0.0, 0.0)
    # plain left-to-right sum: exact-cancellation sign decides whether
    # punctuation emphasis applies, so a differently rounded sum would flip it
    total = sum(valences)
    emphasis = _punctuation_emphasis(text)
    if total > 0:
        total += emphasis
    elif total < 0:
        total -= emphasis

    compound = normalize_valence(total)

    pos_sum = 0.0
    neg_sum = 0.0
    neu_count = 0
    for v in valences:
        if v > 0:
            pos_sum += v + 1.0       # +/-1 compensates neutral words counted as 1
        elif v < 0:
            neg_sum += v - 1.0
        else:
            neu_count += 1
    if pos_sum > abs(neg_sum):
        pos_sum += emphasis
    elif pos_sum < abs(neg_sum):
        neg_sum -= emphasis
    mass = pos_sum + abs(neg_sum) + neu_count
    if mass == 0:
        return SentimentScore(compound, 0.0, 0.0, 0.0)
    return SentimentScore(
        compound=compound,
        pos=abs(pos_sum / mass),
        neu=abs(neu_count / mass),
        neg=abs(neg_sum / mass),
    )
