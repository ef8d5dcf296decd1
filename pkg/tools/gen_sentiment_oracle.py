#!/usr/bin/env python3
"""Generate the frozen 200-text sentiment oracle fixture.

Run once from the repo root; the expected values come from the reference
scorer port in tests/reference_vader.py, not from the package engine.
"""
import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))
sys.path.insert(0, str(ROOT / "src"))

from reference_vader import ReferenceAnalyzer  # noqa: E402
from ballotwire.sentiment import load_lexicon  # noqa: E402

HAND_WRITTEN = [
    "",
    "good",
    "good!",
    "The movie was GOOD!!",
    "The movie was good.",
    "not good",
    "no good",
    "never good",
    "never so good",
    "never this good!",
    "at least it was decent",
    "least compelling thing ever, not good",
    "kind of great",
    "sort of terrible",
    "very very happy",
    "VERY HAPPY day today",
    "the plot was great but the acting was terrible",
    "happy but sad",
    "terrible!!! truly awful??",
    "this is the bomb",
    "what a bad ass move",
    "total badass!",
    "yeah right, great plan",
    "the kiss of death for the campaign",
    "a performance to die for",
    "without doubt an excellent idea",
    "without a doubt, excellent idea.",
    "this is the shit!",
    "no fun or joy here",
    "I don't hate it",
    "I can't support this candidate",
    "barely good enough",
    "hardly a success",
    "so so so great",
    "uber smart and hella funny",
    "utterly hopeless and completely broken",
    "TERRIBLE TERRIBLE TERRIBLE",
    "I love you but you hate me????",
    "love love love it!!!!",
    "most excellent!",
    "less impressive than expected",
    "marginally better today",
    "the debate was a disaster",
    "polls show a huge win",
    "scandal after scandal, what a mess",
    "she is brave, honest, and wise",
    "he is a liar and a fraud",
    "rarely wrong, usually brilliant",
    "seldom honest, mostly corrupt",
    "despite the chaos, a triumph",
    "nothing great about it",
    "nope, not wonderful at all",
    "it was fine, I guess",
    ":) :( :d ;)",
    "great :) but sad :(",
    "dog cat tree lamp",
    "GOOD good GOOD good",
    "why so serious? why so sad??",
    "win win win!!!!!!!",
    "absolute garbage, I mean truly vile stuff",
    "an enormously generous and deeply kind gesture",
]


def main():
    lexicon = load_lexicon()
    analyzer = ReferenceAnalyzer(lexicon.valences())
    rng = random.Random(20201103)
    vocab = sorted(lexicon.valences())
    extras = ["so", "this", "never", "not", "no", "very", "kind", "of", "at",
              "least", "but", "or", "nor", "without", "doubt", "the", "a",
              "voting", "rally", "poll", "tonight", "debate", "don't", "won't",
              "barely", "sort", "really", "quite", "GOOD", "BAD", "VERY"]
    texts = list(HAND_WRITTEN)
    while len(texts) < 200:
        n = rng.randint(1, 12)
        words = [rng.choice(vocab if rng.random() < 0.6 else extras)
                 for _ in range(n)]
        text = " ".join(words)
        if rng.random() < 0.4:
            text += rng.choice(["!", "!!", "!!!", "?", "??", "????", ".", "..."])
        if text not in texts:
            texts.append(text)

    rows = []
    for text in texts:
        scores = analyzer.polarity_scores(text)
        rows.append({"text": text, **scores})

    out = ROOT / "tests" / "fixtures" / "sentiment_oracle.json"
    out.write_text(json.dumps(rows, indent=1, ensure_ascii=False) + "\n",
                   encoding="utf-8")
    print(f"wrote {len(rows)} rows to {out}")


if __name__ == "__main__":
    main()
