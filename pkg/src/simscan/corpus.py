"""Corpus handling: segmentation, pair generation and synthetic documents.

Suspect texts come in three flavours matching the label scheme: permuted
sentence order, synonym-substituted rewrites, and cross-document negative
pairs. All generators are pure functions of their inputs and a seed so a
dataset can be rebuilt byte-for-byte.
"""

import hashlib
import json
import re
from dataclasses import dataclass
from enum import IntEnum

import numpy as np
import requests

from .errors import (
    CorruptFile,
    InsufficientDocuments,
    IoFailure,
    RemoteUnavailable,
    TooFewSamples,
)
from .embedding import MAX_TOKENS, tokenize


class PlagiarismLabel(IntEnum):
    NO_PLAGIARISM = 0
    IMITATION_PLAGIARISM = 1
    SHUFFLE_PLAGIARISM = 2


LABEL_NAMES = {
    PlagiarismLabel.NO_PLAGIARISM: "no_plagiarism",
    PlagiarismLabel.IMITATION_PLAGIARISM: "imitation_plagiarism",
    PlagiarismLabel.SHUFFLE_PLAGIARISM: "shuffle_plagiarism",
}


@dataclass
class Segment:
    id: int
    doc_id: str
    text: str
    token_count: int


@dataclass
class TextPair:
    t1: str
    t2: str
    label: int


def count_tokens(text):
    return len(tokenize(text, max_tokens=None))


_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")


def split_sentences(text):
    """Split on terminal punctuation followed by whitespace."""
    parts = _SENTENCE_SPLIT.split(text.strip())
    return [p for p in parts if p.strip()]


def _hard_split(sentence, max_tokens):
    """Cut an oversized sentence at token boundaries of the raw text."""
    spans = [m.span() for m in re.finditer(r"\w+", sentence)]
    pieces = []
    for start in range(0, len(spans), max_tokens):
        chunk = spans[start : start + max_tokens]
        lo = chunk[0][0] if start else 0
        hi = chunk[-1][1] if start + max_tokens < len(spans) else len(sentence)
        piece = sentence[lo:hi].strip()
        if piece:
            pieces.append(piece)
    return pieces


def segment_document(doc_id, text, max_tokens=MAX_TOKENS, id_start=0):
    """Break one document into segments of at most max_tokens tokens.

    Paragraphs (blank-line separated) stay whole when they fit. An
    oversized paragraph is packed greedily from its sentences; a single
    sentence beyond the cap is split at the token boundary itself.
    """
    segments = []
    next_id = id_start

    def emit(piece):
        nonlocal next_id
        piece = piece.strip()
        if not piece:
            return
        segments.append(
            Segment(
                id=next_id,
                doc_id=doc_id,
                text=piece,
                token_count=count_tokens(piece),
            )
        )
        next_id += 1

    for paragraph in re.split(r"\n\s*\n", text or ""):
        paragraph = paragraph.strip()
        if not paragraph:
            continue
        if count_tokens(paragraph) <= max_tokens:
            emit(paragraph)
            continue
        bucket = []
        bucket_tokens = 0
        for sentence in split_sentences(paragraph):
            n = count_tokens(sentence)
            if n > max_tokens:
                if bucket:
                    emit(" ".join(bucket))
                    bucket, bucket_tokens = [], 0
                for piece in _hard_split(sentence, max_tokens):
                    emit(piece)
                continue
            if bucket_tokens + n > max_tokens and bucket:
                emit(" ".join(bucket))
                bucket, bucket_tokens = [], 0
            bucket.append(sentence)
            bucket_tokens += n
        if bucket:
            emit(" ".join(bucket))
    return segments


def _text_key(text):
    return int.from_bytes(
        hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "little"
    )


def shuffle_plagiarize(text, seed=0):
    """Permute sentence order with a seeded draw, never the identity.

    Single-sentence input comes back unchanged since no reordering exists.
    """
    sentences = split_sentences(text)
    if len(sentences) < 2:
        return text
    rng = np.random.default_rng((seed, _text_key(text)))
    order = rng.permutation(len(sentences))
    while np.array_equal(order, np.arange(len(sentences))):
        order = rng.permutation(len(sentences))
    return " ".join(sentences[i] for i in order)


# Word-for-word replacements applied by the offline rewriter. Values are
# alternatives drawn from by seed; most entries keep a single option.
SYNONYMS = {
    # adjectives
    "fast": ("quick",),
    "slow": ("sluggish",),
    "big": ("large", "sizable"),
    "small": ("little", "compact"),
    "quick": ("rapid",),
    "important": ("crucial", "vital"),
    "hard": ("difficult",),
    "easy": ("simple",),
    "strong": ("powerful", "sturdy"),
    "weak": ("feeble",),
    "new": ("novel", "fresh"),
    "old": ("aged",),
    "bright": ("luminous",),
    "dark": ("dim",),
    "clear": ("lucid",),
    "common": ("frequent",),
    "rare": ("scarce",),
    "correct": ("accurate",),
    "wrong": ("incorrect",),
    "whole": ("entire",),
    "main": ("primary",),
    "final": ("concluding",),
    "early": ("initial",),
    "late": ("tardy",),
    "rich": ("wealthy",),
    "clean": ("spotless",),
    "dirty": ("filthy",),
    "quiet": ("silent", "hushed"),
    "loud": ("noisy",),
    "happy": ("glad", "cheerful"),
    "sad": ("unhappy",),
    "angry": ("furious",),
    "calm": ("tranquil",),
    "safe": ("secure",),
    "dangerous": ("hazardous", "risky"),
    "complex": ("intricate",),
    "useful": ("helpful", "handy"),
    "useless": ("pointless",),
    "modern": ("contemporary",),
    "broad": ("wide",),
    "narrow": ("slim",),
    "deep": ("profound",),
    "shallow": ("superficial",),
    "exact": ("precise",),
    "rough": ("coarse",),
    "smooth": ("sleek",),
    "steady": ("stable",),
    "sudden": ("abrupt",),
    "typical": ("usual",),
    "unusual": ("odd", "peculiar"),
    "visible": ("apparent",),
    "hidden": ("concealed",),
    "huge": ("enormous", "immense"),
    "tiny": ("minute",),
    "cold": ("chilly", "frigid"),
    "hot": ("scorching",),
    "warm": ("mild",),
    "cool": ("brisk",),
    "full": ("complete",),
    "empty": ("vacant",),
    "heavy": ("weighty",),
    "long": ("lengthy",),
    "short": ("brief",),
    "tall": ("towering",),
    "wide": ("expansive",),
    "many": ("numerous",),
    "good": ("fine",),
    "great": ("excellent", "superb"),
    "true": ("genuine",),
    "false": ("untrue",),
    "real": ("actual",),
    "certain": ("sure",),
    "likely": ("probable",),
    "possible": ("feasible",),
    "necessary": ("essential",),
    "busy": ("occupied",),
    "ready": ("prepared",),
    "available": ("accessible",),
    "famous": ("renowned", "celebrated"),
    "unknown": ("obscure",),
    "fresh": ("crisp",),
    "sharp": ("keen",),
    "gentle": ("mild",),
    "plain": ("unadorned",),
    # verbs, base and third-person forms
    "show": ("display", "reveal"),
    "shows": ("displays", "reveals"),
    "make": ("create",),
    "makes": ("creates",),
    "use": ("employ",),
    "uses": ("employs",),
    "find": ("locate", "discover"),
    "finds": ("locates", "discovers"),
    "need": ("require",),
    "needs": ("requires",),
    "help": ("assist",),
    "helps": ("assists",),
    "start": ("begin",),
    "starts": ("begins",),
    "stop": ("halt",),
    "stops": ("halts",),
    "keep": ("retain",),
    "keeps": ("retains",),
    "give": ("provide",),
    "gives": ("provides",),
    "take": ("seize",),
    "takes": ("seizes",),
    "get": ("obtain",),
    "gets": ("obtains",),
    "build": ("construct", "assemble"),
    "builds": ("constructs", "assembles"),
    "change": ("alter",),
    "changes": ("alters",),
    "move": ("shift",),
    "moves": ("shifts",),
    "check": ("verify", "inspect"),
    "checks": ("verifies", "inspects"),
    "improve": ("enhance",),
    "improves": ("enhances",),
    "reduce": ("decrease", "lessen"),
    "reduces": ("decreases", "lessens"),
    "increase": ("raise",),
    "increases": ("raises",),
    "explain": ("clarify",),
    "explains": ("clarifies",),
    "describe": ("depict",),
    "describes": ("depicts",),
    "study": ("analyze",),
    "studies": ("analyzes",),
    "measure": ("gauge",),
    "measures": ("gauges",),
    "watch": ("observe",),
    "watches": ("observes",),
    "choose": ("select", "pick"),
    "chooses": ("selects", "picks"),
    "buy": ("purchase",),
    "buys": ("purchases",),
    "ask": ("inquire",),
    "asks": ("inquires",),
    "answer": ("reply",),
    "answers": ("replies",),
    "begin": ("commence",),
    "begins": ("commences",),
    "end": ("finish",),
    "ends": ("finishes",),
    "leave": ("depart",),
    "leaves": ("departs",),
    "reach": ("attain",),
    "reaches": ("attains",),
    "carry": ("transport", "haul"),
    "carries": ("transports", "hauls"),
    "send": ("dispatch",),
    "sends": ("dispatches",),
    "hold": ("grasp",),
    "holds": ("grasps",),
    "walk": ("stroll",),
    "walks": ("strolls",),
    "speak": ("talk",),
    "speaks": ("talks",),
    "write": ("compose",),
    "writes": ("composes",),
    "read": ("peruse",),
    "reads": ("peruses",),
    "grow": ("expand",),
    "grows": ("expands",),
    "fall": ("drop", "tumble"),
    "falls": ("drops", "tumbles"),
    "rise": ("climb",),
    "rises": ("climbs",),
    "turn": ("rotate",),
    "turns": ("rotates",),
    "open": ("unlock",),
    "opens": ("unlocks",),
    "close": ("shut",),
    "closes": ("shuts",),
    "follow": ("pursue", "track"),
    "follows": ("pursues", "tracks"),
    "gather": ("collect",),
    "gathers": ("collects",),
    "share": ("distribute",),
    "shares": ("distributes",),
    "store": ("stockpile",),
    "stores": ("stockpiles",),
    "repair": ("mend", "fix"),
    "repairs": ("mends", "fixes"),
    "protect": ("guard",),
    "protects": ("guards",),
    "produce": ("generate", "yield"),
    "produces": ("generates", "yields"),
    "contain": ("hold",),
    "contains": ("holds",),
    "remain": ("stay",),
    "remains": ("stays",),
    # nouns
    "house": ("dwelling", "residence"),
    "car": ("automobile",),
    "road": ("route",),
    "city": ("metropolis",),
    "doctor": ("physician",),
    "teacher": ("instructor",),
    "student": ("pupil",),
    "book": ("volume",),
    "paper": ("document",),
    "idea": ("notion", "concept"),
    "plan": ("scheme",),
    "goal": ("aim", "objective"),
    "task": ("chore",),
    "job": ("occupation",),
    "work": ("labor",),
    "result": ("outcome",),
    "reason": ("cause",),
    "question": ("query",),
    "problem": ("difficulty",),
    "method": ("technique", "procedure"),
    "way": ("manner",),
    "place": ("location", "spot"),
    "area": ("region", "zone"),
    "part": ("portion",),
    "piece": ("fragment",),
    "group": ("cluster",),
    "team": ("crew", "squad"),
    "leader": ("chief",),
    "friend": ("companion",),
    "child": ("youngster",),
    "money": ("currency",),
    "price": ("cost",),
    "value": ("worth",),
    "size": ("magnitude",),
    "shape": ("form",),
    "color": ("hue", "shade"),
    "sound": ("noise",),
    "speed": ("velocity", "pace"),
    "power": ("strength",),
    "error": ("mistake", "blunder"),
    "fault": ("flaw",),
    "danger": ("peril",),
    "chance": ("opportunity",),
    "choice": ("option",),
    "effect": ("impact",),
    "machine": ("device", "apparatus"),
    "tool": ("instrument",),
    "system": ("framework",),
    "computer": ("workstation",),
    "network": ("web",),
    "storm": ("tempest",),
    "river": ("stream",),
    "mountain": ("peak",),
    "forest": ("woodland",),
    "ocean": ("sea",),
    "field": ("meadow",),
    "garden": ("plot",),
    "bridge": ("span",),
    "market": ("bazaar",),
    "village": ("hamlet",),
    "journey": ("voyage", "trek"),
    "story": ("tale",),
    "letter": ("note",),
    "picture": ("image",),
    "building": ("structure",),
    "engine": ("motor",),
    "signal": ("cue",),
    "message": ("dispatch",),
    # adverbs
    "quickly": ("rapidly", "swiftly"),
    "slowly": ("gradually",),
    "carefully": ("cautiously",),
    "easily": ("effortlessly",),
    "clearly": ("plainly",),
    "often": ("frequently",),
    "rarely": ("seldom",),
    "always": ("constantly",),
    "nearly": ("almost",),
    "mostly": ("mainly",),
    "really": ("truly",),
    "very": ("extremely",),
    "quite": ("fairly",),
    "together": ("jointly",),
    "soon": ("shortly",),
    "later": ("afterward",),
    "finally": ("ultimately",),
    "usually": ("normally",),
    "perhaps": ("maybe",),
    "certainly": ("surely",),
    "completely": ("entirely",),
    "exactly": ("precisely",),
    "directly": ("immediately",),
    "eventually": ("ultimately",),
    "suddenly": ("abruptly",),
}

# bidirectional swaps for a few connective words
FUNCTION_SWAPS = {
    "this": "that",
    "that": "this",
    "these": "those",
    "those": "these",
    "also": "additionally",
    "additionally": "also",
    "however": "nevertheless",
    "nevertheless": "however",
    "thus": "therefore",
    "therefore": "thus",
    "each": "every",
    "every": "each",
}


def _match_case(original, replacement):
    if original.isupper() and len(original) > 1:
        return replacement.upper()
    if original[:1].isupper():
        return replacement.capitalize()
    return replacement


@dataclass(frozen=True)
class ParaphraseConfig:
    """Which rewriter to use: the bundled rules or an external endpoint."""

    kind: str = "rule_stub"
    seed: int = 0
    endpoint: str = None
    timeout: float = 30.0

    def __post_init__(self):
        if self.kind not in ("rule_stub", "external"):
            raise ValueError(f"unknown paraphrase kind: {self.kind!r}")
        if (self.endpoint is not None) != (self.kind == "external"):
            raise ValueError("endpoint must be given iff kind is 'external'")


# Fraction of eligible words a rewrite actually touches. Full substitution
# would brand rewritten text by its vocabulary alone; a partial rate keeps
# rewrites recognizable only relative to their source.
SUBSTITUTION_RATE = 0.65


def rule_paraphrase(text, seed=0, rate=SUBSTITUTION_RATE):
    """Replace known words with synonyms; swap a few connectives.

    Each eligible occurrence is independently substituted with the given
    probability, and the draw among synonym options is seeded per input
    text, so the same (text, seed, rate) always produces the same rewrite.
    Sentence count is preserved since replacements never carry terminal
    punctuation.
    """
    rng = np.random.default_rng((seed, _text_key(text)))

    def _sub(match):
        word = match.group(0)
        key = word.lower()
        options = SYNONYMS.get(key)
        if options is None:
            swap = FUNCTION_SWAPS.get(key)
            if swap is None:
                return word
            options = (swap,)
        if rng.random() >= rate:
            return word
        pick = options[int(rng.integers(len(options)))] if len(options) > 1 else options[0]
        return _match_case(word, pick)

    return re.sub(r"\w+", _sub, text)


def paraphrase(text, config=None):
    config = config or ParaphraseConfig()
    if config.kind == "rule_stub":
        return rule_paraphrase(text, seed=config.seed)
    try:
        response = requests.post(
            config.endpoint, json={"text": text}, timeout=config.timeout
        )
        response.raise_for_status()
        return str(response.json()["text"])
    except (requests.RequestException, ValueError, KeyError) as exc:
        raise RemoteUnavailable(
            f"paraphrase endpoint {config.endpoint} failed: {exc}"
        ) from exc


def negative_sample(segments, seed=0, per_segment=1):
    """Cross-document pairs labeled NO_PLAGIARISM, seeded, one draw per t1."""
    ordered = sorted(segments, key=lambda s: s.id)
    doc_ids = {s.doc_id for s in ordered}
    if len(doc_ids) < 2:
        raise InsufficientDocuments(
            "negative sampling needs segments from at least two documents"
        )
    pairs = []
    for seg in ordered:
        partners = [s for s in ordered if s.doc_id != seg.doc_id]
        rng = np.random.default_rng((seed, seg.id))
        take = min(per_segment, len(partners))
        for j in rng.choice(len(partners), size=take, replace=False):
            pairs.append(
                TextPair(
                    t1=seg.text,
                    t2=partners[int(j)].text,
                    label=int(PlagiarismLabel.NO_PLAGIARISM),
                )
            )
    return pairs


def _provider_rewrite(text, provider, seg_id, copy):
    if provider.kind == "rule_stub":
        # per-pair substitution rate, so rewrite depth itself varies
        rate_rng = np.random.default_rng((provider.seed, seg_id, copy, 7))
        return rule_paraphrase(
            text,
            seed=provider.seed * 1000 + copy,
            rate=float(rate_rng.uniform(0.5, 0.85)),
        )
    return paraphrase(text, provider)


def build_dataset(
    segments,
    provider=None,
    seed=0,
    n_negative=1,
    n_imitation=1,
    n_shuffle=1,
    n_decoy=0,
):
    """Assemble labeled pairs for every segment, deterministically.

    Per segment: n_shuffle sentence permutations, n_imitation rewrites from
    the paraphrase provider, and n_negative cross-document partners.

    n_decoy adds negatives whose suspect side is a rewrite of an unrelated
    cross-document segment. Without them a trained model never sees a
    rewritten text next to the wrong source, and rewrite style alone starts
    to predict the imitation label.
    """
    provider = provider or ParaphraseConfig(seed=seed)
    ordered = sorted(segments, key=lambda s: s.id)
    pairs = []
    for seg in ordered:
        for copy in range(n_shuffle):
            pairs.append(
                TextPair(
                    t1=seg.text,
                    t2=shuffle_plagiarize(seg.text, seed=seed * 1000 + copy),
                    label=int(PlagiarismLabel.SHUFFLE_PLAGIARISM),
                )
            )
        for copy in range(n_imitation):
            pairs.append(
                TextPair(
                    t1=seg.text,
                    t2=_provider_rewrite(seg.text, provider, seg.id, copy),
                    label=int(PlagiarismLabel.IMITATION_PLAGIARISM),
                )
            )
    if n_negative > 0:
        pairs.extend(negative_sample(ordered, seed=seed, per_segment=n_negative))
    if n_decoy > 0:
        by_doc = {}
        for seg in ordered:
            by_doc.setdefault(seg.doc_id, []).append(seg)
        if len(by_doc) < 2:
            raise InsufficientDocuments(
                "decoy sampling needs segments from at least two documents"
            )
        for seg in ordered:
            partners = [t for t in ordered if t.doc_id != seg.doc_id]
            rng = np.random.default_rng((seed, seg.id, 11))
            picks = rng.choice(
                len(partners), size=min(n_decoy, len(partners)), replace=False
            )
            for copy, j in enumerate(picks):
                partner = partners[int(j)]
                pairs.append(
                    TextPair(
                        t1=seg.text,
                        t2=_provider_rewrite(
                            partner.text, provider, partner.id, 500 + copy
                        ),
                        label=int(PlagiarismLabel.NO_PLAGIARISM),
                    )
                )
    return pairs


def split_dataset(pairs, ratio=0.8, seed=0):
    """Stratified shuffle-split; train size rounds up within each label."""
    if len(pairs) < 2:
        raise TooFewSamples("need at least two pairs to split")
    by_label = {}
    for i, pair in enumerate(pairs):
        by_label.setdefault(pair.label, []).append(i)
    rng = np.random.default_rng(seed)
    train_idx, test_idx = [], []
    for label in sorted(by_label):
        indices = np.array(by_label[label])
        rng.shuffle(indices)
        n_train = int(np.ceil(len(indices) * ratio))
        train_idx.extend(indices[:n_train].tolist())
        test_idx.extend(indices[n_train:].tolist())
    return [pairs[i] for i in sorted(train_idx)], [pairs[i] for i in sorted(test_idx)]


def write_corpus(segments, path):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for seg in segments:
                fh.write(
                    json.dumps(
                        {"id": seg.id, "doc_id": seg.doc_id, "text": seg.text},
                        sort_keys=True,
                    )
                )
                fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write corpus to {path}: {exc}") from exc


def read_corpus(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise IoFailure(f"cannot read corpus from {path}: {exc}") from exc
    segments = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
            seg = Segment(
                id=int(row["id"]),
                doc_id=str(row["doc_id"]),
                text=str(row["text"]),
                token_count=count_tokens(str(row["text"])),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CorruptFile(f"corpus line {lineno} is invalid: {exc}") from exc
        if not seg.text:
            raise CorruptFile(f"corpus line {lineno} has empty text")
        segments.append(seg)
    return segments


def write_dataset(pairs, path):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for pair in pairs:
                fh.write(
                    json.dumps(
                        {"t1": pair.t1, "t2": pair.t2, "label": pair.label},
                        sort_keys=True,
                    )
                )
                fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write dataset to {path}: {exc}") from exc


def read_dataset(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise IoFailure(f"cannot read dataset from {path}: {exc}") from exc
    pairs = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
            pair = TextPair(
                t1=str(row["t1"]), t2=str(row["t2"]), label=int(row["label"])
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CorruptFile(f"dataset line {lineno} is invalid: {exc}") from exc
        if pair.label not in (0, 1, 2):
            raise CorruptFile(f"dataset line {lineno} has label {pair.label}")
        if not pair.t1 or not pair.t2:
            raise CorruptFile(f"dataset line {lineno} has an empty text")
        pairs.append(pair)
    return pairs


# Vocabulary pools for the synthetic document generator, split into words
# the rule rewriter knows (SYNONYMS keys) and words it leaves alone. The
# mix per slot category controls how much of a sentence a rewrite touches.
_TABLE_ADJECTIVES = [
    "fast", "slow", "big", "small", "important", "strong", "weak", "new",
    "bright", "dark", "clear", "common", "rare", "whole", "main", "early",
    "quiet", "loud", "happy", "calm", "safe", "dangerous", "complex",
    "useful", "modern", "broad", "narrow", "deep", "exact", "rough",
    "smooth", "steady", "sudden", "typical", "unusual", "visible", "hidden",
    "huge", "tiny", "cold", "hot", "warm", "full", "empty", "heavy",
    "long", "short", "tall", "wide", "good", "great", "true",
    "real", "certain", "likely", "possible", "necessary", "busy", "ready",
    "available", "famous", "unknown", "fresh", "sharp", "gentle", "plain",
]
def _table_values(keys):
    """Synonym outputs for these keys that are not themselves keys."""
    return sorted(
        {v for k in keys for v in SYNONYMS[k] if v not in SYNONYMS}
    )


# The extra pools fold in the synonym outputs so rewritten vocabulary
# also occurs naturally in original documents; a rewrite is then only
# recognizable against its source, not by its word choice alone.
_EXTRA_ADJECTIVES = sorted(
    {
        "wooden", "golden", "silver", "iron", "round", "square", "humble",
        "eager", "solemn", "vivid", "rustic", "ancient", "distant",
        "nearby", "pleasant", "curious", "patient", "serious", "brave",
        "clever", "honest", "polite", "weary", "spacious", "crooked",
        "slender", "graceful", "amber", "crimson", "orderly", "restless",
        "faded",
    }
    | set(_table_values(_TABLE_ADJECTIVES))
)
_TABLE_VERBS = [
    ("show", "shows"), ("make", "makes"), ("use", "uses"), ("find", "finds"),
    ("need", "needs"), ("help", "helps"), ("start", "starts"),
    ("stop", "stops"), ("keep", "keeps"), ("give", "gives"),
    ("take", "takes"), ("get", "gets"), ("build", "builds"),
    ("change", "changes"), ("move", "moves"), ("check", "checks"),
    ("improve", "improves"), ("reduce", "reduces"), ("increase", "increases"),
    ("explain", "explains"), ("describe", "describes"), ("study", "studies"),
    ("measure", "measures"), ("watch", "watches"), ("choose", "chooses"),
    ("buy", "buys"), ("ask", "asks"), ("answer", "answers"),
    ("leave", "leaves"), ("reach", "reaches"), ("carry", "carries"),
    ("send", "sends"), ("hold", "holds"),
    ("walk", "walks"), ("speak", "speaks"), ("write", "writes"),
    ("read", "reads"), ("grow", "grows"), ("fall", "falls"),
    ("rise", "rises"), ("turn", "turns"), ("open", "opens"),
    ("close", "closes"), ("follow", "follows"), ("gather", "gathers"),
    ("share", "shares"), ("store", "stores"), ("repair", "repairs"),
    ("protect", "protects"), ("produce", "produces"), ("remain", "remains"),
]
def _table_verb_values():
    out = set()
    for base, third in _TABLE_VERBS:
        for vb, vt in zip(SYNONYMS[base], SYNONYMS[third]):
            if vb not in SYNONYMS:
                out.add((vb, vt))
    return out


_EXTRA_VERBS = sorted(
    {
        ("run", "runs"),
        ("travel", "travels"), ("settle", "settles"), ("wander", "wanders"),
        ("listen", "listens"), ("notice", "notices"), ("prefer", "prefers"),
        ("deliver", "delivers"), ("arrange", "arranges"), ("visit", "visits"),
        ("borrow", "borrows"), ("paint", "paints"), ("plant", "plants"),
        ("weigh", "weighs"), ("polish", "polishes"), ("mention", "mentions"),
        ("record", "records"), ("design", "designs"), ("manage", "manages"),
        ("invite", "invites"), ("attend", "attends"), ("adopt", "adopts"),
        ("review", "reviews"), ("discuss", "discusses"),
        ("imagine", "imagines"), ("suggest", "suggests"),
        ("support", "supports"), ("accept", "accepts"),
        ("refuse", "refuses"), ("ignore", "ignores"), ("await", "awaits"),
    }
    | _table_verb_values()
)
_TABLE_NOUNS = [
    "house", "car", "road", "city", "doctor", "teacher", "student", "book",
    "paper", "idea", "plan", "goal", "river", "mountain", "forest",
    "bridge", "market", "village", "journey", "story", "letter", "picture",
]
_EXTRA_NOUNS = sorted(set(_table_values(_TABLE_NOUNS)) | {
    "window", "door", "table", "clock", "farmer", "sailor", "artist",
    "singer", "driver", "keeper", "miller", "weaver", "hunter", "trader",
    "guide", "guest", "judge", "clerk", "pilot", "nurse", "baker", "smith",
    "tailor", "porter", "lamp", "wheel", "rope", "stone", "glass", "metal",
    "cloth", "grain", "fruit", "timber", "harbor", "valley", "island",
    "desert", "cellar", "gate", "fence", "barn", "mill", "well",
    "pond", "trail", "anchor", "basket", "bottle", "candle", "carpet",
    "ceiling", "chimney", "copper", "corner", "cottage", "courtyard",
    "cradle", "curtain", "cushion", "drawer", "fabric", "feather", "flask",
    "hammer", "handle", "hinge", "kettle", "ladder", "lantern", "leather",
    "marble", "mirror", "needle", "orchard", "oven", "pillar", "pitcher",
    "plank", "pocket", "pulley", "quarry", "ribbon", "saddle", "shelf",
    "shovel", "spindle", "stairway", "statue", "thread", "thimble",
    "tunnel", "vessel", "wagon", "wallet", "whistle",
})
_TABLE_ADVERBS = [
    "quickly", "slowly", "carefully", "easily", "clearly", "often",
    "rarely", "always", "nearly", "mostly", "really", "quite", "together",
    "soon", "later", "finally", "usually", "perhaps", "certainly",
    "completely", "exactly", "directly", "eventually", "suddenly",
]
_EXTRA_ADVERBS = sorted(
    {
        "quietly", "boldly", "gently", "firmly", "openly", "freely",
        "safely", "proudly", "calmly", "warmly", "briskly", "neatly",
        "softly", "loudly", "steadily", "patiently",
    }
    | set(_table_values(_TABLE_ADVERBS))
)

# Both members of every connective swap pair appear across the patterns,
# so a swapped connective is indistinguishable from a naturally chosen one.
_SENTENCE_PATTERNS = (
    "The {adj1} {noun1} {verb_s} the {noun2} {adv}.",
    "A {adj1} {noun1} {verb_s} a {adj2} {noun2}.",
    "This {noun1} {verb_s} the {adj1} {noun2} {adv}.",
    "That {noun1} also {verb_s} a {adj1} {noun2}.",
    "{adj1} {noun1} {verb_s} {adj2} {noun2} at the {noun3}.",
    "Every {noun1} {verb_s} the {noun2} {adv}.",
    "Each {adj1} {noun1} additionally {verb_s} the {noun2}.",
    "One {adj1} {noun1} can {verb} the {adj2} {noun2}.",
    "No {noun1} ever {verb_s} the {adj1} {noun2}.",
    "The {noun1} {verb_s} while the {adj1} {noun2} {verb2_s}.",
    "{adv}, the {adj1} {noun1} {verb_s} the {noun2}.",
    "Near the {adj1} {noun1}, a {noun2} {verb_s} {adv}.",
    "However, this {noun1} {verb_s} these {adj1} {noun2}s.",
    "Nevertheless, that {noun1} {verb_s} those {adj1} {noun2}s.",
    "Thus the {noun1} {verb_s} the {adj1} {noun2}.",
    "Therefore each {noun1} {verb_s} a {noun2} {adv}.",
    "Every {adj1} {noun1} will {verb} the {noun2}.",
)


def _pick(rng, pool, k):
    return [pool[i] for i in rng.choice(len(pool), size=k, replace=False)]


@dataclass
class DocVocabulary:
    nouns: list
    verbs: list
    adjectives: list
    adverbs: list
    synonym_mix: float


def _doc_vocabulary(rng):
    """Sample one document's word pools and its synonym-side mixing rate.

    The table share of each pool and the per-occurrence rate at which the
    document's prose uses the synonym side of a table word both vary per
    document. Original documents therefore cover the same key/synonym
    frequency mixtures a rewrite produces, occurrence inconsistency
    included, and word choice alone cannot flag rewritten text.
    """
    n_noun = int(rng.integers(4, 21))
    n_verb = int(rng.integers(6, 25))
    n_adj = int(rng.integers(5, 20))
    n_adv = int(rng.integers(3, 14))
    return DocVocabulary(
        nouns=_pick(rng, _TABLE_NOUNS, n_noun) + _pick(rng, _EXTRA_NOUNS, 50 - n_noun),
        verbs=_pick(rng, _TABLE_VERBS, n_verb) + _pick(rng, _EXTRA_VERBS, 30 - n_verb),
        adjectives=_pick(rng, _TABLE_ADJECTIVES, n_adj)
        + _pick(rng, _EXTRA_ADJECTIVES, 24 - n_adj),
        adverbs=_pick(rng, _TABLE_ADVERBS, n_adv)
        + _pick(rng, _EXTRA_ADVERBS, 16 - n_adv),
        synonym_mix=float(rng.uniform(0.0, 0.8)),
    )


def _mixed_word(word, q, rng):
    if word in SYNONYMS and rng.random() < q:
        vals = SYNONYMS[word]
        return vals[int(rng.integers(len(vals)))]
    return word


def _mixed_verb(pair, q, rng):
    base, third = pair
    if base in SYNONYMS and rng.random() < q:
        j = int(rng.integers(len(SYNONYMS[base])))
        return (SYNONYMS[base][j], SYNONYMS[third][j])
    return pair


def _make_sentence(rng, vocab):
    pattern = _SENTENCE_PATTERNS[int(rng.integers(len(_SENTENCE_PATTERNS)))]
    q = vocab.synonym_mix
    nouns = [_mixed_word(w, q, rng) for w in _pick(rng, vocab.nouns, 3)]
    verbs = [_mixed_verb(p, q, rng) for p in _pick(rng, vocab.verbs, 2)]
    adjs = [_mixed_word(w, q, rng) for w in _pick(rng, vocab.adjectives, 2)]
    adv = _mixed_word(
        vocab.adverbs[int(rng.integers(len(vocab.adverbs)))], q, rng
    )
    sentence = pattern.format(
        noun1=nouns[0],
        noun2=nouns[1],
        noun3=nouns[2],
        verb=verbs[0][0],
        verb_s=verbs[0][1],
        verb2_s=verbs[1][1],
        adj1=adjs[0],
        adj2=adjs[1],
        adv=adv,
    )
    return sentence[0].upper() + sentence[1:]


def generate_corpus(
    n_docs=10,
    segments_per_doc=20,
    seed=0,
    sentences_per_segment=(3, 6),
):
    """Seeded synthetic corpus: each document owns a sampled vocabulary.

    Sentences are template-filled from the document's own word pools, so
    segments within a document share vocabulary while cross-document pairs
    mostly differ. Returns segments with globally sequential ids.
    """
    if n_docs < 1 or segments_per_doc < 1:
        raise ValueError("need at least one document and one segment per document")
    rng = np.random.default_rng(seed)
    lo, hi = sentences_per_segment
    segments = []
    next_id = 0
    for d in range(n_docs):
        vocab = _doc_vocabulary(rng)
        doc_id = f"doc-{d:04d}"
        for _ in range(segments_per_doc):
            n_sentences = int(rng.integers(lo, hi + 1))
            text = " ".join(_make_sentence(rng, vocab) for _ in range(n_sentences))
            segments.append(
                Segment(
                    id=next_id,
                    doc_id=doc_id,
                    text=text,
                    token_count=count_tokens(text),
                )
            )
            next_id += 1
    return segments
