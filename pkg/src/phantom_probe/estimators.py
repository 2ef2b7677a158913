"""scikit-learn style wrappers around the functional pipeline.

They make pipeline stages configurable with ``get_params``/``set_params``
and composable with sklearn tooling. The functions in the other modules
remain the primary API.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .alignment import Outcome, Trial
from .masking import DecodeFilter, apply_filter, build_blocklist
from .probe import DEFAULT_FRACTION, AnnotatedDoc, annotate
from .simulator import BehaviorMixture, LabeledOutput, default_synonyms, generate_corpus, preset
from .taxonomy import AffixLexicon, default_affixes
from .vocab import Vocabulary, load_vocabulary, toy_vocabulary


def _resolve_vocab(vocab, normalize_whitespace) -> Vocabulary:
    if isinstance(vocab, Vocabulary):
        return vocab if normalize_whitespace is None else vocab.with_options(normalize_whitespace=normalize_whitespace)
    if vocab == "toy":
        return toy_vocabulary(True if normalize_whitespace is None else normalize_whitespace)
    return load_vocabulary(vocab, normalize_whitespace=normalize_whitespace)


class TargetSelector(TransformerMixin, BaseEstimator):
    """Corpus records (``{doc_id, text}`` or plain strings) to annotated documents."""

    def __init__(self, fraction=DEFAULT_FRACTION, length_range=None, seed=0, template=None):
        self.fraction = fraction
        self.length_range = length_range
        self.seed = seed
        self.template = template

    def fit(self, X=None, y=None):
        if not 0 < self.fraction <= 1:
            raise ValueError("fraction must be in (0, 1]")
        self.n_docs_seen_ = 0 if X is None else len(X)
        return self

    def transform(self, X) -> list[AnnotatedDoc]:
        docs = []
        for i, item in enumerate(X):
            doc_id, text = (item["doc_id"], item["text"]) if isinstance(item, dict) else (f"doc-{i}", item)
            docs.append(annotate(doc_id, text, self.fraction, None, self.length_range, self.seed, self.template))
        return docs


class ProbeAnalyzer(BaseEstimator):
    """Classifies (annotated doc, output) pairs into trials.

    ``X`` items are ``(AnnotatedDoc, output_text)`` or
    ``(AnnotatedDoc, output_text, output_ids)``.
    """

    def __init__(self, vocab="toy", normalize_whitespace=None, affixes=None):
        self.vocab = vocab
        self.normalize_whitespace = normalize_whitespace
        self.affixes = affixes

    def fit(self, X=None, y=None):
        self.vocab_ = _resolve_vocab(self.vocab, self.normalize_whitespace)
        if self.affixes is None:
            self.affixes_ = default_affixes()
        elif isinstance(self.affixes, AffixLexicon):
            self.affixes_ = self.affixes
        else:
            self.affixes_ = AffixLexicon.load(self.affixes)
        return self

    def transform(self, X) -> list[Trial]:
        from .cli import analyze_documents

        check_is_fitted(self, "vocab_")
        docs, outputs = [], {}
        for item in X:
            doc, text, *ids = item
            docs.append(doc)
            outputs[doc.doc_id] = {"output_text": text, "output_ids": ids[0] if ids else None}
        return analyze_documents(self.vocab_, docs, outputs, self.affixes_)

    def predict(self, X) -> list[str]:
        """Outcome labels, one per target, in document order."""
        return [t.outcome.value for t in self.transform(X)]

    def fit_predict(self, X, y=None) -> list[str]:
        return self.fit(X).predict(X)

    def score(self, X, y) -> float:
        """Share of targets whose outcome matches ``y``."""
        pred = self.predict(X)
        if len(pred) != len(y):
            raise ValueError(f"{len(y)} labels for {len(pred)} targets")
        return sum(p == (v.value if isinstance(v, Outcome) else v) for p, v in zip(pred, y)) / len(pred)


class PhantomSimulator(BaseEstimator):
    """Simulated model: annotated documents in, labelled outputs out."""

    def __init__(self, mixture="balanced", vocab="toy", seed=0, n_trials=None, synonyms=None, blocklist=None):
        self.mixture = mixture
        self.vocab = vocab
        self.seed = seed
        self.n_trials = n_trials
        self.synonyms = synonyms
        self.blocklist = blocklist

    def fit(self, X=None, y=None):
        self.vocab_ = _resolve_vocab(self.vocab, None)
        self.mixture_ = self.mixture if isinstance(self.mixture, BehaviorMixture) else preset(self.mixture)
        self.synonyms_ = default_synonyms() if self.synonyms is None else self.synonyms
        return self

    def predict(self, X: Sequence[AnnotatedDoc]) -> list[LabeledOutput]:
        check_is_fitted(self, "mixture_")
        n = self.n_trials if self.n_trials is not None else sum(len(d.targets) for d in X)
        return list(generate_corpus(self.vocab_, X, self.mixture_, self.synonyms_, self.seed, n, self.blocklist))


class BlocklistFilter(BaseEstimator):
    """Learns a token blocklist from Different trials and filters candidate lists with it."""

    def __init__(self, only_different=True):
        self.only_different = only_different

    def fit(self, X: Iterable[Trial], y=None):
        trials = list(X)
        if self.only_different:
            trials = [t for t in trials if t.outcome is Outcome.DIFFERENT]
        self.blocklist_ = build_blocklist(trials)
        return self

    def transform(self, X):
        """Apply the decode filter to each ``[(token_id, weight), ...]`` list."""
        check_is_fitted(self, "blocklist_")
        filt = DecodeFilter(self.blocklist_)
        return [apply_filter(filt, cands) for cands in X]

    def fit_transform(self, X, y=None, candidates=None):
        self.fit(X)
        return [] if candidates is None else self.transform(candidates)
