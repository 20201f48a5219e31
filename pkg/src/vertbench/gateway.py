"""Uniform blackbox classifier access: a built-in lexicon backend, an HTTP
client for remote classifiers, plus response caching and query accounting."""

from __future__ import annotations

import math
import threading
from collections.abc import Callable
from dataclasses import dataclass

import requests

from .core import InvalidInputError, LabelDistribution, PROB_SUM_TOL, Verdict

DEFAULT_TIMEOUT_SECONDS = 30.0


class GatewayError(Exception):
    """Base class for classifier transport and protocol failures."""


class GatewayTimeoutError(GatewayError):
    pass


class GatewayConnectionError(GatewayError):
    pass


class MalformedResponseError(GatewayError):
    pass


@dataclass(frozen=True)
class LexiconModel:
    """Additive per-label word scores; a deterministic stand-in for a trained classifier.

    Scoring is whitespace-tokenized, so rewriting a word vertically removes
    its contribution entirely — the weakness the attack exploits.
    """

    labels: tuple[str, ...]
    weights: dict[str, tuple[float, ...]]
    bias: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise InvalidInputError("lexicon model needs at least one label")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidInputError("duplicate labels in lexicon model")
        if len(self.bias) != len(self.labels):
            raise InvalidInputError("bias must have one entry per label")
        for word, vec in self.weights.items():
            if len(vec) != len(self.labels):
                raise InvalidInputError(f"weight vector for {word!r} must have one entry per label")


def _softmax(scores: list[float]) -> list[float]:
    m = max(scores)
    exps = [math.exp(s - m) for s in scores]
    total = math.fsum(exps)
    return [e / total for e in exps]


def lexicon_score(model: LexiconModel, text: str) -> LabelDistribution:
    """Per-label score = bias + sum of token weights; softmax into a distribution.

    Unknown tokens contribute nothing.
    """
    scores = list(model.bias)
    for token in text.split():
        vec = model.weights.get(token)
        if vec is not None:
            for i, w in enumerate(vec):
                scores[i] += w
    probs = _softmax(scores)
    return LabelDistribution(dict(zip(model.labels, probs)))


def load_lexicon(path: str) -> LexiconModel:
    """Read the line-oriented lexicon format.

    First line: tab-separated labels. Then one line per word:
    ``word<TAB>score...``, one score per label. An optional ``__bias__``
    line carries per-label biases.
    """
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise InvalidInputError(f"empty lexicon file: {path}")
    labels = tuple(lines[0].split("\t"))
    weights: dict[str, tuple[float, ...]] = {}
    bias = (0.0,) * len(labels)
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != len(labels) + 1:
            raise InvalidInputError(f"{path}:{lineno}: expected {len(labels) + 1} columns, got {len(parts)}")
        try:
            vec = tuple(float(x) for x in parts[1:])
        except ValueError as exc:
            raise InvalidInputError(f"{path}:{lineno}: non-numeric score") from exc
        if parts[0] == "__bias__":
            bias = vec
        else:
            weights[parts[0]] = vec
    return LexiconModel(labels=labels, weights=weights, bias=bias)


def save_lexicon(model: LexiconModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(model.labels) + "\n")
        for word, vec in model.weights.items():
            fh.write(word + "\t" + "\t".join(repr(v) for v in vec) + "\n")
        if any(b != 0.0 for b in model.bias):
            fh.write("__bias__\t" + "\t".join(repr(b) for b in model.bias) + "\n")


@dataclass(frozen=True)
class ClassifierHandle:
    """One classifier behind the uniform interface.

    Exactly one of ``endpoint`` (remote backend) or ``model`` (lexicon
    backend) is set. An optional ``preprocess`` step runs on the input text
    before the backend sees it — this is how defended classifiers are
    modeled, on both the feedback and target side.
    """

    backend: str
    name: str
    endpoint: str | None = None
    model: LexiconModel | None = None
    preprocess: Callable[[str], str] | None = None
    timeout: float = DEFAULT_TIMEOUT_SECONDS

    def __post_init__(self) -> None:
        if self.backend not in ("lexicon", "remote"):
            raise InvalidInputError(f"unknown backend {self.backend!r}")
        if self.backend == "lexicon" and (self.model is None or self.endpoint is not None):
            raise InvalidInputError("lexicon backend requires model and no endpoint")
        if self.backend == "remote" and (self.endpoint is None or self.model is not None):
            raise InvalidInputError("remote backend requires endpoint and no model")


def lexicon_handle(model: LexiconModel, name: str = "lexicon") -> ClassifierHandle:
    return ClassifierHandle(backend="lexicon", name=name, model=model)


def remote_handle(endpoint: str, name: str | None = None,
                  timeout: float = DEFAULT_TIMEOUT_SECONDS) -> ClassifierHandle:
    return ClassifierHandle(backend="remote", name=name or endpoint,
                            endpoint=endpoint, timeout=timeout)


def parse_classifier_spec(spec: str) -> ClassifierHandle:
    """Parse ``lexicon:PATH`` or ``remote:URL`` into a handle."""
    kind, sep, rest = spec.partition(":")
    if not sep or not rest:
        raise InvalidInputError(f"classifier spec must be lexicon:PATH or remote:URL, got {spec!r}")
    if kind == "lexicon":
        return ClassifierHandle(backend="lexicon", name=spec, model=load_lexicon(rest))
    if kind == "remote":
        return ClassifierHandle(backend="remote", name=spec, endpoint=rest)
    raise InvalidInputError(f"unknown classifier kind {kind!r} in spec {spec!r}")


def with_preprocess(handle: ClassifierHandle, preprocess: Callable[[str], str] | None,
                    suffix: str = "") -> ClassifierHandle:
    """A copy of ``handle`` that runs ``preprocess`` before classification."""
    return ClassifierHandle(
        backend=handle.backend,
        name=handle.name + suffix,
        endpoint=handle.endpoint,
        model=handle.model,
        preprocess=preprocess,
        timeout=handle.timeout,
    )


class QueryLedger:
    """Counts backend queries and caches verdicts by exact input text.

    ``count`` is the number of cache misses (real backend invocations);
    ``hits`` the number of lookups served from cache. A ledger must not be
    shared between different classifiers — cache keys are texts only.
    """

    def __init__(self) -> None:
        self.count = 0
        self.hits = 0
        self.cache: dict[str, Verdict] = {}
        self._lock = threading.Lock()

    def lookup(self, text: str, compute: Callable[[str], Verdict]) -> Verdict:
        with self._lock:
            cached = self.cache.get(text)
            if cached is not None:
                self.hits += 1
                return cached
            verdict = compute(text)
            self.cache[text] = verdict
            self.count += 1
            return verdict


def classify(handle: ClassifierHandle, text: str, ledger: QueryLedger) -> Verdict:
    """Classify ``text``, going through the ledger's cache.

    Cache keys are exact byte strings of the ORIGINAL text; any preprocess
    step runs inside the miss path, so a defended classifier still caches by
    what the caller sent.
    """
    def compute(t: str) -> Verdict:
        if handle.preprocess is not None:
            t = handle.preprocess(t)
        if handle.backend == "lexicon":
            assert handle.model is not None
            return Verdict.from_distribution(lexicon_score(handle.model, t))
        assert handle.endpoint is not None
        return classify_remote(handle.endpoint, t, timeout=handle.timeout)

    return ledger.lookup(text, compute)


def classify_remote(endpoint: str, text: str,
                    timeout: float = DEFAULT_TIMEOUT_SECONDS) -> Verdict:
    """POST ``{"text": ...}`` to ``endpoint``/classify and validate the response.

    Timeouts, refused connections, and protocol violations raise distinct
    GatewayError subclasses.
    """
    url = endpoint.rstrip("/") + "/classify"
    try:
        response = requests.post(url, json={"text": text}, timeout=timeout)
    except requests.Timeout as exc:
        raise GatewayTimeoutError(f"classifier at {url} timed out after {timeout}s") from exc
    except requests.ConnectionError as exc:
        raise GatewayConnectionError(f"cannot reach classifier at {url}: {exc}") from exc
    except requests.RequestException as exc:
        raise GatewayError(f"request to {url} failed: {exc}") from exc
    if response.status_code != 200:
        raise MalformedResponseError(f"{url} returned status {response.status_code}: {response.text[:200]}")
    try:
        body = response.json()
    except ValueError as exc:
        raise MalformedResponseError(f"{url} returned non-JSON body") from exc
    return _parse_verdict_body(body, url)


def _parse_verdict_body(body: object, source: str) -> Verdict:
    if not isinstance(body, dict):
        raise MalformedResponseError(f"{source}: response body is not an object")
    label = body.get("label")
    probs = body.get("probs")
    if not isinstance(label, str) or not isinstance(probs, dict):
        raise MalformedResponseError(f"{source}: response must carry string 'label' and object 'probs'")
    cleaned: dict[str, float] = {}
    for key, value in probs.items():
        if not isinstance(key, str) or not isinstance(value, (int, float)) or isinstance(value, bool):
            raise MalformedResponseError(f"{source}: probs must map labels to numbers")
        cleaned[key] = float(value)
    if label not in cleaned:
        raise MalformedResponseError(f"{source}: label {label!r} missing from probs")
    total = math.fsum(cleaned.values())
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise MalformedResponseError(f"{source}: probs sum to {total}, expected 1")
    if cleaned[label] < max(cleaned.values()) - PROB_SUM_TOL:
        raise MalformedResponseError(f"{source}: label {label!r} is not an argmax of probs")
    try:
        return Verdict(label=label, distribution=LabelDistribution(cleaned))
    except InvalidInputError as exc:
        raise MalformedResponseError(f"{source}: {exc}") from exc


def check_health(endpoint: str, timeout: float = DEFAULT_TIMEOUT_SECONDS) -> bool:
    """True iff GET /health returns 200 with body "ok"."""
    url = endpoint.rstrip("/") + "/health"
    try:
        response = requests.get(url, timeout=timeout)
    except requests.RequestException as exc:
        raise GatewayConnectionError(f"cannot reach {url}: {exc}") from exc
    return response.status_code == 200 and response.text == "ok"
