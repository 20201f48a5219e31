"""FastAPI application exposing POST /classify and GET /health."""

from __future__ import annotations

import json
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .lexicon import load_lexicon, predict

MAX_BODY_BYTES = 1 << 20

Predictor = Callable[[str], tuple[str, dict[str, float]]]


def lexicon_predictor(path: str) -> Predictor:
    lexicon = load_lexicon(path)
    return lambda text: predict(lexicon, text)


def pretrained_predictor(model_name: str) -> Predictor:
    """Best-effort wrapper around a locally available transformers pipeline."""
    from transformers import pipeline  # heavyweight; import only when asked

    classifier = pipeline("text-classification", model=model_name, top_k=None)

    def run(text: str) -> tuple[str, dict[str, float]]:
        rows = classifier(text, truncation=True)[0]
        probs = {row["label"]: float(row["score"]) for row in rows}
        total = sum(probs.values())
        probs = {label: p / total for label, p in probs.items()}
        best = max(probs.values())
        return min(l for l, p in probs.items() if p == best), probs

    return run


def create_app(predictor: Predictor) -> FastAPI:
    app = FastAPI(title="vertbench classifier service")

    @app.get("/health")
    def health() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.post("/classify")
    async def classify(request: Request) -> JSONResponse:
        body = await request.body()
        if len(body) > MAX_BODY_BYTES:
            return JSONResponse({"error": "request body exceeds 1 MiB"}, status_code=413)
        try:
            payload = json.loads(body)
        except (ValueError, UnicodeDecodeError):
            return JSONResponse({"error": "body must be a JSON object"}, status_code=400)
        if not isinstance(payload, dict) or not isinstance(payload.get("text"), str):
            return JSONResponse({"error": 'body must carry a string field "text"'},
                                status_code=400)
        label, probs = predictor(payload["text"])
        return JSONResponse({"label": label, "probs": probs})

    return app


def app_from_config(model_kind: str, model: str) -> FastAPI:
    if model_kind == "lexicon":
        return create_app(lexicon_predictor(model))
    if model_kind == "pretrained":
        return create_app(pretrained_predictor(model))
    raise ValueError(f"unknown model kind {model_kind!r}")
