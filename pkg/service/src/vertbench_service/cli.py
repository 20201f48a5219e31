"""Service entry point: vertbench-service --port N --model-kind lexicon --model PATH"""

from __future__ import annotations

import argparse
import sys

import uvicorn

from .app import app_from_config


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="vertbench-service")
    parser.add_argument("--port", type=int, default=8100)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--model-kind", choices=["lexicon", "pretrained"], default="lexicon")
    parser.add_argument("--model", required=True,
                        help="lexicon file path, or a pretrained model name")
    args = parser.parse_args(argv)
    if not 1 <= args.port <= 65535:
        parser.error("--port must be in [1, 65535]")
    app = app_from_config(args.model_kind, args.model)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
