"""Reference model process for the wire protocol (echo or centroid model)."""
import argparse
import logging
import sys
import os

# Add the parent directory to the path so we can import app
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.core.config import get_settings
from app.core.logging import configure_logging
from app.data.store import load_dataset
from app.services.model_server import serve
from app.services.oracle_service import EchoModel, fit_centroid_classifier


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Serve a reference model over stdin/stdout")
    parser.add_argument("--model", choices=["echo", "centroid"], default="echo")
    parser.add_argument("--data", help="Dataset directory (centroid model)")
    parser.add_argument("--temperature", type=float, default=get_settings().CENTROID_TEMPERATURE)
    args = parser.parse_args(argv)
    # stdout carries protocol messages only
    configure_logging("WARNING")

    if args.model == "echo":
        return serve(lambda T, V: EchoModel(V))

    if not args.data:
        logging.getLogger(__name__).error("--data is required for the centroid model")
        return 2
    dataset = load_dataset(args.data)
    model = fit_centroid_classifier(dataset.train, args.temperature, dataset.meta.C)
    return serve(lambda T, V: model)


if __name__ == "__main__":
    sys.exit(main())
