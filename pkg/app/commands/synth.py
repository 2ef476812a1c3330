from app.commands.common import EXIT_OK, load_json_model
from app.schemas.synthetic import SyntheticSpec
from app.services.synthetic_service import generate_synthetic, write_benchmark


def register(subparsers) -> None:
    parser = subparsers.add_parser("synth", help="Generate a synthetic dataset with planted saliency")
    parser.add_argument("--spec", required=True, help="SyntheticSpec JSON file")
    parser.add_argument("--out", required=True, help="Output dataset directory")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    """Write the dataset and its ground-truth sidecar."""
    spec = load_json_model(args.spec, SyntheticSpec, "synthetic spec")
    directory = write_benchmark(generate_synthetic(spec), args.out)
    print(f"dataset written to {directory} (train={spec.n_train}, test={spec.n_test})")
    return EXIT_OK
