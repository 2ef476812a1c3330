from app.commands.common import EXIT_OK
from app.services.render_service import render_explanation_file


def register(subparsers) -> None:
    parser = subparsers.add_parser("render", help="Render an explanation as an SVG heatmap")
    parser.add_argument("--explanation", required=True, help="Explanation JSON file")
    parser.add_argument("--out", required=True, help="Output SVG file")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    path = render_explanation_file(args.explanation, args.out)
    print(f"heatmap written to {path}")
    return EXIT_OK
