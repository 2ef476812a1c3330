from pathlib import Path

from app.commands.common import EXIT_OK, CommandError
from app.core.file_store import ensure_directory, write_text_atomic
from app.data.store import load_dataset
from app.services.explanation_store import load_explanations
from app.services.report_service import build_report, render_markdown
from app.services.run_service import MANIFEST_FILE, load_manifest, open_oracle


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="Quality metrics, histograms and correlation of a run")
    parser.add_argument("--explanations", required=True, help="Directory written by explain")
    parser.add_argument("--data", required=True, help="Dataset directory")
    parser.add_argument("--with-baseline", action="store_true", help="Add the occlusion baseline row")
    parser.add_argument("--out", required=True, help="Output directory")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    """Write report.json and report.md; the baseline reuses the run's oracle."""
    explanations = load_explanations(args.explanations)
    if not explanations:
        raise CommandError(f"no explanation files in {args.explanations}")
    dataset = load_dataset(args.data)

    if args.with_baseline:
        if not (Path(args.explanations) / MANIFEST_FILE).is_file():
            raise CommandError(f"--with-baseline needs the run manifest in {args.explanations}")
        manifest = load_manifest(args.explanations)
        with open_oracle(manifest.oracle, dataset) as oracle:
            bundle = build_report(explanations, dataset, args.data, baseline_oracle=oracle)
    else:
        bundle = build_report(explanations, dataset, args.data)

    out = ensure_directory(args.out)
    write_text_atomic(out / "report.json", bundle.model_dump_json(indent=2) + "\n")
    markdown = render_markdown(bundle)
    write_text_atomic(out / "report.md", markdown)
    print(markdown, end="")
    return EXIT_OK
