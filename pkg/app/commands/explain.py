from app.commands.common import EXIT_FAILURE, EXIT_OK, CommandError, load_json_model
from app.core.config import get_settings
from app.core.random import RandomSource
from app.data.store import load_dataset
from app.schemas.config import SsetConfig
from app.services.run_service import parse_oracle, run_explain, select_instances


def register(subparsers) -> None:
    settings = get_settings()
    parser = subparsers.add_parser("explain", help="Explain test instances with SSET")
    parser.add_argument("--data", required=True, help="Dataset directory")
    parser.add_argument("--oracle", required=True, help='builtin or cmd:"<model command>"')
    parser.add_argument("--config", help="SsetConfig JSON file (defaults when omitted)")
    selection = parser.add_mutually_exclusive_group(required=True)
    selection.add_argument("--ids", help="Comma-separated instance ids")
    selection.add_argument("--sample", type=int, help="Explain N test instances drawn without replacement")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--out", required=True, help="Output directory")
    parser.add_argument("--jobs", type=int, default=settings.DEFAULT_JOBS)
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    """Explain the selection; exit 1 when any instance failed."""
    config = load_json_model(args.config, SsetConfig, "config") if args.config else SsetConfig()
    dataset = load_dataset(args.data)
    oracle_spec = parse_oracle(args.oracle)

    ids = [i for i in args.ids.split(",") if i] if args.ids is not None else None
    if args.seed < 0:
        raise CommandError("--seed must be non-negative")
    rng = RandomSource(args.seed).child("selection")
    instance_ids = select_instances(dataset, ids, args.sample, rng)
    selection = "ids" if ids is not None else f"sample:{args.sample}"

    summary = run_explain(
        dataset=dataset,
        dataset_path=args.data,
        oracle_spec=oracle_spec,
        config=config,
        instance_ids=instance_ids,
        selection=selection,
        seed=args.seed,
        out_dir=args.out,
        jobs=args.jobs,
    )
    print(f"explained {len(instance_ids)} instance(s) -> {summary.output_dir}")
    for status, count in sorted(summary.statuses.items()):
        print(f"  {status}: {count}")
    if summary.errors:
        print(f"  errors: {len(summary.errors)}")
        return EXIT_FAILURE
    return EXIT_OK
