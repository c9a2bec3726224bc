"""
FuzzyRec CLI - generate data, train, evaluate and explain fuzzy rule networks.

Uses proper package imports and the DI container.
"""

import keyword
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

import click
import pandas as pd
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from fuzzyrec import __version__
from fuzzyrec.application.orchestrators.repro_orchestrator import (
    BASELINE_ROW,
    MODEL_ROW,
    MetricsTable,
    RuleTable,
)
from fuzzyrec.domain.atoms.models.catalog import AtomCatalog
from fuzzyrec.domain.atoms.services.atomizer import MOVIELENS, SYNTHETIC
from fuzzyrec.domain.data.services.synthetic_generator import (
    generate_synthetic,
    write_synthetic_csv,
)
from fuzzyrec.domain.evaluation.models.report import METRICS, MetricsReport
from fuzzyrec.domain.exceptions.exception import (
    CheckFailedException,
    ConfigurationException,
    DataException,
    FuzzyRecException,
)
from fuzzyrec.domain.explain.rule_extraction import (
    duplicate_rules,
    extract_rules,
    render_horn,
    weight_distribution,
)
from fuzzyrec.domain.network.models.rule_network import RuleNetwork
from fuzzyrec.domain.training.models.history import TrainHistory
from fuzzyrec.infrastructure.config.settings import Settings, load_settings
from fuzzyrec.infrastructure.di_container import ServiceContainer
from fuzzyrec.infrastructure.persistence.catalog_file import read_catalog
from fuzzyrec.infrastructure.persistence.checkpoint_file import SUFFIX, FileCheckpointRepository
from fuzzyrec.infrastructure.persistence.report_writer import ReportWriter
from fuzzyrec.utils.gradcheck import run_gradcheck
from fuzzyrec.utils.run_logging import RunLogger, configure_logging

console = Console()
err_console = Console(stderr=True)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CHECK = 3

RUN_LOG = "run.log"
METRIC_LABELS = {"precision": "P", "recall": "R", "ndcg": "NDCG", "map": "MAP"}

# (config key, click type, help); the flag is the key with dashes.
CONFIG_FLAGS: List[Tuple[str, Any, str]] = [
    ("k", str, "Number of rules; a comma list such as 5,10 sets the metric cutoffs"),
    ("learning_rate", float, "Adam learning rate"),
    ("epochs", int, "Training epochs"),
    ("lambda", float, "Sparsity penalty weight"),
    ("batch_size", str, "Mini-batch size or 'full'"),
    ("seed", int, "Random seed"),
    ("adam_beta1", float, "Adam first-moment decay"),
    ("adam_beta2", float, "Adam second-moment decay"),
    ("adam_eps", float, "Adam epsilon"),
    ("init_scale", float, "Half-width of the uniform weight initialisation"),
    ("restarts", int, "Seeded restarts; the lowest final objective is kept"),
    ("shuffle", click.BOOL, "Reshuffle mini-batches every epoch"),
    ("chunk_size", int, "Samples per vectorised chunk"),
    ("log_every", int, "Log training progress every N epochs"),
    ("dataset", click.Choice([SYNTHETIC, MOVIELENS]), "Dataset"),
    ("movielens_dir", click.Path(path_type=Path), "Directory with the MovieLens .dat files"),
    ("ratings_path", click.Path(path_type=Path), "MovieLens ratings.dat"),
    ("users_path", click.Path(path_type=Path), "MovieLens users.dat"),
    ("movies_path", click.Path(path_type=Path), "MovieLens movies.dat"),
    ("synthetic_path", click.Path(path_type=Path), "Synthetic corpus CSV (generated if unset)"),
    ("synthetic_samples", int, "Samples in a generated synthetic corpus"),
    ("synthetic_users", int, "Users in a generated synthetic corpus"),
    ("synthetic_items", int, "Items in a generated synthetic corpus"),
    ("synthetic_overlap", click.BOOL, "Let planted rules co-fire on positives"),
    ("rating_threshold", float, "Ratings at or above this are relevant"),
    ("split_ratios", str, "Train,validation,test fractions"),
    ("percentiles", str, "Candidate percentiles for stat thresholds"),
    ("select_thresholds", click.BOOL, "Choose stat thresholds by learned weight"),
    ("selection_epochs", int, "Epochs of the threshold selection run"),
    ("degenerate_weight", float, "Weight below which a selection falls back to the median"),
    ("ks", str, "Metric cutoffs, e.g. 5,10"),
    ("runs", int, "Seeded repetitions"),
    ("candidates", click.Choice(["rated", "all"]), "Candidate items per test user"),
    ("threads", int, "Worker threads (default: available cores)"),
    ("display_threshold", float, "Fuzzy weight shown in rules"),
    ("baseline_epochs", int, "Bias baseline epochs"),
    ("baseline_reg_items", float, "Bias baseline item regularisation"),
    ("baseline_reg_users", float, "Bias baseline user regularisation"),
]


def _param_name(key: str) -> str:
    return f"{key}_" if keyword.iskeyword(key) else key


def config_options(func: Callable) -> Callable:
    """Add --config and one flag per configuration key."""
    for key, kind, help_text in reversed(CONFIG_FLAGS):
        flag = "--" + key.replace("_", "-")
        func = click.option(flag, _param_name(key), type=kind, default=None, help=help_text)(
            func
        )
    return click.option(
        "--config",
        "config_path",
        type=click.Path(dir_okay=False, path_type=Path),
        default=None,
        help="YAML configuration file",
    )(func)


def output_options(func: Callable) -> Callable:
    func = click.option("--verbose", "-v", is_flag=True, help="Debug logging")(func)
    return click.option(
        "--out-dir",
        type=click.Path(file_okay=False, path_type=Path),
        default=Path("out"),
        show_default=True,
        help="Directory for every output file",
    )(func)


def _settings(
    config_path: Optional[Path], options: Dict[str, Any], dataset: Optional[str] = None
) -> Settings:
    if config_path is not None and not config_path.is_file():
        raise ConfigurationException(f"Config file not found: {config_path}")
    overrides = {key: options.get(_param_name(key)) for key, _, _ in CONFIG_FLAGS}
    rules = overrides.get("k")
    if rules is not None and "," in rules:
        if overrides.get("ks") is not None:
            raise ConfigurationException("Give the metric cutoffs with either --k or --ks")
        overrides["ks"], overrides["k"] = rules, None
    return load_settings(config_path, overrides, dataset=dataset)


@contextmanager
def _run(
    command: str, out_dir: Path, verbose: bool, seed: Optional[int]
) -> Iterator[Tuple[ReportWriter, RunLogger]]:
    """Set up logging and the output directory for one command."""
    configure_logging(verbose, err_console)
    writer = ReportWriter(out_dir)
    run_log = RunLogger(writer.path(RUN_LOG))
    handler = run_log.attach(logging.DEBUG if verbose else logging.INFO)
    run_log.log(f"{command} started", f"seed={seed}\nout_dir={out_dir}")
    console.print(f"[bold]fuzzyrec {command}[/bold]  seed={seed}  out_dir={out_dir}")
    try:
        yield writer, run_log
        run_log.log(f"{command} finished", ", ".join(str(p) for p in writer.written))
    finally:
        run_log.detach(handler)


class FuzzyRecGroup(click.Group):
    """Click group that maps failures to exit codes."""

    def main(self, *args: Any, **kwargs: Any) -> Any:
        kwargs["standalone_mode"] = False
        try:
            result = super().main(*args, **kwargs)
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.FileError as e:
            e.show()
            sys.exit(EXIT_DATA)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            err_console.print("Aborted.", style="red")
            sys.exit(EXIT_USAGE)
        except ConfigurationException as e:
            err_console.print(f"❌ Configuration error: {e}", style="red")
            sys.exit(EXIT_USAGE)
        except DataException as e:
            err_console.print(f"❌ Data error: {e}", style="red")
            sys.exit(EXIT_DATA)
        except CheckFailedException as e:
            err_console.print(f"❌ Check failed: {e}", style="red")
            sys.exit(EXIT_CHECK)
        except FuzzyRecException as e:
            err_console.print(f"❌ Error: {e}", style="red")
            sys.exit(EXIT_USAGE)
        if isinstance(result, int) and result != 0:
            sys.exit(result)
        return result


@click.group(cls=FuzzyRecGroup)
@click.version_option(__version__, prog_name="fuzzyrec")
def cli():
    """FuzzyRec - transparent recommendations from learned fuzzy rules"""
    pass


# ===== Rendering =====


def _metrics_table(rows: Dict[str, MetricsReport], title: str) -> Table:
    reports = list(rows.values())
    ks = reports[0].ks if reports else []
    table = Table(title=title)
    table.add_column("Model", style="bold")
    for metric in METRICS:
        for k in ks:
            table.add_column(f"{METRIC_LABELS[metric]}@{k}", justify="right")
    for model, report in rows.items():
        cells = []
        for metric in METRICS:
            for k in ks:
                value = report.get(metric, k)
                cell = f"{value.mean:.3f}"
                if value.std_defined:
                    cell += f" ± {value.std:.3f}"
                cells.append(cell)
        table.add_row(model, *cells)
    return table


def _weights_table(weights: pd.DataFrame, threshold: float, title: str) -> Table:
    """Atoms as rows and rules as columns; large catalogs show only atoms some rule uses."""
    shown = weights.T
    if len(shown) > 12:
        shown = shown[(shown >= threshold).any(axis=1)]
    table = Table(title=title)
    table.add_column("Atom")
    for rule in shown.columns:
        table.add_column(str(rule), justify="right")
    for atom, row in shown.iterrows():
        table.add_row(
            str(atom),
            *[
                f"[bold]{w:.3f}[/bold]" if w >= threshold else f"[dim]{w:.3f}[/dim]"
                for w in row
            ],
        )
    return table


def _horn_table(clauses: List[str]) -> Table:
    table = Table(title="Rules")
    table.add_column("Rule", justify="right")
    table.add_column("Horn clause")
    for index, clause in enumerate(clauses, 1):
        table.add_row(f"R{index}", clause)
    return table


def _losses_panel(history: TrainHistory, seed: int) -> Panel:
    return Panel(
        f"Epochs: {history.epochs}\n"
        f"Final training loss: {history.train_loss[-1]:.6f}\n"
        f"Final validation loss: {history.validation_loss[-1]:.6f}\n"
        f"Mean fuzzy weight: {history.mean_fuzzy_weight[-1]:.4f}\n"
        f"Time: {history.seconds:.1f}s\n"
        f"Seed: {seed}",
        title="Training complete",
        style="green",
    )


def _slug(text: str) -> str:
    return text.lower().replace(" ", "_")


def _checkpoint_container(settings: Settings, directory: Path) -> ServiceContainer:
    """Container whose checkpoint repository is the directory holding the checkpoints."""
    return ServiceContainer(settings, {"checkpoint_storage": "file", "checkpoint_dir": directory})


def _checkpoint_name(path: Path) -> str:
    if path.suffix != SUFFIX:
        raise click.BadParameter(f"checkpoint must end in {SUFFIX}: {path}")
    return path.stem


def _save_checkpoint(
    writer: ReportWriter,
    container: ServiceContainer,
    name: str,
    net: RuleNetwork,
    catalog: AtomCatalog,
    dataset: Optional[str] = None,
) -> Path:
    """Store through the experiment service and list both files in the manifest."""
    container.get_experiment_service(dataset).save_network(name, net, catalog)
    repository = container.get_checkpoint_repository()
    assert isinstance(repository, FileCheckpointRepository)
    writer.track(repository.catalog_path_of(name))
    return writer.track(repository.path_of(name))


# ===== Commands =====


@cli.command()
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Corpus CSV (default: <out-dir>/synthetic.csv)",
)
@config_options
@output_options
def synth(out: Optional[Path], out_dir: Path, verbose: bool, config_path, **options):
    """Generate the synthetic corpus with planted rules"""
    settings = _settings(config_path, options, dataset=SYNTHETIC)
    seed = settings.train.seed
    data = settings.data
    with _run("synth", out_dir, verbose, seed) as (writer, _):
        corpus = generate_synthetic(
            seed=seed,
            n_samples=data.synthetic_samples,
            n_users=data.synthetic_users,
            n_items=data.synthetic_items,
            overlap=data.synthetic_overlap,
        )
        target = out or writer.path("synthetic.csv")
        write_synthetic_csv(corpus, target)
        writer.track(target)

        table = Table(title=f"Synthetic corpus (seed={seed})")
        table.add_column("Statistic")
        table.add_column("Value", justify="right")
        table.add_row("samples", str(len(corpus)))
        table.add_row("positive rate", f"{corpus.positive_rate:.4f}")
        for index, count in enumerate(corpus.rule_support(), 1):
            table.add_row(f"rule {index} support", str(int(count)))
        console.print(table)
        writer.write_manifest("synth", seed, inputs={}, config=settings.flat())
    console.print(f"✅ Wrote {target}")


@cli.command()
@click.option(
    "--out-checkpoint",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Checkpoint path (default: <out-dir>/model.ckpt)",
)
@config_options
@output_options
def train(out_checkpoint: Optional[Path], out_dir: Path, verbose: bool, config_path, **options):
    """Build atoms and train a rule network"""
    settings = _settings(config_path, options)
    seed = settings.train.seed
    target = out_checkpoint or out_dir / f"model{SUFFIX}"
    name = _checkpoint_name(target)
    with _run("train", out_dir, verbose, seed) as (writer, run_log):
        container = _checkpoint_container(settings, target.parent)
        service = container.get_experiment_service()
        prepared = service.prepare()
        if prepared.selection is not None:
            run_log.log("Threshold selection", repr(prepared.selection.chosen))
        net, history = service.train(prepared)
        checkpoint_path = _save_checkpoint(writer, container, name, net, prepared.catalog)
        writer.write_history(history)
        writer.write_weights(net, prepared.catalog)
        writer.write_manifest(
            "train", seed, inputs=prepared.inputs, config=settings.flat()
        )
        console.print(_losses_panel(history, seed))
    console.print(f"✅ Checkpoint saved to {checkpoint_path}")


@cli.command(name="eval")
@click.option(
    "--checkpoint",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Evaluate a trained checkpoint",
)
@click.option("--baseline", type=click.Choice(["bias"]), default=None, help="Evaluate a baseline")
@click.option(
    "--catalog",
    "catalog_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Atom catalog of the checkpoint (default: next to it)",
)
@config_options
@output_options
def evaluate(
    checkpoint: Optional[Path],
    baseline: Optional[str],
    catalog_path: Optional[Path],
    out_dir: Path,
    verbose: bool,
    config_path,
    **options,
):
    """Rank held-out items and report P/R/NDCG/MAP

    Without --checkpoint or --baseline a fresh network is trained per seed.
    """
    if checkpoint is not None and baseline is not None:
        raise click.UsageError("--checkpoint and --baseline cannot be combined")
    settings = _settings(config_path, options)
    seed = settings.train.seed
    name = _checkpoint_name(checkpoint) if checkpoint is not None else None
    with _run("eval", out_dir, verbose, seed) as (writer, _):
        inputs: Dict[str, Any] = {}
        if checkpoint is not None and name is not None:
            service = _checkpoint_container(settings, checkpoint.parent).get_experiment_service()
            loaded = service.load_network(name)
            catalog = read_catalog(catalog_path) if catalog_path is not None else loaded.catalog
            prepared = service.prepare(catalog)
            if loaded.atom_names != prepared.catalog.names:
                raise DataException(
                    f"checkpoint atoms do not match the {prepared.dataset} catalog"
                )
            values = service.evaluate_network(loaded.network, prepared)
            report = MetricsReport.from_runs([values], [seed])
            label = checkpoint.stem
            inputs["checkpoint"] = checkpoint
        elif baseline is not None:
            service = ServiceContainer(settings).get_experiment_service()
            prepared = service.prepare()
            report = service.run_baseline(prepared).report
            label = BASELINE_ROW
        else:
            service = ServiceContainer(settings).get_experiment_service()
            prepared = service.prepare()
            report = service.run_model(prepared).report
            label = MODEL_ROW
        inputs.update(prepared.inputs)

        writer.write_metrics(report)
        writer.write_manifest("eval", seed, inputs=inputs, config=settings.flat())
        console.print(
            _metrics_table(
                {label: report},
                f"{prepared.dataset}: {len(report.seeds)} run(s) from seed {seed}",
            )
        )


@cli.command()
@click.option(
    "--checkpoint",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Checkpoint to explain",
)
@click.option(
    "--threshold",
    "--display-threshold",
    "display_threshold",
    type=float,
    default=None,
    help="Fuzzy weight needed to show an atom (default 0.1)",
)
@click.option("--ascii", "ascii_only", is_flag=True, help="Use AND and -> instead of ∧ and →")
@click.option("--seed", type=int, default=None, help="Seed recorded with the outputs")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="YAML configuration file",
)
@output_options
def explain(
    checkpoint: Path,
    display_threshold: Optional[float],
    ascii_only: bool,
    seed: Optional[int],
    config_path: Optional[Path],
    out_dir: Path,
    verbose: bool,
):
    """Print learned rules as Horn clauses and export weights"""
    settings = _settings(
        config_path, {"display_threshold": display_threshold, "seed": seed}
    )
    threshold = settings.eval.display_threshold
    run_seed = settings.train.seed
    name = _checkpoint_name(checkpoint)
    with _run("explain", out_dir, verbose, run_seed) as (writer, _):
        service = _checkpoint_container(settings, checkpoint.parent).get_experiment_service()
        loaded = service.load_network(name)
        net = loaded.network
        rules = extract_rules(net, loaded.atom_names, threshold)
        clauses = [render_horn(rule, ascii=ascii_only) for rule in rules]
        distribution = weight_distribution(net, threshold)

        writer.write_weights(net, loaded.atom_names)
        writer.write_distribution(distribution)
        writer.write_text("\n".join(clauses) + "\n", "rules.txt")
        writer.write_manifest(
            "explain",
            run_seed,
            inputs={"checkpoint": checkpoint},
            config={"display_threshold": threshold},
        )

        console.print(_horn_table(clauses))
        for group in duplicate_rules(rules):
            console.print(
                f"⚠️  Rules {', '.join(f'R{i + 1}' for i in group)} show the same atoms",
                style="yellow",
            )
        console.print(
            f"{distribution.share_below_threshold:.1%} of {distribution.count} weights "
            f"are below {threshold}; median {distribution.median:.3f}, "
            f"{len(distribution.outliers)} outlier(s)"
        )


@cli.command()
@click.option("--trials", type=int, default=100, show_default=True, help="Random instances")
@click.option(
    "--tolerance", type=float, default=1e-5, show_default=True, help="Allowed relative error"
)
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed")
@output_options
def gradcheck(trials: int, tolerance: float, seed: int, out_dir: Path, verbose: bool):
    """Compare analytic gradients with central differences"""
    with _run("gradcheck", out_dir, verbose, seed) as (writer, _):
        result = run_gradcheck(trials=trials, tolerance=tolerance, seed=seed)
        lines = [
            f"trials={result.trials}",
            f"tolerance={result.tolerance:g}",
            f"max_relative_error={result.max_relative_error:.3e}",
            f"max_absolute_error={result.max_absolute_error:.3e}",
            f"failures={len(result.failures)}",
            f"seed={seed}",
        ]
        lines += [
            f"trial {trial} W[{rule},{atom}] error {error:.3e}"
            for trial, rule, atom, error in result.failures
        ]
        writer.write_text("\n".join(lines) + "\n", "gradcheck.txt")
        writer.write_manifest(
            "gradcheck", seed, config={"trials": trials, "tolerance": tolerance}
        )
        console.print(
            f"Max relative error {result.max_relative_error:.3e} over {trials} trials (seed={seed})"
        )
        if not result.passed:
            raise CheckFailedException(
                f"{len(result.failures)} gradient entries exceed tolerance {tolerance:g}"
            )
    console.print("✅ Gradient check passed", style="green")


@cli.command()
@click.option(
    "--table",
    "--paper-table",
    "table_number",
    type=click.Choice(["2", "3", "4"]),
    required=True,
    help="2: synthetic rules, 3: MovieLens rules, 4: ranking metrics",
)
@config_options
@output_options
def repro(table_number: str, out_dir: Path, verbose: bool, config_path, **options):
    """Reproduce a published table with its stated hyperparameters"""
    if table_number == "2":
        settings = _settings(config_path, options, dataset=SYNTHETIC)
    elif table_number == "3":
        settings = _settings(config_path, options, dataset=MOVIELENS)
    else:
        settings = _settings(config_path, options)
    seed = settings.train.seed
    with _run(f"repro table {table_number}", out_dir, verbose, seed) as (writer, _):
        container = _checkpoint_container(settings, out_dir)
        orchestrator = container.get_repro_orchestrator()
        if table_number in ("2", "3"):
            table = (
                orchestrator.table2(seed) if table_number == "2" else orchestrator.table3(seed)
            )
            _write_rule_table(writer, table, container)
            inputs = table.prepared.inputs
        else:
            datasets = (
                (options["dataset"],) if options.get("dataset") else (SYNTHETIC, MOVIELENS)
            )
            metrics = orchestrator.table4(datasets, settings.eval.runs, seed)
            _write_metrics_table(writer, metrics)
            inputs = {}
        writer.write_manifest(
            f"repro --table {table_number}", seed, inputs=inputs, config=settings.flat()
        )


def _write_rule_table(writer: ReportWriter, table: RuleTable, container: ServiceContainer) -> None:
    threshold = container.get_experiment_service(table.dataset).settings.eval.display_threshold
    catalog = table.prepared.catalog
    writer.write_weights(table.network, catalog)
    writer.write_distribution(table.distribution)
    writer.write_history(table.history)
    writer.write_text("\n".join(table.horn_clauses) + "\n", "rules.txt")
    _save_checkpoint(writer, container, "model", table.network, catalog, table.dataset)

    console.print(
        _weights_table(table.weights, threshold, f"{table.dataset} weights (seed={table.seed})")
    )
    console.print(_horn_table(table.horn_clauses))
    console.print(_losses_panel(table.history, table.seed))


def _write_metrics_table(writer: ReportWriter, metrics: MetricsTable) -> None:
    by_dataset: Dict[str, Dict[str, MetricsReport]] = {}
    for (dataset, model), report in metrics.rows.items():
        writer.write_metrics(report, f"metrics_{dataset}_{_slug(model)}.csv")
        by_dataset.setdefault(dataset, {})[model] = report
    for dataset, rows in by_dataset.items():
        seeds = next(iter(rows.values())).seeds
        console.print(
            _metrics_table(rows, f"{dataset}: {len(seeds)} run(s), seeds {list(seeds)}")
        )


def main():
    """Entry point for the CLI"""
    cli()


if __name__ == "__main__":
    main()
