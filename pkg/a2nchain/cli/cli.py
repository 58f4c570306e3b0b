import itertools
import logging
import logging.config
from contextlib import contextmanager
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

import typer
from importlib_resources import files
from tqdm import tqdm
from typing_extensions import Annotated

from a2nchain.bethe import enumerate_admissible
from a2nchain.bethe.solver import BetheSolver
from a2nchain.bethe.tables import find_table
from a2nchain.cli import pipelines
from a2nchain.cli.report import (
    decomposition_table,
    dumps,
    params_to_json,
    search_to_json,
    solution_table,
    spectrum_to_json,
    status_word,
    write_solution_csv,
)
from a2nchain.cli.utils import RunConfig, load_run_config, parse_eta, set_log_file_path
from a2nchain.config import Settings, System
from a2nchain.errors import A2NChainError, InvalidConfigurationError
from a2nchain.spectrum import SpectrumAnalyzer
from a2nchain.types import BoundarySet, ModelParams

logger = logging.getLogger(__name__)

app = typer.Typer()

ConfigOpt = Annotated[
    Optional[str], typer.Option("--config", help="YAML file with default options.")
]
OutOpt = Annotated[
    Optional[str],
    typer.Option("--out", help="Write the JSON report here instead of stdout."),
]
LogOpt = Annotated[str, typer.Option("--log-path", help="The path to the log file.")]
NOpt = Annotated[Optional[int], typer.Option("--n", help="Rank n of the chain.")]
SitesOpt = Annotated[Optional[int], typer.Option("--sites", help="Chain length N.")]
EtaOpt = Annotated[Optional[str], typer.Option("--eta", help="Anisotropy as 're,im'.")]
SetOpt = Annotated[Optional[str], typer.Option("--set", help="Boundary set, I or II.")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Random seed.")]
TolOpt = Annotated[Optional[float], typer.Option("--tol", help="Identity tolerance.")]
StartsOpt = Annotated[
    Optional[int], typer.Option("--starts", help="Seed budget per cardinality sector.")
]


def _configure_logging(log_path: str) -> None:
    config_path = files("a2nchain").joinpath("log_config.yml")
    logging.config.dictConfig(set_log_file_path(str(config_path), log_path))


def _run(action: Callable[[], int]) -> None:
    """Turn library errors into the exit-code contract."""
    try:
        code = action()
    except A2NChainError as e:
        logger.error(f"{e.name()}: {e.message()}")
        raise typer.Exit(e.code())
    except ValueError as e:
        logger.error(f"InvalidConfiguration: {e}")
        raise typer.Exit(InvalidConfigurationError().code())
    raise typer.Exit(code)


def _emit(doc: Any, out: Optional[str]) -> None:
    data = dumps(doc)
    if out is None:
        typer.echo(data.decode("utf-8"))
        return
    with open(out, "wb") as file:
        file.write(data)
    logger.info(f"Report written to {out}")


@contextmanager
def _started(settings: Settings) -> Iterator[System]:
    system = System(settings)
    system.instance(BetheSolver)
    system.instance(SpectrumAnalyzer)
    system.start()
    try:
        yield system
    finally:
        system.stop()


def _config(config: Optional[str], flags: Dict[str, Any]) -> RunConfig:
    if "set" in flags:
        flags["boundary"] = flags.pop("set")
    return load_run_config(config, flags)


@app.command()  # type: ignore
def verify(
    n: NOpt = None,
    sites: SitesOpt = None,
    eta: EtaOpt = None,
    set_: SetOpt = None,
    samples: Annotated[
        Optional[int],
        typer.Option("--samples", help="Random spectral points per identity."),
    ] = None,
    seed: SeedOpt = None,
    tol: TolOpt = None,
    config: ConfigOpt = None,
    out: OutOpt = None,
    log_path: LogOpt = "a2nchain.log",
) -> None:
    """Check the algebraic identities of one chain and report the residuals"""
    _configure_logging(log_path)

    def action() -> int:
        cfg = _config(
            config,
            {
                "n": n,
                "sites": sites,
                "eta": eta,
                "set": set_,
                "samples": samples,
                "seed": seed,
                "tol": tol,
                "out": out,
            },
        )
        p = cfg.params()
        report = pipelines.verify_report(p, cfg.samples, cfg.seed, cfg.settings())
        for name, suite in report["suites"].items():
            typer.echo(f"{name:10s} {status_word(suite['passed'])}", err=True)
        _emit(report, cfg.out)
        return 0 if report["passed"] else 1

    _run(action)


@app.command()  # type: ignore
def spectrum(
    n: NOpt = None,
    sites: SitesOpt = None,
    eta: EtaOpt = None,
    set_: SetOpt = None,
    config: ConfigOpt = None,
    out: OutOpt = None,
    log_path: LogOpt = "a2nchain.log",
) -> None:
    """Diagonalize the Hamiltonian and compare its clusters with the decomposition"""
    _configure_logging(log_path)

    def action() -> int:
        cfg = _config(
            config, {"n": n, "sites": sites, "eta": eta, "set": set_, "out": out}
        )
        settings = cfg.settings()
        with _started(settings) as system:
            report = pipelines.spectrum_pipeline(
                system.instance(SpectrumAnalyzer), cfg.params(), settings
            )
        if report.decomposition_observed is not None:
            typer.echo(decomposition_table(report.decomposition_observed), err=True)
        _emit(spectrum_to_json(report), cfg.out)
        return 0 if report.passed else 1

    _run(action)


@app.command()  # type: ignore
def bethe(
    n: NOpt = None,
    sites: SitesOpt = None,
    eta: EtaOpt = None,
    set_: SetOpt = None,
    m: Annotated[
        Optional[str], typer.Option("--m", help="Cardinalities as 'm1,...,mn'.")
    ] = None,
    all_: Annotated[
        bool, typer.Option("--all", help="Solve every admissible cardinality.")
    ] = False,
    starts: StartsOpt = None,
    seed: SeedOpt = None,
    probe: Annotated[
        Optional[List[str]],
        typer.Option("--probe", help="Probe point 're,im'; repeatable."),
    ] = None,
    check_tables: Annotated[
        bool, typer.Option("--check-tables", help="Refine the published roots as well.")
    ] = False,
    csv: Annotated[
        Optional[str],
        typer.Option("--csv", help="Also write the solution table as CSV."),
    ] = None,
    config: ConfigOpt = None,
    out: OutOpt = None,
    log_path: LogOpt = "a2nchain.log",
) -> None:
    """Solve the Bethe equations for one or all cardinality sectors"""
    _configure_logging(log_path)

    def action() -> int:
        probes: Optional[List[Tuple[float, float]]] = None
        if probe:
            probes = [(z.real, z.imag) for z in map(parse_eta, probe)]
        cfg = _config(
            config,
            {
                "n": n,
                "sites": sites,
                "eta": eta,
                "set": set_,
                "m": m,
                "all": all_ or None,
                "starts": starts,
                "seed": seed,
                "probes": probes,
                "check_tables": check_tables or None,
                "csv": csv,
                "out": out,
            },
        )
        p = cfg.params()
        settings = cfg.settings()
        if cfg.all:
            ms = enumerate_admissible(p, p.algebra)
        elif cfg.m is not None:
            ms = [tuple(cfg.m)]
        else:
            raise InvalidConfigurationError("give --m or --all")

        table = find_table(p) if cfg.check_tables else None
        if cfg.check_tables and table is None:
            raise InvalidConfigurationError(f"no published table for {p}")

        with _started(settings) as system:
            solver = system.instance(BetheSolver)
            results = pipelines.bethe_pipeline(
                solver, p, ms, cfg.starts, cfg.seed, settings
            )
            checks = solver.check_table(table) if table is not None else []

        typer.echo(solution_table(results), err=True)
        if cfg.csv:
            write_solution_csv(cfg.csv, results)
        doc: Dict[str, Any] = {
            "params": params_to_json(p),
            "sectors": [search_to_json(r) for r in results],
            "incomplete": any(not r.complete for r in results),
        }
        if cfg.check_tables:
            doc["table_checks"] = checks
        _emit(doc, cfg.out)
        return 0 if all(c["passed"] for c in checks) else 1

    _run(action)


@app.command()  # type: ignore
def completeness(
    n_range: Annotated[
        Optional[str], typer.Option("--n-range", help="Ranks as 'LO..HI'.")
    ] = None,
    sites_range: Annotated[
        Optional[str], typer.Option("--sites-range", help="Chain lengths as 'LO..HI'.")
    ] = None,
    sets: Annotated[
        Optional[str], typer.Option("--sets", help="Boundary sets, e.g. 'I,II'.")
    ] = None,
    eta: EtaOpt = None,
    starts: StartsOpt = None,
    seed: SeedOpt = None,
    config: ConfigOpt = None,
    out: OutOpt = None,
    log_path: LogOpt = "a2nchain.log",
) -> None:
    """Solve, diagonalize and reconcile every chain in a range"""
    _configure_logging(log_path)

    def action() -> int:
        boundary_sets: Optional[List[BoundarySet]] = None
        if sets:
            names = [s.strip() for s in sets.split(",")]
            boundary_sets = [BoundarySet(s) for s in names if s]
        cfg = _config(
            config,
            {
                "n_range": n_range,
                "sites_range": sites_range,
                "sets": boundary_sets,
                "eta": eta,
                "starts": starts,
                "seed": seed,
                "out": out,
            },
        )
        settings = cfg.settings()
        eta_value = complex(*cfg.eta)
        cells_params = [
            ModelParams(n=rank, N=length, eta=eta_value, boundary=b)
            for rank, length, b in itertools.product(
                range(cfg.n_range[0], cfg.n_range[1] + 1),
                range(cfg.sites_range[0], cfg.sites_range[1] + 1),
                cfg.sets,
            )
        ]
        cells = []
        with _started(settings) as system:
            solver = system.instance(BetheSolver)
            analyzer = system.instance(SpectrumAnalyzer)
            for p in tqdm(cells_params, desc="cells", disable=len(cells_params) < 2):
                cells.append(
                    pipelines.completeness_cell(
                        solver, analyzer, p, cfg.starts, cfg.seed, settings
                    )
                )

        for cell in cells:
            pp = cell["params"]
            typer.echo(
                f"n={pp['n']} N={pp['sites']} set {pp['set']:2s} {cell['status']}",
                err=True,
            )
        failed = [
            c
            for c in cells
            if c["status"] == "fail" or not c["dimension_sum"]["passed"]
        ]
        _emit(
            {
                "cells": cells,
                "passed": not failed,
                "incomplete": any(c["status"] == "incomplete" for c in cells),
            },
            cfg.out,
        )
        return 1 if failed else 0

    _run(action)


if __name__ == "__main__":
    app()
