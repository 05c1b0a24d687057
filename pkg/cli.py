"""
Command-line interface for the PPV certificate toolkit using Typer and Rich.

Exit codes: 0 success, 1 malformed input, 2 domain refusal, 3 failed verification.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from certificates import (
    TOOL_NAME,
    TOOL_VERSION,
    load_certificate,
    load_problem,
    run_problem,
    to_json,
    verify_certificate,
    write_atomic,
)
from errors import CertifyError, DomainError, InputError
from models import CertificateFile, CertificateStatus, ErrorReport, ProblemFile, TaskName
from settings import settings

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3

# JSON goes to stdout; everything for humans goes to stderr
console = Console(stderr=True)
app = typer.Typer(name=TOOL_NAME, help="Exact certificates for parameterized Picard-Vessiot computations")

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    """Attach a single Rich handler to the root logger."""
    root = logging.getLogger()
    if any(isinstance(h, RichHandler) for h in root.handlers):
        return
    handler = RichHandler(console=console, show_path=settings.debug, markup=False)
    logging.basicConfig(level=settings.log_level, format="%(message)s", handlers=[handler])


@app.callback()
def main() -> None:
    configure_logging()


def _exit_code_for(error: Exception) -> int:
    if isinstance(error, DomainError):
        return EXIT_DOMAIN
    return EXIT_INPUT


def _error_text(problem: Optional[ProblemFile], error: CertifyError) -> str:
    report = ErrorReport(
        task=problem.task if problem is not None else None,
        error=error.to_payload(),
        tool=TOOL_NAME,
        version=TOOL_VERSION,
    )
    return to_json(report)


def _certificate_code(cert: CertificateFile) -> int:
    if cert.status is CertificateStatus.FAILED:
        return EXIT_VERIFY
    if cert.task is TaskName.VERIFY and not cert.result.get("verified"):
        return EXIT_VERIFY
    return EXIT_OK


def process(path: Path, output: Optional[Path]) -> int:
    """Run one problem file; write the certificate (or error object) and return the exit code."""
    problem: Optional[ProblemFile] = None
    try:
        problem = load_problem(path)
        if output is None and problem.options.output:
            output = Path(problem.options.output)
        cert = run_problem(problem)
    except CertifyError as e:
        logger.error("%s: %s", path, e.message)
        text = _error_text(problem, e)
        if output is not None:
            write_atomic(output, text)
        else:
            typer.echo(text, nl=False)
        return _exit_code_for(e)

    text = to_json(cert)
    if output is not None:
        write_atomic(output, text)
        logger.info("wrote %s", output)
    else:
        typer.echo(text, nl=False)
    return _certificate_code(cert)


@app.command()
def run(
    problem: Path = typer.Argument(..., help="Problem file (JSON)"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Certificate path"),
):
    """Run a problem file and emit its certificate."""
    code = process(problem, output)
    if code == EXIT_OK and output is not None:
        console.print(f"[green]✅ certificate written to {output}[/green]")
    raise typer.Exit(code=code)


@app.command()
def verify(certificate: Path = typer.Argument(..., help="Certificate file (JSON)")):
    """Re-check a certificate independently of the run that produced it."""
    try:
        cert = load_certificate(certificate)
    except InputError as e:
        typer.echo(_error_text(None, e), nl=False)
        raise typer.Exit(code=EXIT_INPUT)
    ok = verify_certificate(cert)
    if ok and cert.task is TaskName.VERIFY and not cert.result.get("verified"):
        ok = False
    if ok:
        console.print(f"[green]✅ {certificate}: verified[/green]")
        raise typer.Exit(code=EXIT_OK)
    console.print(f"[red]❌ {certificate}: verification failed[/red]")
    raise typer.Exit(code=EXIT_VERIFY)


@app.command()
def batch(
    problems: List[Path] = typer.Argument(..., help="Problem files"),
    out_dir: Path = typer.Option(..., "--out-dir", help="Directory for certificates"),
    workers: int = typer.Option(4, "--workers", min=1, help="Concurrent problem files"),
):
    """Run independent problem files concurrently; exit with the worst code."""
    targets = [out_dir / f"{p.stem}.cert.json" for p in problems]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        codes = list(pool.map(process, problems, targets))

    table = Table(show_header=True, header_style="bold")
    table.add_column("Problem", style="cyan")
    table.add_column("Certificate", style="white")
    table.add_column("Exit", style="white")
    for path, target, code in zip(problems, targets, codes):
        style = "green" if code == EXIT_OK else "red"
        table.add_row(str(path), str(target), f"[{style}]{code}[/{style}]")
    console.print(table)
    raise typer.Exit(code=max(codes, default=EXIT_OK))


@app.command()
def config():
    """Show the effective configuration."""
    console.print("[bold]🔧 Effective configuration[/bold]")
    table = Table(show_header=True, header_style="bold")
    table.add_column("Setting", style="cyan")
    table.add_column("Value", style="white")
    for name, value in settings.model_dump().items():
        table.add_row(name, str(value))
    console.print(table)


if __name__ == "__main__":
    app()
