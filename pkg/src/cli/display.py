"""
Display and output formatting for the cantorlab CLI.
"""

from typing import Any, Dict, List, Optional

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ..helpers.utils import Utils

console = Console()


def _fmt(value: Any) -> str:
    if value is None:
        return "[dim]n/a[/dim]"
    if isinstance(value, float):
        return Utils.format_float(value, 8)
    return str(value)


class DisplayManager:
    """Handles all display and output formatting"""

    def show_warning(self, message: str):
        """Show warning message"""
        console.print(f"[yellow]{message}[/yellow]")

    def show_error(self, message: str):
        """Show error message"""
        console.print(f"[red]{message}[/red]")

    def show_success(self, message: str):
        """Show success message"""
        console.print(f"[green]{message}[/green]")

    def show_spinner(self, message: str):
        """Show spinner with message"""
        return console.status(f"[bold green]{message}")

    def show_written(self, paths: List[str]):
        for path in paths:
            console.print(f"  [dim]wrote[/dim] {path}")

    def show_info(self, report: Dict[str, Any]):
        table = Table(title=f"Diagram {report['name']}")
        table.add_column("Property", style="cyan", no_wrap=True)
        table.add_column("Value", style="magenta")
        table.add_row("Vertices", ", ".join(report["vertices"]))
        table.add_row("Edges", str(report["edge_count"]))
        table.add_row("Primitive", f"{report['primitive']} (witness {_fmt(report['primitive_witness'])})")
        perron = report.get("perron")
        if perron:
            table.add_row("Perron eigenvalue", _fmt(perron["lambda"]))
            table.add_row("Perron vector", ", ".join(_fmt(v) for v in perron["nu"]))
        table.add_row("Cantor set", str(report["cantor"]["cantor"]))
        table.add_row("#Pi_n (n=0..8)", ", ".join(str(c) for c in report["path_counts"]))
        console.print(table)

    def show_dim(self, report: Dict[str, Any]):
        lo, hi = report["s0_numeric"]
        console.print(Panel(
            f"Closed form s0: [cyan]{_fmt(report['s0_closed'])}[/cyan]\n"
            f"Numeric bracket: [magenta][{_fmt(lo)}, {_fmt(hi)}][/magenta] at depth {report['depth']}\n"
            f"Hausdorff dimension: [green]{_fmt(report['hausdorff_dimension'])}[/green]\n"
            f"Bracket contains closed form: {report['dims_equal']}",
            title="Dimension",
            border_style="blue",
        ))

    def _distortion_table(self, title: str, reports: List[Optional[Dict[str, Any]]]):
        table = Table(title=title)
        for column in ("Map", "Exponent", "Empirical", "Theoretical", "Certified", "Violations"):
            table.add_column(column)
        for report in reports:
            if not report:
                continue
            violations = report["violations"]
            table.add_row(
                report["map"],
                _fmt(report["exponent"]),
                f"[{_fmt(report['empirical_min'])}, {_fmt(report['empirical_max'])}]",
                f"[{_fmt(report['theoretical_lo'])}, {_fmt(report['theoretical_hi'])}]",
                str(report["lower_certified"]),
                f"[red]{violations}[/red]" if violations else "[green]0[/green]",
            )
        console.print(table)

    def show_embed(self, report: Dict[str, Any]):
        plan = report.get("plan")
        if plan:
            console.print(
                f"Plan: telescope k=[cyan]{plan['k']}[/cyan], dimension n=[cyan]{plan['n']}[/cyan] "
                f"(basic n={plan['basic_n']}, p^(k)={plan['p_k']})"
            )
        self._distortion_table("Embedding distortion", [report.get("lipschitz"), report.get("hoelder")])
        if report.get("images_disjoint") is not None:
            console.print(f"Cylinder images disjoint: {report['images_disjoint']}")

    def show_spectrum(self, report: Dict[str, Any]):
        tech = report["tech"]
        thresholds = report["thresholds"]
        console.print(Panel(
            f"s = {_fmt(report['s'])}, s0 = {_fmt(report['s0'])}, Lambda_s = {_fmt(report['lambda_s'])}\n"
            f"Bounded regime: {report['bounded']}\n"
            f"Eigenvalues: {report['eigenvalue_count']}, omega points: {_fmt(report.get('omega_count'))}\n"
            f"Tech condition: {'[green]pass[/green]' if tech['passed'] else '[red]fail[/red]'} "
            f"(s1 estimate {_fmt(tech['s1_estimate'])})\n"
            f"Thresholds: basic {_fmt(thresholds['basic'])}, telescoped {_fmt(thresholds['telescoped'])}, "
            f"labeling {_fmt(thresholds.get('labeling'))}, effective {_fmt(thresholds['effective'])}",
            title="Spectrum",
            border_style="blue",
        ))
        if report.get("distortion"):
            self._distortion_table("Omega-spectrum distortion", [report["distortion"]])

    def show_verify_results(self, results: Dict[str, Any]):
        """Display invariant check results with colors and icons"""
        console.print()
        console.print(Panel.fit(
            "[bold cyan]cantorlab verify[/bold cyan] - Invariant Suite",
            border_style="cyan",
            padding=(0, 2)
        ))
        console.print()

        def get_status_display(status: str) -> str:
            displays = {
                "success": "[green]●[/green]",
                "warning": "[yellow]●[/yellow]",
                "error": "[red]●[/red]",
            }
            return displays.get(status, "[dim]●[/dim]")

        for name, check in results["checks"].items():
            console.print(f"{get_status_display(check['status'])} [bold]{name}[/bold]")
            console.print(f"  └─ {check['message']} [dim]({check['checked']} checked)[/dim]")
            if check.get("detail"):
                console.print(f"     [dim]{check['detail']}[/dim]")

        console.print("─" * 80)
        overall = results["overall_status"]
        summary = {
            "success": "[bold green]✓ All invariants hold[/bold green]",
            "warning": f"[bold yellow]⚠ {results['warning_count']} check(s) skipped or inconclusive[/bold yellow]",
            "error": f"[bold red]✗ {results['error_count']} check(s) failed[/bold red]",
        }
        console.print(summary.get(overall, overall))
        console.print()
