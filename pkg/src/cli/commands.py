"""
CLI command definitions for cantorlab.
"""

import click

from .. import config
from .core import CantorLabCLI, setup_logging


@click.group()
@click.version_option(version="0.1.0", prog_name="cantorlab")
@click.option('--config', '-c', 'config_path', type=click.Path(dir_okay=False),
              help='JSON run configuration (diagram or substitution, metric, parameters)')
@click.option('--out', '-o', 'out_dir', default=config.DEFAULT_OUT_DIR, show_default=True,
              help='Directory for the JSON/CSV artifacts')
@click.option('--seed', type=click.IntRange(min=0), help='Random seed (overrides the config seed)')
@click.option('--verbose', '-v', count=True, help='Log progress to stderr (-vv for debug)')
@click.pass_context
def cli(ctx, config_path, out_dir, seed, verbose):
    """cantorlab - Cantor sets of stationary Bratteli diagrams: dimension, embeddings and spectra.

    Exit codes: 0 success, 2 configuration error, 3 failed precondition or
    tech condition, 4 invariant violation.
    """
    setup_logging(verbose)
    ctx.obj = CantorLabCLI(config_path, out_dir, seed)


@cli.command()
@click.pass_obj
def info(app: CantorLabCLI):
    """Diagram summary, primitivity witness, Perron data, Cantor verdicts (info.json, diagram.json)"""
    app.info()


@cli.command()
@click.option('--depth', '-N', type=click.IntRange(min=2), help='Depth of the level sums')
@click.option('--epsilon', type=float, help='Width of the numeric abscissa bracket')
@click.pass_obj
def dim(app: CantorLabCLI, depth, epsilon):
    """Abscissa of the zeta function, Hausdorff dimension and content curve (dim.json)"""
    app.dim(depth, epsilon)


@cli.command()
@click.option('--n', type=click.IntRange(min=1), help='Dimension of the bi-Lipschitz map into R^n')
@click.option('--s', type=float, help='Exponent of the bi-Hoelder map into R')
@click.option('--plan', is_flag=True, help='Choose telescoping k and n for the smallest reachable dimension')
@click.option('--depth', type=click.IntRange(min=1), help='Depth of the sampled paths')
@click.option('--samples', type=click.IntRange(min=1), help='Number of sampled points and pairs')
@click.option('--labels', type=click.Path(dir_okay=False), help='JSON edge labels')
@click.pass_obj
def embed(app: CantorLabCLI, n, s, plan, depth, samples, labels):
    """Embed sampled points and check distortion (embed_points.csv, embed_report.json).

    CSV columns: word, x1..xn (map into R^n, max norm), phi_s (map into R).
    """
    app.embed(n=n, s=s, depth=depth, samples=samples, plan=plan, labels=labels)


@cli.command()
@click.option('--s', type=float, help='Exponent of the Laplacian')
@click.option('--depth', type=click.IntRange(min=2), help='Depth of the eigenvalue table and omega-spectrum')
@click.option('--mode', type=click.Choice(list(config.SPECTRUM_MODES)), help='omega-spectrum approximation')
@click.option('--budget', type=click.IntRange(min=1), help='Path budget of the omega-spectrum')
@click.option('--beta-file', type=click.Path(dir_okay=False), help='JSON beta table (constant or per-s)')
@click.option('--seeds-file', type=click.Path(dir_okay=False), help='JSON seed eigenvalues per vertex')
@click.pass_obj
def spectrum(app: CantorLabCLI, s, depth, mode, budget, beta_file, seeds_file):
    """Eigenvalues, omega-spectrum and tech condition (eigenvalues.csv, omega.csv, spectrum_report.json).

    eigenvalues.csv: word, depth, eigenvalue, multiplicity. omega.csv: value, tail_bound.
    """
    app.spectrum(s=s, depth=depth, mode=mode, budget=budget, beta_file=beta_file, seeds_file=seeds_file)


@cli.command()
@click.option('--spectrum', is_flag=True, help='Also check the tech condition and the omega-spectrum map')
@click.option('--samples', type=click.IntRange(min=1), help='Number of sampled pairs per check')
@click.pass_obj
def verify(app: CantorLabCLI, spectrum, samples):
    """Run the invariant suite (verify.json)"""
    app.verify(spectrum=spectrum, samples=samples)
