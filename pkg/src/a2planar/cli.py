"""Command-line front end: runs the identity suites and computations
with machine-readable JSON reports.

Every subcommand prints a report of the form::

    {"suite": ..., "checks": [{"id", "status", "residual", "runtime_ms"}],
     "config": {...}}

and exits 0 if every check passed, 1 if any failed, 2 on usage errors.
"""

from __future__ import annotations

import json
import os
import sys
import time

import click

from . import pathalg as pa
from .algebra import (
    WebSum,
    check_braid,
    check_frels,
    check_hecke,
    check_markov,
    check_spherical,
    check_su3,
    cyclo_rank,
    gram as gram_rows,
    quotient_dim,
    trace_right,
)
from .graph import CellSystem, FusionGraph, build_A, pf_eigen, solve_cells
from .hecke import decompose as hecke_decompose, evaluate as hecke_evaluate, f13_relations
from .rewrite import normalize
from .scalar import Laurent
from .web import Web


def _precision() -> int:
    bits = int(os.environ.get("A2P_PRECISION", "64"))
    if bits != 64:
        raise click.UsageError(
            "only 64-bit floating point is supported (A2P_PRECISION=64)"
        )
    return bits


class Report:
    def __init__(self, suite: str, **config):
        self.suite = suite
        self.config = dict(config, precision_bits=_precision())
        self.checks = []
        self._t0 = time.perf_counter()

    def add(self, check_id: str, ok: bool, residual=None):
        now = time.perf_counter()
        self.checks.append(
            {
                "id": check_id,
                "status": "pass" if ok else "fail",
                "residual": residual,
                "runtime_ms": round(1000 * (now - self._t0), 3),
            }
        )
        self._t0 = now

    def emit(self, out=None, payload=None) -> int:
        doc = {"suite": self.suite, "checks": self.checks, "config": self.config}
        if payload is not None:
            doc["result"] = payload
        text = json.dumps(doc, indent=2, default=str)
        if out:
            with open(out, "w") as fh:
                fh.write(text + "\n")
        else:
            click.echo(text)
        return 0 if all(c["status"] == "pass" for c in self.checks) else 1


def _load_websum(path: str) -> WebSum:
    with open(path) as fh:
        rows = json.load(fh)
    if not rows:
        raise click.UsageError("empty web sum")
    webs = [(Web.from_json(r["web"]), Laurent.from_json(r["coeff"])) for r in rows]
    top, bot = webs[0][0].top, webs[0][0].bot
    return WebSum(top, bot, webs)


def _dump_websum(x: WebSum):
    return [{"coeff": c.to_json(), "web": w.to_json()} for w, c in x.terms.items()]


def _graph_option(n, graph_file) -> FusionGraph:
    if graph_file:
        with open(graph_file) as fh:
            return FusionGraph.from_json(json.load(fh))
    return build_A(n)


@click.group()
def main():
    """Exact engine for the two-colour spider calculus and its path algebras."""
    _precision()


# ---------------------------------------------------------------------------
# diagram-side commands

@main.command("normalize")
@click.option("--in", "infile", required=True, type=click.Path(exists=True))
@click.option("--out", default=None, type=click.Path())
def normalize_cmd(infile, out):
    """Reduce a web sum to its normal form."""
    x = _load_websum(infile)
    nf = normalize(list(x.terms.items()))
    rep = Report("normalize", infile=infile)
    rep.add("normalize", True, residual=0)
    y = WebSum(x.top, x.bot, nf)
    sys.exit(rep.emit(out, payload=_dump_websum(y)))


@main.command("trace")
@click.option("--in", "infile", required=True, type=click.Path(exists=True))
def trace_cmd(infile):
    """Closed-diagram trace of a web sum, as an exact Laurent polynomial."""
    x = _load_websum(infile)
    val = trace_right(x)
    rep = Report("trace", infile=infile)
    rep.add("trace", True, residual=0)
    sys.exit(rep.emit(None, payload=val.to_json()))


@main.command("gram")
@click.option("--sigma", required=True, help="boundary word, e.g. '---+++' or '-,-,-,+,+,+'")
@click.option("--n", required=True, type=int)
@click.option("--rank", "want_rank", is_flag=True)
def gram_cmd(sigma, n, want_rank):
    """Gram matrix of the diagram basis at the order-n root."""
    sigma = sigma.replace(",", "")
    basis, rows = gram_rows(sigma, n)
    rep = Report("gram", sigma=sigma, n=n)
    rep.add("gram", True, residual=0)
    if want_rank:
        r = cyclo_rank(rows)
        click.echo(str(r))
        sys.exit(rep.emit(None, payload={"rank": r}))
    payload = [[c.to_json() for c in row] for row in rows]
    sys.exit(rep.emit(None, payload=payload))


@main.command("decompose")
@click.option("--in", "infile", required=True, type=click.Path(exists=True))
@click.option("--max-len", default=8, type=int)
def decompose_cmd(infile, max_len):
    """Write a web sum as a word in the standard generators."""
    x = _load_websum(infile)
    word = hecke_decompose(x, max_len=max_len)
    ok = (hecke_evaluate(word) - x).is_zero()
    rep = Report("decompose", infile=infile)
    rep.add("round_trip", ok, residual=0 if ok else "mismatch")
    sys.exit(rep.emit(None, payload=repr(word)))


@main.command("relcheck")
@click.option(
    "--suite", required=True,
    type=click.Choice(["hecke", "su3", "frels", "markov", "braid", "spherical", "f13"]),
)
@click.option("--m", default=4, type=int)
@click.option("--n", default=7, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--trials", default=1000, type=int)
def relcheck_cmd(suite, m, n, seed, trials):
    """Run one of the exact relation suites."""
    import random

    rep = Report("relcheck:" + suite, m=m, n=n, seed=seed, trials=trials)
    if suite == "hecke":
        results = check_hecke(m)
    elif suite == "su3":
        results = check_su3(m)
    elif suite == "frels":
        results = check_frels(m)
    elif suite == "markov":
        results = check_markov(m, min(trials, 100), random.Random(seed))
    elif suite == "braid":
        results = check_braid(m)
    elif suite == "spherical":
        results = check_spherical()
    else:
        results = f13_relations(3, n)
    for name, ok in results:
        rep.add(name, ok, residual=0 if ok else "nonzero")
    sys.exit(rep.emit())


# ---------------------------------------------------------------------------
# path-side commands

@main.command("dims")
@click.option("--n", default=5, type=int)
@click.option("--graph", "graph_file", default=None, type=click.Path(exists=True))
@click.option("--i", "ii", required=True, type=int)
@click.option("--j", "jj", required=True, type=int)
def dims_cmd(n, graph_file, ii, jj):
    """Dimension of the level-(i, j) path-pair algebra."""
    g = _graph_option(n, graph_file)
    d = pa.dims(g, ii, jj)
    rep = Report("dims", n=g.n, graph=g.name or graph_file, i=ii, j=jj)
    rep.add("dims", True, residual=0)
    click.echo(str(d))
    sys.exit(rep.emit(None, payload={"dims": d}))


@main.group("graph")
def graph_grp():
    """Fusion-graph utilities."""


@graph_grp.command("build-a")
@click.option("--n", required=True, type=int)
@click.option("--out", default=None, type=click.Path())
def build_a_cmd(n, out):
    """Emit the weight-lattice graph at Coxeter number n as JSON."""
    g = build_A(n)
    rep = Report("graph:build-a", n=n)
    rep.add("build", True, residual=0)
    sys.exit(rep.emit(out, payload=g.to_json()))


@main.group("cells")
def cells_grp():
    """Cell-system (Boltzmann weight) utilities."""


@cells_grp.command("solve")
@click.option("--n", default=None, type=int)
@click.option("--graph", "graph_file", default=None, type=click.Path(exists=True))
@click.option("--tol", default=1e-10, type=float)
@click.option("--seed", default=0, type=int)
def cells_solve_cmd(n, graph_file, tol, seed):
    """Solve the frame equations for cell weights on a graph."""
    if n is None and graph_file is None:
        raise click.UsageError("need --n or --graph")
    g = _graph_option(n, graph_file)
    cells = solve_cells(g, tol=tol, seed=seed)
    rep = Report("cells:solve", n=g.n, graph=g.name or graph_file, tol=tol, seed=seed)
    rep.add("frame_equations", cells.residual < tol, residual=cells.residual)
    payload = {
        "residual": cells.residual,
        "values": [
            {"triangle": list(t), "re": v.real, "im": v.imag}
            for t, v in sorted(cells.values.items())
        ],
    }
    sys.exit(rep.emit(None, payload=payload))


@main.group("connection")
def connection_grp():
    """Commuting-square connection utilities."""


@connection_grp.command("check")
@click.option("--n", default=None, type=int)
@click.option("--graph", "graph_file", default=None, type=click.Path(exists=True))
@click.option("--tol", default=1e-10, type=float)
def connection_check_cmd(n, graph_file, tol):
    """Unitarity and commuting-square residuals for both parities."""
    if n is None and graph_file is None:
        raise click.UsageError("need --n or --graph")
    g = _graph_option(n, graph_file)
    cells = solve_cells(g)
    rep = Report("connection:check", n=g.n, graph=g.name or graph_file, tol=tol)
    for parity in ("even", "odd"):
        conn = pa.connection(g, cells, parity)
        r1 = conn.unitarity_residual()
        rep.add(f"unitarity_{parity}", r1 < tol, residual=r1)
        r2 = conn.commuting_square_residual()
        rep.add(f"commuting_square_{parity}", r2 < tol, residual=r2)
    sys.exit(rep.emit())


@main.group("flat")
def flat_grp():
    """Flatness of the connection."""


@flat_grp.command("check")
@click.option("--n", default=None, type=int)
@click.option("--graph", "graph_file", default=None, type=click.Path(exists=True))
@click.option("--hmax", default=2, type=int)
@click.option("--vmax", default=2, type=int)
@click.option("--tol", default=1e-8, type=float)
def flat_check_cmd(n, graph_file, hmax, vmax, tol):
    """Commutators of horizontally and vertically supported elements."""
    if n is None and graph_file is None:
        raise click.UsageError("need --n or --graph")
    g = _graph_option(n, graph_file)
    cells = solve_cells(g)
    rep = Report("flat:check", n=g.n, graph=g.name or graph_file, hmax=hmax, vmax=vmax, tol=tol)
    result = pa.flatness_check(g, cells, hmax, vmax)
    rep.add("flatness", result["max_commutator"] < tol, residual=result["max_commutator"])
    sys.exit(rep.emit(None, payload=result))


@main.command("zmap")
@click.option("--strips", required=True, type=click.Path(exists=True),
              help="JSON list of strip tokens, top to bottom")
@click.option("--labels", default=None, type=click.Path(exists=True),
              help="JSON list of labels: {level: [i, j], terms: [...]}")
@click.option("--n", default=5, type=int)
@click.option("--graph", "graph_file", default=None, type=click.Path(exists=True))
@click.option("--i", "ii", required=True, type=int)
@click.option("--j", "jj", required=True, type=int)
def zmap_cmd(strips, labels, n, graph_file, ii, jj):
    """Evaluate a strip word as a level-(i, j) path-pair element."""
    g = _graph_option(n, graph_file)
    cells = solve_cells(g)
    with open(strips) as fh:
        word = [tuple(tok) for tok in json.load(fh)]
    labs = []
    if labels:
        with open(labels) as fh:
            for row in json.load(fh):
                labs.append(
                    pa.PathAlgElement.from_json(g, tuple(row["level"]), row["terms"])
                )
    z = pa.z_element(word, labs, g, cells, ii, jj)
    rep = Report("zmap", n=g.n, graph=g.name or graph_file, i=ii, j=jj, strips=strips)
    rep.add("evaluate", True, residual=0)
    sys.exit(rep.emit(None, payload=z.to_json()))


@main.command("quotient-dim")
@click.option("--sigma", required=True)
@click.option("--n", required=True, type=int)
def quotient_dim_cmd(sigma, n):
    """Dimension of the null quotient of the diagram algebra."""
    sigma = sigma.replace(",", "")
    d = quotient_dim(sigma, n)
    rep = Report("quotient-dim", sigma=sigma, n=n)
    rep.add("quotient_dim", True, residual=0)
    click.echo(str(d))
    sys.exit(rep.emit(None, payload={"dim": d}))


if __name__ == "__main__":
    main()
