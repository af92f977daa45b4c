"""Command-line workflow: bounds, envelopes, calibration, spatial analysis,
simulations and the HTTP server.

All randomness flows from --seed; reports with identical inputs and seeds are
byte-identical JSON.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .bounds import BoundValue
from .families import disjoint_sum_bound
from .report import (
    build_report,
    dumps,
    envelope_fragment,
    selection_entry,
)
from .session import AnalysisSession, build_session
from .simulation import (
    MethodSpec,
    ScenarioConfig,
    coverage_experiment,
    selection_effect_demo,
)
from .spatial import (
    DKWRule,
    MarkovRule,
    PermutationBetaRule,
    build_segments,
    build_tree,
    calibrate_family,
    tree_bound,
)


def _input_options(fn):
    fn = click.option("--pvalues", "pvalues_path", type=click.Path(), default=None,
                      help="CSV of p-values (header id,p).")(fn)
    fn = click.option("--data", "data_path", type=click.Path(), default=None,
                      help="CSV measurement matrix (rows=hypotheses, cols=samples).")(fn)
    fn = click.option("--labels", "labels_path", type=click.Path(), default=None,
                      help="CSV of sample groups (header sample_id,group).")(fn)
    fn = click.option("--chrom-col", default=None, help="Annotation column holding chromosome names.")(fn)
    return fn


def _common_options(fn):
    fn = click.option("--alpha", type=float, default=0.05, show_default=True)(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--out", "out_path", type=click.Path(), default=None,
                      help="Write the JSON report here instead of stdout.")(fn)
    return fn


def _selection_options(fn):
    fn = click.option("--select-ids", default=None, help="Comma-separated row ids.")(fn)
    fn = click.option("--select-indices", default=None, help="Comma-separated 1-based indices.")(fn)
    fn = click.option("--select-top", type=int, default=None, help="The k smallest p-values.")(fn)
    fn = click.option("--fc-above", type=float, default=None, help="Keep log fold change above x.")(fn)
    fn = click.option("--fc-below", type=float, default=None, help="Keep log fold change below x.")(fn)
    fn = click.option("--bh-level", type=float, default=None,
                      help="Intersect with the BH rejection set at level q (selection only).")(fn)
    return fn


def _method_options(fn):
    fn = click.option("--method", type=click.Choice(["simes", "bonferroni", "calibrated"]),
                      default="simes", show_default=True)(fn)
    fn = click.option("--k0", type=int, default=1, show_default=True)(fn)
    fn = click.option("--template", type=click.Choice(["linear", "beta"]), default="linear",
                      show_default=True)(fn)
    fn = click.option("--K", "n_curves", type=int, default=None, help="Template curve count.")(fn)
    fn = click.option("--B", "n_permutations", type=int, default=1000, show_default=True,
                      help="Permutations for calibration (identity included).")(fn)
    return fn


def _session(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, n_permutations=1000):
    try:
        return build_session(
            pvalues_path=pvalues_path,
            data_path=data_path,
            labels_path=labels_path,
            alpha=alpha,
            seed=seed,
            n_permutations=n_permutations,
            chrom_col=chrom_col,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _resolve(session: AnalysisSession, select_ids, select_indices, select_top,
             fc_above, fc_below, bh_level):
    kwargs = {}
    if select_ids:
        kwargs["ids"] = [s.strip() for s in select_ids.split(",") if s.strip()]
    if select_indices:
        kwargs["indices"] = [int(s) for s in select_indices.split(",") if s.strip()]
    if select_top is not None:
        kwargs["top_k"] = select_top
    if fc_above is not None:
        kwargs["fc_above"] = fc_above
    if fc_below is not None:
        kwargs["fc_below"] = fc_below
    if bh_level is not None:
        kwargs["bh_level"] = bh_level
    try:
        return session.resolve_selection(**kwargs)
    except (KeyError, ValueError) as exc:
        raise click.UsageError(str(exc))


def _check_method_mode(session: AnalysisSession, method: str):
    if method == "calibrated" and not session.two_sample:
        raise click.UsageError("--method calibrated requires two-sample input (--data/--labels)")


def _emit(report: dict, out_path):
    text = dumps(report) + "\n"
    if out_path:
        Path(out_path).write_text(text)
        click.echo(f"report written to {out_path}", err=True)
    else:
        click.echo(text, nl=False)


@click.group()
@click.version_option(version=__version__, prog_name="fpbound")
def main():
    """Post hoc false-positive bounds for arbitrary, data-snooped selections."""


@main.command()
@_input_options
@_common_options
@_selection_options
@_method_options
def bound(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, out_path,
          select_ids, select_indices, select_top, fc_above, fc_below, bh_level,
          method, k0, template, n_curves, n_permutations):
    """Bound the false positives in one selection."""
    session = _session(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, n_permutations)
    _check_method_mode(session, method)
    S, name = _resolve(session, select_ids, select_indices, select_top, fc_above, fc_below, bh_level)
    bv = session.evaluate(S, method, template=template, k0=k0, n_curves=n_curves)
    report = build_report(
        session.method_label(method, template, k0),
        alpha,
        lam=bv.lam,
        selections=[selection_entry(name, S, bv)],
        seed=seed,
        n_permutations=n_permutations if method == "calibrated" else None,
        input_sha256=session.digests,
    )
    _emit(report, out_path)


@main.command()
@_input_options
@_common_options
@_method_options
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="Also write the envelope as CSV rows k,tp_lower,fdp_upper.")
def envelope(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, out_path,
             method, k0, template, n_curves, n_permutations, csv_path):
    """Confidence envelope over the level sets of sorted p-values."""
    session = _session(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, n_permutations)
    _check_method_mode(session, method)
    env = session.method_envelope(method, template=template, k0=k0, n_curves=n_curves)
    lam = session.calibrations[template].lam if method == "calibrated" else None
    report = build_report(
        session.method_label(method, template, k0),
        alpha,
        lam=lam,
        envelope=envelope_fragment(env),
        seed=seed,
        n_permutations=n_permutations if method == "calibrated" else None,
        input_sha256=session.digests,
    )
    if csv_path:
        with Path(csv_path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "V", "tp_lower", "fdp_upper"])
            for k, v, tp, fdp in zip(env.k, env.v, env.tp_lower, env.fdp_upper):
                writer.writerow([int(k), int(v), int(tp), format(float(fdp), ".17g")])
    _emit(report, out_path)


@main.command()
@_input_options
@_common_options
@click.option("--template", type=click.Choice(["linear", "beta"]), default="linear", show_default=True)
@click.option("--K", "n_curves", type=int, default=None)
@click.option("--B", "n_permutations", type=int, default=1000, show_default=True)
def calibrate(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, out_path,
              template, n_curves, n_permutations):
    """Permutation-calibrate a template on two-sample data."""
    session = _session(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, n_permutations)
    if not session.two_sample:
        raise click.UsageError("calibrate requires two-sample input (--data/--labels)")
    result = session.ensure_calibration(template, n_curves)
    report = build_report(
        f"calibrated({template})",
        alpha,
        lam=result.lam,
        seed=seed,
        n_permutations=n_permutations,
        input_sha256=session.digests,
    )
    report["calibration"] = {
        "order_index": result.order_index,
        "pivots": [float(x) for x in result.pivots],
        "template": result.template,
    }
    _emit(report, out_path)


def _parse_budget(budget: str, n_permutations: int, seed: int):
    if budget == "dkw":
        return DKWRule()
    if budget == "perm-beta":
        return PermutationBetaRule(B=n_permutations, seed=seed)
    if budget.startswith("markov"):
        if ":" in budget:
            try:
                return MarkovRule(t=float(budget.split(":", 1)[1]))
            except ValueError:
                raise click.UsageError(f"bad markov threshold in {budget!r}")
        return MarkovRule()
    raise click.UsageError(f"unknown budget rule {budget!r} (use markov[:t], dkw or perm-beta)")


@main.command()
@_input_options
@_common_options
@_selection_options
@click.option("--segment-size", type=int, default=10, show_default=True)
@click.option("--budget", default="dkw", show_default=True,
              help="Per-region budget rule: markov[:t], dkw or perm-beta.")
@click.option("--tree/--no-tree", default=False, show_default=True,
              help="Aggregate segments into a multi-scale tree.")
@click.option("--B", "n_permutations", type=int, default=100, show_default=True)
def spatial(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, out_path,
            select_ids, select_indices, select_top, fc_above, fc_below, bh_level,
            segment_size, budget, tree, n_permutations):
    """Segment-structured bounds, optionally multi-scale."""
    session = _session(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, n_permutations)
    rule = _parse_budget(budget, n_permutations, seed)
    if rule.needs_dataset and not session.two_sample:
        raise click.UsageError("--budget perm-beta requires two-sample input")
    chrom_names, sizes = _chromosome_layout(session, chrom_col)
    segments = build_segments(sizes, segment_size)
    data = session.dataset if rule.needs_dataset else session.p
    S, name = _resolve(session, select_ids, select_indices, select_top, fc_above, fc_below, bh_level)
    spatial_fragment: dict = {
        "segment_size": segment_size,
        "budget": budget,
        "tree": bool(tree),
        "chromosomes": [
            {"name": cname, "m": size} for cname, size in zip(chrom_names, sizes)
        ],
    }
    if tree:
        agg = build_tree(data, segments, alpha, rule)
        v = tree_bound(S, agg)
        nodes = []
        for cname, root in zip(chrom_names, agg.roots):
            for node in _walk_nodes(root):
                nodes.append(
                    {"chrom": cname, "start": node.start, "end": node.end,
                     "zeta": int(node.zeta), "leaf": not node.children}
                )
        spatial_fragment["nodes"] = nodes
        method = f"spatial-tree({budget})"
    else:
        family = calibrate_family(data, segments, alpha, rule)
        v = disjoint_sum_bound(S, family)
        nodes = []
        k = 0
        for cname, chrom in zip(chrom_names, segments.segments):
            for start, end in chrom:
                nodes.append(
                    {"chrom": cname, "start": start, "end": end,
                     "zeta": int(family.budgets[k]), "leaf": True}
                )
                k += 1
        spatial_fragment["nodes"] = nodes
        method = f"spatial({budget})"
    entry = selection_entry(name, S, BoundValue(v=v, method=method, alpha=alpha))
    report = build_report(
        method,
        alpha,
        selections=[entry],
        spatial=spatial_fragment,
        seed=seed,
        n_permutations=n_permutations if rule.needs_dataset else None,
        input_sha256=session.digests,
    )
    _emit(report, out_path)


def _walk_nodes(root):
    yield root
    for child in root.children:
        yield from _walk_nodes(child)


def _chromosome_layout(session: AnalysisSession, chrom_col):
    """Chromosome names and sizes in order of appearance; rows must be grouped."""
    if chrom_col is None or chrom_col not in session.annotations:
        return ["all"], [session.m]
    values = session.annotations[chrom_col]
    names: list[str] = []
    sizes: list[int] = []
    for v in values:
        if names and v == names[-1]:
            sizes[-1] += 1
        elif v in names:
            raise click.UsageError(
                f"chromosome column {chrom_col!r} is not grouped: {v!r} appears in separate blocks; "
                "sort rows by chromosome first"
            )
        else:
            names.append(v)
            sizes.append(1)
    return names, sizes


@main.command()
@_common_options
@click.option("--scenario", type=click.Choice(["full_null_iid", "two_sample_gaussian",
                                               "equicorrelated_pairs"]),
              default="full_null_iid", show_default=True)
@click.option("--method", "sim_method",
              type=click.Choice(["bonf", "simes", "threshold", "calibrated", "markov", "dkw",
                                 "perm-beta", "spatial", "naive"]),
              default="simes", show_default=True)
@click.option("--m", "m", type=int, default=100, show_default=True)
@click.option("--reps", type=int, default=1000, show_default=True)
@click.option("--rho", type=float, default=0.0, show_default=True)
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("--n1", type=int, default=50, show_default=True)
@click.option("--n2", type=int, default=50, show_default=True)
@click.option("--k0", type=int, default=1, show_default=True)
@click.option("--s0", type=int, default=10, show_default=True)
@click.option("--template", type=click.Choice(["linear", "beta"]), default="linear", show_default=True)
@click.option("--K", "n_curves", type=int, default=None)
@click.option("--B", "n_permutations", type=int, default=100, show_default=True)
@click.option("--lam", type=float, default=None, help="Fixed template parameter for --method threshold.")
@click.option("--segment-size", type=int, default=10, show_default=True)
@click.option("--budget", default="dkw", show_default=True)
def simulate(alpha, seed, out_path, scenario, sim_method, m, reps, rho, delta, n1, n2,
             k0, s0, template, n_curves, n_permutations, lam, segment_size, budget):
    """Estimate a method's joint violation rate on a synthetic scenario."""
    method_kind = {
        "bonf": "bonferroni",
        "simes": "simes",
        "threshold": "threshold",
        "calibrated": "calibrated",
        "markov": "single_markov",
        "dkw": "single_dkw",
        "perm-beta": "single_beta",
        "spatial": "spatial",
        "naive": "naive_bonferroni",
    }[sim_method]
    budget_name = budget.split(":")[0]
    t = float(budget.split(":")[1]) if budget_name == "markov" and ":" in budget else None
    spec = MethodSpec(
        kind=method_kind,
        k0=k0,
        s0=s0,
        template=template,
        n_curves=n_curves,
        n_permutations=n_permutations,
        lam=lam,
        t=t,
        segment_size=segment_size,
        budget=budget_name,
    )
    cfg = ScenarioConfig(
        kind=scenario, m=m, replications=reps, seed=seed, alpha=alpha,
        n1=n1, n2=n2, delta=delta, rho=rho,
    )
    if method_kind in ("calibrated", "single_beta") and scenario != "two_sample_gaussian":
        raise click.UsageError(f"--method {sim_method} needs --scenario two_sample_gaussian")
    try:
        result = coverage_experiment(cfg, spec)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    simulation_fragment = {
        "scenario": scenario,
        "replications": reps,
        "violations": result.violations,
        "violation_rate": result.violation_rate,
        "coverage": result.coverage,
        "mc_sd": result.mc_sd,
        "empirical_sd": result.empirical_sd,
        "params": {"m": m, "rho": rho, "delta": delta, "n1": n1, "n2": n2},
    }
    if method_kind == "naive_bonferroni":
        demo = selection_effect_demo(m=m, s0=s0, k0=k0, alpha=alpha,
                                     replications=reps, seed=seed)
        simulation_fragment["analytic_coverage"] = demo["analytic_coverage"]
    report = build_report(
        result.method, alpha, simulation=simulation_fragment, seed=seed,
        n_permutations=n_permutations if method_kind in ("calibrated", "single_beta") else None,
        input_sha256={},
    )
    _emit(report, out_path)


@main.command()
@_input_options
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--template", "template_kinds", multiple=True, default=("linear", "beta"),
              show_default=True, help="Templates to calibrate at startup (two-sample mode).")
@click.option("--K", "n_curves", type=int, default=None)
@click.option("--B", "n_permutations", type=int, default=1000, show_default=True)
@click.option("--port", type=int, default=8707, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui-dir", type=click.Path(), default=None,
              help="Directory of built UI assets to serve at /.")
def serve(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, template_kinds,
          n_curves, n_permutations, port, host, ui_dir):
    """Serve calibrated bound queries over HTTP for the interactive explorer."""
    import uvicorn

    from .server import create_app

    session = _session(pvalues_path, data_path, labels_path, chrom_col, alpha, seed, n_permutations)
    if session.two_sample:
        for kind in template_kinds:
            session.ensure_calibration(kind, n_curves)
            click.echo(f"calibrated {kind}: lambda={session.calibrations[kind].lam:.6g}", err=True)
    app = create_app(session, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def run():  # pragma: no cover
    try:
        main(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(130)
    except Exception as exc:  # numeric or IO failure: exit 1 with context
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    run()
