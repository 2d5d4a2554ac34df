"""Command line entry point: ``graphsurface {exact,census,asymptotic,simulate,compare}``.

Exit codes: 0 success, 2 configuration error, 3 feasibility guard tripped,
4 ``compare --check`` failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import census, moments
from .config import ConfigError, ExperimentConfig, format_rational, parse_rational
from .counting import colorings, count_colored_motif, count_motif
from .ensemble import EnsembleSpec, SeedStream, dump_sample, sample
from .errors import DomainError, FeasibilityExceeded
from .motif import Motif, automorphism_order, copies_in_complete
from .simulate import run_replicas
from .stats import MomentAccumulator, SIGMA_BAND, growth_exponent_fit, z_score

log = logging.getLogger("graphsurface")

EXIT_CONFIG = 2
EXIT_FEASIBILITY = 3
EXIT_CHECK = 4

CSV_COLUMNS = [
    "motif", "ensemble", "n", "p", "E", "replicas", "mean", "var", "cov_TE", "resvar",
    "scaled_mean", "surface_stat", "scaled_std", "stderr_mean",
]


def rational_json(x: Fraction | None) -> dict | None:
    if x is None:
        return None
    return {"exact": format_rational(Fraction(x)), "approx": float(x)}


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


# ---------------------------------------------------------------------------
# exact / census / asymptotic


def report_json(r: moments.MomentReport) -> dict:
    return {
        "motif": r.motif.label(),
        "ensemble": r.ensemble,
        "n": r.n,
        "E": r.E,
        "p": format_rational(r.p) if r.p is not None else None,
        "mean": rational_json(r.mean),
        "variance": rational_json(r.variance),
        "covariance_with_edges": rational_json(r.covariance_with_edges),
        "residual_variance": rational_json(r.residual_variance),
    }


def asymptotic_json(a: moments.AsymptoticExpansion) -> dict:
    return {
        "motif": a.motif.label(),
        "ensemble": a.ensemble,
        "p": format_rational(a.p),
        "size_parameter": a.size_parameter,
        "volume_coefficient": {"exact": str(a.volume_coefficient), "approx": float(a.volume_coefficient)},
        "volume_exponent": format_rational(a.volume_exponent),
        "surface_coefficient": {"exact": str(a.surface_coefficient), "approx": float(a.surface_coefficient)},
        "surface_exponent": format_rational(a.surface_exponent),
        "variance_growth_exponent": format_rational(a.variance_growth_exponent),
        "std_exponent": format_rational(a.std_exponent),
        "surface_significant": a.surface_significant,
    }


def census_json(m: Motif, n: int, method: str = "orbit") -> dict:
    table = census.overlap_table(m, n, method=method)
    polys = [census.overlap_polynomial(m, k) for k in range(m.ell + 1)]
    return {
        "motif": m.label(),
        "n": n,
        "copies": copies_in_complete(m, n),
        "automorphism_order": automorphism_order(m),
        "counts": list(table.counts),
        "polynomials": [
            {"k": p.k, "degree": p.degree, "coeffs": [format_rational(c) for c in p.coefficients]} for p in polys
        ],
        "sumk_ok": table.sumk_ok(),
    }


def cmd_exact(cfg: ExperimentConfig) -> list[dict]:
    out = []
    for m in cfg.load_motifs():
        for n in cfg.n_grid:
            for family in cfg.families():
                if family == "dependent":
                    E = cfg.edge_count(n)
                    if not 0 <= E <= moments.pair_count(n):
                        raise ConfigError(f"E={E} infeasible for n={n}")
                    rep = moments.exact_report(m, n, E=E)
                elif family == "independent":
                    rep = moments.exact_report(m, n, p=cfg.p)
                else:
                    raise ConfigError("exact moments are available for dependent/independent ensembles only")
                entry = report_json(rep)
                entry["asymptotic"] = asymptotic_json(moments.asymptotic_report(m, cfg.p, family, "n"))
                out.append(entry)
    return out


def cmd_census(cfg: ExperimentConfig, method: str = "orbit") -> list[dict]:
    return [census_json(m, n, method) for m in cfg.load_motifs() for n in cfg.n_grid]


def cmd_asymptotic(cfg: ExperimentConfig) -> list[dict]:
    out = []
    for m in cfg.load_motifs():
        for family in ("dependent", "independent"):
            if cfg.ensemble not in ("both", family):
                continue
            for size in ("n", "N"):
                out.append(asymptotic_json(moments.asymptotic_report(m, cfg.p, family, size)))
    return out


# ---------------------------------------------------------------------------
# simulate / compare


def simulate_rows(cfg: ExperimentConfig, families: list[str] | None = None) -> list[dict]:
    motifs = cfg.load_motifs()
    rows = []
    for family in families or cfg.families():
        for n in cfg.n_grid:
            spec = cfg.spec(family, n)
            log.info("simulating %s n=%d (%d replicas)", family, n, cfg.replicas)
            block = run_replicas(spec, motifs, cfg.replicas, cfg.master_seed, cfg.threads)
            for m in motifs:
                acc = MomentAccumulator.from_arrays(block.counts[m.label()], block.edges)
                rows.append(_row(m, family, spec, cfg, acc))
    return rows


def _row(m: Motif, family: str, spec: EnsembleSpec, cfg: ExperimentConfig, acc: MomentAccumulator) -> dict:
    n, v = spec.n, m.vertex_count
    mean = acc.mean()
    var = acc.var() if acc.count >= 2 else None
    row = {
        "motif": m.label(),
        "ensemble": family,
        "n": n,
        "p": format_rational(cfg.p) if not spec.is_block else None,
        "E": spec.total_edges(),
        "replicas": acc.count,
        "mean": float(mean),
        "var": float(var) if var is not None else None,
        "cov_TE": None,
        "resvar": None,
        "scaled_mean": float(mean / n**v) if n else None,
        "surface_stat": None,
        "scaled_std": None,
        "stderr_mean": None,
    }
    if var is not None:
        sd = math.sqrt(var)
        row["stderr_mean"] = sd / math.sqrt(acc.count)
        row["scaled_std"] = sd / n ** (v - 1.5) if n else None
        if acc.var_edges() != 0:
            row["cov_TE"] = float(acc.cov())
            row["resvar"] = float(acc.residual_variance()[0])
    if not spec.is_block and n:
        volume = cfg.p**m.ell / automorphism_order(m)
        row["surface_stat"] = float(n * (mean / n**v - volume))
    return row


def write_csv(rows: list[dict], path: Path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(buf.getvalue().encode())


def dump_samples(cfg: ExperimentConfig, path: Path) -> None:
    lines = []
    for family in cfg.families():
        for n in cfg.n_grid:
            spec = cfg.spec(family, n)
            for r in range(min(cfg.dump_samples, cfg.replicas)):
                lines.append(dump_sample(sample(spec, SeedStream(cfg.master_seed, r))))
    path.write_text("\n".join(lines) + "\n")


def block_additivity(cfg: ExperimentConfig, samples: int = 20) -> list[dict]:
    """Check sum over colourings of coloured counts equals the plain count on a few samples."""
    out = []
    for family in cfg.families():
        if not family.startswith("block"):
            continue
        for n in cfg.n_grid:
            spec = cfg.spec(family, n)
            for m in cfg.load_motifs():
                alphas = colorings(m, len(spec.sizes))
                ok = True
                for r in range(min(samples, cfg.replicas)):
                    g = sample(spec, SeedStream(cfg.master_seed, r))
                    total = sum(count_colored_motif(g, m, a) for a in alphas)
                    ok &= total == count_motif(g, m)
                out.append({"motif": m.label(), "ensemble": family, "n": n, "additive": ok})
    return out


def compare_report(cfg: ExperimentConfig) -> tuple[list[dict], dict]:
    """Join simulated moments with exact ones; fit variance growth; decide surface significance."""
    # the contrast needs both ensembles whatever the config selects
    families = ["dependent", "independent"]
    sim = simulate_rows(cfg, families)
    motifs = {m.label(): m for m in cfg.load_motifs()}
    rows = []
    for row in sim:
        m, n = motifs[row["motif"]], row["n"]
        if row["ensemble"] == "dependent":
            exact_mean = moments.mean_dependent(m, n, row["E"])
            exact_var = moments.variance_dependent_exact(m, n, row["E"])
            exact_res = None
        else:
            exact_mean = moments.mean_indep(m, n, cfg.p)
            exact_var = moments.variance_indep_exact(m, n, cfg.p)
            exact_res = moments.residual_variance_indep(m, n, cfg.p) if 0 < cfg.p < 1 and n >= 2 else None
        z = z_score(row["mean"], exact_mean, row["stderr_mean"] or 0.0)
        rows.append({
            **row,
            "exact_mean": float(exact_mean),
            "z_mean": z,
            "exact_var": float(exact_var),
            "var_ratio": row["var"] / float(exact_var) if exact_var else None,
            "exact_resvar": float(exact_res) if exact_res is not None else None,
            "resvar_ratio": row["resvar"] / float(exact_res) if exact_res and row["resvar"] is not None else None,
        })
    summary = {"fits": [], "verdicts": []}
    for label, m in motifs.items():
        v = m.vertex_count
        for family in families:
            ens_rows = [r for r in rows if r["motif"] == label and r["ensemble"] == family]
            entry = {"motif": label, "ensemble": family}
            theory = moments.asymptotic_report(m, cfg.p, family, "n")
            pts_exact = [(r["n"], r["exact_var"]) for r in ens_rows if r["exact_var"] > 0]
            pts_sim = [(r["n"], r["var"]) for r in ens_rows if r["var"]]
            if len(pts_exact) >= 4:
                fit = growth_exponent_fit(pts_exact)
                entry["exact_variance_exponent"] = fit.exponent
                entry["exact_variance_halfwidth"] = fit.half_width
                # threshold halfway between the two theoretical exponents 2v-3 and 2v-2
                entry["surface_significant"] = fit.exponent < 2 * v - 2.5
            else:
                entry["surface_significant"] = theory.surface_significant
            if len(pts_sim) >= 4:
                fit = growth_exponent_fit(pts_sim)
                entry["simulated_variance_exponent"] = fit.exponent
                entry["simulated_variance_halfwidth"] = fit.half_width
            entry["theory_variance_exponent"] = format_rational(theory.variance_growth_exponent)
            entry["theory_surface_significant"] = theory.surface_significant
            entry["max_abs_z"] = max((abs(r["z_mean"]) for r in ens_rows), default=0.0)
            summary["fits"].append(entry)
            summary["verdicts"].append({
                "motif": label,
                "ensemble": family,
                "surface_significant": entry["surface_significant"],
            })
    return rows, summary


COMPARE_COLUMNS = CSV_COLUMNS + ["exact_mean", "z_mean", "exact_var", "var_ratio", "exact_resvar", "resvar_ratio"]


def compare_failures(rows: list[dict], summary: dict) -> list[str]:
    bad = []
    for r in rows:
        if abs(r["z_mean"]) > SIGMA_BAND:
            bad.append(f"{r['motif']} {r['ensemble']} n={r['n']}: |z|={abs(r['z_mean']):.2f} > {SIGMA_BAND}")
    for f in summary["fits"]:
        if f["surface_significant"] != f["theory_surface_significant"]:
            bad.append(f"{f['motif']} {f['ensemble']}: surface verdict disagrees with theory")
    return bad


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphsurface", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("exact", "census", "asymptotic", "simulate", "compare"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON experiment config")
        sp.add_argument("--seed", type=int, help="override master_seed")
        sp.add_argument("--out", help="override output directory")
        sp.add_argument("--threads", type=int, help="worker processes (0 = auto)")
        sp.add_argument("--motif", action="append", help="builtin name or edge-list file (repeatable)")
        sp.add_argument("--n", type=int, action="append", help="graph size (repeatable)")
        sp.add_argument("--p", help="edge density, e.g. 3/10")
        sp.add_argument("--E", type=int, help="explicit edge count (dependent ensemble, single n)")
        sp.add_argument("--ensemble", choices=["dependent", "independent", "both", "block_dependent", "block_independent"])
        sp.add_argument("--replicas", type=int)
        if name == "census":
            sp.add_argument("--method", choices=["orbit", "pairs"], default="orbit")
        if name == "compare":
            sp.add_argument("--check", action="store_true", help="exit 4 unless simulation matches theory")
    return parser


def resolve_config(args) -> ExperimentConfig:
    if args.config:
        data = ExperimentConfig.load(args.config).to_dict()
    else:
        data = {"motifs": ["triangle"]}
    overrides = {
        "motifs": args.motif,
        "n_grid": args.n,
        "p": args.p,
        "E": args.E,
        "ensemble": args.ensemble,
        "replicas": args.replicas,
        "master_seed": args.seed,
        "output_dir": args.out,
        "threads": args.threads,
    }
    for key, val in overrides.items():
        if val is not None:
            data[key] = val
    if args.p is not None:
        data["p"] = format_rational(parse_rational(args.p))
    return ExperimentConfig.from_dict(data)


def _emit(payload, out_dir: Path, filename: str) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / filename).write_text(text)
    sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        out_dir = Path(cfg.output_dir)
        if args.command == "exact":
            _emit(cmd_exact(cfg), out_dir, "exact.json")
        elif args.command == "census":
            _emit(cmd_census(cfg, args.method), out_dir, "census.json")
        elif args.command == "asymptotic":
            _emit(cmd_asymptotic(cfg), out_dir, "asymptotic.json")
        elif args.command == "simulate":
            out_dir.mkdir(parents=True, exist_ok=True)
            write_csv(simulate_rows(cfg), out_dir / "simulate.csv")
            if cfg.dump_samples:
                dump_samples(cfg, out_dir / "samples.txt")
            extra = block_additivity(cfg)
            if extra:
                (out_dir / "block_additivity.json").write_text(json.dumps(extra, indent=2) + "\n")
            (out_dir / "config.json").write_text(cfg.dumps())
            print(out_dir / "simulate.csv")
        elif args.command == "compare":
            rows, summary = compare_report(cfg)
            out_dir.mkdir(parents=True, exist_ok=True)
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(COMPARE_COLUMNS)
            for r in rows:
                writer.writerow([_fmt(r.get(c)) for c in COMPARE_COLUMNS])
            (out_dir / "compare.csv").write_bytes(buf.getvalue().encode())
            _emit(summary, out_dir, "compare.json")
            if args.check:
                bad = compare_failures(rows, summary)
                for line in bad:
                    print(f"CHECK FAILED: {line}", file=sys.stderr)
                if bad:
                    return EXIT_CHECK
    except FeasibilityExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FEASIBILITY
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
