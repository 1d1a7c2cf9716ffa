"""Command-line entry points for the simulation and estimation toolkit.

Subcommands: simulate, estimate, curve, flares, demo, yield, dust,
capacity, array, geometry.  Global flags --seed, --trials, --out,
--config <file> (JSON document or flat key = value lines).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import harness
from .constants import KPC
from .dust import DustModelConfig, loss_rate, simulate_tree_batch, variance_bound
from .estimators import estimate_alg1
from .geometry import (
    LensGeometry,
    SourceGeometry,
    crossing_time,
    delay_factor,
    einstein_radius,
    finite_source_lambda_min,
    magnification,
    time_delay,
)
from .rng import stream
from .signal_model import LensSignalSpec, sample_photons
from .theory import CapacityGrid, holevo_capacity_numeric
from .array_cal import ArraySpec, estimate_pairwise_delays, sample_array_photons
from .yields import (
    ExtinctionCurve,
    FlareModel,
    TelescopeSpec,
    default_extinction,
    flare_rate,
    ism_phase_sigma,
    photons_per_flare,
)


def _load_config(path: str) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        params = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line not 'key = value': {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            try:
                params[key] = json.loads(value)
            except json.JSONDecodeError:
                params[key] = value
        return params


def _emit(report: dict, out: str | None, cfg=None) -> None:
    for key in sorted(report):
        print(f"{key} = {report[key]}")
    if out:
        harness.write_report(out, report, cfg)


def _experiment_config(args, kind: str, defaults: dict) -> harness.ExperimentConfig:
    params = dict(defaults)
    if args.config:
        params.update(_load_config(args.config))
    for item in args.param or []:
        key, value = item.split("=", 1)
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return harness.ExperimentConfig(kind=kind, trials=args.trials, seed=args.seed,
                                    out=args.out, params=params)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lensdelay",
        description="Photon-starved lensing time-delay simulation and estimation.",
    )
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--trials", type=int, default=500, help="trials per sweep point")
    parser.add_argument("--out", type=str, default=None, help="output file path")
    parser.add_argument("--config", type=str, default=None,
                        help="config file (JSON or key = value lines)")
    parser.add_argument("--param", action="append", metavar="KEY=VALUE",
                        help="override a single config parameter")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw photon frequencies to CSV")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--delta-t", type=float, default=2000.0, dest="delta_t")
    p.add_argument("--Q", type=float, default=1.0)
    p.add_argument("--A", type=float, default=1.34)
    p.add_argument("--spectrum-out", type=str, default=None,
                   help="also write the fringe spectrum (omega, density) CSV")

    p = sub.add_parser("estimate", help="estimate the delay from a photon CSV")
    p.add_argument("photons_csv")
    p.add_argument("--Q", type=float, default=1.0)
    p.add_argument("--A", type=float, default=1.34)

    sub.add_parser("curve", help="confidence-vs-photons sweep (CSV)")
    sub.add_parser("flares", help="flares-needed sweep (CSV)")
    sub.add_parser("demo", help="multi-flare score-trace demo (CSV)")

    p = sub.add_parser("yield", help="per-flare photon yields report")
    p.add_argument("--area", type=float, default=1.0, help="collecting area (m^2)")
    p.add_argument("--extinction", type=str, default=None,
                   help="extinction table file (wavelength_nm, tau)")
    p.add_argument("--integrand-csv", type=str, default=None,
                   help="also write the band integrand to this CSV")

    sub.add_parser("dust", help="dust-tree Monte Carlo (CSV + summary)")
    sub.add_parser("capacity", help="channel-capacity quadrature report")
    sub.add_parser("array", help="array pairwise-delay demo (CSV + report)")

    p = sub.add_parser("geometry", help="point-lens geometry report")
    p.add_argument("--mass-msun", type=float, default=1.0)
    p.add_argument("--u", type=float, default=1.0)
    p.add_argument("--dl-kpc", type=float, default=4.0)
    p.add_argument("--ds-kpc", type=float, default=8.0)
    p.add_argument("--vt-kms", type=float, default=55.0)
    p.add_argument("--rs-m", type=float, default=6.957e8)
    p.add_argument("--sweep-out", type=str, default=None,
                   help="also write the (u, A, f) sweep table to this CSV")

    args = parser.parse_args(argv)

    if args.command == "simulate":
        cfg = _experiment_config(args, "confidence_curve", {})
        packet = cfg.packet()
        lens = LensSignalSpec.for_packet(packet, args.delta_t * packet.tc, A=args.A,
                                         Q=args.Q)
        photons = sample_photons(packet, lens, args.n, stream(args.seed))
        harness.write_csv(args.out or "photons.csv", ["omega", "origin"],
                          [(s.omega, s.origin) for s in photons], cfg)
        if args.spectrum_out:
            from .signal_model import channel_pdf

            om = np.linspace(packet.omega0 - 4 / packet.tc, packet.omega0 + 4 / packet.tc,
                             4001)
            harness.write_csv(args.spectrum_out, ["omega", "density"],
                              list(zip(om.tolist(),
                                       channel_pdf(om, packet, lens).tolist())), cfg)
        print(f"wrote {args.n} photons (delta_t = {lens.delta_t:g})")
        return 0

    if args.command == "estimate":
        cfg = _experiment_config(args, "confidence_curve", {})
        packet = cfg.packet()
        data = np.loadtxt(args.photons_csv, delimiter=",", skiprows=_csv_skip(args.photons_csv),
                          usecols=0)
        result = estimate_alg1(np.atleast_1d(data), packet, Q=args.Q, A=args.A)
        _emit({"tau_hat": result.tau_hat, "peak_score": result.peak_score,
               "threshold": result.threshold, "detected": result.detected},
              args.out, cfg)
        return 0

    if args.command == "curve":
        cfg = _experiment_config(args, "confidence_curve", {})
        cfg.out = cfg.out or "confidence_curve.csv"
        curve = harness.run_confidence_curve(cfg)
        for row in curve.rows():
            print("n_sig=%d rate=%.3f ci=[%.3f, %.3f]" % row[:4])
        return 0

    if args.command == "flares":
        cfg = _experiment_config(args, "flares_needed", {})
        cfg.trials = max(cfg.trials, 300)
        cfg.out = cfg.out or "flares_needed.csv"
        for n_sig, m_req, bound in harness.run_flares_needed(cfg):
            print(f"n_sig={n_sig} m_required={m_req} bound={bound}")
        return 0

    if args.command == "demo":
        cfg = _experiment_config(args, "single_demo", {})
        cfg.out = cfg.out or "score_trace.csv"
        taus, G, mean_dt = harness.run_single_demo(cfg)
        print(f"peak at tau = {taus[np.argmax(G)]:.6g} s (true mean {mean_dt:.6g} s)")
        return 0

    if args.command == "yield":
        model = FlareModel()
        ext = (ExtinctionCurve.from_file(args.extinction) if args.extinction
               else default_extinction())
        tel = TelescopeSpec(area=args.area)
        n_sig = photons_per_flare(model, tel, ext, "signal")
        n_bg = photons_per_flare(model, tel, ext, "background")
        report = {
            "area_m2": args.area,
            "n_sig": n_sig,
            "n_bg": n_bg,
            "Q": n_sig / (n_sig + n_bg),
            "flare_rate_per_day": flare_rate(1e31, model),
            "ism_sigma_phi": ism_phase_sigma(1e-6, model.duration, model.D_S, 750e12),
            "finite_source_prefactor_eps": 0.2,
        }
        _emit(report, args.out)
        if args.integrand_csv:
            lam = np.linspace(tel.lambda_min, tel.lambda_max, 400)
            f = 2.998e8 / lam
            from .constants import C_LIGHT, H_PLANCK, K_BOLTZMANN
            rows = []
            for fi in f:
                tau = float(ext.tau_frequency(fi))
                sig = np.exp(-tau) * 2 * np.pi * fi**2 / np.expm1(
                    H_PLANCK * fi / (K_BOLTZMANN * model.T_flare))
                rows.append((C_LIGHT / fi * 1e9, tau, sig))
            harness.write_csv(args.integrand_csv,
                              ["wavelength_nm", "tau", "signal_integrand"], rows)
        return 0

    if args.command == "dust":
        cfg = _experiment_config(args, "dust_sweep", {
            "r": 1.0, "d": 1024.0, "R": 1e6, "rho_N": 3.2e-7, "dims": 2,
        })
        dust_cfg = DustModelConfig(
            r=float(cfg.params["r"]), d=float(cfg.params["d"]),
            R=float(cfg.params["R"]), rho_N=float(cfg.params["rho_N"]),
            dims=int(cfg.params["dims"]),
        )
        fracs = simulate_tree_batch(dust_cfg, cfg.trials, stream(cfg.seed))
        if cfg.out:
            harness.write_csv(cfg.out, ["trial", "fraction"],
                              list(enumerate(fracs.tolist())), cfg)
        _emit({
            "mean_fraction": float(fracs.mean()),
            "closed_form": 1.0 - loss_rate(dust_cfg),
            "sample_variance": float(fracs.var(ddof=1)),
            "variance_bound": variance_bound(dust_cfg),
            "trials": cfg.trials,
        }, None)
        return 0

    if args.command == "capacity":
        cfg = _experiment_config(args, "capacity", {"omega0_tc": 1e3, "T_over_tc": 1e3})
        packet = cfg.packet()
        chi = holevo_capacity_numeric(packet, CapacityGrid.for_packet(packet))
        _emit({"chi_nats": chi, "omega0_tc": packet.omega0 * packet.tc,
               "T_over_tc": packet.T / packet.tc}, args.out, cfg)
        return 0

    if args.command == "array":
        cfg = _experiment_config(args, "array_demo", {
            "T_over_tc": 1e3, "delays_tc": [150.0, 420.0], "budget": 1200,
        })
        packet = cfg.packet()
        arr = ArraySpec(delays=tuple(float(d) * packet.tc
                                     for d in cfg.params["delays_tc"]))
        photons = sample_array_photons(packet, arr, int(cfg.params["budget"]),
                                       stream(cfg.seed))
        est = estimate_pairwise_delays(photons, packet, arr.n_sites, keep_scores=True)
        if cfg.out:
            harness.write_csv(cfg.out, ["tau", "score"],
                              list(zip(est.taus.tolist(), est.scores.tolist())), cfg)
        _emit({
            "recovered_delays": est.delays,
            "true_differences": sorted(arr.pairwise_differences().tolist()),
            "complete": est.complete,
            "threshold": est.threshold,
        }, None)
        return 0

    if args.command == "geometry":
        from .constants import M_SUN

        geom = LensGeometry(M=args.mass_msun * M_SUN, D_L=args.dl_kpc * KPC,
                            D_S=args.ds_kpc * KPC, v_T=args.vt_kms * 1e3, u=args.u)
        A, A_plus, A_minus = magnification(args.u)
        report = {
            "theta_E_rad": einstein_radius(geom),
            "t_E_days": crossing_time(geom) / 86400.0,
            "A": A,
            "A_plus": A_plus,
            "A_minus": A_minus,
            "f_u": float(delay_factor(args.u)),
            "delta_t_s": time_delay(geom.M, args.u),
            "finite_source_lambda_m": finite_source_lambda_min(
                SourceGeometry(R_S=args.rs_m, D_S=geom.D_S), A),
        }
        _emit(report, args.out)
        if args.sweep_out:
            us = np.linspace(0.05, 5.0, 200)
            rows = [(float(u), magnification(float(u))[0], float(delay_factor(float(u))))
                    for u in us]
            harness.write_csv(args.sweep_out, ["u", "A", "f"], rows)
        return 0

    parser.error(f"unhandled command {args.command}")
    return 2


def _csv_skip(path: str) -> int:
    skip = 0
    with open(path) as fh:
        for line in fh:
            if line.startswith("#") or line.split(",")[0].strip() == "omega":
                skip += 1
            else:
                break
    return skip


if __name__ == "__main__":
    sys.exit(main())
