"""Command-line front end.

Subcommands: evolve | master | sweep | wigner | chain | analyze, each driven
by a flat key=value (or JSON) config plus repeatable --override key=value.
Outputs are deterministic CSV files (byte-identical across reruns and
thread counts) plus a meta.json echoing the resolved configuration.

Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 no convergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import detect_packets, spectrum, track_packets
from .config import RunConfig, apply_overrides, build_config, load_raw
from .csvio import read_csv, write_csv, write_json
from .dressed import dressed_report, lds_trajectory
from .dynamics import TimeGrid, evolve_lindblad, evolve_schrodinger, find_stationary
from .errors import ConfigError, NoConvergence, NumericalError
from .model import prepare_state, to_density
from .observables import reduce_photonic, wigner
from .wkb_chain import cds_chain, chain_eigensolve, decay_verification

log = logging.getLogger("cavity_packets")

FIG4_TIME_HORIZON = 300.0  # default sweep horizon in 1/g, recorded in meta


def _meta(cfg: RunConfig, extra: dict | None = None) -> dict:
    payload = {
        "package_version": __version__,
        "mode": cfg.mode,
        "params": dataclasses.asdict(cfg.params) if cfg.params else None,
        "grid": dataclasses.asdict(cfg.grid) if cfg.grid else None,
        "initial_state": cfg.initial_state,
        "config": {k: v for k, v in sorted(cfg.raw.items())},
    }
    if extra:
        payload.update(extra)
    return payload


def _write_timeseries(out: Path, traj) -> None:
    rows = zip(traj.times, traj.mean_n, traj.norm_or_trace, traj.pop_excited)
    write_csv(out / "timeseries.csv",
              ["t", "mean_n", "norm_or_trace", "pop_excited"], rows)


def _write_pnt(out: Path, traj) -> None:
    rows = []
    for k, t in enumerate(traj.times):
        for n, pv in enumerate(traj.pn[k]):
            rows.append((float(t), n, float(pv)))
    write_csv(out / "pnt.csv", ["t", "n", "p"], rows)


def _write_spectrum(out: Path, times, values) -> None:
    sp = spectrum(np.asarray(times), np.asarray(values))
    write_csv(out / "spectrum.csv", ["freq", "magnitude"],
              zip(sp.freqs, sp.magnitudes))


def _initial_pure(cfg: RunConfig):
    return prepare_state(cfg.initial_state, cfg.params.n_max)


def _run_evolve(cfg: RunConfig, out: Path) -> None:
    traj = evolve_schrodinger(cfg.params, _initial_pure(cfg), cfg.grid,
                              store_states=cfg.store_states)
    _write_timeseries(out, traj)
    _write_pnt(out, traj)
    _write_spectrum(out, traj.times, traj.mean_n)
    write_json(out / "meta.json", _meta(cfg))
    log.info("evolve: %d snapshots to t = %g", traj.n_snap, traj.times[-1])


def _run_master(cfg: RunConfig, out: Path) -> None:
    rho0 = to_density(_initial_pure(cfg))
    traj = evolve_lindblad(cfg.params, rho0, cfg.grid, store_states=cfg.store_states)
    _write_timeseries(out, traj)
    _write_pnt(out, traj)
    extra = {}
    if cfg.stationary:
        rho_inf = find_stationary(cfg.params, traj.final_state, cfg.grid.dt,
                                  tol=cfg.stationary_tol, t_max=cfg.stationary_tmax,
                                  guard_tol=cfg.stationary_guard)
        pn = np.real(np.diag(rho_inf))
        pn = pn[0::2] + pn[1::2]
        write_csv(out / "stationary.csv", ["n", "p"], enumerate(pn.tolist()))
        extra["stationary_tol"] = cfg.stationary_tol
    write_json(out / "meta.json", _meta(cfg, extra))
    log.info("master: %d snapshots to t = %g", traj.n_snap, traj.times[-1])


def _sweep_point(cfg: RunConfig, value: float):
    params = dataclasses.replace(cfg.params, **{cfg.sweep.axis: value})
    if cfg.sweep.mode == "max_mean":
        psi0 = prepare_state(cfg.initial_state, params.n_max)
        if params.sum_rates > 0:
            traj = evolve_lindblad(params, to_density(psi0), cfg.grid)
        else:
            traj = evolve_schrodinger(params, psi0, cfg.grid, store_states=False)
        return {"max_mean_n": float(traj.mean_n.max())}
    rho0 = to_density(prepare_state(cfg.initial_state, params.n_max))
    rho_inf = find_stationary(params, rho0, cfg.grid.dt,
                              tol=cfg.stationary_tol, t_max=cfg.stationary_tmax,
                              guard_tol=cfg.stationary_guard)
    pn = np.real(np.diag(rho_inf))
    pn = pn[0::2] + pn[1::2]
    packets = sorted(detect_packets(pn, cfg.packet_valley_frac, cfg.packet_min_norm),
                     key=lambda p: -p.norm)
    row = {"n_packets": len(packets), "pn": pn}
    for rank, pk in enumerate(packets[:2], start=1):
        row[f"packet{rank}_norm"] = pk.norm
        row[f"packet{rank}_mean"] = pk.mean
    return row


def _run_sweep(cfg: RunConfig, out: Path) -> None:
    values = cfg.sweep.values()

    def work(idx_value):
        idx, value = idx_value
        try:
            res = _sweep_point(cfg, value)
            status = "ok"
        except (NumericalError, NoConvergence, ValueError) as exc:
            res = {}
            status = f"error:{type(exc).__name__}"
        log.info("sweep %s = %g: %s", cfg.sweep.axis, value, status)
        return idx, value, status, res

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(work, enumerate(values)))
    else:
        results = [work(iv) for iv in enumerate(values)]
    results.sort(key=lambda r: (r[1], r[0]))

    if cfg.sweep.mode == "max_mean":
        rows = [(v, status, res.get("max_mean_n", "")) for _, v, status, res in results]
        write_csv(out / "sweep.csv", ["axis_value", "status", "max_mean_n"], rows)
    else:
        header = ["axis_value", "status", "n_packets",
                  "packet1_norm", "packet1_mean", "packet2_norm", "packet2_mean"]
        rows = []
        pn_rows = []
        for _, v, status, res in results:
            rows.append((v, status, res.get("n_packets", ""),
                         res.get("packet1_norm", ""), res.get("packet1_mean", ""),
                         res.get("packet2_norm", ""), res.get("packet2_mean", "")))
            for n, pv in enumerate(res.get("pn", [])):
                pn_rows.append((v, n, float(pv)))
        write_csv(out / "sweep.csv", header, rows)
        write_csv(out / "sweep_pn.csv", ["axis_value", "n", "p"], pn_rows)
    write_json(out / "meta.json",
               _meta(cfg, {"time_horizon": cfg.grid.t_final if cfg.grid else None}))


def _run_wigner(cfg: RunConfig, out: Path) -> None:
    psi0 = _initial_pure(cfg)
    if cfg.params.sum_rates > 0:
        traj = evolve_lindblad(cfg.params, to_density(psi0), cfg.grid)
        rho = traj.final_state
    else:
        traj = evolve_schrodinger(cfg.params, psi0, cfg.grid, store_states=False)
        rho = to_density(traj.final_state)
    axis = np.linspace(-cfg.wigner_zmax, cfg.wigner_zmax, cfg.wigner_points)
    grid = wigner(reduce_photonic(rho), axis, axis)
    rows = []
    for i, re in enumerate(grid.re_axis):
        for j, im in enumerate(grid.im_axis):
            rows.append((float(re), float(im), float(grid.values[i, j])))
    write_csv(out / "wigner.csv", ["re_z", "im_z", "w"], rows)
    write_json(out / "meta.json", _meta(cfg, {"snapshot_t": cfg.grid.t_final}))
    log.info("wigner: %dx%d grid, min W = %g", cfg.wigner_points, cfg.wigner_points,
             grid.values.min())


def _run_chain(cfg: RunConfig, out: Path) -> None:
    spec = cds_chain(cfg.params.f_drive, cfg.params.delta, cfg.chain_branch,
                     cfg.chain_size)
    modes = chain_eigensolve(spec)
    write_csv(out / "modes.csv", ["k", "lambda"],
              ((k, float(v)) for k, v in enumerate(modes.eigenvalues)))
    extra = {}
    if cfg.chain_lambda_lo is not None and cfg.chain_lambda_hi is not None:
        report = decay_verification(modes, spec,
                                    (cfg.chain_lambda_lo, cfg.chain_lambda_hi))
        write_json(out / "chain_report.json", {
            "passed": report.passed,
            "entries": [dataclasses.asdict(e) for e in report.entries],
        })
        extra["decay_check"] = report.passed
    write_json(out / "meta.json", _meta(cfg, extra))
    log.info("chain: %d modes (branch %s)", spec.size, cfg.chain_branch)


def _run_analyze(cfg: RunConfig, out: Path) -> None:
    write_json(out / "dressed.json",
               dressed_report(cfg.params.f_drive, cfg.params.delta).to_dict())
    if cfg.input_timeseries:
        header, rows = read_csv(cfg.input_timeseries)
        for col in ("t", "mean_n"):
            if col not in header:
                raise ConfigError("input_timeseries", f"missing column '{col}'")
        ti = header.index("t")
        mi = header.index("mean_n")
        times = np.array([float(r[ti]) for r in rows])
        means = np.array([float(r[mi]) for r in rows])
        _write_spectrum(out, times, means)
    if cfg.input_pnt:
        header, rows = read_csv(cfg.input_pnt)
        for col in ("t", "n", "p"):
            if col not in header:
                raise ConfigError("input_pnt", f"missing column '{col}'")
        ti, ni, pi = (header.index(c) for c in ("t", "n", "p"))
        by_time: dict[float, dict[int, float]] = {}
        for r in rows:
            by_time.setdefault(float(r[ti]), {})[int(r[ni])] = float(r[pi])
        times = sorted(by_time)
        nmax = max(max(d) for d in by_time.values())
        pn = np.zeros((len(times), nmax + 1))
        for k, t in enumerate(times):
            for n, pv in by_time[t].items():
                pn[k, n] = pv
        sets, _tracks = track_packets(np.array(times), pn,
                                      valley_frac=cfg.packet_valley_frac,
                                      min_norm=cfg.packet_min_norm)
        prows = []
        for ps in sets:
            for pid, pk in enumerate(ps.packets):
                prows.append((ps.time, pid, pk.norm, pk.mean, pk.peak_n))
        write_csv(out / "packets.csv",
                  ["t", "packet_id", "norm", "mean", "peak_n"], prows)
    if cfg.write_trajectory:
        if cfg.grid is None:
            raise ConfigError("t_final", "required for write_trajectory")
        ts = np.arange(0.0, cfg.grid.t_final,
                       cfg.grid.dt * cfg.grid.output_stride)
        z = lds_trajectory(cfg.params.f_drive, cfg.params.delta, ts)
        write_csv(out / "trajectory.csv", ["t", "re_z", "im_z"],
                  zip(ts, np.real(z), np.imag(z)))
    write_json(out / "meta.json", _meta(cfg))
    log.info("analyze: wrote dressed report for f=%g delta=%g",
             cfg.params.f_drive, cfg.params.delta)


_RUNNERS = {
    "evolve": _run_evolve,
    "master": _run_master,
    "sweep": _run_sweep,
    "wigner": _run_wigner,
    "chain": _run_chain,
    "analyze": _run_analyze,
}


def run(cfg: RunConfig) -> int:
    """Execute one configured run, writing outputs into cfg.out_dir."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _RUNNERS[cfg.mode](cfg, out)
    return 0


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cavity-packets",
                                 description="Driven Jaynes-Cummings simulator")
    sub = ap.add_subparsers(dest="mode", required=True)
    for mode in _RUNNERS:
        p = sub.add_parser(mode)
        p.add_argument("--config", required=True, help="key=value or JSON config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads for sweeps (default: "
                            "CAVITY_PACKETS_THREADS or 1)")
        p.add_argument("--override", action="append", default=[],
                       metavar="KEY=VALUE", help="override a config key")
    return ap


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    args = _parser().parse_args(argv)
    try:
        raw = load_raw(args.config)
        raw = apply_overrides(raw, args.override)
        cfg = build_config(raw, mode=args.mode)
        if args.out is not None:
            cfg.out_dir = args.out
        if args.threads is not None:
            cfg.threads = args.threads
        elif "threads" not in cfg.raw:
            cfg.threads = int(os.environ.get("CAVITY_PACKETS_THREADS", "1"))
        return run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NoConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return 4
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
