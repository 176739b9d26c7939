"""Pipeline command-line interface.

Five subcommands cover the reconstruction workflow end to end:
simulate -> beamform -> metrics / render / profile. Exit codes: 0 on
success, 1 on runtime errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import containers
from .beamformers import BeamformerKind
from .config import RunConfig, apply_overrides, load_config
from .dsp import log_compress
from .geometry import ImageGrid, linear_array
from .metrics import LateralProfile, RegionSpec, cr, fwhm, lateral_profile, snr_region
from .pipeline import default_filter, reconstruct_envelope
from .simulator import (
    NoiseSpec,
    Phantom,
    PhantomLabel,
    PulseModel,
    add_noise,
    make_cyst_phantom,
    make_tumor_phantom,
    make_wire_phantom,
    signal_power,
    synthesize_rf,
)

_ALGOS = {kind.value: kind for kind in BeamformerKind}

# Dynamic range used when metrics need a dB profile; deep enough that the
# floor never clips a measurable feature.
_METRICS_DB_RANGE = 400.0


def _parse_custom_scatterers(text: str) -> np.ndarray:
    points = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        parts = item.split(",")
        if len(parts) != 3:
            raise ValueError(f"custom scatterer {item!r} must be x_mm,z_mm,amplitude")
        x_mm, z_mm, amp = (float(p) for p in parts)
        points.append((x_mm * 1e-3, z_mm * 1e-3, amp))
    if not points:
        raise ValueError("phantom=custom needs custom_scatterers entries")
    return np.array(points, dtype=float)


def build_phantom(cfg: RunConfig) -> Phantom:
    if cfg.phantom == "wires":
        return make_wire_phantom(cfg.pair_separation)
    if cfg.phantom == "cysts":
        return make_cyst_phantom(cfg.speckle_seed, cfg.speckle_density)
    if cfg.phantom == "tumor":
        return make_tumor_phantom(cfg.speckle_seed, cfg.speckle_density)
    if cfg.phantom == "custom":
        pts = _parse_custom_scatterers(cfg.custom_scatterers)
        return Phantom(
            scatterers=pts,
            label=PhantomLabel.CUSTOM,
            x_bounds=(float(pts[:, 0].min()), float(pts[:, 0].max())),
            z_bounds=(float(pts[:, 1].min()), float(pts[:, 1].max())),
        )
    raise ValueError(f"unknown phantom {cfg.phantom!r} (wires, cysts, tumor or custom)")


def _grid_from(cfg: RunConfig) -> ImageGrid:
    return ImageGrid(
        x_min=cfg.x_min, x_max=cfg.x_max, z_min=cfg.z_min, z_max=cfg.z_max, nx=cfg.nx, nz=cfg.nz
    )


def _config_from(args, keys) -> RunConfig:
    cfg = load_config(args.config)
    apply_overrides(cfg, {key: getattr(args, key) for key in keys})
    cfg.validate()
    return cfg


def cmd_simulate(args) -> int:
    keys = (
        "phantom", "elements", "pitch", "f0", "fs", "c", "cycles", "snr_db", "seed",
        "pair_separation", "speckle_density", "speckle_seed", "custom_scatterers",
    )
    cfg = _config_from(args, keys)
    geometry = linear_array(cfg.elements, cfg.pitch, cfg.c)
    phantom = build_phantom(cfg)
    pulse = PulseModel(f0=cfg.f0, cycles=cfg.cycles)
    clean = synthesize_rf(phantom, geometry, pulse, cfg.fs)
    frame = add_noise(clean, NoiseSpec(target_snr_db=cfg.snr_db, seed=cfg.seed))
    if frame is clean:
        realized = "inf"
    else:
        noise_power = float(np.mean((frame.samples - clean.samples) ** 2))
        realized = f"{10.0 * np.log10(signal_power(clean.samples) / noise_power):.6f}"
    containers.write_rf(args.out, frame, cfg.pitch)
    print(f"phantom={cfg.phantom}")
    print(f"elements={frame.element_count}")
    print(f"samples={frame.sample_count}")
    print(f"target_snr_db={cfg.snr_db:.6f}")
    print(f"realized_snr_db={realized}")
    print(f"out={args.out}")
    return 0


def cmd_beamform(args) -> int:
    keys = ("x_min", "x_max", "z_min", "z_max", "nx", "nz",
            "filter_taps", "filter_half_bandwidth", "filter_center")
    cfg = _config_from(args, keys)
    frame, pitch = containers.read_rf(args.rf_path)
    kind = _ALGOS[args.algo]
    if kind is BeamformerKind.DSDMAS and frame.element_count < 3:
        raise ValueError("dsdmas needs at least 3 array elements")
    geometry = linear_array(frame.element_count, pitch, frame.c)
    grid = _grid_from(cfg)
    spec = default_filter(
        kind, frame.f0, taps=cfg.filter_taps,
        half_bandwidth=cfg.filter_half_bandwidth, center=cfg.filter_center or None,
    )
    env, ops = reconstruct_envelope(frame, geometry, grid, kind, filter_spec=spec)
    containers.write_image(args.out, env, grid)
    lines = [
        f"algo={args.algo}",
        f"elements={frame.element_count}",
        f"samples={frame.sample_count}",
        f"grid_nx={grid.nx}",
        f"grid_nz={grid.nz}",
        f"pixels={grid.nx * grid.nz}",
        f"ops_per_pixel_multiplies={ops.multiplies}",
        f"ops_per_pixel_special_ops={ops.special_ops}",
        f"ops_per_pixel_total={ops.total}",
        f"ops_total={ops.total * grid.nx * grid.nz}",
        f"filter_center_hz={spec.center:.1f}",
        f"filter_half_bandwidth_hz={spec.half_bandwidth:.1f}",
        f"filter_taps={spec.taps}",
    ]
    # paths stay out of the report so reruns into different directories
    # produce identical bytes
    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    if args.report:
        containers.atomic_write(args.report, report.encode("ascii"))
    return 0


def cmd_render(args) -> int:
    cfg = _config_from(args, ("dynamic_range",))
    env, _grid = containers.read_image(args.image_path)
    gray = containers.db_to_gray(log_compress(env, cfg.dynamic_range))
    containers.write_pgm(args.out, gray)
    print(f"out={args.out}")
    return 0


def _metrics_rows(env: np.ndarray, grid: ImageGrid, lines) -> list[str]:
    rows = []
    db_image = None
    for lineno, spec in lines:
        kind = spec[0]
        vals = [float(v) for v in spec[1:]]
        try:
            if kind == "snr" and len(vals) == 4:
                depth, center_x, half_x, half_z = (v * 1e-3 for v in vals)
                region = RegionSpec.rect(center_x, depth, half_x, half_z)
                value = snr_region(env, region, grid)
                rows.append(f"{vals[0]:.3f},snr_db,{value:.6f}")
            elif kind == "fwhm" and len(vals) == 3:
                depth, center_x, half_window = (v * 1e-3 for v in vals)
                if db_image is None:
                    db_image = log_compress(env, _METRICS_DB_RANGE)
                profile = lateral_profile(db_image, depth, grid)
                keep = np.abs(profile.x - center_x) <= half_window
                if not np.any(keep):
                    raise ValueError("profile window contains no pixels")
                windowed = LateralProfile(
                    depth=profile.depth,
                    x=profile.x[keep],
                    value_db=profile.value_db[keep] - profile.value_db[keep].max(),
                    depth_offset=profile.depth_offset,
                )
                rows.append(f"{vals[0]:.3f},fwhm_mm,{fwhm(windowed):.6f}")
            elif kind == "cr" and len(vals) == 5:
                depth, cyst_x, cyst_r, bck_x, bck_r = (v * 1e-3 for v in vals)
                value = cr(
                    env,
                    RegionSpec.disc(cyst_x, depth, cyst_r),
                    RegionSpec.disc(bck_x, depth, bck_r),
                    grid,
                )
                rows.append(f"{vals[0]:.3f},cr_db,{value:.6f}" if np.isfinite(value)
                            else f"{vals[0]:.3f},cr_db,-inf")
            else:
                raise ValueError(f"unknown metric row {kind!r} or wrong field count")
        except ValueError as exc:
            raise ValueError(f"regions line {lineno}: {exc}") from exc
    return rows


def cmd_metrics(args) -> int:
    env, grid = containers.read_image(args.image_path)
    lines = []
    with open(args.regions, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                lines.append((lineno, [part.strip() for part in text.split(",")]))
    rows = _metrics_rows(env, grid, lines)
    report = "depth_mm,metric,value\n" + "".join(row + "\n" for row in rows)
    sys.stdout.write(report)
    if args.out:
        containers.atomic_write(args.out, report.encode("ascii"))
    return 0


def cmd_profile(args) -> int:
    cfg = _config_from(args, ("dynamic_range",))
    env, grid = containers.read_image(args.image_path)
    db_image = log_compress(env, cfg.dynamic_range)
    profile = lateral_profile(db_image, args.depth_mm * 1e-3, grid)
    body = "x_mm,value_db\n" + "".join(
        f"{x * 1e3:.6f},{v:.6f}\n" for x, v in zip(profile.x, profile.value_db)
    )
    containers.atomic_write(args.out, body.encode("ascii"))
    print(f"depth_mm={profile.depth * 1e3:.3f}")
    print(f"depth_offset_mm={profile.depth_offset * 1e3:.6f}")
    print(f"out={args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="usbeam",
        description="Linear-array ultrasound reconstruction pipeline "
        "(simulate, beamform, metrics, render, profile).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="synthesize an RF channel-data container")
    sim.add_argument("--config", help="key=value config file")
    sim.add_argument("--phantom", choices=["wires", "cysts", "tumor", "custom"])
    sim.add_argument("--elements", type=int)
    sim.add_argument("--pitch", type=float, help="element pitch in meters")
    sim.add_argument("--f0", type=float, help="center frequency in Hz")
    sim.add_argument("--fs", type=float, help="sampling rate in Hz")
    sim.add_argument("--c", type=float, help="sound speed in m/s")
    sim.add_argument("--cycles", type=int, help="excitation cycles")
    sim.add_argument("--snr-db", dest="snr_db", type=float, help="noise target; >=300 disables")
    sim.add_argument("--seed", type=int, help="noise seed")
    sim.add_argument("--pair-separation", dest="pair_separation", type=float)
    sim.add_argument("--speckle-density", dest="speckle_density", type=float)
    sim.add_argument("--speckle-seed", dest="speckle_seed", type=int)
    sim.add_argument("--custom-scatterers", dest="custom_scatterers")
    sim.add_argument("--out", required=True, help="output RF container path")
    sim.set_defaults(func=cmd_simulate)

    bf = sub.add_parser("beamform", help="reconstruct an envelope image from RF data")
    bf.add_argument("rf_path", help="input RF container")
    bf.add_argument("--algo", required=True, choices=sorted(_ALGOS))
    bf.add_argument("--config", help="key=value config file")
    for name in ("x-min", "x-max", "z-min", "z-max"):
        bf.add_argument(f"--{name}", dest=name.replace("-", "_"), type=float,
                        help=f"grid {name.replace('-', '_')} in meters")
    bf.add_argument("--nx", type=int, help="lateral pixel count")
    bf.add_argument("--nz", type=int, help="axial pixel count")
    bf.add_argument("--filter-taps", dest="filter_taps", type=int)
    bf.add_argument("--filter-half-bw", dest="filter_half_bandwidth", type=float)
    bf.add_argument("--filter-center", dest="filter_center", type=float,
                    help="band center in Hz; 0 selects f0 (das) or 2*f0")
    bf.add_argument("--out", required=True, help="output image container path")
    bf.add_argument("--report", help="also write the op-count report here")
    bf.set_defaults(func=cmd_beamform)

    ren = sub.add_parser("render", help="render an image container to a PGM")
    ren.add_argument("image_path")
    ren.add_argument("--config", help="key=value config file")
    ren.add_argument("--dynamic-range", dest="dynamic_range", type=float, help="display range in dB")
    ren.add_argument("--out", required=True, help="output PGM path")
    ren.set_defaults(func=cmd_render)

    met = sub.add_parser("metrics", help="evaluate SNR / FWHM / CR over configured regions")
    met.add_argument("image_path")
    met.add_argument("--regions", required=True,
                     help="region file: snr,depth,x,hx,hz | fwhm,depth,x,window | "
                          "cr,depth,cx,cr,bx,br (all mm)")
    met.add_argument("--out", help="also write the CSV report here")
    met.set_defaults(func=cmd_metrics)

    prof = sub.add_parser("profile", help="export a lateral dB profile at a depth")
    prof.add_argument("image_path")
    prof.add_argument("--config", help="key=value config file")
    prof.add_argument("--depth-mm", dest="depth_mm", type=float, required=True)
    prof.add_argument("--dynamic-range", dest="dynamic_range", type=float)
    prof.add_argument("--out", required=True, help="output CSV path")
    prof.set_defaults(func=cmd_profile)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
