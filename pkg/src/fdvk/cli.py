"""Command-line front end.

Three subcommands: `init` generates an ansatz and writes it as a
snapshot, `report` prints the invariants of a snapshot, `minimize`
runs the descent described by a config file.  JSON goes to standard
output, human-readable messages to standard error.  Exit codes: 0
success, 2 usage or parse failure, 3 I/O failure, 4 homotopy-class
violation during flow.
"""

import argparse
import json
import struct
import sys

import numpy as np

from .ansatz import KINDS, AnsatzSpec, generate
from .errors import (
    ChargeDrift,
    ConfigError,
    FdvkError,
    FluxChange,
    NonIntegralFlux,
    SnapshotError,
)
from .fields import (
    Connection,
    GroupField,
    SphereField,
    conjugate_field,
    constant_sphere,
    energy,
    plaquette_curvature,
)
from .flow import FlowConfig, minimize
from .invariants import (
    _raw_fluxes,
    chern_simons,
    degree,
    fluxes,
    homotopy_record,
    hopf_charge,
    modulus,
)
from .lattice import Grid, form_norm

MAGIC = b"FDVK1"
# kind byte of the snapshot header
KIND_SPHERE, KIND_GROUP, KIND_CONNECTION = 0, 1, 2
_COMPS = {KIND_SPHERE: 3, KIND_GROUP: 4, KIND_CONNECTION: 9}

CSV_HEADER = "iter,e2,e4,energy,grad_norm,flux1,flux2,flux3,hopf,vk_ratio"

TWO_PI = 2.0 * np.pi


def _kind_of(obj):
    if isinstance(obj, SphereField):
        return KIND_SPHERE
    if isinstance(obj, GroupField):
        return KIND_GROUP
    if isinstance(obj, Connection):
        return KIND_CONNECTION
    raise TypeError(f"cannot snapshot {type(obj).__name__}")


def save_snapshot(path, obj):
    """Write a field to the fixed binary layout.

    Header: the 5 magic bytes, one kind byte, n as little-endian
    uint32, l as little-endian float64.  Payload: little-endian
    float64, sites ordered x-fastest, components contiguous per site
    (connections store the three direction vectors in order).
    """
    kind = _kind_of(obj)
    g = obj.grid
    v = np.asarray(obj.values, dtype=float)
    if kind == KIND_CONNECTION:
        v = v.reshape(g.n, g.n, g.n, 9)
    payload = np.ascontiguousarray(v.transpose(2, 1, 0, 3), dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<B", kind))
        fh.write(struct.pack("<I", g.n))
        fh.write(struct.pack("<d", g.l))
        fh.write(payload.tobytes())


def load_snapshot(path):
    """Read a snapshot back into the matching field type.

    The constructors re-validate the unit constraints, so a corrupted
    payload fails here rather than downstream.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 18 or blob[:5] != MAGIC:
        raise SnapshotError(f"{path}: not a field snapshot")
    kind = blob[5]
    if kind not in _COMPS:
        raise SnapshotError(f"{path}: unknown kind byte {kind}")
    (n,) = struct.unpack("<I", blob[6:10])
    (l,) = struct.unpack("<d", blob[10:18])
    if n == 0 or not np.isfinite(l) or l <= 0:
        raise SnapshotError(f"{path}: bad header (n = {n}, l = {l})")
    comps = _COMPS[kind]
    expect = 18 + n**3 * comps * 8
    if len(blob) != expect:
        raise SnapshotError(
            f"{path}: payload is {len(blob) - 18} bytes, expected {expect - 18}"
        )
    flat = np.frombuffer(blob, dtype="<f8", offset=18)
    v = flat.reshape(n, n, n, comps).transpose(2, 1, 0, 3)
    grid = Grid(n, l)
    try:
        if kind == KIND_SPHERE:
            return SphereField(grid, v)
        if kind == KIND_GROUP:
            return GroupField(grid, v)
        return Connection(grid, v.reshape(n, n, n, 3, 3))
    except ValueError as exc:
        raise SnapshotError(f"{path}: {exc}") from exc


# RunConfig keys: conversion and FlowConfig field each maps to.
_FLOW_KEYS = {
    "flow.mode": ("mode", str),
    "flow.max_iters": ("max_iters", int),
    "flow.grad_tol": ("grad_tol", float),
    "flow.step0": ("step0", float),
    "flow.backtrack": ("backtrack", float),
    "flow.monitor_every": ("monitor_every", int),
    "flow.charge_drift_tol": ("charge_drift_tol", float),
}
_CONFIG_KEYS = frozenset(_FLOW_KEYS) | {
    "grid.n",
    "grid.l",
    "init.kind",
    "init.charge",
    "init.axis",
    "init.radius",
    "out.field",
    "out.trace",
}

_REQUIRED = object()


def parse_run_config(text):
    """Parse `key = value` lines into (Grid, AnsatzSpec, FlowConfig, out paths).

    `#` starts a comment; unknown and duplicate keys are errors, as are
    missing grid.n, init.kind, out.field or out.trace.  Flow keys
    default to the FlowConfig defaults.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, val = body.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or not key or not val:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = val

    def take(key, conv, default=_REQUIRED):
        if key not in raw:
            if default is _REQUIRED:
                raise ConfigError(f"missing required key {key!r}")
            return default
        try:
            return conv(raw[key])
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: {exc}") from exc

    grid = Grid(take("grid.n", int), take("grid.l", float, TWO_PI))
    spec = AnsatzSpec(
        kind=take("init.kind", str),
        charge=take("init.charge", int, 1),
        axis=take("init.axis", int, 1),
        radius=take("init.radius", float, 0.45),
    )
    flow_kwargs = {}
    for key, (name, conv) in _FLOW_KEYS.items():
        if key in raw:
            flow_kwargs[name] = take(key, conv)
    cfg = FlowConfig(**flow_kwargs)
    return grid, spec, cfg, take("out.field", str), take("out.trace", str)


def _json_line(obj):
    print(json.dumps(obj), flush=True)


def _sphere_class(psi):
    """Flux/charge block shared by init records and reports."""
    out = {}
    try:
        p, raw = fluxes(psi)
        out["fluxes"] = list(p)
        out["raw_fluxes"] = list(raw)
        if p == (0, 0, 0):
            out["hopf"] = hopf_charge(psi)
        else:
            out["hopf"] = None
            out["hopf_reason"] = "nonzero fluxes"
    except NonIntegralFlux as exc:
        out["fluxes"] = None
        out["fluxes_reason"] = str(exc)
        out["raw_fluxes"] = list(_raw_fluxes(psi))
        out["hopf"] = None
        out["hopf_reason"] = "fluxes not classifiable"
    return out


def cmd_init(args):
    spec = AnsatzSpec(
        kind=args.ansatz, charge=args.charge, axis=args.axis, radius=args.radius
    )
    grid = Grid(args.n, args.l)
    field = generate(spec, grid)
    save_snapshot(args.out, field)
    if isinstance(field, GroupField):
        rec = homotopy_record(constant_sphere(grid), field)
        record = {
            "fluxes": list(rec.fluxes),
            "raw_fluxes": list(rec.raw_fluxes),
            "m": rec.m,
            "degree": rec.degree,
            "degree_class": rec.degree_class,
            "hopf": rec.hopf_charge,
        }
    else:
        block = _sphere_class(field)
        p = block.get("fluxes")
        record = {
            "fluxes": p,
            "raw_fluxes": block.get("raw_fluxes"),
            "m": modulus(p) if p is not None else None,
            "degree": None,
            "degree_class": None,
            "hopf": block.get("hopf"),
        }
    _json_line(record)
    print(f"wrote {args.ansatz} snapshot to {args.out}", file=sys.stderr)
    return 0


def cmd_report(args):
    obj = load_snapshot(args.field)
    report = {
        "kind": {0: "sphere", 1: "group", 2: "connection"}[_kind_of(obj)],
        "e2": None,
        "e4": None,
        "energy": None,
        "fluxes": None,
        "raw_fluxes": None,
        "hopf": None,
        "degree": None,
        "cs": None,
        "flatness": None,
    }
    if isinstance(obj, Connection):
        report["cs"] = chern_simons(obj)
        report["flatness"] = form_norm(obj.grid, plaquette_curvature(obj))
        report["reason"] = "map invariants undefined for a bare connection"
        _json_line(report)
        return 0
    if isinstance(obj, GroupField):
        report["degree"] = degree(obj)
        psi = conjugate_field(obj, constant_sphere(obj.grid))
    else:
        report["degree_reason"] = "no framing map in a sphere snapshot"
        psi = obj
    en = energy(psi)
    report["e2"], report["e4"], report["energy"] = en.e2, en.e4, en.total
    report.update(_sphere_class(psi))
    report["cs_reason"] = "not a connection snapshot"
    report["flatness_reason"] = "not a connection snapshot"
    _json_line(report)
    return 0


def _csv_cell(v):
    return "" if v is None else repr(float(v))


def cmd_minimize(args):
    with open(args.config, "r") as fh:
        text = fh.read()
    grid, spec, cfg, out_field, out_trace = parse_run_config(text)
    psi0 = generate(spec, grid)
    if not isinstance(psi0, SphereField):
        raise ConfigError(f"init.kind {spec.kind!r} does not generate a sphere field")
    abort = None
    with open(out_trace, "w") as trace_fh:
        trace_fh.write(CSV_HEADER + "\n")

        def sink(row):
            cells = [
                str(row.iteration),
                _csv_cell(row.e2),
                _csv_cell(row.e4),
                _csv_cell(row.total),
                _csv_cell(row.grad_norm),
                _csv_cell(row.raw_fluxes[0]),
                _csv_cell(row.raw_fluxes[1]),
                _csv_cell(row.raw_fluxes[2]),
                _csv_cell(row.hopf_charge),
                _csv_cell(row.vk_ratio),
            ]
            trace_fh.write(",".join(cells) + "\n")

        try:
            psi, trace = minimize(psi0, cfg, on_row=sink)
        except (ChargeDrift, FluxChange) as exc:
            abort = exc
    if abort is not None:
        last = abort.trace.last() if abort.trace and abort.trace.rows else None
        _json_line(
            {
                "abort": type(abort).__name__,
                "message": str(abort),
                "iterations": last.iteration if last else None,
                "energy": last.total if last else None,
            }
        )
        print(f"aborted: {abort}", file=sys.stderr)
        return 4
    save_snapshot(out_field, psi)
    last = trace.last()
    _json_line(
        {
            "abort": None,
            "iterations": last.iteration,
            "energy": last.total,
            "grad_norm": last.grad_norm,
        }
    )
    print(
        f"minimized {spec.kind} for {last.iteration} iterations, "
        f"energy {last.total:.6f}, field in {out_field}, trace in {out_trace}",
        file=sys.stderr,
    )
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fdvk",
        description="Lattice laboratory for sphere-valued maps on the 3-torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_init = sub.add_parser("init", help="generate an ansatz snapshot")
    p_init.add_argument("--ansatz", required=True, choices=KINDS)
    p_init.add_argument("--charge", type=int, default=1)
    p_init.add_argument("--axis", type=int, default=1, choices=(1, 2, 3))
    p_init.add_argument("--radius", type=float, default=0.45)
    p_init.add_argument("--n", type=int, required=True)
    p_init.add_argument("--l", type=float, default=TWO_PI)
    p_init.add_argument("-o", "--out", required=True)
    p_init.set_defaults(func=cmd_init)

    p_report = sub.add_parser("report", help="print invariants of a snapshot")
    p_report.add_argument("field")
    p_report.set_defaults(func=cmd_report)

    p_min = sub.add_parser("minimize", help="run the descent of a config file")
    p_min.add_argument("--config", required=True)
    p_min.set_defaults(func=cmd_minimize)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ChargeDrift, FluxChange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (FdvkError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
