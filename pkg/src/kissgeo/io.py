"""JSON interchange documents and SVG rendering.

All file coordinates are in disk diameters.  JSON serialization uses the
shortest round-trip decimal form of each double, so parse(serialize(x))
is bit-exact.  SVG output is deterministic byte-for-byte for identical
inputs.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .curves import Arc, SparseCurve
from .packing import PackingInstance

FORMAT_VERSION = "1"
SVG_SCALE = 100.0  # pixels per disk diameter


class DocumentError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Packing documents.


def packing_to_doc(p: PackingInstance, metadata: dict | None = None) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "disks": [[float(x), float(y)] for x, y in p.centers],
        "source": None if p.source is None else int(p.source),
        "metadata": dict(metadata or {}),
    }


def doc_to_packing(doc: dict) -> PackingInstance:
    if not isinstance(doc, dict) or "disks" not in doc:
        raise DocumentError("not a packing document: missing 'disks'")
    if str(doc.get("format_version", FORMAT_VERSION)) != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {doc.get('format_version')}")
    disks = doc["disks"]
    if not disks:
        raise DocumentError("empty packing document")
    centers = np.array(disks, dtype=float)
    source = doc.get("source")
    return PackingInstance(centers=centers, source=None if source is None else int(source))


# ---------------------------------------------------------------------------
# Curve documents.


def curve_to_doc(c: SparseCurve) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "arcs": [
            {
                "center": [float(a.center[0]), float(a.center[1])],
                "start_angle": float(a.start_angle),
                "end_angle_ccw": float(a.start_angle + a.sweep),
            }
            for a in c.arcs
        ],
        "closed": bool(c.closed),
    }


def doc_to_curve(doc: dict) -> SparseCurve:
    if not isinstance(doc, dict) or "arcs" not in doc:
        raise DocumentError("not a curve document: missing 'arcs'")
    arcs = [
        Arc(
            center=np.array(a["center"], dtype=float),
            start_angle=float(a["start_angle"]),
            sweep=float(a["end_angle_ccw"]) - float(a["start_angle"]),
        )
        for a in doc["arcs"]
    ]
    return SparseCurve(arcs=arcs, closed=bool(doc.get("closed", False)))


def report_to_doc(report) -> dict:
    out = {
        "format_version": FORMAT_VERSION,
        "count": report.count,
        "n": report.n,
        "counts": {
            "c0": report.c0,
            "c1": report.c1,
            "c2": report.c2,
            "removed": report.removed,
        },
        "fallback_used": report.fallback_used,
        "total_bound": report.total_bound,
        "bound_ok": report.bound_ok,
        "gamma_length": report.gamma_length,
        "lemma_value": report.lemma_value,
        "sums": {
            "phi": report.sum_phi,
            "alpha": report.sum_alpha,
            "psi": report.sum_psi,
        },
        "regions": [
            {
                "members": [int(m) for m in r.region.members],
                "k": int(r.region.k01),
                "involved": [int(m) for m in r.involved],
                "phi": float(r.angles.phi),
                "alpha": float(r.angles.alpha),
                "psi": None if r.angles.psi is None else float(r.angles.psi),
                "delta": float(r.jumps.delta),
                "length": float(r.length),
                "checks": {c.name: float(c.slack) for c in r.verdict.checks},
            }
            for r in report.regions
        ],
    }
    if report.spacing is not None:
        out["removed_spacing"] = {
            "count": report.spacing.count,
            "min_gap": report.spacing.min_gap,
            "bound": report.spacing.bound,
        }
    return out


def save_json(doc: dict, path: str):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# Text report.


def text_report(report) -> str:
    """Human-readable certificate with 9-decimal values (angles also shown
    in multiples of pi so tight cases read as round numbers)."""
    lines = []
    lines.append(f"disks: {report.count}")
    lines.append(
        f"layers: C0={report.c0} C1={report.c1} C2={report.c2} "
        f"removed={report.removed}"
    )
    if report.fallback_used:
        lines.append(f"fallback: fewer than two 2-disks, bound {report.total_bound}")
        lines.append(f"verdict: {'OK' if report.bound_ok else 'VIOLATION'}")
        return "\n".join(lines) + "\n"
    lines.append(
        f"gamma_length: {report.gamma_length:.9f} "
        f"({report.gamma_length / math.pi:.9f} pi)"
    )
    lines.append(f"lemma_value: {report.lemma_value:.9f} (bound 36)")
    lines.append(
        f"sums: phi={report.sum_phi / math.pi:.9f} pi  "
        f"alpha={report.sum_alpha / math.pi:.9f} pi  "
        f"psi={report.sum_psi / math.pi:.9f} pi"
    )
    lines.append(f"regions: {len(report.regions)}")
    for t, r in enumerate(report.regions):
        psi = "-" if r.angles.psi is None else f"{r.angles.psi / math.pi:.9f}"
        lines.append(
            f"  region {t}: k={r.region.k01} "
            f"phi={r.angles.phi / math.pi:.9f} alpha={r.angles.alpha / math.pi:.9f} "
            f"psi={psi} delta={r.jumps.delta / math.pi:.9f} "
            f"len={r.length / math.pi:.9f} (pi units) "
            f"{'ok' if r.verdict.ok else 'VIOLATION'}"
        )
    if report.spacing is not None and report.spacing.count:
        lines.append(
            f"removed centers on curve: {report.spacing.count}, "
            f"min spacing {report.spacing.min_gap:.9f}"
        )
    lines.append(
        f"certificate: 1 + C1 + C2 + |gamma|/(pi/3) = "
        f"{report.total_value:.9f} <= {report.total_bound}: "
        f"{'OK' if report.bound_ok else 'VIOLATION'}"
    )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# SVG rendering.


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def _arc_path(curve: SparseCurve, tx, ty) -> str:
    """SVG path for a chain of unit-radius ccw arcs (y-axis flipped)."""
    parts = []
    r = SVG_SCALE
    start = curve.arcs[0].start_point
    parts.append(f"M {_fmt(tx(start[0]))} {_fmt(ty(start[1]))}")
    for a in curve.arcs:
        # Split long sweeps so each SVG arc segment is below a half turn.
        n_seg = max(1, int(math.ceil(a.sweep / (0.9 * math.pi))))
        for s in range(n_seg):
            ang = a.start_angle + a.sweep * (s + 1) / n_seg
            px = a.center[0] + math.cos(ang)
            py = a.center[1] + math.sin(ang)
            # ccw in math coordinates is sweep-flag 0 after the y flip
            parts.append(f"A {_fmt(r)} {_fmt(r)} 0 0 0 {_fmt(tx(px))} {_fmt(ty(py))}")
    return " ".join(parts)


def render_svg(report, path: str | None = None) -> str:
    """Figure of a certified packing: unit-radius disks in gray, tree
    edges, region rays, the boundary curve in bold, and markers at the
    removed-disk centers.  100 px per diameter."""
    pruned = report.pruned
    pts = [pruned.centers]
    if report.removed_centers is not None and len(report.removed_centers):
        pts.append(report.removed_centers)
    allpts = np.concatenate(pts)
    lo = allpts.min(axis=0) - 1.6
    hi = allpts.max(axis=0) + 1.6
    width = (hi[0] - lo[0]) * SVG_SCALE
    height = (hi[1] - lo[1]) * SVG_SCALE

    def tx(x):
        return (x - lo[0]) * SVG_SCALE

    def ty(y):
        return (hi[1] - y) * SVG_SCALE

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
    )
    out.append('<g fill="#d9d9d9" stroke="none">')
    for c in pruned.centers:
        out.append(
            f'<circle cx="{_fmt(tx(c[0]))}" cy="{_fmt(ty(c[1]))}" '
            f'r="{_fmt(SVG_SCALE)}"/>'
        )
    out.append("</g>")
    out.append('<g stroke="#404040" stroke-width="2" fill="none">')
    for t, r in enumerate(report.regions):
        cs = r.region.centers
        for a, b in zip(cs, cs[1:]):
            out.append(
                f'<line x1="{_fmt(tx(a[0]))}" y1="{_fmt(ty(a[1]))}" '
                f'x2="{_fmt(tx(b[0]))}" y2="{_fmt(ty(b[1]))}"/>'
            )
    out.append("</g>")
    out.append(
        '<g stroke="#808080" stroke-width="1.5" stroke-dasharray="6 4" fill="none">'
    )
    for r in report.regions:
        for c, f in ((r.region.c_i, r.region.f_i), (r.region.c_j, r.region.f_j)):
            far = c + 3.0 * c / float(np.hypot(*c))
            out.append(
                f'<line x1="{_fmt(tx(c[0]))}" y1="{_fmt(ty(c[1]))}" '
                f'x2="{_fmt(tx(far[0]))}" y2="{_fmt(ty(far[1]))}"/>'
            )
    out.append("</g>")
    if report.gamma is not None:
        out.append(
            f'<path d="{_arc_path(report.gamma, tx, ty)}" stroke="#000000" '
            f'stroke-width="4" fill="none"/>'
        )
    if report.removed_centers is not None:
        out.append('<g stroke="#b00000" stroke-width="2">')
        m = 0.08 * SVG_SCALE
        for c in report.removed_centers:
            x, y = tx(c[0]), ty(c[1])
            out.append(
                f'<line x1="{_fmt(x - m)}" y1="{_fmt(y - m)}" '
                f'x2="{_fmt(x + m)}" y2="{_fmt(y + m)}"/>'
            )
            out.append(
                f'<line x1="{_fmt(x - m)}" y1="{_fmt(y + m)}" '
                f'x2="{_fmt(x + m)}" y2="{_fmt(y - m)}"/>'
            )
        out.append("</g>")
    out.append("</svg>")
    svg = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(svg)
    return svg
