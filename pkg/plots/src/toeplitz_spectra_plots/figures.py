"""The three figure kinds.

Rendering is read-only and deterministic: the same inputs and tool versions
produce an identical image.  Every figure carries the producing file's
embedded header verbatim as a provenance footnote, and the heatmap residual
annotation is read from the report data, never recomputed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)
import numpy as np  # noqa: E402

from .io import SchemaError, read_report, read_table  # noqa: E402

KINDS = ("gamma-curve", "matrix-heatmap", "modulus-decay")


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input file(s), figure kind, output image, axis options."""

    inputs: tuple
    kind: str
    out: str
    title: str = ""
    logx: str = "auto"  # auto | on | off

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; known: {', '.join(KINDS)}")
        if not self.inputs:
            raise SchemaError("figure needs at least one input file")
        if self.logx not in ("auto", "on", "off"):
            raise SchemaError(f"logx must be auto, on or off, got {self.logx!r}")


@dataclass
class RenderResult:
    path: str
    annotations: list = field(default_factory=list)


def _provenance(fig, lines):
    text = "\n".join(lines)
    fig.text(0.01, 0.01, text, fontsize=5, family="monospace", va="bottom")
    return text


def _want_logx(spec, grid):
    if spec.logx != "auto":
        return spec.logx == "on"
    positive = np.all(grid > 0)
    return bool(positive and grid.max() / grid.min() >= 100.0)


def _gamma_curve(spec):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    notes = []
    logx = None
    for path in spec.inputs:
        table = read_table(path)
        label = table.meta.get("symbol", table.path)
        ax.plot(table.grid, table.values.real, label=f"Re, {label}")
        if np.max(np.abs(table.values.imag)) > 0:
            ax.plot(table.grid, table.values.imag, "--", label=f"Im, {label}")
        if np.any(table.flags != 0):
            bad = table.grid[table.flags != 0]
            ax.plot(bad, np.zeros_like(bad), "rx", label="non-converged points")
        notes.append(table.header)
        if logx is None:
            logx = _want_logx(spec, table.grid)
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel("spectral parameter")
    ax.set_ylabel("spectral function")
    ax.set_title(spec.title or "spectral function")
    ax.legend(fontsize=7)
    ax.grid(True, alpha=0.3)
    annotation = _provenance(fig, notes)
    fig.savefig(spec.out, dpi=130)
    plt.close(fig)
    return RenderResult(spec.out, [annotation])


def _matrix_heatmap(spec):
    doc = read_report(spec.inputs[0])
    matrix = doc.get("matrix")
    if not matrix:
        raise SchemaError(f"{spec.inputs[0]}: report has no matrix block "
                          "(expected output of `verify elliptic-diag`)")
    entries = np.array(matrix["entries_re"]) + 1j * np.array(matrix["entries_im"])
    if entries.size == 0:
        raise SchemaError(f"{spec.inputs[0]}: empty matrix")
    fig, (ax, ax2) = plt.subplots(
        1, 2, figsize=(8.6, 4.2), gridspec_kw={"width_ratios": [1.0, 1.0]})
    im = ax.imshow(np.abs(entries), cmap="viridis")
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_title(spec.title or f"|matrix entries|, N = {matrix['size']}")
    ax.set_xlabel("k")
    ax.set_ylabel("j")

    # residual subplot: off-diagonal magnitudes against entry index distance
    n = entries.shape[0]
    dist = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    off = dist > 0
    ax2.semilogy(dist[off].ravel(), np.maximum(np.abs(entries[off]).ravel(), 1e-20), ".",
                 markersize=3)
    ax2.set_xlabel("|j - k|")
    ax2.set_ylabel("|entry|")
    # the annotated residual comes straight from the report
    residual_note = f"max off-diagonal residual = {matrix['offdiag_max']:.3e} (from report)"
    ax2.set_title(residual_note, fontsize=8)
    ax2.grid(True, alpha=0.3)

    header = f"{doc.get('library')} v{doc.get('version')} case={doc.get('case')} lambda={doc.get('lambda')}"
    annotation = _provenance(fig, [header, residual_note])
    fig.savefig(spec.out, dpi=130)
    plt.close(fig)
    return RenderResult(spec.out, [residual_note, annotation])


def _modulus_decay(spec):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    notes = []
    for path in spec.inputs:
        doc = read_report(path)
        if "modulus" not in doc or "delta_grid" not in doc:
            raise SchemaError(f"{path}: report has no oscillation-modulus block")
        deltas = np.array(doc["delta_grid"], dtype=float)
        modulus = np.array([np.nan if m is None else m for m in doc["modulus"]], dtype=float)
        label = f"{doc.get('label') or path} [{doc.get('verdict')}]"
        ax.loglog(deltas, np.maximum(modulus, 1e-18), "o-", label=label)
        notes.append(f"{doc.get('library')} v{doc.get('version')} metric={doc.get('metric')} "
                     f"verdict={doc.get('verdict')}")
    ax.axhline(doc.get("threshold", 0.05), color="gray", linestyle=":", label="threshold")
    ax.set_xlabel("metric distance delta")
    ax.set_ylabel("oscillation modulus")
    ax.set_title(spec.title or "oscillation modulus decay")
    ax.legend(fontsize=7)
    ax.grid(True, which="both", alpha=0.3)
    annotation = _provenance(fig, notes)
    fig.savefig(spec.out, dpi=130)
    plt.close(fig)
    return RenderResult(spec.out, [annotation])


_RENDERERS = {
    "gamma-curve": _gamma_curve,
    "matrix-heatmap": _matrix_heatmap,
    "modulus-decay": _modulus_decay,
}


def render(spec: FigureSpec) -> RenderResult:
    """Render one figure; returns the output path and the annotation strings."""
    return _RENDERERS[spec.kind](spec)
