"""Matplotlib renderings of complexes, corner loci, measures and densities.

Figures are written straight to files (Agg backend); only one- and
two-dimensional scenes are drawn.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .monge_ampere import corner_locus, ma_measure, _lse_weights

RAY_EXTENT = 2.5


def _as_xy(point, ambient_dim):
    x = float(point[0])
    y = float(point[1]) if ambient_dim > 1 else 0.0
    return x, y


def plot_complex(ax, complex_, weights=None, color="tab:blue"):
    """Draw the maximal cells of a 1d/2d complex, weight-labelled."""
    n = complex_.ambient_dim
    for i in complex_.maximal_cells:
        cell = complex_.cells[i]
        pts = [_as_xy(v, n) for v in cell.vertices]
        if cell.dim == 0:
            ax.plot(*pts[0], "o", color=color)
        elif cell.dim == 1:
            if len(pts) == 2:
                xs, ys = zip(*pts)
            else:
                base = pts[0]
                ray = _as_xy(cell.rays[0], n)
                xs = (base[0], base[0] + RAY_EXTENT * ray[0])
                ys = (base[1], base[1] + RAY_EXTENT * ray[1])
            ax.plot(xs, ys, "-", color=color, lw=2)
        else:
            xs, ys = zip(*pts)
            ax.fill(xs, ys, alpha=0.25, color=color)
        if weights is not None and i in weights:
            cx, cy = _as_xy(cell.relative_interior_point(), n)
            if cell.rays:
                bx, by = _as_xy(cell.vertices[0], n)
                rx, ry = _as_xy(cell.rays[0], n)
                cx, cy = bx + 0.6 * RAY_EXTENT * rx, by + 0.6 * RAY_EXTENT * ry
            ax.annotate(str(weights[i]), (cx, cy), fontsize=9,
                        ha="center", va="bottom")
    ax.set_aspect("equal", adjustable="datalim")
    ax.autoscale_view()


def plot_measure(ax, measure, ambient_dim, color="tab:red"):
    if not measure.atoms:
        return
    masses = [float(m) for _, m in measure.atoms]
    scale = 180.0 / max(masses)
    for (p, m) in measure.atoms:
        x, y = _as_xy(p, ambient_dim)
        ax.scatter([x], [y], s=max(20.0, scale * float(m)), color=color,
                   zorder=5)
        ax.annotate(str(m), (x, y), textcoords="offset points",
                    xytext=(6, 6), fontsize=9, color=color)


def plot_density(ax, poly, eps, box, grid=160):
    n = poly.ambient_dim
    lo = [min(float(v[i]) for v in box.vertices) for i in range(n)]
    hi = [max(float(v[i]) for v in box.vertices) for i in range(n)]
    if n == 1:
        xs = np.linspace(lo[0], hi[0], grid)
        pts = xs.reshape(-1, 1)
        w, exps = _lse_weights(poly, eps, pts)
        g = w @ exps
        second = np.einsum("pi,ij,ik->pjk", w, exps, exps)
        dens = ((second - np.einsum("pj,pk->pjk", g, g)) / eps)[:, 0, 0]
        ax.plot(xs, dens, "-", color="tab:purple")
        return
    xs = np.linspace(lo[0], hi[0], grid)
    ys = np.linspace(lo[1], hi[1], grid)
    mx, my = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([mx.reshape(-1), my.reshape(-1)], axis=-1)
    w, exps = _lse_weights(poly, eps, pts)
    g = w @ exps
    second = np.einsum("pi,ij,ik->pjk", w, exps, exps)
    hess = (second - np.einsum("pj,pk->pjk", g, g)) / eps
    dens = 2.0 * np.linalg.det(hess)
    ax.imshow(dens.reshape(grid, grid).T, origin="lower",
              extent=(lo[0], hi[0], lo[1], hi[1]), cmap="magma")


def render_report(command, scene, report, path, options=None):
    """Render the figure matching a CLI report and save it to ``path``."""
    opts = dict(options or {})
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.set_title(command)
    drew = False
    if scene.ambient_dim > 2:
        ax.text(0.5, 0.5, "no rendering above two dimensions",
                ha="center", va="center", transform=ax.transAxes)
        fig.savefig(path, dpi=150)
        plt.close(fig)
        return

    if command in ("integrate", "integrate-boundary", "check-stokes",
                   "check-green", "balance") and scene.complex is not None:
        weights = scene.weighted.weights if scene.weighted else None
        plot_complex(ax, scene.complex, weights)
        drew = True
    elif command in ("ma", "mixed-ma", "corner-locus"):
        names = opts.get("polys") or [opts.get("poly")]
        polys = [scene.polynomials[n] for n in names if n in scene.polynomials]
        for poly in polys:
            surface = corner_locus(poly)
            if surface.complex.cells:
                plot_complex(ax, surface.complex, surface.weighted.weights,
                             color="tab:green")
        if command != "corner-locus" and len(polys) == 1:
            plot_measure(ax, ma_measure(polys[0]), scene.ambient_dim)
        drew = True
    elif command == "smooth-ma":
        poly = scene.polynomials[opts.get("poly")]
        box = scene.named_cells[opts.get("box") or scene.parameters.get("box")]
        eps = float(opts.get("eps") or scene.parameters.get("eps", 0.05))
        plot_density(ax, poly, eps, box)
        drew = True

    if not drew:
        ax.text(0.5, 0.5, "nothing to draw for %r" % command,
                ha="center", va="center", transform=ax.transAxes)
    fig.savefig(path, dpi=150)
    plt.close(fig)
