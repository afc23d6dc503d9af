"""Lattice discretisation of a cut body and the lazy Metropolis walk on it."""
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

MAX_GRID_CELLS = 10_000
MAX_GRID_DIM = 3


class GridTooLargeError(ValueError):
    pass


class EmptyGridError(ValueError):
    pass


class DisconnectedGridError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EpsilonGrid:
    """Points of the lattice (spacing * Z)^D that lie in a body, in lexicographic order."""

    spacing: float
    coords: np.ndarray  # integer lattice coordinates, shape (n, D)

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.int64)
        if c.shape[0] == 0:
            raise EmptyGridError("grid has no points")
        c = c.reshape(c.shape[0], -1)
        c.setflags(write=False)
        pts = c * float(self.spacing)
        pts.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_index", {tuple(row): i for i, row in enumerate(c.tolist())})

    @property
    def dim(self):
        return self.coords.shape[1]

    def __len__(self):
        return self.coords.shape[0]

    def index_of(self, coord):
        return self._index.get(tuple(int(v) for v in coord))

    def subset(self, mask):
        mask = np.asarray(mask, dtype=bool)
        if not mask.any():
            raise EmptyGridError("no grid point survives")
        return EpsilonGrid(self.spacing, self.coords[mask])


def lattice_in_ball(dim, spacing):
    """Integer coordinates k with |k * spacing| <= 1, lexicographically ordered."""
    if dim < 1 or dim > MAX_GRID_DIM:
        raise GridTooLargeError(f"grids are limited to 1 <= D <= {MAX_GRID_DIM}")
    if not spacing > 0:
        raise ValueError("spacing must be positive")
    if (2.0 / spacing) ** dim > MAX_GRID_CELLS:
        raise GridTooLargeError(f"(2/spacing)^D = {(2.0 / spacing) ** dim:.0f} exceeds {MAX_GRID_CELLS}")
    k = int(math.floor(1.0 / spacing + 1e-9))
    ticks = range(-k, k + 1)
    cube = np.array(list(itertools.product(ticks, repeat=dim)), dtype=np.int64)
    pts = cube * float(spacing)
    return cube[np.einsum("ij,ij->i", pts, pts) <= 1.0 + 1e-12]


def discretize(polytope, spacing):
    """All lattice points of the given spacing inside the body."""
    coords = lattice_in_ball(polytope.dim, spacing)
    inside = polytope.contains_many(coords * float(spacing))
    if not inside.any():
        raise EmptyGridError("the body contains no lattice point at this spacing")
    return EpsilonGrid(float(spacing), coords[inside])


@dataclass(frozen=True, eq=False)
class WalkKernel:
    grid: EpsilonGrid
    transition: np.ndarray
    components: int = 1
    _eig: list = field(default_factory=list, repr=False)

    @property
    def size(self):
        return self.transition.shape[0]

    def eigen(self):
        """Eigenvalues (ascending) and orthonormal eigenvectors of the symmetric transition matrix."""
        if not self._eig:
            self._eig.extend(np.linalg.eigh(self.transition))
        return self._eig[0], self._eig[1]

    def second_eigenvalue_modulus(self):
        vals = self.eigen()[0]
        if vals.size < 2:
            return 0.0
        mags = np.sort(np.abs(vals))
        return float(mags[-2])

    @property
    def spectral_gap(self):
        return 1.0 - self.second_eigenvalue_modulus()


def neighbour_graph(grid):
    """Index pairs (i, j) of lattice neighbours both inside the grid."""
    rows, cols = [], []
    for i, c in enumerate(grid.coords):
        for axis in range(grid.dim):
            for step in (-1, 1):
                nb = c.copy()
                nb[axis] += step
                j = grid.index_of(nb)
                if j is not None:
                    rows.append(i)
                    cols.append(j)
    return np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64)


def build_kernel(grid, laziness=0.5, require_connected=True):
    """Lazy nearest-neighbour Metropolis chain with uniform stationary distribution.

    With probability `laziness` stay; otherwise propose one of the 2D lattice neighbours
    uniformly and move only if it lies in the grid.
    """
    if not (0.0 <= laziness < 1.0):
        raise ValueError("laziness must lie in [0, 1)")
    n = len(grid)
    rows, cols = neighbour_graph(grid)
    move = (1.0 - laziness) / (2 * grid.dim)
    p = np.zeros((n, n))
    p[rows, cols] = move
    p[np.arange(n), np.arange(n)] = 1.0 - p.sum(axis=1)
    ncomp = 1
    if n > 1:
        adj = csr_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
        ncomp = connected_components(adj, directed=False)[0]
    if ncomp > 1 and require_connected:
        raise DisconnectedGridError(f"grid splits into {ncomp} lattice components")
    kernel = WalkKernel(grid, p, ncomp)
    if ncomp == 1 and n > 1 and kernel.second_eigenvalue_modulus() >= 1.0 - 1e-12:
        raise DisconnectedGridError("chain is periodic; use a positive laziness")
    return kernel
