"""
Graph persistence.

1. Line-oriented text format
       p rhg <num_vertices> <num_edges> <alpha> <nu> <R> <seed>
       v <id> <r> <theta>          one line per vertex, ids ascending
       e <u> <v>                   one line per edge, u < v, lexicographic
   Reals are written with 17 significant digits so a read-back graph has
   bit-identical coordinates. The expected size n is recovered as nu e^{R/2}.

2. HDF5 store: datasets r, theta, indptr, indices; model parameters and run
   metadata (host, creation time, library versions) as file attributes.

Called by:
- app.py: `generate` writes, `components` reads
"""
import logging

import h5py
import numpy as np

from model.geometry import ModelParams
from model.sampler import PointSet
from utils.errors import RecordIOError
from utils.system_info import run_metadata
from .hyp_graph import HypGraph

logger = logging.getLogger(__name__)

HEADER_TAG = 'rhg'


def write_graph_text(g, path):
    """Write g in the text format."""
    params = g.points.params
    edges = g.edges()
    try:
        with open(path, 'w') as file:
            file.write(f"p {HEADER_TAG} {g.vertex_count} {g.edge_count} "
                       f"{params.alpha:.17g} {params.nu:.17g} {params.R:.17g} {params.seed}\n")
            for v in range(g.vertex_count):
                file.write(f"v {v} {g.points.r[v]:.17g} {g.points.theta[v]:.17g}\n")
            for u, v in edges:
                file.write(f"e {u} {v}\n")
    except OSError as e:
        raise RecordIOError(path, f"cannot write graph: {e}") from e
    logger.info("write_graph_text(): %d vertices, %d edges written to %s", g.vertex_count, g.edge_count, path)


def read_graph_text(path):
    """Read a graph written by write_graph_text."""
    try:
        with open(path, 'r') as file:
            lines = file.read().split('\n')
    except OSError as e:
        raise RecordIOError(path, f"cannot read graph: {e}") from e

    header = lines[0].split() if lines else []
    if len(header) != 8 or header[0] != 'p' or header[1] != HEADER_TAG:
        raise RecordIOError(path, "missing 'p rhg' header line")
    vertices, edges = int(header[2]), int(header[3])
    alpha, nu, R, seed = float(header[4]), float(header[5]), float(header[6]), int(header[7])
    params = ModelParams.from_radius(alpha, nu, R, seed)

    r = np.empty(vertices)
    theta = np.empty(vertices)
    seen = np.zeros(vertices, dtype=bool)
    u, v = [], []
    for number, line in enumerate(lines[1:], start=2):
        fields = line.split()
        if not fields:
            continue
        try:
            if fields[0] == 'v':
                vid = int(fields[1])
                r[vid], theta[vid] = float(fields[2]), float(fields[3])
                seen[vid] = True
            elif fields[0] == 'e':
                u.append(int(fields[1]))
                v.append(int(fields[2]))
            else:
                raise ValueError(f"unknown record type '{fields[0]}'")
        except (ValueError, IndexError) as e:
            raise RecordIOError(path, f"line {number}: {e}") from e
    if not seen.all():
        raise RecordIOError(path, f"header announces {vertices} vertices, found {int(seen.sum())}")
    if len(u) != edges:
        raise RecordIOError(path, f"header announces {edges} edges, found {len(u)}")
    return HypGraph.from_edges(PointSet(params, r, theta), u, v)


def write_graph_h5(g, path, metadata=None):
    """Write g to an HDF5 file."""
    params = g.points.params
    try:
        with h5py.File(path, 'w') as file:
            file.create_dataset('r', data=g.points.r)
            file.create_dataset('theta', data=g.points.theta)
            file.create_dataset('indptr', data=g.indptr)
            file.create_dataset('indices', data=g.indices)
            file.attrs.update(params.as_dict())
            file.attrs.update(run_metadata())
            if metadata:
                file.attrs.update(metadata)
    except OSError as e:
        raise RecordIOError(path, f"cannot write graph: {e}") from e
    logger.info("write_graph_h5(): %d vertices, %d edges written to %s", g.vertex_count, g.edge_count, path)


def read_graph_h5(path):
    """Read a graph written by write_graph_h5."""
    try:
        with h5py.File(path, 'r') as file:
            attrs = dict(file.attrs)
            r = file['r'][()]
            theta = file['theta'][()]
            indptr = file['indptr'][()]
            indices = file['indices'][()]
    except (OSError, KeyError) as e:
        raise RecordIOError(path, f"cannot read graph: {e}") from e
    params = ModelParams.from_radius(float(attrs['alpha']), float(attrs['nu']),
                                     float(attrs['R']), int(attrs['seed']))
    return HypGraph(PointSet(params, r, theta), indptr, indices)


def read_graph(path):
    """Read either format, chosen by file suffix (.h5/.hdf5 or text)."""
    if str(path).endswith(('.h5', '.hdf5')):
        return read_graph_h5(path)
    return read_graph_text(path)
