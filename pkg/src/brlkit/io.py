"""JSON serialization of systems, certificates and reports.

Matrices are arrays of rows. An entry is a number, or a two-element list
``[re, im]`` when its imaginary part is not exactly ``+0.0``; this keeps
round trips bit-exact.
"""
import json
import math

import jsonschema
import numpy as np

from .exceptions import IoError, NonFiniteEntry, SchemaError
from .sysmat import SystemRealization

__all__ = ['encode_matrix', 'decode_matrix', 'system_to_dict', 'system_from_dict',
           'load_system', 'dump_system', 'load_json', 'certificate_to_dict',
           'certificate_from_dict', 'normbound_to_dict', 'similarity_to_dict',
           'minimality_to_dict', 'truncation_to_dict', 'trajectory_to_dict',
           'SCHEMAS', 'validate']


def _encode_entry(z):
    z = complex(z)
    if z.imag == 0 and not math.copysign(1.0, z.imag) < 0:
        return z.real
    return [z.real, z.imag]


def encode_matrix(M):
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[_encode_entry(z) for z in row] for row in M]


def _decode_entry(v, name):
    if isinstance(v, bool):
        raise SchemaError(f'field {name!r}: boolean is not a matrix entry')
    if isinstance(v, (int, float)):
        z = complex(float(v), 0.0)
    elif (isinstance(v, list) and len(v) == 2
          and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)):
        z = complex(float(v[0]), float(v[1]))
    else:
        raise SchemaError(f'field {name!r}: entry {v!r} is neither a number nor [re, im]')
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteEntry(f'field {name!r}: non-finite entry {v!r}')
    return z


def decode_matrix(rows, name, shape=None):
    """Parse an array of rows into a complex matrix, checking `shape` if given."""
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise SchemaError(f'field {name!r}: expected an array of rows')
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise SchemaError(f'field {name!r}: rows have different lengths {sorted(widths)}')
    ncols = widths.pop() if widths else (shape[1] if shape is not None else 0)
    if shape is not None and (len(rows), ncols) != tuple(shape):
        raise SchemaError(f'field {name!r}: shape {(len(rows), ncols)} but expected '
                          f'{tuple(shape)}')
    data = [[_decode_entry(v, name) for v in r] for r in rows]
    return np.array(data, dtype=complex).reshape(len(rows), ncols)


def system_to_dict(sys):
    return {'n_state': sys.n_state, 'n_in': sys.n_in, 'n_out': sys.n_out,
            'A': encode_matrix(sys.A), 'B': encode_matrix(sys.B),
            'C': encode_matrix(sys.C), 'D': encode_matrix(sys.D)}


def system_from_dict(obj):
    if not isinstance(obj, dict):
        raise SchemaError('system must be a JSON object')
    dims = {}
    for key in ('n_state', 'n_in', 'n_out'):
        v = obj.get(key)
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise SchemaError(f'field {key!r}: expected a nonnegative integer, got {v!r}')
        dims[key] = v
    n, m, p = dims['n_state'], dims['n_in'], dims['n_out']
    mats = {}
    for key, shape in (('A', (n, n)), ('B', (n, m)), ('C', (p, n)), ('D', (p, m))):
        if key not in obj:
            raise SchemaError(f'field {key!r} is missing')
        mats[key] = decode_matrix(obj[key], key, shape)
    return SystemRealization(mats['A'], mats['B'], mats['C'], mats['D'],
                             n_state=n, n_in=m, n_out=p)


def load_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f'{path}: {exc.strerror or exc}') from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f'{path}: invalid JSON at line {exc.lineno} column {exc.colno}: '
                          f'{exc.msg}') from None


def load_system(path):
    """Read a system file, validating dimensions and finiteness."""
    try:
        return system_from_dict(load_json(path))
    except SchemaError as exc:
        msg = str(exc)
        raise type(exc)(msg if msg.startswith(str(path)) else f'{path}: {msg}') from None


def dump_system(sys, path):
    with open(path, 'w') as fh:
        json.dump(system_to_dict(sys), fh, indent=1)


def certificate_to_dict(cert):
    return {'H': encode_matrix(cert.H),
            'mode': cert.mode, 'margin': float(cert.margin),
            'epsilon': None if cert.epsilon is None else float(cert.epsilon),
            'method': cert.method, 'iterations': int(cert.iterations)}


def certificate_from_dict(obj, n_state):
    from .kyp import KypCertificate
    H = decode_matrix(obj.get('H'), 'H', (n_state, n_state))
    try:
        return KypCertificate(H, obj['mode'], float(obj['margin']), obj['method'],
                              int(obj.get('iterations', 0)), obj.get('epsilon'))
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f'malformed certificate: {exc}') from None


def normbound_to_dict(nb):
    return {'lower': nb.lower, 'upper': nb.upper, 'samples': nb.samples,
            'certified': nb.certified}


def similarity_to_dict(sim):
    r = sim.residuals
    return {'gamma': encode_matrix(sim.gamma), 'gamma_left': encode_matrix(sim.gamma_left),
            'residuals': {'r_AX': r.r_AX, 'r_B': r.r_B, 'r_C': r.r_C, 'r_D': r.r_D,
                          'r_inv': r.r_inv},
            'valid': bool(sim.valid), 'tol': sim.tol}


def minimality_to_dict(rep):
    return {'controllable': rep.controllable, 'observable': rep.observable,
            'minimal': rep.minimal, 'reach_rank': rep.reach_rank, 'obs_rank': rep.obs_rank,
            'gramian_min_eigs': None if rep.gramian_min_eigs is None
            else list(rep.gramian_min_eigs)}


def truncation_to_dict(tr):
    return {'horizon': tr.horizon, 'Wc': encode_matrix(tr.Wc), 'Wo': encode_matrix(tr.Wo),
            'hankel': encode_matrix(tr.hankel)}


def trajectory_to_dict(traj):
    return {'inputs': encode_matrix(traj.inputs), 'states': encode_matrix(traj.states),
            'outputs': encode_matrix(traj.outputs)}


_entry = {'oneOf': [{'type': 'number'},
                    {'type': 'array', 'items': {'type': 'number'}, 'minItems': 2,
                     'maxItems': 2}]}
_matrix = {'type': 'array', 'items': {'type': 'array', 'items': _entry}}
_nonneg = {'type': 'integer', 'minimum': 0}

SCHEMAS = {
    'system': {'type': 'object',
               'required': ['n_state', 'n_in', 'n_out', 'A', 'B', 'C', 'D'],
               'properties': {'n_state': _nonneg, 'n_in': _nonneg, 'n_out': _nonneg,
                              'A': _matrix, 'B': _matrix, 'C': _matrix, 'D': _matrix}},
    'certificate': {'type': 'object',
                    'required': ['H', 'mode', 'margin', 'epsilon', 'method', 'iterations'],
                    'properties': {'H': _matrix,
                                   'mode': {'enum': ['standard', 'strict']},
                                   'margin': {'type': 'number'},
                                   'epsilon': {'type': ['number', 'null']},
                                   'method': {'enum': ['riccati_fixed_point',
                                                      'from_similarity', 'augmentation']},
                                   'iterations': _nonneg}},
    'normbound': {'type': 'object', 'required': ['lower', 'upper', 'samples', 'certified'],
                  'properties': {'lower': {'type': 'number'}, 'upper': {'type': 'number'},
                                 'samples': _nonneg, 'certified': {'type': 'boolean'}}},
    'similarity': {'type': 'object',
                   'required': ['gamma', 'gamma_left', 'residuals', 'valid'],
                   'properties': {'gamma': _matrix, 'gamma_left': _matrix,
                                  'residuals': {'type': 'object',
                                                'required': ['r_AX', 'r_B', 'r_C', 'r_D',
                                                             'r_inv'],
                                                'additionalProperties': {'type': 'number'}},
                                  'valid': {'type': 'boolean'}}},
    'minimality': {'type': 'object',
                   'required': ['controllable', 'observable', 'minimal', 'reach_rank',
                                'obs_rank', 'gramian_min_eigs'],
                   'properties': {'controllable': {'type': 'boolean'},
                                  'observable': {'type': 'boolean'},
                                  'minimal': {'type': 'boolean'},
                                  'reach_rank': _nonneg, 'obs_rank': _nonneg}},
    'truncation': {'type': 'object', 'required': ['horizon', 'Wc', 'Wo', 'hankel'],
                   'properties': {'horizon': {'type': 'integer', 'minimum': 1},
                                  'Wc': _matrix, 'Wo': _matrix, 'hankel': _matrix}},
    'trajectory': {'type': 'object', 'required': ['inputs', 'states', 'outputs'],
                   'properties': {'inputs': _matrix, 'states': _matrix,
                                  'outputs': _matrix}},
    'report': {'type': 'object',
               'required': ['command', 'inputs', 'result', 'diagnostics', 'elapsed_ms'],
               'properties': {'command': {'type': 'string'},
                              'inputs': {'type': 'array', 'items': {'type': 'string'}},
                              'diagnostics': {'type': 'array', 'items': {'type': 'string'}},
                              'elapsed_ms': _nonneg}},
}


def validate(kind, obj):
    """Validate `obj` against ``SCHEMAS[kind]``; raises ``SchemaError``."""
    try:
        jsonschema.validate(obj, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        where = '/'.join(str(p) for p in exc.absolute_path) or '<root>'
        raise SchemaError(f'{kind} schema violation at {where}: {exc.message}') from None
    return obj
