"""Command-line front end: ``brlkit <command> [files] [--json] [--tol T]``.

Exit codes: 0 success, 1 the checked property fails, 2 usage error,
3 numerical failure.
"""
import argparse
import json
import sys as _sys
import time

import numpy as np

from . import config
from .exceptions import (BrlkitError, InfeasibleScaling, NumericalFailure, PropertyFailure,
                         UsageError)
from .hinf import classify_schur, hinf_certified, sample_norm
from .io import (certificate_from_dict, certificate_to_dict, decode_matrix,
                 encode_matrix, load_json, load_system, minimality_to_dict,
                 normbound_to_dict, similarity_to_dict, system_to_dict,
                 trajectory_to_dict, truncation_to_dict)
from .kyp import kyp_slack, min_eig, riccati_solve, strict_solve
from .operators import (classify_minimality, divergence_probe, kalman_minimal,
                        reverse_blocks, shift_probe, truncate_operators)
from .similarity import compute_similarity
from .sysmat import (eval_transfer, markov_coefficients, simulate, spectral_radius)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _Outcome:
    def __init__(self, result, ok=True, diagnostics=()):
        self.result = result
        self.ok = ok
        self.diagnostics = list(diagnostics)


def _tol(args, default):
    if args.tol is not None:
        return args.tol
    env = config.from_env()
    return env.rel if env is not config.DEFAULTS else default


def _cmd_eval(args):
    sys = load_system(args.system)
    samples = []
    for z in args.z:
        s = eval_transfer(sys, complex(z.replace(' ', '')))
        samples.append({'z': [s.z.real, s.z.imag], 'value': encode_matrix(s.value),
                        'condition': s.condition})
    return _Outcome({'samples': samples, 'check': 'transfer function D + zC(I-zA)^-1 B'})


def _cmd_moments(args):
    sys = load_system(args.system)
    coeffs = markov_coefficients(sys, args.count)
    return _Outcome({'moments': [encode_matrix(F) for F in coeffs],
                     'check': 'Markov coefficients D, CB, CAB, ...'})


def _cmd_simulate(args):
    sys = load_system(args.system)
    data = load_json(args.inputs)
    if not isinstance(data, dict) or 'inputs' not in data:
        raise UsageError(f'{args.inputs}: expected an object with "inputs" (and optional "x0")')
    U = decode_matrix(data['inputs'], 'inputs', (len(data['inputs']), sys.n_in))
    x0 = data.get('x0', [0.0] * sys.n_state)
    x0 = decode_matrix([x0], 'x0', (1, sys.n_state))[0]
    return _Outcome({'trajectory': trajectory_to_dict(simulate(sys, x0, U))})


def _cmd_minimal(args):
    sys = load_system(args.system)
    tol = _tol(args, config.DEFAULTS.rank)
    red = kalman_minimal(sys, tol)
    return _Outcome({'system': system_to_dict(red), 'removed_states': sys.n_state - red.n_state,
                     'check': 'Kalman compression to reachable then observable subspace'})


def _cmd_classify(args):
    sys = load_system(args.system)
    tol = _tol(args, config.DEFAULTS.rank)
    rep = classify_minimality(sys, tol)
    schur = classify_schur(sys)
    diags = [] if rep.minimal else [
        f'not minimal: reach rank {rep.reach_rank}, obs rank {rep.obs_rank}, '
        f'n_state {sys.n_state}']
    return _Outcome({'minimality': minimality_to_dict(rep), 'schur_class': schur.value,
                     'spectral_radius': spectral_radius(sys.A)}, rep.minimal, diags)


def _cmd_hankel(args):
    sys = load_system(args.system)
    tr = truncate_operators(sys, args.n)
    fact = tr.Wo @ reverse_blocks(tr.Wc, sys.n_in)
    scale = np.linalg.norm(tr.hankel) or 1.0
    return _Outcome({'truncation': truncation_to_dict(tr),
                     'factorization_residual': float(np.linalg.norm(tr.hankel - fact) / scale),
                     'check': 'hankel = Wo Wc'})


def _cmd_similarity(args):
    a, b = load_system(args.first), load_system(args.second)
    if args.reduce:
        a, b = kalman_minimal(a), kalman_minimal(b)
    tol = _tol(args, 1e-8)
    sim = compute_similarity(a, b, tol, horizon=args.horizon)
    diags = [] if sim.valid else [f'largest residual {sim.residuals.max():.3g} exceeds {tol:g}']
    return _Outcome({'similarity': similarity_to_dict(sim),
                     'check': 'Gamma = Wc2 pinv(Wc1), intertwining residuals'},
                    sim.valid, diags)


def _load_H(path, n):
    obj = load_json(path)
    if isinstance(obj, dict):
        return certificate_from_dict(obj, n).H
    return decode_matrix(obj, 'H', (n, n))


def _cmd_kyp_check(args):
    sys = load_system(args.system)
    tol = _tol(args, config.DEFAULTS.rel)
    H = _load_H(args.H, sys.n_state)
    margin = min_eig(kyp_slack(sys, H))
    holds = margin > tol if args.strict else margin >= -tol
    diags = [] if holds else [f'KYP slack has smallest eigenvalue {margin:.6g}']
    return _Outcome({'margin': margin, 'holds': bool(holds),
                     'mode': 'strict' if args.strict else 'standard',
                     'check': 'diag(H, I) - M* diag(H, I) M >= 0'}, holds, diags)


def _certified_gate(sys, args):
    # optional stricter gate: the certified upper bound, not the sampled norm, must be below one
    if not args.certify:
        return []
    nb = hinf_certified(sys, 1e-6)
    if nb.upper >= 1:
        raise InfeasibleScaling(f'certified norm bound {nb.upper:.9g} is not below 1')
    return [f'certified norm bound {nb.upper:.9g} < 1']


def _cmd_kyp_solve(args):
    sys = load_system(args.system)
    gate = _certified_gate(sys, args)
    tol = args.tol if args.tol is not None else config.DEFAULTS.riccati
    cert = riccati_solve(sys, tol, args.max_iter, method=args.method)
    return _Outcome({'certificate': certificate_to_dict(cert),
                     'check': 'Riccati fixed point from H = 0'}, True, gate)


def _cmd_kyp_strict(args):
    sys = load_system(args.system)
    gate = _certified_gate(sys, args)
    tol = _tol(args, config.DEFAULTS.rel)
    cert = strict_solve(sys, tol, max_iter=args.max_iter)
    return _Outcome({'certificate': certificate_to_dict(cert),
                     'check': 'Riccati solution of the epsilon-augmented system'}, True, gate)


def _cmd_hinf(args):
    sys = load_system(args.system)
    rho = spectral_radius(sys.A)
    if rho >= 1:
        return _Outcome({'spectral_radius': rho, 'schur_class': 'unstable'}, False,
                        [f'spectral radius {rho:.6g} ≥ 1'])
    result = {'spectral_radius': rho, 'sampled_norm': sample_norm(sys, args.samples)}
    if args.certify:
        result['bound'] = normbound_to_dict(hinf_certified(sys, _tol(args, 1e-6), args.samples))
    return _Outcome(result)


def _cmd_probe(args):
    if args.kind == 'shift':
        sys = shift_probe(args.n)
        Wc = reverse_blocks(truncate_operators(sys, args.n).Wc, 1)
        ok = bool(np.array_equal(Wc, np.eye(args.n)))
        return _Outcome({'kind': 'shift', 'n': args.n, 'wc_is_identity': ok,
                         'controllable': classify_minimality(sys).controllable}, ok)
    norms = [divergence_probe(k) for k in range(1, args.n + 1)]
    ratio = norms[-1] / norms[-2] if len(norms) > 1 else None
    return _Outcome({'kind': 'divergence', 'n': args.n, 'norm': norms[-1], 'ratio': ratio,
                     'check': '||Wo_N|| for A = [2] grows like 2^(N-1)'})


def build_parser():
    p = argparse.ArgumentParser(prog='brlkit', description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='machine-readable report')
    common.add_argument('--tol', type=float, default=None,
                        help='tolerance (default: per command, or $BRLKIT_TOL)')
    sub = p.add_subparsers(dest='command', required=True)

    def add(name, func, help_, *files):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        for f in files:
            sp.add_argument(f)
        sp.set_defaults(func=func)
        return sp

    sp = add('eval', _cmd_eval, 'evaluate the transfer function', 'system')
    sp.add_argument('--z', action='append', required=True, help='complex point, e.g. 0.3+0.1j')
    sp = add('moments', _cmd_moments, 'Markov coefficients', 'system')
    sp.add_argument('--count', type=int, default=10, help='number of coefficients (default 10)')
    sp = add('simulate', _cmd_simulate, 'run the state recursion', 'system')
    sp.add_argument('--inputs', required=True, help='JSON file {"inputs": rows, "x0": row}')
    add('minimal', _cmd_minimal, 'Kalman minimal realization (tol default 1e-9)', 'system')
    add('classify', _cmd_classify, 'minimality and Schur class (tol default 1e-9)', 'system')
    sp = add('hankel', _cmd_hankel, 'truncated Wc, Wo and Hankel block', 'system')
    sp.add_argument('--n', type=int, default=4, help='horizon (default 4)')
    sp = add('similarity', _cmd_similarity, 'similarity between two minimal realizations '
             '(tol default 1e-8)', 'first', 'second')
    sp.add_argument('--reduce', action='store_true', help='run Kalman reduction first')
    sp.add_argument('--horizon', type=int, default=None)
    sp = add('kyp-check', _cmd_kyp_check, 'check the KYP inequality for a given H '
             '(tol default 1e-9)', 'system')
    sp.add_argument('--H', required=True, help='certificate JSON or a matrix')
    sp.add_argument('--strict', action='store_true')
    sp = add('kyp-solve', _cmd_kyp_solve, 'Riccati solution (tol default 1e-14)', 'system')
    sp.add_argument('--max-iter', type=int, default=config.DEFAULTS.max_iter)
    sp.add_argument('--method', choices=['fixed_point', 'doubling'], default='fixed_point')
    sp.add_argument('--certify', action='store_true',
                    help='gate on the certified norm bound instead of circle sampling')
    sp = add('kyp-strict', _cmd_kyp_strict, 'strict KYP solution (tol default 1e-9)', 'system')
    sp.add_argument('--max-iter', type=int, default=config.DEFAULTS.max_iter)
    sp.add_argument('--certify', action='store_true',
                    help='gate on the certified norm bound instead of circle sampling')
    sp = add('hinf', _cmd_hinf, 'supremum norm on the disk (tol default 1e-6)', 'system')
    sp.add_argument('--samples', type=int, default=config.DEFAULTS.n_samples)
    sp.add_argument('--certify', action='store_true', help='Riccati-certified bisection')
    sp = add('probe', _cmd_probe, 'finite truncations of the shift / divergent examples')
    sp.add_argument('kind', choices=['shift', 'divergence'])
    sp.add_argument('--n', type=int, default=8)
    return p


def _inputs(args):
    return [str(getattr(args, k)) for k in ('system', 'first', 'second', 'inputs', 'H')
            if getattr(args, k, None) is not None]


def _to_jsonable(x):
    if isinstance(x, dict):
        return {k: _to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_to_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, float) and not np.isfinite(x):
        return str(x)
    return x


def _emit(report, as_json, out):
    if as_json:
        out.write(json.dumps(_to_jsonable(report), sort_keys=True) + '\n')
        return
    out.write(f"{report['command']}: {'ok' if report['ok'] else 'FAILED'}\n")
    for key, value in report['result'].items():
        out.write(f'  {key}: {json.dumps(_to_jsonable(value))}\n')


def run(argv=None, out=None, err=None):
    """Parse `argv`, run the command, print the report; returns the exit code."""
    out = out or _sys.stdout
    err = err or _sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    start = time.perf_counter()
    code = EXIT_OK
    try:
        outcome = args.func(args)
        if not outcome.ok:
            code = EXIT_FAIL
    except PropertyFailure as exc:
        outcome, code = _Outcome(None, False, [f'{type(exc).__name__}: {exc}']), EXIT_FAIL
    except UsageError as exc:
        outcome, code = _Outcome(None, False, [f'{type(exc).__name__}: {exc}']), EXIT_USAGE
    except (NumericalFailure, np.linalg.LinAlgError) as exc:
        outcome, code = _Outcome(None, False, [f'{type(exc).__name__}: {exc}']), EXIT_NUMERIC
    except BrlkitError as exc:
        outcome, code = _Outcome(None, False, [f'{type(exc).__name__}: {exc}']), EXIT_NUMERIC
    report = {'command': args.command, 'inputs': _inputs(args), 'result': outcome.result,
              'diagnostics': outcome.diagnostics, 'ok': code == EXIT_OK,
              'elapsed_ms': int(round(1000 * (time.perf_counter() - start)))}
    if outcome.result is not None or args.json:
        _emit(report, args.json, out)
    for line in outcome.diagnostics:
        err.write(line + '\n')
    return code


def main():
    _sys.exit(run())


if __name__ == '__main__':
    main()
