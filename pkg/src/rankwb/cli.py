"""
Command line interface: ``rankwb [global flags] <subcommand> [options]``.

Every invocation prints exactly one JSON document on standard output (logs go
to standard error). The exit code only depends on verdicts: ``0`` for
successful or certified results, ``1`` for a failed certificate and ``2`` for
input errors, an exceeded size budget or an unknown subcommand.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from .amplify import (boost_separation, tensor_elimination_witness,
                      tensor_square_iterate, weighted_combine)
from .certify import (align_basis, defect_report, group_algebra_apply,
                      pairwise_distances)
from .constructions import (amenable_extension_rep, cyclic_group_table,
                            folner_left_mult_rep, lupini_witnesses,
                            maximal_count, regular_rep, supported_elements)
from .demo import run_demo
from .errors import CertificationError, InputError, WorkbenchError
from .io import dumps
from .jordan import (algebraic_multiplicity, block_count_ratio,
                     jordan_profile_at, verify_jordan_tensor)
from .reduce import reduce_mod_p, select_good_prime
from .workspace import Workspace

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('certify', 'align', 'amplify', 'combine', 'reduce', 'jordan',
               'witness', 'extend', 'regular', 'demo')


class _Parser(argparse.ArgumentParser):
    """Argument parser that raises instead of printing usage and exiting."""

    def error(self, message):
        raise InputError('rankwb: %s' % message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError('"%s" is not a rational number'
                                         % text) from None


def _verdict(ok: bool) -> int:
    return 0 if ok else 1


# ----------------------------------------------------------------------------
# Subcommands. Each returns ``(exit code, report)``.
# ----------------------------------------------------------------------------

def cmd_certify(ws: Workspace, args):
    if (args.rep is None) == (args.patch is None):
        raise InputError('certify: give exactly one of --rep and --patch')
    if args.patch is not None:
        patch, window, action = ws.load_patch(args.patch)
        if window is None or action is None:
            raise InputError('certify: patch %s carries no Følner window and '
                             'action' % args.patch)
        epsilon = Fraction(1, 4) if args.epsilon is None else args.epsilon
        _, report = folner_left_mult_rep(patch, window, action, epsilon)
        doc = report.to_json()
        doc['epsilon'] = str(epsilon)
        return _verdict(report.check.verdict), doc

    rep = ws.load_rep(args.rep)
    report = defect_report(rep)
    doc = report.to_json()
    doc['distances'] = pairwise_distances(rep).to_json()
    verdict = report.quarter_certified
    if args.epsilon is not None:
        verdict = verdict and report.max_defect < args.epsilon
        doc['epsilon'] = str(args.epsilon)
    doc['verdict'] = verdict
    return _verdict(verdict), doc


def cmd_align(ws: Workspace, args):
    rep = ws.load_rep(args.rep)
    result = align_basis(rep, args.epsilon)
    doc = result.to_json()
    doc['defect'] = defect_report(result.rep).to_json()
    return 0, doc


def cmd_amplify(ws: Workspace, args):
    if (args.rep is None) == (args.matrix is None):
        raise InputError('amplify: give exactly one of --rep and --matrix')
    if args.matrix is not None:
        A = ws.load_matrix(args.matrix, args.name)
        trace = tensor_square_iterate(A, args.level, args.bound_constant,
                                      ws.budget)
        return _verdict(trace.holds), trace.to_json()
    rep = ws.load_rep(args.rep)
    _, report = boost_separation(rep, args.level, args.bound_constant,
                                 ws.budget)
    return _verdict(report.holds), report.to_json()


def _terms(pairs):
    if not pairs:
        raise InputError('combine: give at least one --term LABEL COEFF')
    f = {}
    for label, coeff in pairs:
        if label in f:
            raise InputError('combine: label "%s" appears twice' % label)
        f[label] = coeff
    return f


def cmd_combine(ws: Workspace, args):
    rep = ws.load_rep(args.rep)
    f = _terms(args.term)
    if args.eliminate:
        witness = tensor_elimination_witness(list(f.values()),
                                             [rep[g] for g in f], ws.budget)
        return _verdict(witness.holds), witness.to_json()
    if args.depth < 1:
        raise InputError('combine: depth must be at least 1')
    thetas = [group_algebra_apply(rep, f, i, ws.budget)
              for i in range(1, args.depth + 1)]
    # Trailing scalar block defaults to the augmentation Σ f(g)
    field = rep.field
    epsilon = args.epsilon_value
    if epsilon is None:
        epsilon = field.zero
        for c in f.values():
            epsilon = epsilon + field(c)
    report = weighted_combine(thetas, epsilon, ws.budget)
    doc = report.to_json()
    doc['epsilon'] = field.format(field(epsilon))
    return _verdict(report.holds), doc


def cmd_reduce(ws: Workspace, args):
    rep = ws.load_rep(args.rep)
    doc = {}
    p = args.prime
    if p is None:
        selection = select_good_prime(rep, args.start)
        doc['selection'] = selection.to_json()
        p = selection.p
    _, cert = reduce_mod_p(rep, p)
    doc['certificate'] = cert.to_json()
    return _verdict(cert.valid), doc


def cmd_jordan(ws: Workspace, args):
    if args.tensor is not None:
        s, t = args.tensor
        check = verify_jordan_tensor(args.alpha, s, args.beta, t, ws.field)
        return _verdict(check.verdict), check.to_json()
    if args.matrix is None:
        raise InputError('jordan: give --matrix or --tensor S T')
    A = ws.load_matrix(args.matrix, args.name)
    profile = jordan_profile_at(A, args.lam)
    doc = profile.to_json()
    doc['algebraic_multiplicity'] = str(algebraic_multiplicity(A, profile.eigenvalue))
    doc['block_ratio'] = str(block_count_ratio(A, profile.eigenvalue))
    return 0, doc


def cmd_witness(ws: Workspace, args):
    count = maximal_count(args.n) if args.l is None else args.l
    _, table = lupini_witnesses(args.n, count, ws.field,
                                rank_check=not args.no_rank_check)
    return _verdict(table.holds), table.to_json()


def cmd_extend(ws: Workspace, args):
    data = ws.load_extension(args.data)
    F = args.folner
    E = args.elements or supported_elements(data, F)
    _, report = amenable_extension_rep(data, E, F)
    return _verdict(report.holds), report.to_json()


def cmd_regular(ws: Workspace, args):
    if (args.table is None) == (args.cyclic is None):
        raise InputError('regular: give exactly one of --table and --cyclic')
    if args.table is not None:
        table = ws.load_table(args.table)
    else:
        table = cyclic_group_table(args.cyclic)
    rep = regular_rep(table, ws.field)
    report = defect_report(rep)
    return 0, {'rep': rep.to_json(), 'defect': report.to_json()}


def cmd_demo(ws: Workspace, args):
    doc = run_demo(ws.budget, ws.field)
    return _verdict(doc['passed']), doc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='rankwb', description='Exact rank metric workbench')
    parser.add_argument('--budget', type=int, default=None,
                        help='largest matrix size any construction may build '
                             '(overrides RANKWB_BUDGET)')
    parser.add_argument('--field', default=None,
                        help='field for documents that do not name one: Q, '
                             'Fp:<p> or NF:<c0>,<c1>,...')
    parser.add_argument('--output', default=None,
                        help='also write the JSON report to this path')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)

    p = sub.add_parser('certify', help='defect and separation of a rep, or '
                                       'Følner check of an algebra patch')
    p.add_argument('--rep')
    p.add_argument('--patch')
    p.add_argument('--epsilon', type=_fraction)

    p = sub.add_parser('align', help='conjugate onto the common kernel of the '
                                     'defect matrices')
    p.add_argument('--rep', required=True)
    p.add_argument('--epsilon', type=_fraction, required=True)

    p = sub.add_parser('amplify', help='tensor square iterates or separation '
                                       'boost')
    p.add_argument('--matrix')
    p.add_argument('--name', help='matrix name inside a multi-matrix file')
    p.add_argument('--rep')
    p.add_argument('--level', type=int, default=2)
    p.add_argument('--bound-constant', type=_fraction, default=None)

    p = sub.add_parser('combine', help='weighted block sum of tensor levels '
                                       'or elimination witness')
    p.add_argument('--rep', required=True)
    p.add_argument('--term', nargs=2, action='append',
                   metavar=('LABEL', 'COEFF'))
    p.add_argument('--depth', type=int, default=2)
    p.add_argument('--epsilon-value', default=None)
    p.add_argument('--eliminate', action='store_true')

    p = sub.add_parser('reduce', help='reduce a rational rep modulo a prime')
    p.add_argument('--rep', required=True)
    p.add_argument('--prime', type=int)
    p.add_argument('--start', type=int, default=2)

    p = sub.add_parser('jordan', help='Jordan profile or tensor block check')
    p.add_argument('--matrix')
    p.add_argument('--name')
    p.add_argument('--lambda', dest='lam', default='1')
    p.add_argument('--tensor', nargs=2, type=int, metavar=('S', 'T'))
    p.add_argument('--alpha', default='1')
    p.add_argument('--beta', default='1')

    p = sub.add_parser('witness', help='commutator witnesses in GL_n')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--l', type=int)
    p.add_argument('--no-rank-check', action='store_true')

    p = sub.add_parser('extend', help='induced rep of an extension with '
                                      'finite quotient')
    p.add_argument('--data', required=True)
    p.add_argument('--elements', nargs='+')
    p.add_argument('--folner', nargs='+')

    p = sub.add_parser('regular', help='regular representation of a finite '
                                       'group')
    p.add_argument('--table')
    p.add_argument('--cyclic', type=int)

    sub.add_parser('demo', help='run the bundled corpus end to end')
    return parser


COMMANDS = {name: globals()['cmd_' + name] for name in SUBCOMMANDS}


def _error(exc) -> dict:
    doc = {'error': {'type': type(exc).__name__, 'message': str(exc)}}
    report = getattr(exc, 'report', None)
    if report is not None:
        doc['report'] = report.to_json()
    return doc


def execute(argv=None):
    """
    Parse ``argv`` and run the subcommand. Returns the exit code, the report
    and the workspace (``None`` when the run failed before creating one).
    """
    ws = None
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise InputError('rankwb: missing subcommand (one of %s)'
                             % ', '.join(SUBCOMMANDS))
        level = logging.WARNING - 10 * args.verbose
        logging.getLogger('rankwb').setLevel(max(level, logging.DEBUG))
        ws = Workspace(args.budget, args.field, args.output)
        code, doc = COMMANDS[args.command](ws, args)
    except CertificationError as e:
        code, doc = 1, _error(e)
    except WorkbenchError as e:
        code, doc = 2, _error(e)
    return code, doc, ws


def run(argv=None) -> int:
    code, doc, ws = execute(argv)
    text = ws.emit(doc) if ws is not None else dumps(doc)
    sys.stdout.write(text + '\n')
    return code


def _main():
    if not logging.getLogger().handlers:
        logging.basicConfig(stream=sys.stderr,
                            format='%(levelname)s %(name)s: %(message)s')
    sys.exit(run())


if __name__ == '__main__':
    _main()
