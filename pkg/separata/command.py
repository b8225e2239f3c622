# -*- coding: utf-8 -*-

import argparse
import json
import os
import sys

from .exceptions import SeparataException
from .formula import parse
from .axioms import (builtin_system, custom_system, load_axioms,
                     synthesize_rule, to_subst_rules, render_rule)
from .prover import Prover, Budget
from .hilbert import GenParams, gen_suite
from . import bench, cache, filters, semantics, utils

import logging
log = logging.getLogger('separata')

EXIT_PROVED = 0
EXIT_REFUTED = 10
EXIT_UNKNOWN = 20
EXIT_USAGE = 2


def _system(args):
    if getattr(args, 'axioms', None):
        return custom_system(load_axioms(args.axioms),
                             name=os.path.basename(args.axioms))
    return builtin_system(args.system)


def _formula(args):
    if args.formula is not None:
        return parse(args.formula)
    if args.file is not None:
        lines = [l.strip() for l in args.file if l.strip()]
        if not lines:
            raise SeparataException('%s holds no formula' % args.file.name)
        return parse(lines[0])
    raise SeparataException('give a formula with -f or --file')


def _summary(verdict):
    if verdict.proved:
        return verdict.to_dict(proof=False)
    return verdict.to_dict()


def cmd_prove(args):
    config = _system(args)
    f = _formula(args)
    budget = Budget(timeout=args.timeout, max_labels=args.max_labels,
                    max_steps=args.max_steps)
    prover = Prover(config, budget, engine=args.engine,
                    backjumping=not args.no_backjump,
                    heuristics=not args.no_heuristic,
                    extract_model=args.saturate)
    verdict = prover.prove(f)

    if args.json:
        if verdict.proved:
            out = verdict.to_dict(proof=args.proof)
        else:
            out = verdict.to_dict()
        out['stats'] = verdict.stats
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print('%s  %.3fs  %s' % (filters.get_status(_summary(verdict)),
                                 verdict.seconds, f))
        if verdict.proved and args.proof:
            print(verdict.proof.render())
        if verdict.refuted:
            print('falsified at world %s (%s)' % (verdict.world,
                                                  verdict.source))

    if verdict.refuted and args.model:
        semantics.dump_model(verdict.model, args.model)
        log.info('model written to %s', args.model)

    if verdict.proved:
        return EXIT_PROVED
    if verdict.refuted:
        return EXIT_REFUTED
    return EXIT_UNKNOWN


def cmd_check_model(args):
    model = semantics.load_model(args.model)
    f = _formula(args)
    status = EXIT_PROVED

    if args.world is not None:
        if not semantics.eval(model, args.world, f):
            print('falsified at world %s' % args.world)
            status = EXIT_REFUTED
        else:
            print('true at world %s' % args.world)
    else:
        world = semantics.falsifying_world(model, f)
        if world is not None:
            print('falsified at world %s' % world)
            status = EXIT_REFUTED
        else:
            print('true at every world')

    if args.frame:
        violations = semantics.check_frame(
            model, builtin_system(args.frame).active_axioms())
        if violations:
            for v in violations:
                print('frame: %s' % v)
        else:
            print('frame: no violations of %s' % args.frame)
    return status


def cmd_bench(args):
    params = GenParams(args.n, args.i, args.seed, args.count)
    formulas = bench.suite_formulas(args.suite, params)
    verdicts = None
    if args.cache == 'redis':
        if not hasattr(cache, 'RedisCache'):
            raise SeparataException('--cache redis needs the redis package')
        verdicts = cache.RedisCache()
    elif args.cache == 'memory':
        verdicts = cache.DictionaryCache()

    rows = bench.run_suite(formulas, system=args.system, timeout=args.timeout,
                           engine=args.engine, jobs=args.jobs,
                           cache=verdicts)
    report = bench.make_report(args.suite, rows, args.system, args.timeout,
                               args.engine)
    if args.json:
        print(json.dumps(utils.prepare_report(report), indent=2,
                         sort_keys=True))
    else:
        print(bench.render_report(report))

    if args.baseline:
        baseline = utils.parse_report(json.load(args.baseline))
        lost = filters.regressions(rows, baseline['rows'])
        if lost:
            log.warning('no longer proved: %s', ', '.join(str(i) for i in lost))
            return 1
    return 0


def cmd_gen(args):
    for f in gen_suite(GenParams(args.n, args.i, args.seed, args.count)):
        print(f)
    return 0


def cmd_synth(args):
    config = _system(args)
    for axiom in config.active_axioms():
        rule = synthesize_rule(axiom)
        if args.subst:
            for r in to_subst_rules(rule):
                print(render_rule(r))
        else:
            print(render_rule(rule))
    return 0


def _add_system(parser):
    parser.add_argument("-s", "--system", dest="system",
                        default=os.environ.get('SEPARATA_SYSTEM', 'pasl+d'),
                        help="System name, e.g. pasl+d or bbi-nd+em")
    parser.add_argument("--axioms", dest="axioms",
                        help="Use the frame axioms in this file instead")


def _add_formula(parser):
    parser.add_argument("-f", "--formula", dest="formula",
                        help="The formula to work with")
    parser.add_argument("--file", dest="file", type=argparse.FileType('r'),
                        help="Read the formula from a file")


def _add_params(parser):
    parser.add_argument("--n", type=int, default=10,
                        help="Connective count of the random formulas")
    parser.add_argument("--i", type=int, default=20,
                        help="Number of mutation iterations")
    parser.add_argument("--count", type=int, default=100,
                        help="Number of theorems")
    parser.add_argument("--seed", type=int, default=0)


def make_parser():
    timeout = float(os.environ.get('SEPARATA_TIMEOUT', 60))
    engine = os.environ.get('SEPARATA_ENGINE', 'subst')

    parser = argparse.ArgumentParser(
        prog='separata',
        description="Labelled sequent prover for separation logics")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    prove = commands.add_parser("prove", help="Prove a formula")
    _add_system(prove)
    _add_formula(prove)
    prove.add_argument("--timeout", type=float, default=timeout)
    prove.add_argument("--engine", choices=('subst', 'eq'), default=engine)
    prove.add_argument("--no-backjump", action="store_true")
    prove.add_argument("--no-heuristic", action="store_true")
    prove.add_argument("--max-labels", type=int)
    prove.add_argument("--max-steps", type=int)
    prove.add_argument("--saturate", action="store_true",
                       help="Look for a counter-model when no proof exists")
    prove.add_argument("--json", action="store_true")
    prove.add_argument("--proof", action="store_true",
                       help="Print the derivation")
    prove.add_argument("--model", help="Write a counter-model to this file")
    prove.set_defaults(func=cmd_prove)

    check = commands.add_parser("check-model",
                                help="Evaluate a formula in a model file")
    check.add_argument("model", help="Model file (JSON)")
    _add_formula(check)
    check.add_argument("--world", help="Only evaluate at this world")
    check.add_argument("--frame", metavar="SYSTEM",
                       help="Also check the frame axioms of a system")
    check.set_defaults(func=cmd_check_model)

    bench_ = commands.add_parser("bench", help="Run a benchmark suite")
    bench_.add_argument("suite", choices=bench.SUITES)
    bench_.add_argument("-s", "--system", dest="system",
                        default=os.environ.get('SEPARATA_SYSTEM', 'pasl+d'))
    bench_.add_argument("--timeout", type=float, default=timeout)
    bench_.add_argument("--engine", choices=('subst', 'eq'), default=engine)
    _add_params(bench_)
    bench_.add_argument("--jobs", type=int, default=1)
    bench_.add_argument("--json", action="store_true")
    bench_.add_argument("--cache", nargs='?', const='memory',
                        choices=('memory', 'redis'))
    bench_.add_argument("--baseline", type=argparse.FileType('r'),
                        help="Previous JSON report to compare against")
    bench_.set_defaults(func=cmd_bench)

    gen = commands.add_parser("gen", help="Generate random BBI theorems")
    _add_params(gen)
    gen.set_defaults(func=cmd_gen)

    synth = commands.add_parser("synth",
                                help="Print the rules of a set of axioms")
    _add_system(synth)
    synth.add_argument("--subst", action="store_true",
                       help="Print the equality-free rules")
    synth.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    level = os.environ.get('SEPARATA_LOG', 'warning').upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format='%(levelname)s %(message)s')

    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SeparataException, IOError, ValueError) as e:
        log.error('%s', e)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
