from __future__ import print_function, division, absolute_import, unicode_literals

import argparse
import os.path
import sys

import logging
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_STAGE = 3

stagecommands = ['score', 'pool', 'regen', 'track', 'select', 'segment']


def parse_sets(pairs):
    """ Turn repeated key=value options into an inprefs dict. """

    from trackcut import preferences

    inprefs = {}
    for pair in pairs or []:
        if '=' not in pair:
            raise ValueError("--set expects key=value, got {0}".format(pair))
        key, value = pair.split('=', 1)
        inprefs[key.strip()] = preferences.parsevalue(value)
    return inprefs


def _common(parser):
    parser.add_argument('--preffile', default=None, help='yaml or key=value preference file')
    parser.add_argument('--prefname', default=None, help='preference set within a yaml file')
    parser.add_argument('--set', dest='sets', action='append', default=[],
                        metavar='KEY=VALUE', help='overload a preference (repeatable)')
    parser.add_argument('--outdir', default=None, help='working directory for outputs')
    parser.add_argument('--jobs', type=int, default=None, help='videos to run in parallel')
    parser.add_argument('--stop-after', dest='stop_after', default=None,
                        choices=stagecommands, help='stop after this stage')
    parser.add_argument('--baseline', default=None, choices=['pool', 'track'],
                        help='ablation baseline')


def build_parser():
    parser = argparse.ArgumentParser(prog='trackcut',
                                     description='Semantic video object segmentation '
                                                 'from region proposals')
    subparsers = parser.add_subparsers(dest='command')

    for command in stagecommands + ['run']:
        sub = subparsers.add_parser(command, help='run the pipeline through {0}'
                                    .format('all stages' if command in ('run', 'segment')
                                            else command))
        sub.add_argument('manifests', nargs='*', help='video manifest file(s)')
        _common(sub)
        if command == 'select':
            sub.add_argument('--instance', default=None,
                             help='solve a standalone selection instance file')

    sub = subparsers.add_parser('eval', help='score label maps against ground truth')
    sub.add_argument('manifest')
    sub.add_argument('preddir', help='directory with labels_<t>.imap files')
    sub.add_argument('--report', default=None, help='yaml report path')

    sub = subparsers.add_parser('synth', help='write a synthetic video')
    sub.add_argument('--outdir', default='.')
    sub.add_argument('--seed', type=int, default=0)
    sub.add_argument('--videoid', default=None)
    sub.add_argument('--scene', dest='scene', action='append', default=[],
                     metavar='KEY=VALUE', help='SceneSpec field (repeatable)')

    sub = subparsers.add_parser('reproduce', help='re-run an output directory and compare')
    sub.add_argument('outdir')

    return parser


def _inprefs(args, command):
    inprefs = parse_sets(args.sets)
    if args.outdir:
        inprefs['workdir'] = os.path.abspath(args.outdir)
    if args.jobs is not None:
        inprefs['jobs'] = args.jobs
    if args.baseline:
        inprefs['baseline'] = args.baseline
    if args.stop_after:
        inprefs['stop_after'] = args.stop_after
    elif command not in ('run', 'segment'):
        inprefs['stop_after'] = command
    return inprefs


def cmd_stages(args):
    from trackcut import pipeline, preferences

    if args.command == 'select' and args.instance:
        return cmd_instance(args)
    if not args.manifests:
        raise ValueError("at least one manifest is required")

    inprefs = _inprefs(args, args.command)
    prefs = preferences.Preferences(**preferences.parsepreffile(args.preffile, name=args.prefname,
                                                                inprefs=inprefs))
    _, combined = pipeline.run_videos(args.manifests, preffile=args.preffile,
                                      name=args.prefname, inprefs=inprefs,
                                      jobs=int(prefs.jobs))
    if combined is not None:
        print('class average IoU {0:.4f}, video average IoU {1:.4f}'
              .format(combined.class_average, combined.video_average))
    return EXIT_OK


def cmd_instance(args):
    from trackcut import selection, source

    inst = source.read_instance(args.instance)
    inprefs = parse_sets(args.sets)
    result = selection.greedy_select(inst, lazy=bool(inprefs.get('lazy', True)))
    print('selected {0}'.format(' '.join(str(ii) for ii in result.selected)))
    print('objective {0!r}'.format(result.objective_value))
    return EXIT_OK


def cmd_eval(args):
    from trackcut import metadata, evaluation, source

    meta = metadata.make_metadata(manifest=args.manifest)
    size = None
    if meta.width and meta.height:
        from trackcut import regions
        size = regions.FrameSize(meta.width, meta.height)

    pred = []
    for tt in range(meta.nframes):
        path = os.path.join(args.preddir, 'labels_{0}.imap'.format(tt))
        if not os.path.exists(path):
            raise IOError("missing prediction {0}".format(path))
        pred.append(source.read_imap(path, size))
    gt = [source.read_imap(path, size) if path else None for path in meta.groundtruth]
    if not gt:
        raise ValueError("manifest {0} has no ground truth".format(args.manifest))

    report = evaluation.evaluate(pred, gt, classes=list(meta.classes), videoid=meta.videoid)
    if args.report:
        evaluation.write_report(report, args.report)
    for name, iou in report.class_iou.items():
        print('{0}\t{1:.4f}'.format(name, iou))
    print('class average IoU {0:.4f}'.format(report.class_average))
    return EXIT_OK


def cmd_synth(args):
    import attr
    from trackcut import simulate

    fields = attr.fields_dict(simulate.SceneSpec)
    kwargs = {}
    for key, value in parse_sets(args.scene).items():
        if key not in fields:
            raise ValueError("unknown scene field {0}".format(key))
        kwargs[key] = value
    spec = simulate.SceneSpec(**kwargs)
    manifest = simulate.generate_synthetic(spec, seed=args.seed, outdir=args.outdir,
                                           videoid=args.videoid)
    print(manifest)
    return EXIT_OK


def cmd_reproduce(args):
    from trackcut import reproduce

    differing = reproduce.reproduce(args.outdir)
    if differing:
        print('differing outputs: {0}'.format(', '.join(differing)))
        return EXIT_STAGE
    print('reproduced')
    return EXIT_OK


def main(argv=None):
    """ Entry point. Returns 0 on success, 2 for invalid input or
    configuration and 3 when a pipeline stage fails.
    """

    from trackcut import pipeline

    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_INPUT

    handlers = {'eval': cmd_eval, 'synth': cmd_synth, 'reproduce': cmd_reproduce}
    handler = handlers.get(args.command, cmd_stages)

    try:
        return handler(args)
    except pipeline.StageError as exc:
        logger.error(str(exc))
        return EXIT_STAGE
    except (AssertionError, TypeError, ValueError, IOError, OSError) as exc:
        logger.error("Invalid input: {0}".format(exc))
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
