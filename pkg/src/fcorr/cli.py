"""Command line: validate scenes, run the check suites, emit class and transfer reports.

Exit codes: 0 all pass, 1 a check failed, 2 parse error, 3 invalid scene.
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field

from .coeffring import ParseError
from .liepair import SceneError, bundled_scene_paths, load_scene

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    paths: list = field(default_factory=list)
    max_sig: int = 3
    k_max: int = 6
    seed: int = 0
    rand_count: int = 100
    out: str = None
    format: str = "json"
    only: list = field(default_factory=list)


class SceneLoadError(Exception):
    def __init__(self, code, lines):
        super().__init__("\n".join(lines))
        self.code = code
        self.lines = lines


def load_all(paths):
    """Load and validate every path; raise SceneLoadError with the worst exit code."""
    scenes, lines, code = [], [], EXIT_OK
    for p in paths:
        try:
            s = load_scene(p)
        except (ParseError, OSError) as exc:
            lines.append("%s: ParseError: %s" % (p, exc))
            code = EXIT_PARSE
            continue
        probs = s.diagnostics()
        for kind, msg in probs:
            lines.append("%s: %s: %s" % (p, kind.__name__, msg))
        if probs:
            code = code or EXIT_INVALID
            continue
        scenes.append(s)
    if code:
        raise SceneLoadError(code, lines)
    return scenes


def _cert_check(scene, c):
    return {"name": c.name, "scene": scene.name, "signature": [], "checked": 1,
            "status": "pass" if c.ok else "fail",
            "counterexamples": [c.detail] if not c.ok and c.detail else []}


def _keep(cfg, name):
    return not cfg.only or any(name.startswith(o) for o in cfg.only)


def _scene_block(cfg, scene, checks, extra=None):
    checks = [c for c in checks if _keep(cfg, c["name"])]
    block = {"scene": scene.name, "checks": checks,
             "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail"}
    if extra:
        block.update(extra)
    return block


def run_suite(cfg, scene):
    from .classes import compute_classes, connection_suite
    from .contraction import contraction_suite, splitting_suite
    from .transfer import transfer_suite
    checks = [r.to_dict() for r in contraction_suite(scene, cfg.max_sig, cfg.rand_count, cfg.seed)]
    if scene.theta is not None:
        checks += [r.to_dict() for r in splitting_suite(scene, min(cfg.max_sig, 2),
                                                         max(cfg.rand_count // 5, 1), cfg.seed)]
    checks += [r.to_dict() for r in transfer_suite(scene, cfg.k_max, 10, cfg.seed)]
    rep = compute_classes(scene)
    checks += [_cert_check(scene, c) for c in rep.certificates]
    checks += [r.to_dict() for r in connection_suite(scene, 20, cfg.seed)]
    return _scene_block(cfg, scene, checks)


def run_classes(cfg, scene):
    from .classes import compute_classes
    rep = compute_classes(scene, k_max=cfg.k_max)
    d = rep.to_dict()
    checks = [_cert_check(scene, c) for c in rep.certificates]
    d.pop("certificates")
    d.pop("scene")
    return _scene_block(cfg, scene, checks, {"classes": d})


def run_transfer(cfg, scene):
    from .transfer import transfer_of, transfer_suite
    T = transfer_of(scene)
    gens = T.generators()
    l2 = {"%s,%s" % (a, b): T.lambda_gen([a, b]).render() for a in gens for b in gens}
    l3 = {}
    for a in range(scene.b):
        for b in range(scene.b):
            for k in range(scene.f):
                lab = ["Z%d" % (a + 1), "Z%d" % (b + 1), "xi%d" % (k + 1)]
                l3[",".join(lab)] = T.lambda_gen(lab).render()
    checks = [r.to_dict() for r in transfer_suite(scene, cfg.k_max, 10, cfg.seed)]
    return _scene_block(cfg, scene, checks, {"lambda2": l2, "lambda3": l3})


def run_homotopy(cfg, scene):
    from .contraction import splitting_suite
    if scene.theta is None:
        return _scene_block(cfg, scene, [], {"note": "no theta: splitting comparison skipped"})
    rs = splitting_suite(scene, min(cfg.max_sig, 2), max(cfg.rand_count // 5, 1), cfg.seed)
    return _scene_block(cfg, scene, [r.to_dict() for r in rs])


RUNNERS = {"suite": run_suite, "classes": run_classes, "transfer": run_transfer,
           "homotopy": run_homotopy}


def render_markdown(report):
    out = ["# %s report" % report["command"], "",
           "status: **%s**" % report["status"], ""]
    for blk in report["scenes"]:
        out.append("## %s (%s)" % (blk["scene"], blk["status"]))
        out.append("")
        for key in ("classes", "lambda2", "lambda3"):
            if key in blk:
                out.append("### %s" % key)
                out.append("")
                for k, v in sorted(blk[key].items()):
                    out.append("- `%s`: `%s`" % (k, json.dumps(v, sort_keys=True, ensure_ascii=False)
                                                if not isinstance(v, str) else v))
                out.append("")
        if blk["checks"]:
            out.append("| check | signature | checked | status |")
            out.append("|---|---|---|---|")
            for c in blk["checks"]:
                out.append("| %s | %s | %d | %s |" % (c["name"], ",".join(map(str, c["signature"])),
                                                     c["checked"], c["status"]))
                for ce in c["counterexamples"]:
                    out.append("|  | counterexample: `%s` | | |" % ce)
            out.append("")
    return "\n".join(out) + "\n"


def emit(cfg, report):
    if cfg.format == "markdown":
        text = render_markdown(report)
    else:
        text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser():
    p = argparse.ArgumentParser(prog="fcorr", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("validate", "suite", "classes", "transfer", "homotopy"):
        sp = sub.add_parser(name)
        sp.add_argument("paths", nargs="*", help="scene JSON files (default: bundled corpus)")
        if name == "validate":
            continue
        sp.add_argument("--max-sig", type=int, default=3)
        sp.add_argument("--k-max", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--rand-count", type=int, default=100)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "markdown"), default="json")
        sp.add_argument("--only", default="", help="comma-separated check-name prefixes")
    return p


def config_from_args(ns):
    cfg = RunConfig(ns.command, list(ns.paths) or bundled_scene_paths())
    if ns.command != "validate":
        cfg.max_sig, cfg.seed, cfg.rand_count = ns.max_sig, ns.seed, ns.rand_count
        cfg.out, cfg.format = ns.out, ns.format
        cfg.only = [o for o in ns.only.split(",") if o]
        if ns.k_max is not None:
            cfg.k_max = ns.k_max
        elif ns.command == "classes":
            cfg.k_max = None
    return cfg


def main(argv=None):
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    try:
        scenes = load_all(cfg.paths)
    except SceneLoadError as exc:
        for line in exc.lines:
            print(line, file=sys.stderr)
        return exc.code
    if cfg.command == "validate":
        for s, p in zip(scenes, cfg.paths):
            print("%s: ok (%s, f=%d, b=%d)" % (p, s.name, s.f, s.b))
        return EXIT_OK
    try:
        blocks = [RUNNERS[cfg.command](cfg, s) for s in scenes]
    except (SceneError, ParseError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INVALID if isinstance(exc, SceneError) else EXIT_PARSE
    cfgd = asdict(cfg)
    cfgd["paths"] = [s.name for s in scenes]
    cfgd.pop("out")
    report = {"command": cfg.command, "config": cfgd, "scenes": blocks,
              "status": "pass" if all(b["status"] == "pass" for b in blocks) else "fail"}
    emit(cfg, report)
    if report["status"] != "pass":
        for b in blocks:
            for c in b["checks"]:
                if c["status"] != "pass":
                    print("FAIL %s %s: %s" % (b["scene"], c["name"], "; ".join(c["counterexamples"])),
                          file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
