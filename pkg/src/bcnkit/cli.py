"""Command-line front end.

Exit codes: 0 success / property holds, 1 property fails, 2 usage error,
3 invalid model.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, casestudy
from .dot import to_dot
from .dsl import ModelError
from .feedback import compose, reduce_plant, state_set
from .io import digest, load_model, model_to_dict, save_model
from .network import Bcn, Bn, StateSpace, simulate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_assignment(space: StateSpace, text: str):
    """``"X1=H, X2=1"`` or a bare canonical index such as ``"17"``."""
    text = text.strip()
    if text.isdigit():
        try:
            return space.vector(int(text))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    pairs = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise UsageError(f"expected NAME=VALUE, got {part!r}")
        k, v = (s.strip() for s in part.split("=", 1))
        pairs[k] = v
    try:
        return space.encode(pairs)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from None


def parse_inputs(space: StateSpace, spec: str) -> list:
    """Input sequence from a file (one assignment per line) or inline, ``;``-separated."""
    path = Path(spec)
    if path.is_file():
        items = [ln.split("#", 1)[0] for ln in path.read_text().splitlines()]
    else:
        items = spec.split(";")
    return [parse_assignment(space, item) for item in items if item.strip()]


def _as_bn(net, input_spec: Optional[str]) -> Bn:
    if isinstance(net, Bn):
        return net
    if input_spec is None:
        if net.n_inputs != 1:
            raise UsageError("model has inputs; fix one with --input NAME=VALUE,...")
        return net.as_bn(1)
    return net.as_bn(parse_assignment(net.input_space, input_spec))


class Runner:
    def __init__(self, args):
        self.args = args
        self.models: dict[str, str] = {}

    def load(self, path: str):
        net = load_model(path)
        self.models[path] = digest(model_to_dict(net))
        return net

    def cmd_validate(self):
        net = self.load(self.args.file)
        return True, {
            "name": net.name,
            "inputs": net.n_inputs,
            "states": net.n_states,
            "outputs": net.n_outputs,
            "transition": list(net.transition.shape),
            "output_map": list(net.output_map.shape),
        }

    def cmd_compile(self):
        net = self.load(self.args.file)
        save_model(net, self.args.output)
        return True, {"written": self.args.output, "transition": list(net.transition.shape)}

    def cmd_simulate(self):
        net = self.load(self.args.model)
        x0 = parse_assignment(net.state_space, self.args.init)
        inputs = []
        if isinstance(net, Bcn):
            if self.args.inputs is None:
                if net.n_inputs != 1 and self.args.steps > 0:
                    raise UsageError("--inputs is required for a model with inputs")
                inputs = [net.input_space.vector(1)] * self.args.steps
            else:
                inputs = parse_inputs(net.input_space, self.args.inputs)
        if len(inputs) < self.args.steps and isinstance(net, Bcn):
            raise UsageError(f"{self.args.steps} steps need {self.args.steps} inputs, got {len(inputs)}")
        traj = simulate(net, x0, inputs, self.args.steps)
        out_space = net.output_space
        return True, {
            "states": [net.state_space.decode_dict(x) for x in traj.states],
            "inputs": [net.input_space.decode_dict(u) for u in traj.inputs],
            "outputs": [out_space.decode_dict(y) for y in traj.outputs] if out_space is not None else [],
        }

    def cmd_compose(self):
        context = self.load(self.args.context)
        plant = self.load(self.args.plant)
        if not (isinstance(context, Bcn) and isinstance(plant, Bcn)):
            raise UsageError("compose needs two control networks")
        cl = compose(context, plant)
        provenance = {"context": {"path": self.args.context, "name": context.name},
                      "plant": {"path": self.args.plant, "name": plant.name}}
        save_model(cl.bn, self.args.output, provenance)
        return True, {"written": self.args.output, "states": cl.n_states}

    def cmd_analyze(self):
        bn = _as_bn(self.load(self.args.model), self.args.input)
        what = self.args.what
        if what == "fixpoints":
            fps = analysis.fixed_points(bn)
            return True, {"count": len(fps), "fixed_points": list(fps)}
        if what == "cycles":
            cycles = analysis.limit_cycles(bn)
            return True, {"count": len(cycles), "cycles": cycles}
        if self.args.set is None:
            raise UsageError("analyze attractor needs --set")
        try:
            target = state_set(bn.state_space, self.args.set)
        except ModelError as exc:
            raise UsageError(f"--set: {exc}") from None
        report = analysis.is_global_attractor(bn, target)
        return report.is_global_attractor, {"set": self.args.set, "size": len(target), **report.to_dict()}

    def cmd_reconstruct(self):
        net = self.load(self.args.model)
        if not isinstance(net, Bcn):
            raise UsageError("reconstruct needs a control network")
        if self.args.reduce_plant:
            net = reduce_plant(net)
        report = analysis.reconstructibility(net)
        return report.reconstructible, report.to_dict()

    def cmd_casestudy(self):
        result = casestudy.verify(mutant=self.args.mutant)
        return result["verdict"], result

    def cmd_export(self):
        bn = _as_bn(self.load(self.args.model), self.args.input)
        try:
            text = to_dot(bn, labels=self.args.labels)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if self.args.output:
            Path(self.args.output).write_text(text)
            return True, {"written": self.args.output, "states": bn.n_states}
        self.dot_text = text
        return True, {"states": bn.n_states}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable report")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker bound (default: all cores)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized tooling")

    p = argparse.ArgumentParser(prog="bcnkit", description="Verify Boolean and multi-valued control networks.",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="parse and compile a .bcn model")
    s.add_argument("file")

    s = sub.add_parser("compile", parents=[common], help="compile a model to a JSON document")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("simulate", parents=[common], help="simulate a trajectory")
    s.add_argument("--model", required=True)
    s.add_argument("--init", required=True, help='initial state, e.g. "X1=H,X2=1" or a canonical index')
    s.add_argument("--inputs", help='file with one assignment per line, or inline "U1=low,...;U1=mid,..."')
    s.add_argument("--steps", type=int, required=True)

    s = sub.add_parser("compose", parents=[common], help="close the loop between a context and a plant")
    s.add_argument("--context", required=True)
    s.add_argument("--plant", required=True)
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("analyze", parents=[common], help="fixed points, cycles and attractor checks")
    s.add_argument("what", choices=["fixpoints", "cycles", "attractor"])
    s.add_argument("--model", required=True)
    s.add_argument("--set", help='state set, e.g. "S1 == H && X1 == H"')
    s.add_argument("--input", help="constant input for a model with inputs")

    s = sub.add_parser("reconstruct", parents=[common], help="reconstructibility check")
    s.add_argument("--model", required=True)
    s.add_argument("--reduce-plant", action="store_true", help="substitute the fed-back output first")

    s = sub.add_parser("casestudy", parents=[common], help="bundled healthcare case study")
    s.add_argument("action", choices=["verify"])
    s.add_argument("--mutant", action="store_true", help="use the relapse mutant (expected to fail)")

    s = sub.add_parser("export", parents=[common], help="export a functional graph")
    s.add_argument("format", choices=["dot"])
    s.add_argument("--model", required=True)
    s.add_argument("--labels", action="store_true", help="show decoded assignments")
    s.add_argument("--input", help="constant input for a model with inputs")
    s.add_argument("-o", "--output")
    return p


def _human(command: str, verdict: bool, result: dict) -> str:
    lines = [f"{command}: {'OK' if verdict else 'FAILED'}"]
    for k, v in result.items():
        if isinstance(v, (list, dict)) and len(json.dumps(v)) > 200:
            v = json.dumps(v)[:200] + " ..."
        lines.append(f"  {k}: {v}")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json = getattr(args, "json", False)
    threads = getattr(args, "threads", None)
    if threads is None:
        threads = os.cpu_count() or 1
    elif threads < 1:
        parser.error("--threads must be positive")

    runner = Runner(args)
    handler = getattr(runner, f"cmd_{args.command}")
    start = time.perf_counter()
    try:
        verdict, result = handler()
    except UsageError as exc:
        print(f"bcnkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelError as exc:
        print(f"bcnkit: invalid model: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, KeyError) as exc:
        print(f"bcnkit: invalid model: {exc}", file=sys.stderr)
        return EXIT_INVALID
    elapsed = time.perf_counter() - start

    if getattr(runner, "dot_text", None) is not None and not as_json:
        sys.stdout.write(runner.dot_text)
    elif as_json:
        report = {
            "command": argv,
            "models": runner.models,
            "verdict": bool(verdict),
            "result": result,
            "settings": {"threads": threads, "seed": getattr(args, "seed", None)},
            "timing": {"seconds": round(elapsed, 6)},
        }
        if getattr(runner, "dot_text", None) is not None:
            report["result"]["dot"] = runner.dot_text
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(_human(args.command, verdict, result))
    return EXIT_OK if verdict else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
