#  FloerGlue
#  Copyright (C) 2023-2024, Henry Stratmann III
#
#  This program is free software: you can redistribute it and/or modify
#  it under the terms of the GNU General Public License version 3 as
#  published by the Free Software Foundation.
#
#  This program is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#  GNU General Public License for more details.
#
#  You should have received a copy of the GNU General Public License
#  along with this program.  If not, see <https://www.gnu.org/licenses/>.

from typing import List, Dict, Tuple, Optional, Callable, Any

import io
import os
import re
import sys
import json
import argparse
import itertools

from .option import Arguments, DEFAULT_GOLDEN_DIR
from .errors import FloerGlueError, InputError, EmptyFamily, EXIT_OK, EXIT_INPUT, EXIT_CONSTRAINT
from .homalg import (homology, maslov_ranks, euler_poly, d_extremes, verify_ses, flag_to_json, flag_from_json, complex_to_json,
                     Ranks)
from .knotio import (KnotData, lookup, knot_table, parse_pd, pd_from_json, knot_from_diagram, knot_to_json, connected_sum_data,
                     mirror)
from .model import build_master, hfk_ranks_from_data
from .floer import (CFL, CFK, FlagFamily, build_cfl_flag, build_cfk_flag, hfl_ranks, support, expected_degrees,
                    rank_rows, write_rank_csv)
from .glue import PARALLEL, PERP, CONNECTED_SUM, GluedComplex, glue_parallel, glue_perp, connected_sum_cfk, connected_sum_cfl
from . import option as op

SUITES = ["genus", "ses", "euler", "symmetry", "connsum"]
CONNSUM_PAIRS = [("3_1", "3_1"), ("3_1", "4_1"), ("4_1", "4_1"), ("3_1", "T(2,5)")]

def safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_")

def dump(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"

def load_knots() -> List[KnotData]:
    knots = [lookup(name) for name in op.args.knots]
    for path in op.args.pd_files:
        if not os.path.exists(path):
            raise InputError(f"could not find: {path}")
        with open(path, "r", encoding="utf-8") as fp:
            text = fp.read()
        name = os.path.splitext(os.path.basename(path))[0]
        try:
            if path.endswith(".json"):
                diagram = pd_from_json(json.loads(text))
            else:
                diagram = parse_pd(text)
            knots.append(knot_from_diagram(name, diagram))
        except json.JSONDecodeError as e:
            raise InputError(f"{path}:{e.pos}: {e.msg}") from e
        except InputError as e:
            raise InputError(f"{path}:{e}") from e
    return knots

def build_family(k: KnotData, theory: str) -> FlagFamily:
    return build_cfl_flag(k) if theory == CFL else build_cfk_flag(k)

def rank_csv(rows: List[Tuple[str, str, int, int, int]]) -> str:
    stream = io.StringIO()
    write_rank_csv(rows, stream)
    return stream.getvalue()

# Every file "compute" writes for one knot and theory, keyed by file name.
def family_files(family: FlagFamily) -> Dict[str, str]:
    prefix = f"{safe_name(family.knot.name)}_{family.theory}"
    files = {f"{prefix}_{label}.json": dump(flag_to_json(flag))
             for label, flag in family.flags.items() if op.args.in_range(label)}
    files[f"{prefix}.csv"] = rank_csv([row for row in rank_rows(family) if op.args.in_range(row[2])])
    return files

def glued_files(name: str, glued: GluedComplex) -> Dict[str, str]:
    return {f"{name}.json": dump(glued.to_json())}

def write_files(directory: str, files: Dict[str, str]) -> None:
    os.makedirs(directory, exist_ok=True)
    for name, text in sorted(files.items()):
        with open(os.path.join(directory, name), "w", encoding="utf-8", newline="") as fp:
            fp.write(text)

def hfk_table(k: KnotData) -> List[Tuple[int, int, int]]:
    return sorted(((alex2, maslov, rank) for (maslov, alex2), rank in hfk_ranks_from_data(k).items()), reverse=True)

def hfl_table(k: KnotData) -> List[Tuple[int, int, int]]:
    rows = []
    for spinc2 in support(k, CFL):
        for maslov, rank in sorted(maslov_ranks(hfl_ranks(k, spinc2)).items()):
            rows.append((spinc2, maslov, rank))
    return rows

def cmd_invariants(arguments: Arguments) -> int:
    knots = load_knots()
    if len(knots) == 0:
        print("error: expected at least one knot", file=arguments.stderr)
        return EXIT_INPUT

    if arguments.format == "csv":
        rows = []
        for k in knots:
            rows += [(k.name, CFK, alex2, maslov, rank) for alex2, maslov, rank in hfk_table(k)]
            rows += [(k.name, CFL, spinc2, maslov, rank) for spinc2, maslov, rank in hfl_table(k)]
        print(rank_csv(rows), end="", file=arguments.stdout)
    elif arguments.format == "json":
        reports = []
        for k in knots:
            report = knot_to_json(k)
            report["hfk"] = [{"alex2": a, "maslov": m, "rank": r} for a, m, r in hfk_table(k)]
            report["hfl"] = [{"spinc2": s, "maslov": m, "rank": r} for s, m, r in hfl_table(k)]
            reports.append(report)
        print(dump(reports), end="", file=arguments.stdout)
    else:
        for k in knots:
            print(f"knot: {k.name}", file=arguments.stdout)
            print(f"alexander: {k.alexander}", file=arguments.stdout)
            print(f"signature: {k.signature}", file=arguments.stdout)
            print(f"genus: {k.genus}", file=arguments.stdout)
            print("hfk:", file=arguments.stdout)
            for alex2, maslov, rank in hfk_table(k):
                print(f"  alex2={alex2} maslov={maslov} rank={rank}", file=arguments.stdout)
            print("hfl:", file=arguments.stdout)
            for spinc2, maslov, rank in hfl_table(k):
                print(f"  spinc2={spinc2} maslov={maslov} rank={rank}", file=arguments.stdout)
    return EXIT_OK

def compute_glued(arguments: Arguments, knots: List[KnotData]) -> Dict[str, str]:
    if len(knots) != 2:
        raise InputError(f"gluing needs exactly two knots, got {len(knots)}")
    k1, k2 = knots
    stem = f"{safe_name(k1.name)}_{arguments.glue}_{safe_name(k2.name)}"
    inputs = [k1.name, k2.name]
    label = arguments.spinc_min if arguments.spinc_min is not None else 1
    if arguments.glue == PARALLEL:
        glued = glue_parallel(build_cfl_flag(k1).sector(label), build_cfl_flag(k2).sector(label), inputs)
        return glued_files(f"{stem}_{label}", glued)
    if arguments.glue == PERP:
        glued = glue_perp(build_cfl_flag(k1).sector(label), build_cfk_flag(k2), inputs)
        files = glued_files(f"{stem}_{label}", glued)
        assert glued.companion is not None
        files[f"{stem}_{label}_cfl.json"] = dump(complex_to_json(glued.companion))
        return files
    files: Dict[str, str] = {}
    total = connected_sum_data(k1, k2)
    for s2 in range(-2 * total.genus, 2 * total.genus + 1, 2):
        if arguments.in_range(s2):
            files.update(glued_files(f"{stem}_{s2}", connected_sum_cfl(k1, k2, s2)))
    return files

def cmd_compute(arguments: Arguments) -> int:
    knots = load_knots()
    if len(knots) == 0:
        print("error: expected at least one knot", file=arguments.stderr)
        return EXIT_INPUT

    files: Dict[str, str] = {}
    if arguments.glue is not None:
        files.update(compute_glued(arguments, knots))
    else:
        for k in knots:
            files.update(family_files(build_family(k, arguments.theory)))

    directory = arguments.output
    if arguments.regenerate:
        directory = arguments.golden_dir or DEFAULT_GOLDEN_DIR
    write_files(directory, files)
    for name in sorted(files):
        print(os.path.join(directory, name), file=arguments.stdout)
    return EXIT_OK

# Verification suites. Each returns the list of failures it found.

def suite_euler(knots: List[KnotData]) -> List[str]:
    failures = []
    for k in knots:
        m = build_master(k)
        graded: Ranks = {}
        for g in m.complex.generators:
            graded[(g.maslov, g.alex2)] = graded.get((g.maslov, g.alex2), 0) + 1
        for source, ranks in (("associated graded", graded), ("hfk", hfk_ranks_from_data(k))):
            poly = euler_poly(ranks)
            if poly != k.alexander and poly != -k.alexander:
                failures.append(f"euler: {k.name}: {source} gives {poly}, expected {k.alexander}")
        if homology(m.complex) != {(0, m.profile.survivor_level): 1}:
            failures.append(f"euler: {k.name}: master complex does not have rank one at maslov 0")
    return failures

def suite_genus(knots: List[KnotData]) -> List[str]:
    failures = []
    for k in knots:
        for theory in (CFL, CFK):
            family = build_family(k, theory)
            expected = expected_degrees(theory, k.genus)
            for name in ("minus", "zero", "plus"):
                got: Optional[Tuple[int, int]]
                try:
                    got = d_extremes(family.stratum(name))
                except EmptyFamily:
                    got = None
                if got != expected[name]:
                    failures.append(f"genus: {k.name}: {theory} {name}: d = {got}, expected {expected[name]}")
    return failures

def suite_ses(knots: List[KnotData], flag_file: Optional[str]) -> List[str]:
    failures = []
    if flag_file is not None:
        if not os.path.exists(flag_file):
            raise InputError(f"could not find: {flag_file}")
        with open(flag_file, "r", encoding="utf-8") as fp:
            flag = flag_from_json(json.load(fp))
        if flag.connecting is None:
            return [f"ses: {flag_file}: flag has no connecting map"]
        return [f"ses: {flag_file}: {name}" for name in verify_ses(*flag.ses()).failures]
    for k in knots:
        for theory in (CFL, CFK):
            for label, flag in build_family(k, theory).flags.items():
                failures += [f"ses: {k.name}: {theory} {label}: {name}" for name in verify_ses(*flag.ses()).failures]
    return failures

def suite_symmetry(knots: List[KnotData]) -> List[str]:
    failures = []
    for k in knots:
        for theory in (CFL, CFK):
            family = build_family(k, theory)
            for label in family.labels():
                here = maslov_ranks(homology(family[label].plus))
                there = maslov_ranks(homology(family.sector(-label).plus))
                # CFL reflects through the signature; CFK shifts by the sector label.
                if theory == CFL:
                    moved = {k.signature - maslov: rank for maslov, rank in here.items()}
                else:
                    moved = {maslov - label: rank for maslov, rank in here.items()}
                if moved != there:
                    failures.append(f"symmetry: {k.name}: {theory} sectors {label} and {-label} disagree")
        reflected = {(-maslov, -alex2): rank for (maslov, alex2), rank in hfk_ranks_from_data(k).items()}
        if hfk_ranks_from_data(mirror(k)) != reflected:
            failures.append(f"symmetry: {k.name}: mirror does not reflect the knot Floer ranks")
    return failures

def suite_connsum(knots: List[KnotData], selected: bool) -> List[str]:
    if selected:
        pairs = list(itertools.combinations_with_replacement(knots, 2))
    else:
        pairs = [(lookup(a), lookup(b)) for a, b in CONNSUM_PAIRS]
    failures = []
    for k1, k2 in pairs:
        total = connected_sum_data(k1, k2)
        expected = hfk_ranks_from_data(total)
        for s2 in range(-2 * total.genus - 2, 2 * total.genus + 3, 2):
            want = {key: rank for key, rank in expected.items() if key[1] == s2 and rank > 0}
            if homology(connected_sum_cfk(k1, k2, s2)) != want:
                failures.append(f"connsum: {total.name}: sector {s2} differs from the product polynomial")
            if not connected_sum_cfl(k1, k2, s2).bookkeeping_holds():
                failures.append(f"connsum: {total.name}: sector {s2} quotient dimension does not add up")
    return failures

# Every file "compute" would write for the knots must sit in the golden directory unchanged.
def golden_failures(knots: List[KnotData], directory: str) -> List[str]:
    if not os.path.isdir(directory):
        return [f"golden: directory {directory} missing"]
    failures = []
    for k in knots:
        for theory in (CFL, CFK):
            files = family_files(build_family(k, theory))
            for name, text in sorted(files.items()):
                path = os.path.join(directory, name)
                if not os.path.isfile(path):
                    failures.append(f"golden: {name} missing")
                    continue
                with open(path, "r", encoding="utf-8", newline="") as fp:
                    if fp.read() != text:
                        failures.append(f"golden: {name} differs")
    return failures

def cmd_verify(arguments: Arguments) -> int:
    knots = load_knots()
    selected = len(knots) > 0
    if not selected:
        knots = knot_table()
    suites = SUITES if arguments.suite == "all" else [arguments.suite]

    runners: Dict[str, Callable[[], List[str]]] = {
        "euler": lambda: suite_euler(knots),
        "genus": lambda: suite_genus(knots),
        "ses": lambda: suite_ses(knots, arguments.flag_file),
        "symmetry": lambda: suite_symmetry(knots),
        "connsum": lambda: suite_connsum(knots, selected),
    }
    failures: List[str] = []
    for suite in suites:
        failures += runners[suite]()
    checks = list(suites)
    if arguments.flag_file is None and arguments.golden_dir is not None:
        failures += golden_failures(knots, arguments.golden_dir)
        checks.append("golden")

    if arguments.format == "json":
        print(dump({"suites": checks, "passed": len(failures) == 0, "failures": failures}), end="", file=arguments.stdout)
    else:
        for suite in checks:
            ok = not any(f.startswith(f"{suite}:") for f in failures)
            print(f"{suite}: {'pass' if ok else 'FAIL'}", file=arguments.stdout)
    for failure in failures:
        print(f"error: {failure}", file=arguments.stderr)
    return EXIT_OK if len(failures) == 0 else EXIT_CONSTRAINT

def main(arguments: Arguments) -> int:
    op.args = arguments
    commands = {"invariants": cmd_invariants, "compute": cmd_compute, "verify": cmd_verify}
    if op.args.command not in commands:
        print("error: expected one of the commands: invariants, compute, verify", file=op.args.stderr)
        return EXIT_INPUT
    try:
        return commands[op.args.command](op.args)
    except FloerGlueError as e:
        print(f"error: {e}", file=op.args.stderr)
        return e.exit_code

def spinc_range(text: str) -> Tuple[int, int]:
    match = re.fullmatch(r"\s*(-?\d+)\s*(?::\s*(-?\d+)\s*)?", text)
    if match is None:
        raise argparse.ArgumentTypeError(f"expected LABEL or MIN:MAX, got '{text}'")
    low = int(match.group(1))
    high = int(match.group(2)) if match.group(2) is not None else low
    if high < low:
        raise argparse.ArgumentTypeError(f"empty range {low}:{high}")
    return low, high

def parse_args(arguments: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="floerglue", description="Knot and longitude Floer complexes of thin knots, and their gluings.")
    parser.add_argument("-v", "--version", action="version", version='%(prog)s 0.1.0')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--quiet", action="store_true", dest="suppress_output", help="suppress output")
    common.add_argument("--knot", "--knots",
                        action="append",
                        nargs="+",
                        dest="_knots",
                        metavar="NAME",
                        help="Knot from the built-in table; accepts comma separated lists and may be repeated.")
    common.add_argument("--pd",
                        action="append",
                        dest="pd_files",
                        metavar="FILE",
                        help="File holding a PD code, either as text 'X(a,b,c,d) ...' or as JSON {\"pd\": [[a,b,c,d], ...]}.")
    common.add_argument("--format", choices=["json", "csv", "pretty"], dest="format", help="report format")
    common.add_argument("--spinc",
                        type=spinc_range,
                        dest="spinc",
                        metavar="MIN[:MAX]",
                        help="Doubled Spin^c labels to report; defaults to the support of each knot.")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    group = commands.add_parser("invariants", parents=[common], help="print Alexander polynomial, signature, genus and rank tables")
    group.add_argument("names", nargs="*", metavar="KNOT")
    group.set_defaults(format="pretty")

    group = commands.add_parser("compute", parents=[common], help="write flag complexes, glued complexes and rank reports")
    group.add_argument("names", nargs="*", metavar="KNOT")
    group.add_argument("--theory", choices=[CFK, CFL], dest="theory", default=CFK, help="flag family to build")
    group.add_argument("--glue", choices=[PARALLEL, PERP, CONNECTED_SUM], dest="glue", help="glue two knots instead")
    group.add_argument("-o", "--out", type=str, dest="output", default="out", metavar="PATH", help="directory for the generated files")
    group.add_argument("--regenerate", action="store_true", dest="regenerate", help="write into the golden directory instead")
    group.add_argument("--golden", type=str, dest="golden_dir", metavar="PATH", help=f"golden directory for --regenerate (default: {DEFAULT_GOLDEN_DIR})")
    group.set_defaults(format="json")

    group = commands.add_parser("verify", parents=[common], help="run invariant suites over the knot table")
    group.add_argument("--suite", choices=SUITES + ["all"], dest="suite", default="all", help="suite to run")
    group.add_argument("--flag", type=str, dest="flag_file", metavar="FILE", help="verify the exact sequence of a flag JSON file")
    group.add_argument("--golden", type=str, dest="golden_dir", metavar="PATH", help="compare against the golden files in this directory")
    group.set_defaults(format="pretty")

    op.args = Arguments()
    op.args = parser.parse_args(arguments, namespace=op.args)
    op.args.finish()
    return main(op.args)

def start() -> None:
    sys.exit(parse_args())

if __name__ == "__main__":
    start()
