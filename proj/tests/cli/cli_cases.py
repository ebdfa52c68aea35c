"""Command-line cases for the accd tool. Each case is one ctest entry:

    cli_cases.py --accd PATH --source DIR --work DIR CASE
"""

import argparse
import csv
import itertools
import json
import math
import os
import random
import re
import subprocess
import sys
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

CASES = {}


def case(fn):
    CASES[fn.__name__] = fn
    return fn


class Ctx:
    def __init__(self, accd, source, work):
        self.accd = accd
        self.source = Path(source)
        self.work = Path(work)
        self.work.mkdir(parents=True, exist_ok=True)

    def run(self, *args, env=None):
        full_env = dict(os.environ)
        full_env.pop("ACCD_THREADS", None)
        if env:
            full_env.update(env)
        return subprocess.run([self.accd, *map(str, args)], capture_output=True, text=True, env=full_env)

    def program(self, name):
        return self.source / "programs" / name

    def write(self, name, text):
        p = self.work / name
        p.write_text(text)
        return p

    def validate(self, instance, schema_name):
        schemas = self.source / "schemas"
        resources = []
        for f in schemas.glob("*.schema.json"):
            doc = json.loads(f.read_text())
            resources.append((f.name, Resource.from_contents(doc)))
        registry = Registry().with_resources(resources)
        schema = json.loads((schemas / schema_name).read_text())
        jsonschema.Draft202012Validator(schema, registry=registry).validate(instance)


def expect(cond, msg):
    if not cond:
        raise AssertionError(msg)


def expect_exit(proc, code):
    expect(proc.returncode == code,
           f"exit {proc.returncode}, wanted {code}\nstdout:\n{proc.stdout}\nstderr:\n{proc.stderr}")


def blob_csv(path, n, d, centers, spread, seed, header=True):
    rng = random.Random(seed)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        if header:
            w.writerow([f"x{j}" for j in range(d)])
        for i in range(n):
            c = centers[i % len(centers)]
            w.writerow([repr(c[j] + rng.gauss(0.0, spread)) for j in range(d)])
    return path


@case
def compile_plan(ctx):
    p = ctx.run("compile", ctx.program("kmeans.ddsl"), "--emit", "plan")
    expect_exit(p, 0)
    plan = json.loads(p.stdout)
    expect(plan["pipeline_kind"] == "iterative_two_set", plan)
    ctx.validate(plan, "plan.schema.json")
    for prog in ("knn_join.ddsl", "nbody.ddsl"):
        q = ctx.run("compile", ctx.program(prog), "--emit", "plan")
        expect_exit(q, 0)
        ctx.validate(json.loads(q.stdout), "plan.schema.json")


@case
def compile_ast_matches_golden(ctx):
    p = ctx.run("compile", ctx.program("kmeans.ddsl"), "--emit", "ast")
    expect_exit(p, 0)
    golden = (ctx.source / "tests" / "golden" / "kmeans_pretty.ddsl").read_text()
    expect(p.stdout == golden, p.stdout)
    again = ctx.write("reprinted.ddsl", p.stdout)
    q = ctx.run("compile", again, "--emit", "ast")
    expect_exit(q, 0)
    expect(q.stdout == p.stdout, "pretty print is not a fixpoint")


@case
def compile_missing_file(ctx):
    expect_exit(ctx.run("compile", ctx.work / "does_not_exist.ddsl"), 2)


@case
def compile_syntax_error(ctx):
    src = ctx.write("broken.ddsl", "DVar K int 10;\nDSet p float 3 ;\n")
    p = ctx.run("compile", src)
    expect_exit(p, 1)
    expect(re.search(r"broken\.ddsl:2:16: error: ", p.stderr), p.stderr)


@case
def compile_diagnostics(ctx):
    text = ctx.program("kmeans.ddsl").read_text().replace("DSet pSet", "DSet qSet", 1)
    src = ctx.write("renamed.ddsl", text)
    p = ctx.run("compile", src)
    expect_exit(p, 1)
    lines = [l for l in p.stderr.splitlines() if l.strip()]
    expect(len(lines) == 1, p.stderr)
    expect(re.match(r".*renamed\.ddsl:13:\d+: error: undefined identifier 'pSet'", lines[0]), lines[0])


@case
def unknown_flag(ctx):
    expect_exit(ctx.run("compile", ctx.program("kmeans.ddsl"), "--bogus"), 1)
    expect_exit(ctx.run("nonsense"), 1)
    expect_exit(ctx.run("--help"), 0)


def kmeans_fixture(ctx):
    centers = [[0, 0, 0], [50, 0, 0], [0, 50, 0], [0, 0, 50]]
    pts = blob_csv(ctx.work / "blobs.csv", 2000, 3, centers, 1.0, 1)
    init = ctx.work / "init.csv"
    with open(pts) as f:
        rows = list(csv.reader(f))
    with open(init, "w", newline="") as f:
        csv.writer(f).writerows(rows[:5])  # header + 4 points
    prog = ctx.write("kmeans_small.ddsl", (
        "DVar K int 1;\nDVar D int 3;\nDVar psize int 2000;\nDVar csize int 4;\n"
        "DSet pSet float psize D;\nDSet cSet float csize D;\n"
        "DSet distMat float psize csize;\nDSet idMat int psize csize;\nDSet pkMat int psize K;\n"
        "AccD_Iter(S){\n    S = false;\n"
        "    AccD_Comp_Dist(pSet, cSet, distMat, idMat, D, \"Unweighted L2\", 0);\n"
        "    AccD_Dist_Select(distMat, idMat, K, \"smallest\", pkMat);\n"
        "    AccD_Update(cSet, pSet, pkMat, S)\n}\n"))
    return prog, pts, init


@case
def run_kmeans_shadow(ctx):
    prog, pts, init = kmeans_fixture(ctx)
    report = ctx.work / "kmeans_report.json"
    p = ctx.run("run", prog, "--src", pts, "--trg", init, "--oracle", "shadow", "--report", report)
    expect_exit(p, 0)
    doc = json.loads(report.read_text())
    ctx.validate(doc, "run_report.schema.json")
    expect(doc["oracle_checked"] is True, doc["oracle_checked"])
    expect(doc["converged"] is True, "did not converge")
    out = Path(doc["outputs_path"])
    with open(out) as f:
        rows = list(csv.reader(f))
    expect(rows[0] == ["point_id", "cluster"], rows[0])
    expect(len(rows) == 2001, len(rows))
    # Blob i % 4 ends up in one cluster per blob.
    by_blob = {}
    for pid, cluster in rows[1:]:
        by_blob.setdefault(int(pid) % 4, set()).add(int(cluster))
    expect(all(len(s) == 1 for s in by_blob.values()), by_blob)
    expect(len(set().union(*by_blob.values())) == 4, by_blob)


@case
def run_is_deterministic_across_threads(ctx):
    prog, pts, init = kmeans_fixture(ctx)
    docs = []
    for threads in ("1", "3"):
        report = ctx.work / f"threads_{threads}.json"
        p = ctx.run("run", prog, "--src", pts, "--trg", init, "--report", report, env={"ACCD_THREADS": threads})
        expect_exit(p, 0)
        doc = json.loads(report.read_text())
        expect(doc["config"]["thread_count"] == int(threads), doc["config"])
        for key in ("wall_seconds", "outputs_path"):
            doc.pop(key, None)
        doc["config"].pop("thread_count")
        docs.append(doc)
    expect(docs[0] == docs[1], "reports differ between thread counts")


@case
def run_dimension_mismatch(ctx):
    prog, pts, init = kmeans_fixture(ctx)
    small = blob_csv(ctx.work / "small.csv", 100, 3, [[0, 0, 0]], 1.0, 2)
    expect_exit(ctx.run("run", prog, "--src", small, "--trg", init), 2)
    expect_exit(ctx.run("run", prog, "--src", small, "--trg", init, "--allow-dim-from-data"), 0)


@case
def run_knn_k_exceeds_targets(ctx):
    src = blob_csv(ctx.work / "ksrc.csv", 100, 24, [[0] * 24], 1.0, 3)
    trg = blob_csv(ctx.work / "ktrg.csv", 30, 24, [[0] * 24], 1.0, 4)
    p = ctx.run("run", ctx.program("knn_join.ddsl"), "--src", src, "--trg", trg, "--allow-dim-from-data")
    expect_exit(p, 1)


@case
def run_knn_report(ctx):
    src = blob_csv(ctx.work / "ksrc2.csv", 300, 24, [[0] * 24, [20] * 24], 1.0, 5)
    trg = blob_csv(ctx.work / "ktrg2.csv", 400, 24, [[0] * 24, [20] * 24], 1.0, 6)
    report = ctx.work / "knn_report.json"
    outputs = ctx.work / "knn_out.csv"
    p = ctx.run("run", ctx.program("knn_join.ddsl"), "--src", src, "--trg", trg, "--allow-dim-from-data",
                "--oracle", "shadow", "--report", report, "--outputs", outputs, "--blk", 16, "--simd", 2)
    expect_exit(p, 0)
    doc = json.loads(report.read_text())
    ctx.validate(doc, "run_report.schema.json")
    expect(doc["config"]["blk"] == 16, doc["config"])
    with open(outputs) as f:
        rows = list(csv.reader(f))
    expect(rows[0] == ["point_id", "rank", "neighbor_id", "distance"], rows[0])
    expect(len(rows) == 1 + 300 * 50, len(rows))


@case
def run_nbody_rejects_targets(ctx):
    pts = blob_csv(ctx.work / "particles.csv", 200, 3, [[0, 0, 0]], 0.1, 7)
    p = ctx.run("run", ctx.program("nbody.ddsl"), "--src", pts, "--trg", pts, "--allow-dim-from-data")
    expect_exit(p, 1)
    report = ctx.work / "nbody_report.json"
    q = ctx.run("run", ctx.program("nbody.ddsl"), "--src", pts, "--allow-dim-from-data", "--oracle", "shadow",
                "--report", report)
    expect_exit(q, 0)
    doc = json.loads(report.read_text())
    ctx.validate(doc, "run_report.schema.json")
    expect(doc["iterations"] == 5, doc["iterations"])


def model_oracle(problem, platform_path, domains):
    """Exhaustive evaluation of the latency/bandwidth/resource model, written from the formulas."""
    plat = {}
    for line in Path(platform_path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            k, v = (s.strip() for s in line.split("=", 1))
            plat[k] = v
    table = {}
    with open(Path(platform_path).parent / plat["resource_table"]) as f:
        for row in csv.DictReader(f):
            table[(int(row["blk"]), int(row["simd"]), int(row["unroll"]))] = (
                float(row["mem_blocks"]), float(row["dsp"]), float(row["alm"]))
    f = float(plat["frequency_hz"])
    src, trg, d, n_it = problem["src_size"], problem["trg_size"], problem["d"], problem["n_iteration"]
    alpha, bits = problem.get("alpha", 1.0), problem.get("size_data_type", 32)
    best = None
    for ns, nt, blk, simd, unroll in itertools.product(
            domains["n_src_grp"], domains["n_trg_grp"], domains["blk"], domains["simd"], domains["unroll"]):
        ratio = min(1.0, max(0.0, n_it / alpha * math.sqrt(src * trg / (ns * nt))))
        filt = nt * ns * src * trg * d / n_it
        comp = src * trg * ratio * d / (blk * blk * f * unroll * simd)
        total = filt + comp
        bw = (src + trg) * d * (bits / 8) / total
        blocks = math.ceil(src / blk) * math.ceil(trg / blk)
        mem, dsp, alm = (x * blocks for x in table[(blk, simd, unroll)])
        if bw <= float(plat["bw_max_bytes_per_s"]) and mem <= float(plat["mem_max_blocks"]) \
                and dsp <= float(plat["cu_max"]) and alm <= float(plat["lu_max"]):
            if best is None or total < best[0]:
                best = (total, (ns, nt, blk, simd, unroll))
    return best


@case
def explore_matches_exhaustive(ctx):
    problem = json.loads((ctx.source / "share/explorer/kmeans_problem.json").read_text())
    domains = {"n_src_grp": [16, 32], "n_trg_grp": [2, 4], "blk": [64, 128], "simd": [1, 2], "unroll": [2, 4]}
    platform = ctx.source / "share/platforms/synthetic.platform"
    p = ctx.run("explore", "--problem", json.dumps(problem), "--platform", platform,
                "--domains", json.dumps(domains), "--seed", 4)
    expect_exit(p, 0)
    doc = json.loads(p.stdout)
    ctx.validate(doc, "explore.schema.json")
    want = model_oracle(problem, platform, domains)
    expect(want is not None, "oracle found no feasible point")
    got = doc["report"]["latency_total"]
    expect(abs(got - want[0]) <= 1e-9 * want[0], f"GA {got} vs exhaustive {want}")
    again = ctx.run("explore", "--problem", json.dumps(problem), "--platform", platform,
                    "--domains", json.dumps(domains), "--seed", 4)
    expect(again.stdout == p.stdout, "explore is not deterministic")


@case
def explore_shipped_domain_validates(ctx):
    p = ctx.run("explore", "--problem", ctx.source / "share/explorer/kmeans_problem.json",
                "--platform", ctx.source / "share/platforms/synthetic.platform",
                "--domains", ctx.source / "share/explorer/domains.json", "--ga", '{"population": 16}')
    expect_exit(p, 0)
    ctx.validate(json.loads(p.stdout), "explore.schema.json")


@case
def explore_no_memory(ctx):
    p = ctx.run("explore", "--problem", ctx.source / "share/explorer/kmeans_problem.json",
                "--platform", ctx.source / "share/platforms/no_memory.platform",
                "--domains", ctx.source / "share/explorer/domains.json")
    expect_exit(p, 1)
    doc = json.loads(p.stdout)
    ctx.validate(doc, "explore.schema.json")
    expect(doc["error"] == "no_feasible_config", doc)


@case
def bench_kmeans(ctx):
    out = ctx.work / "bench_kmeans.json"
    p = ctx.run("bench", "--suite", "kmeans", "--scale", "0.1", "--seed", 3, "--json", out)
    expect_exit(p, 0)
    doc = json.loads(out.read_text())
    ctx.validate(doc, "bench.schema.json")
    expect(0.0 < doc["measured_saving"] <= 1.0, doc["measured_saving"])
    expect(doc["oracle_match"] is True, doc)
    expect("kmeans" in p.stdout, p.stdout)


@case
def bench_is_deterministic(ctx):
    docs = []
    for i in range(2):
        out = ctx.work / f"bench_knn_{i}.json"
        expect_exit(ctx.run("bench", "--suite", "knn", "--scale", "0.05", "--seed", 9, "--json", out), 0)
        docs.append(out.read_text())
    expect(docs[0] == docs[1], "bench JSON differs between identical runs")
    ctx.validate(json.loads(docs[0]), "bench.schema.json")


@case
def bench_nbody(ctx):
    out = ctx.work / "bench_nbody.json"
    expect_exit(ctx.run("bench", "--suite", "nbody", "--scale", "0.05", "--json", out), 0)
    doc = json.loads(out.read_text())
    ctx.validate(doc, "bench.schema.json")
    expect(doc["oracle_match"] is True, doc)


@case
def bench_zero_scale(ctx):
    p = ctx.run("bench", "--suite", "kmeans", "--scale", "0")
    expect_exit(p, 2)
    expect("scale" in p.stderr, p.stderr)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--accd", required=True)
    ap.add_argument("--source", required=True)
    ap.add_argument("--work", required=True)
    ap.add_argument("case", choices=sorted(CASES))
    args = ap.parse_args()
    ctx = Ctx(args.accd, args.source, Path(args.work) / args.case)
    try:
        CASES[args.case](ctx)
    except AssertionError as e:
        print(f"FAIL {args.case}: {e}", file=sys.stderr)
        return 1
    print(f"ok {args.case}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
