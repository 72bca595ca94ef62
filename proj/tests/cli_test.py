import json
import os
import subprocess
import sys
import tempfile

BINARY = sys.argv[1]
DATA = sys.argv[2]
failures = []


def run(*args):
    return subprocess.run([BINARY, *args], capture_output=True, text=True)


def check(condition, message):
    if not condition:
        failures.append(message)


def alg(name):
    return os.path.join(DATA, name + ".alg")


r = run("validate", alg("sl2"))
check(r.returncode == 0 and "violations=0" in r.stdout, "validate sl2")

with tempfile.TemporaryDirectory() as tmp:
    perturbed = os.path.join(tmp, "perturbed.alg")
    with open(perturbed, "w") as f:
        f.write("dim 3\nbasis H E F\nbracket H E = 3 E\nbracket H F = -2 F\nbracket E F = 2 H\n")
    r = run("validate", perturbed)
    check(r.returncode == 1 and "jacobi" in r.stdout, "validate perturbed sl2")

    report = os.path.join(tmp, "report.txt")
    r = run("--output", report, "verify", "thm51", "--algebra", alg("aff1"))
    check(r.returncode == 0 and r.stdout == "", "verify with --output")
    with open(report) as f:
        check("verdict=MATCH" in f.read(), "report file content")

r = run("validate", "/nonexistent/algebra.alg")
check(r.returncode == 2, "missing file exits 2")

expected = ("theorem=5.1 algebra=aff1_lambda1 lambda=1 D=3 N=2 side_red=[1,0,0,0] "
            "side_inv=[1,0,0,0] verdict=MATCH backend=exact")
first = run("verify", "thm51", "--algebra", alg("aff1_lambda1"))
second = run("verify", "thm51", "--algebra", alg("aff1_lambda1"))
check(first.returncode == 0 and expected in first.stdout.splitlines(), "thm51 summary line")
check(first.stdout == second.stdout, "thm51 output is deterministic")

r = run("verify", "thm68", "--algebra", alg("aff1"), "--format", "json")
doc = json.loads(r.stdout)
check(r.returncode == 0 and doc["status"] == "pass" and "side_ext=[1,0,0,0]" in doc["summary"], "thm68 json")

r = run("verify", "prop33", "--algebra", alg("aff1_lambda1"))
check(r.returncode == 2, "prop33 refuses lambda != 0")

r = run("verify", "thm51", "--algebra", alg("aff1"), "--backend", "numeric")
check(r.returncode == 2 and "--seed" in r.stderr, "numeric run without seed")

args = ("star", "--algebra", alg("heisenberg"), "--f", "x^2", "--g", "y", "--order", "2",
        "--backend", "numeric", "--seed", "5", "--samples", "1000")
a, b = run(*args), run(*args)
check(a.returncode == 0 and a.stdout == b.stdout and "seed=5" in a.stdout, "seeded numeric star is reproducible")

r = run("star", "--algebra", alg("heisenberg"), "--f", "x", "--g", "y", "--order", "1")
check(r.returncode == 0 and "1/2*z*eps + 1*x*y" in r.stdout, "star product of generators")

r = run("graphs", "enum", "--n", "2")
check(r.returncode == 0 and "count=21" in r.stdout, "uncolored Q_2,2 count")
r = run("graphs", "enum", "--n", "2", "--colored")
check(r.returncode == 0 and "count=465" in r.stdout, "colored Q_2,2 count")
r = run("graphs", "enum", "--family", "B", "--i", "2")
check(r.returncode == 0 and "count=40" in r.stdout, "B_2 count")

r = run("weights", "--graph", "n1=1 n2=2 edges=(1,F1,.)(1,F2,.)", "--exact")
check(r.returncode == 0 and "1/2" in r.stdout, "exact weight lookup")

r = run("verify", "lemma41", "--algebra", alg("sl2_borel"))
check(r.returncode == 0, "lemma41 on the Borel subalgebra")

r = run("frobnicate")
check(r.returncode == 2, "unknown subcommand exits 2")

for message in failures:
    print("FAIL", message)
print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
