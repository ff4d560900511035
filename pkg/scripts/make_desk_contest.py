#!/usr/bin/env python3
"""Generate the shipped desk-scale contest: 12 toy problems (3 per level),
hint corpora, lexicon, and the canned-solution book.

Deterministic: re-running produces byte-identical output.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DESK = ROOT / "contests" / "desk"

MOD = 10**9 + 7


def fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, (a + b) % MOD
    return a


def gcd_list(xs):
    from math import gcd
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g


def nth_prime(n):
    primes = []
    x = 2
    while len(primes) < n:
        if all(x % p for p in primes):
            primes.append(x)
        x += 1
    return primes[-1]


def subset_count(xs, target):
    count = 0
    for mask in range(1 << len(xs)):
        s = sum(x for i, x in enumerate(xs) if mask >> i & 1)
        if s == target:
            count += 1
    return count


# problem id -> (level, statement, solution_source, [(in, out), ...] hidden,
#                [(in, out), ...] samples)
def build_problems():
    problems = {}

    sol_sum = "a, b = map(int, input().split())\nprint(a + b)\n"
    cases = [(1, 2), (10, 20), (150, 7), (999, 1), (123456, 654321)]
    problems["b01_sum"] = dict(
        level="bronze",
        statement=(
            "# Pair Sum\n\nRead two integers A and B on one line and print"
            " their sum.\n\nA straightforward warm-up: no data structures"
            " needed, just careful input parsing.\n\nInput: one line with A"
            " and B (0 <= A, B <= 1000000).\nOutput: A + B.\n"),
        solution=sol_sum,
        hidden=[(f"{a} {b}\n", f"{a+b}\n") for a, b in cases],
        samples=[("1 2\n", "3\n")],
        easiest_bronze=True,
    )

    sol_max = "n = int(input())\nxs = list(map(int, input().split()))\nprint(max(xs))\n"
    data = [[3, 1, 4, 1, 5], [9], [2, 7, 1, 8, 2, 8], [10, 10, 10]]
    problems["b02_max"] = dict(
        level="bronze",
        statement=(
            "# Largest Entry\n\nGiven N integers, print the largest one.\n\n"
            "A complete search over the list suffices: scan every element"
            " and keep the maximum.\n\nInput: N, then one line of N"
            " integers.\nOutput: the maximum value.\n"),
        solution=sol_max,
        hidden=[(f"{len(xs)}\n{' '.join(map(str, xs))}\n", f"{max(xs)}\n")
                for xs in data],
        samples=[("3\n1 2 3\n", "3\n")],
    )

    sol_parity = "n = int(input())\nprint('even' if n % 2 == 0 else 'odd')\n"
    problems["b03_parity"] = dict(
        level="bronze",
        statement=(
            "# Odd One Out\n\nPrint 'even' if the given integer is even,"
            " otherwise 'odd'.\n\nInput: a single integer N.\nOutput: the"
            " parity word.\n"),
        solution=sol_parity,
        hidden=[(f"{n}\n", ("even\n" if n % 2 == 0 else "odd\n"))
                for n in [0, 7, 42, 1001]],
        samples=[("4\n", "even\n")],
    )

    sol_sort = ("n = int(input())\nxs = sorted(map(int, input().split()))\n"
                "print(' '.join(map(str, xs)))\n")
    data = [[5, 3, 1], [9, 9, 1, 4], [2], [7, 6, 5, 4, 3, 2, 1]]
    problems["s01_sort"] = dict(
        level="silver",
        statement=(
            "# Ordered Herd\n\nSort N integers in non-decreasing order.\n\n"
            "Classic sorting exercise; any O(N log N) sorting method"
            " works.\n\nInput: N, then N integers.\nOutput: the sorted"
            " list, space-separated.\n"),
        solution=sol_sort,
        hidden=[(f"{len(xs)}\n{' '.join(map(str, xs))}\n",
                 f"{' '.join(map(str, sorted(xs)))}\n") for xs in data],
        samples=[("3\n3 1 2\n", "1 2 3\n")],
    )

    sol_distinct = ("n = int(input())\nxs = set(input().split())\nprint(len(xs))\n")
    data = [[1, 1, 2], [4, 4, 4, 4], [1, 2, 3, 4, 5], [8, 3, 8, 3, 9]]
    problems["s02_distinct"] = dict(
        level="silver",
        statement=(
            "# Distinct Tags\n\nCount the distinct values among N"
            " integers.\n\nSorting the values or using two pointers over"
            " the sorted list both work.\n\nInput: N, then N integers.\n"
            "Output: the number of distinct values.\n"),
        solution=sol_distinct,
        hidden=[(f"{len(xs)}\n{' '.join(map(str, xs))}\n",
                 f"{len(set(xs))}\n") for xs in data],
        samples=[("3\n1 1 2\n", "2\n")],
    )

    sol_reverse = "s = input()\nprint(s[::-1])\n"
    words = ["abc", "racecar", "xy", "competitive"]
    problems["s03_reverse"] = dict(
        level="silver",
        statement=(
            "# Mirror Word\n\nPrint the input string reversed.\n\nInput:"
            " one line with a lowercase word.\nOutput: the word"
            " reversed.\n"),
        solution=sol_reverse,
        hidden=[(f"{w}\n", f"{w[::-1]}\n") for w in words],
        samples=[("abc\n", "cba\n")],
    )

    sol_fib = (
        "n = int(input())\nMOD = 10**9 + 7\na, b = 0, 1\n"
        "for _ in range(n):\n    a, b = b, (a + b) % MOD\nprint(a)\n")
    ns = [1, 10, 50, 1000]
    problems["g01_fib"] = dict(
        level="gold",
        statement=(
            "# Fence Hops\n\nCompute the Nth Fibonacci number modulo"
            " 1000000007.\n\nA dynamic programming recurrence over the"
            " last two values runs in O(N).\n\nInput: N (1 <= N <="
            " 100000).\nOutput: F(N) mod 1000000007 with F(1) = 1.\n"),
        solution=sol_fib,
        hidden=[(f"{n}\n", f"{fib(n)}\n") for n in ns],
        samples=[("6\n", "8\n")],
    )

    sol_gcd = ("import math\nn = int(input())\nxs = list(map(int,"
               " input().split()))\ng = 0\nfor x in xs:\n    g = math.gcd(g,"
               " x)\nprint(g)\n")
    data = [[12, 18], [7, 13], [100, 250, 300], [42]]
    problems["g02_gcd"] = dict(
        level="gold",
        statement=(
            "# Shared Measure\n\nCompute the gcd of N integers.\n\nNumber"
            " theory basics: fold the Euclidean gcd across the list.\n\n"
            "Input: N, then N integers.\nOutput: their gcd.\n"),
        solution=sol_gcd,
        hidden=[(f"{len(xs)}\n{' '.join(map(str, xs))}\n",
                 f"{gcd_list(xs)}\n") for xs in data],
        samples=[("2\n4 6\n", "2\n")],
    )

    sol_range = (
        "import sys\ndata = sys.stdin.read().split()\nidx = 0\n"
        "n = int(data[idx]); idx += 1\nq = int(data[idx]); idx += 1\n"
        "xs = [int(data[idx + i]) for i in range(n)]; idx += n\n"
        "prefix = [0]\nfor x in xs:\n    prefix.append(prefix[-1] + x)\n"
        "out = []\nfor _ in range(q):\n    l = int(data[idx]); idx += 1\n"
        "    r = int(data[idx]); idx += 1\n"
        "    out.append(str(prefix[r] - prefix[l - 1]))\n"
        "print('\\n'.join(out))\n")

    def range_case(xs, queries):
        lines = [f"{len(xs)} {len(queries)}", " ".join(map(str, xs))]
        lines += [f"{l} {r}" for l, r in queries]
        answers = [str(sum(xs[l - 1:r])) for l, r in queries]
        return "\n".join(lines) + "\n", "\n".join(answers) + "\n"

    problems["g03_range"] = dict(
        level="gold",
        statement=(
            "# Hay Windows\n\nAnswer Q range-sum queries over an array of"
            " N integers.\n\nPrecompute prefix sums so each query is O(1);"
            " a segment tree also works but is overkill here.\n\nInput: N"
            " Q, the array, then Q lines 'l r' (1-based, inclusive).\n"
            "Output: one sum per query.\n"),
        solution=sol_range,
        hidden=[
            range_case([1, 2, 3, 4, 5], [(1, 5), (2, 3)]),
            range_case([10, -2, 7], [(1, 1), (1, 3), (3, 3)]),
            range_case([5] * 8, [(2, 7), (1, 8)]),
        ],
        samples=[range_case([1, 2, 3], [(1, 2)])],
    )

    sol_pow = "a, b, m = map(int, input().split())\nprint(pow(a, b, m))\n"
    cases = [(2, 10, 1000), (3, 0, 7), (123, 456, 789), (5, 100, 10007)]
    problems["p01_pow"] = dict(
        level="platinum",
        statement=(
            "# Tower Mod\n\nCompute A^B mod M.\n\nModular exponentiation"
            " by repeated squaring runs in O(log B).\n\nInput: A B M on"
            " one line.\nOutput: A^B mod M.\n"),
        solution=sol_pow,
        hidden=[(f"{a} {b} {m}\n", f"{pow(a, b, m)}\n") for a, b, m in cases],
        samples=[("2 3 5\n", "3\n")],
    )

    sol_prime = (
        "n = int(input())\nprimes = []\nx = 2\n"
        "while len(primes) < n:\n"
        "    if all(x % p for p in primes):\n        primes.append(x)\n"
        "    x += 1\nprint(primes[-1])\n")
    ns = [1, 10, 100, 500]
    problems["p02_prime"] = dict(
        level="platinum",
        statement=(
            "# Prime Parade\n\nPrint the Nth prime number.\n\nA sieve of"
            " Eratosthenes or trial division against earlier primes both"
            " fit the limits.\n\nInput: N (1 <= N <= 2000).\nOutput: the"
            " Nth prime.\n"),
        solution=sol_prime,
        hidden=[(f"{n}\n", f"{nth_prime(n)}\n") for n in ns],
        samples=[("3\n", "5\n")],
    )

    sol_subset = (
        "n, target = map(int, input().split())\n"
        "xs = list(map(int, input().split()))\ncount = 0\n"
        "for mask in range(1 << n):\n"
        "    s = sum(x for i, x in enumerate(xs) if mask >> i & 1)\n"
        "    if s == target:\n        count += 1\nprint(count)\n")
    data = [([1, 2, 3], 3), ([2, 2, 2, 2], 4), ([5, 9, 1, 3, 4], 9),
            ([7], 0)]
    problems["p03_subset"] = dict(
        level="platinum",
        statement=(
            "# Feed Mix\n\nCount the subsets of N integers whose sum is"
            " exactly T.\n\nWith N <= 20 a complete search over all bitmask"
            " subsets is fast enough.\n\nInput: N T, then N integers.\n"
            "Output: the number of subsets summing to T (the empty subset"
            " counts when T = 0).\n"),
        solution=sol_subset,
        hidden=[(f"{len(xs)} {t}\n{' '.join(map(str, xs))}\n",
                 f"{subset_count(xs, t)}\n") for xs, t in data],
        samples=[("3 3\n1 2 3\n", "2\n")],
    )

    return problems


# Adversarial variants keyed by problem, used by the book and judge tests.
WRONG_SUM = (
    "a, b = map(int, input().split())\n"
    "if a > 100:\n    print(a - b)\nelse:\n    print(a + b)\n")
WRONG_FIB = (
    "n = int(input())\nMOD = 10**9 + 7\na, b = 0, 1\n"
    "for _ in range(n):\n    a, b = b, (a + b) % MOD\n"
    "print(a + 1 if n > 20 else a)\n")
SLEEPER = "import time\ntime.sleep(60)\n"
ALLOCATOR = "xs = [0] * (10**9)\nprint(len(xs))\n"
BROKEN_CPP = "#include <iostream>\nint main() { std::cout << 1 }\n"


def write_problem(pid, spec):
    pdir = DESK / "problems" / pid
    (pdir / "samples").mkdir(parents=True, exist_ok=True)
    (pdir / "tests").mkdir(parents=True, exist_ok=True)
    (pdir / "statement.md").write_text(spec["statement"])
    meta = {"level": spec["level"], "time_limit_ms": 2000,
            "memory_limit_mib": 256}
    if spec.get("easiest_bronze"):
        meta["easiest_bronze"] = True
    (pdir / "meta").write_text(json.dumps(meta, indent=2) + "\n")
    for kind, cases in (("samples", spec["samples"]), ("tests", spec["hidden"])):
        for i, (case_in, case_out) in enumerate(cases, start=1):
            (pdir / kind / f"{i:02d}.in").write_text(case_in)
            (pdir / kind / f"{i:02d}.out").write_text(case_out)


def write_corpora():
    cdir = DESK / "corpora"
    cdir.mkdir(parents=True, exist_ok=True)

    strategy = {
        "title": "Contest strategy notes",
        "content": (
            "General approach: read every statement before coding; start"
            " with the easiest problems; always test against the provided"
            " samples before submitting. Debugging checklist: check input"
            " parsing, off-by-one errors in loops and ranges, integer"
            " overflow, and output formatting (trailing spaces and"
            " newlines). Budget your time: a stuck problem costs more than"
            " a skipped one, and wrong submissions carry penalties."),
    }
    (cdir / "strategy.json").write_text(json.dumps(strategy, indent=2) + "\n")

    textbook = [
        ("tb01", "Sorting fundamentals",
         "Sorting arranges values in order. Comparison sorting runs in"
         " O(N log N); counting sort is linear for small value ranges."
         " Many problems become easy once the input is sorted."),
        ("tb02", "Binary search",
         "Binary search finds a target in a sorted array by halving the"
         " candidate range each step. It also locates boundaries:"
         " the first true in a monotone predicate."),
        ("tb03", "Prefix sums",
         "Prefix sums precompute cumulative totals so any range sum is"
         " the difference of two prefix values. Build in O(N), query in"
         " O(1). A staple for subarray and range query problems."),
        ("tb04", "Segment tree",
         "A segment tree stores interval aggregates in a binary tree,"
         " supporting point updates and range queries in O(log N)."
         " Lazy propagation extends it to range updates."),
        ("tb05", "Segment tree lazy propagation",
         "Lazy propagation defers range updates in a segment tree by"
         " storing pending deltas on internal nodes, pushing them down"
         " only when needed."),
        ("tb06", "Dynamic programming",
         "Dynamic programming solves problems by combining answers to"
         " overlapping subproblems, stored in a table. Linear"
         " recurrences such as Fibonacci are the simplest examples."),
        ("tb07", "Number theory and gcd",
         "The Euclidean algorithm computes the gcd by repeated"
         " remainders. Number theory contest staples include gcd, lcm,"
         " and modular arithmetic."),
        ("tb08", "Modular exponentiation",
         "Modular exponentiation computes a^b mod m by repeated"
         " squaring in O(log b), the core of many number theory and"
         " cryptography tasks."),
        ("tb09", "Sieve of Eratosthenes",
         "The sieve marks composite numbers by striking out multiples"
         " of each prime, producing all primes up to N in"
         " O(N log log N)."),
        ("tb10", "Complete search",
         "Complete search (brute force) enumerates every candidate"
         " solution, often over bitmask subsets. With small limits it"
         " is the simplest correct approach."),
        ("tb11", "Graphs and shortest path",
         "A graph is a set of nodes and edges. Breadth-first search"
         " finds shortest path distances in unweighted graphs;"
         " Dijkstra handles weighted ones."),
        ("tb12", "Two pointers",
         "The two pointers technique slides a pair of indices across a"
         " sorted array to count pairs or shrink windows without"
         " nested loops."),
    ]
    with (cdir / "textbook.jsonl").open("w") as fh:
        for doc_id, title, body in textbook:
            fh.write(json.dumps({
                "doc_id": doc_id, "kind": "textbook_section",
                "title": title, "body": body,
            }) + "\n")

    library = [
        {"doc_id": "lib01", "kind": "library_problem",
         "title": "Pair Sum (archive twin)",
         "body": "Read two integers A and B and print their sum."
                 " Solution: parse the line, output A + B. Careful input"
                 " parsing is the whole task.",
         "tags": {"difficulty": "Bronze", "knowledge": ["implementation"]},
         "contest_id": "archive"},
        {"doc_id": "lib02", "kind": "library_problem",
         "title": "Pair Sum (live twin)",
         "body": "Read two integers A and B and print their sum. This is"
                 " the live-contest copy and must never be returned as a"
                 " hint.",
         "tags": {"difficulty": "Bronze", "knowledge": ["implementation"]},
         "contest_id": "desk"},
        {"doc_id": "lib03", "kind": "library_problem",
         "title": "Subset picking drill",
         "body": "Count subsets of up to 20 numbers with a given total."
                 " Solution: complete search over bitmasks, summing each"
                 " subset. Complexity O(2^N * N).",
         "tags": {"difficulty": "Bronze", "knowledge": ["complete search"]},
         "contest_id": "archive"},
        {"doc_id": "lib04", "kind": "library_problem",
         "title": "Range sum workbook",
         "body": "Answer many range sum queries over a static array."
                 " Solution: prefix sums give O(1) per query after an"
                 " O(N) build.",
         "tags": {"difficulty": "Silver", "knowledge": ["prefix sums"]},
         "contest_id": "archive"},
        {"doc_id": "lib05", "kind": "library_problem",
         "title": "Sorted order check",
         "body": "Sort a list and report distinct counts. Solution: sort,"
                 " then sweep with two pointers counting unique runs.",
         "tags": {"difficulty": "Silver", "knowledge": ["sorting"]},
         "contest_id": "archive"},
        {"doc_id": "lib06", "kind": "library_problem",
         "title": "Fibonacci ladders",
         "body": "Count ways to climb stairs, a Fibonacci recurrence."
                 " Solution: dynamic programming over the last two"
                 " values, modulo a large prime.",
         "tags": {"difficulty": "Gold", "knowledge": ["dynamic programming"]},
         "contest_id": "archive"},
        {"doc_id": "lib07", "kind": "library_problem",
         "title": "Power tower",
         "body": "Compute huge modular powers. Solution: modular"
                 " exponentiation by repeated squaring.",
         "tags": {"difficulty": "Platinum",
                  "knowledge": ["modular exponentiation"]},
         "contest_id": "archive"},
        {"doc_id": "lib08", "kind": "library_problem",
         "title": "Prime hunting",
         "body": "Find primes quickly under a bound. Solution: sieve of"
                 " Eratosthenes, then index into the prime list.",
         "tags": {"difficulty": "Platinum", "knowledge": ["sieve"]},
         "contest_id": "archive"},
    ]
    with (cdir / "library.jsonl").open("w") as fh:
        for doc in library:
            fh.write(json.dumps(doc) + "\n")

    lexicon = [
        "segment tree", "binary search", "prefix sums", "sorting",
        "dynamic programming", "gcd", "number theory",
        "modular exponentiation", "sieve", "complete search", "bitmask",
        "graph", "shortest path", "two pointers",
    ]
    (cdir / "lexicon.txt").write_text("\n".join(lexicon) + "\n")


def write_book(problems):
    book = {"base_tokens": {"input": 200, "output": 50}, "problems": {}}
    for pid, spec in problems.items():
        entries = []
        # b01 and g01 carry a wrong-first attempt so penalties get exercised
        if pid == "b01_sum":
            entries.append({"source": WRONG_SUM, "language": "python3",
                            "expected_verdict": "WA",
                            "tokens": {"input": 900, "output": 300}})
        if pid == "g01_fib":
            entries.append({"source": WRONG_FIB, "language": "python3",
                            "expected_verdict": "WA",
                            "tokens": {"input": 1100, "output": 350}})
        entries.append({"source": spec["solution"], "language": "python3",
                        "expected_verdict": "AC",
                        "tokens": {"input": 1200, "output": 400}})
        book["problems"][pid] = entries
    (DESK / "book.json").write_text(json.dumps(book, indent=2) + "\n")


def write_manifest():
    manifest = {
        "contest_id": "desk",
        "config": {
            "credit_limit": 20000000,
            "score_weights": {"Bronze": 1, "Silver": 2, "Gold": 5,
                              "Platinum": 10},
            "hint_costs": [500, 1000, 1000, 1500, 1500],
            "test_cost": 10,
            "penalty_schedule": {"WA": 100, "RE": 100, "CE": 100,
                                 "TLE": 100, "MLE": 100},
            "alpha": 0.0,
            "problem_distribution": {"Bronze": 3, "Silver": 3, "Gold": 3,
                                     "Platinum": 3},
            "agent_turn_timeout": 300.0,
            "rng_seed": 0,
        },
        "corpora": {
            "strategy": "corpora/strategy.json",
            "textbook": "corpora/textbook.jsonl",
            "library": "corpora/library.jsonl",
            "lexicon": "corpora/lexicon.txt",
        },
    }
    (DESK / "contest.json").write_text(json.dumps(manifest, indent=2) + "\n")

    agents = {
        "greedy": {"kind": "GreedyEasiest", "book_path": "book.json"},
        "terminate": {"kind": "TerminateNow", "book_path": "book.json"},
        "random": {"kind": "RandomWalk", "book_path": "book.json"},
        "speedy": {"kind": "SpeedySpendthrift", "parameters": {"workers": 8},
                   "book_path": "book.json"},
        "frugal": {"kind": "FrugalPerfectionist", "parameters": {"workers": 1},
                   "book_path": "book.json"},
        "costaware": {"kind": "CostAwareStrategist",
                      "parameters": {"workers": 4, "reserve_fraction": 0.25},
                      "book_path": "book.json"},
    }
    (DESK / "agents.json").write_text(json.dumps(agents, indent=2) + "\n")

    variants = {
        "wrong_sum.py": WRONG_SUM,
        "wrong_fib.py": WRONG_FIB,
        "sleeper.py": SLEEPER,
        "allocator.py": ALLOCATOR,
        "broken.cpp": BROKEN_CPP,
    }
    vdir = DESK / "variants"
    vdir.mkdir(parents=True, exist_ok=True)
    for name, source in variants.items():
        (vdir / name).write_text(source)


def main():
    if DESK.exists():
        shutil.rmtree(DESK)
    problems = build_problems()
    for pid, spec in problems.items():
        write_problem(pid, spec)
    write_corpora()
    write_book(problems)
    write_manifest()
    print(f"wrote {DESK}")


if __name__ == "__main__":
    sys.exit(main())
