"""End-to-end checks of the goaltime command line.

usage: cli_test.py <goaltime binary> <report schema>
"""

import json
import math
import random
import subprocess
import sys
import tempfile
import unittest
import xml.etree.ElementTree as ET
from pathlib import Path

import jsonschema

BINARY = ""
SCHEMA = {}
FAST = ["--sims", "400", "--bootstrap-reps", "400", "-q"]


def run(*args):
    return subprocess.run([BINARY, *map(str, args)], capture_output=True, text=True)


def poisson(rng, lam):
    limit, k, p = math.exp(-lam), 0, 1.0
    while True:
        p *= rng.random()
        if p <= limit:
            return k
        k += 1


class CliTest(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self._tmp.name)
        rng = random.Random(7)
        self.counts = [poisson(rng, 22 if m <= 45 else 13.3 + 0.218 * m) for m in range(1, 91)]
        self.tallied = self.dir / "counts.csv"
        self.tallied.write_text("minute,count\n" + "".join(f"{m},{c}\n" for m, c in enumerate(self.counts, 1)))

    def tearDown(self):
        self._tmp.cleanup()

    def fit(self, out, *extra, source=None, fmt="tallied"):
        r = run("fit", "--input", source or self.tallied, "--format", fmt, "--output", out, *FAST, *extra)
        self.assertEqual(r.returncode, 0, r.stderr)
        return json.loads(Path(out).read_text())

    def test_report_matches_schema(self):
        report = self.fit(self.dir / "r.json")
        jsonschema.validate(report, SCHEMA)
        self.assertEqual(report["dataset"]["counts"], self.counts)
        halves = self.fit(self.dir / "h.json", "--loess-range", "halves", "--maxima-exclude", "18")
        jsonschema.validate(halves, SCHEMA)

    def test_report_is_byte_identical(self):
        self.fit(self.dir / "a.json")
        self.fit(self.dir / "b.json")
        self.fit(self.dir / "c.json", "--workers", "4")
        a = (self.dir / "a.json").read_bytes()
        self.assertEqual(a, (self.dir / "b.json").read_bytes())
        self.assertEqual(a, (self.dir / "c.json").read_bytes())
        self.fit(self.dir / "d.json", "--seed", "5")
        self.assertNotEqual(a, (self.dir / "d.json").read_bytes())

    def test_events_input_and_tally(self):
        rows = ["year,match_id,minute,period,goal_kind"]
        for m, c in enumerate(self.counts, 1):
            rows += [f"2010,M{m}-{i},{m},regular,goal" for i in range(c)]
        rows += ["2010,X1,90,additional,goal", "2010,X2,105,extra,penalty"]
        events = self.dir / "events.csv"
        events.write_text("\n".join(rows) + "\n")
        r = run("tally", "--input", events)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(r.stdout, self.tallied.read_text())
        from_events = self.fit(self.dir / "e.json", source=events, fmt="events")
        from_counts = self.fit(self.dir / "t.json")
        self.assertEqual(from_events, from_counts)

    def test_plots(self):
        report = self.dir / "r.json"
        self.fit(report)
        for kind in ["scatter_loess", "prob_vector", "blocks", "maxima_hist"]:
            a, b = self.dir / f"{kind}.svg", self.dir / f"{kind}2.svg"
            self.assertEqual(run("plot", "--report", report, "--kind", kind, "--output", a).returncode, 0)
            self.assertEqual(run("plot", "--report", report, "--kind", kind, "--output", b).returncode, 0)
            self.assertEqual(a.read_bytes(), b.read_bytes())
            root = ET.parse(a).getroot()
            self.assertTrue(root.tag.endswith("svg"))
        r = run("plot", "--report", report, "--kind", "pie", "--output", self.dir / "x.svg")
        self.assertEqual(r.returncode, 2)
        self.assertIn("maxima_hist", r.stderr)

    def test_sample(self):
        report = self.dir / "r.json"
        self.fit(report)
        empty = self.dir / "empty.csv"
        self.assertEqual(run("sample", "--report", report, "--n", 0, "--output", empty).returncode, 0)
        self.assertEqual(empty.read_text(), "time,minute\n")
        a = run("sample", "--report", report, "--n", 200, "--seed", 3)
        b = run("sample", "--report", report, "--n", 200, "--seed", 3)
        self.assertEqual(a.returncode, 0)
        self.assertEqual(a.stdout, b.stdout)
        lines = a.stdout.splitlines()
        self.assertEqual(len(lines), 201)
        for line in lines[1:]:
            t, minute = line.split(",")
            self.assertTrue(0.0 <= float(t) < 1.0)
            self.assertTrue(1 <= int(minute) <= 90)
        self.assertEqual(run("sample", "--report", report, "--n", -1).returncode, 2)

    def test_empty_half_is_a_data_error(self):
        zeros = self.dir / "zeros.csv"
        zeros.write_text("minute,count\n" + "".join(f"{m},0\n" for m in range(1, 91)))
        out = self.dir / "never.json"
        r = run("fit", "--input", zeros, "--format", "tallied", "--output", out)
        self.assertEqual(r.returncode, 3)
        self.assertIn("empty half", r.stderr)
        self.assertFalse(out.exists())

    def test_malformed_input(self):
        bad = self.dir / "bad.csv"
        bad.write_text("year,match_id,minute,period,goal_kind\n2010,A,12,regular,goal\n2010,B,x,regular,goal\n")
        r = run("fit", "--input", bad, "--output", self.dir / "o.json")
        self.assertEqual(r.returncode, 3)
        self.assertIn("line 3", r.stderr)
        r = run("fit", "--input", self.dir / "missing.csv", "--output", self.dir / "o.json")
        self.assertEqual(r.returncode, 3)
        self.assertFalse((self.dir / "o.json").exists())

    def test_usage_errors(self):
        self.assertEqual(run().returncode, 2)
        self.assertEqual(run("fit").returncode, 2)
        self.assertEqual(run("fit", "--input", self.tallied, "--bogus").returncode, 2)
        for extra in (["--blocks", "4"], ["--alpha", "2"], ["--loess-span", "0"], ["--drop-minutes", "50"],
                      ["--format", "xml"], ["--workers", "0"]):
            r = run("fit", "--input", self.tallied, "--format", "tallied", "--output", self.dir / "o.json", *extra)
            self.assertEqual(r.returncode, 2, extra)
        self.assertFalse((self.dir / "o.json").exists())


if __name__ == "__main__":
    BINARY = sys.argv[1]
    SCHEMA = json.loads(Path(sys.argv[2]).read_text())
    unittest.main(argv=[sys.argv[0]], verbosity=2)
