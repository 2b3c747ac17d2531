"""
Driving the benchmark CLI from Python
=====================================

The ``neumann-filon`` command writes one CSV row per (method, omega, h)
point. Here it is called through ``main`` and the table is read back with
the csv module.
"""
import csv
import io
from contextlib import redirect_stdout

from neumann_filon.cli import main

buf = io.StringIO()
with redirect_stdout(buf):
    code = main(["compare", "--problem", "1", "--omega-list", "100,400",
                 "--h", "0.125", "--method", "nf3,m2,m4"])
print("exit code", code)

for row in csv.DictReader(io.StringIO(buf.getvalue())):
    print(f"{row['method']:4s} omega={float(row['omega']):5.0f}  l2_error={float(row['l2_error']):.3e}")
