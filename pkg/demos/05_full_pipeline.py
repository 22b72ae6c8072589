"""Run the whole pipeline on the bundled fixture in ``demos/data``.

The same run is available from the shell:

    wikicoverage all demos/data/pageviews-a.txt demos/data/pageviews-b.txt \\
        --dump demos/data/dump.json --readership demos/data/readership.csv \\
        --rules demos/data/rules.txt --languages en,de --out /tmp/coverage-report

Re-running with unchanged inputs reproduces the artifacts byte for byte.
"""

import json
import tempfile
from pathlib import Path

from wikicoverage import RunConfig, run_pipeline

DATA = Path(__file__).resolve().parent / "data"

config = RunConfig(
    out_dir=Path(tempfile.mkdtemp(prefix="coverage-report-")),
    languages=("en", "de"),
    dump=DATA / "dump.json",
    pageviews=(DATA / "pageviews-a.txt", DATA / "pageviews-b.txt"),
    readership=DATA / "readership.csv",
    rules=DATA / "rules.txt",
    scale="log",
)

result = run_pipeline(config)

print("artifacts:")
for name, path in sorted(result.artifacts.items()):
    print(f"  {name:10s} {path}")

print("\nranked coverage table:")
print((result.artifacts["table"].read_text(encoding="utf-8")).rstrip())

print("\ncluster aggregates:")
print((result.artifacts["clusters"].read_text(encoding="utf-8")).rstrip())

manifest = json.loads(result.artifacts["manifest"].read_text(encoding="utf-8"))
print("\nmanifest counts:", manifest["counts"])
print("manifest issues:", manifest["issues"])
