import json

import pytest

from segcrawl.cli import main

PRICE_RULE = '[{"name": "price", "pattern": "price:\\\\s*(\\\\d+)", "group": 1, "max_matches": null}]'
TOKEN_RULE = '[{"name": "token", "pattern": "token: ([0-9a-f]+)"}]'


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def crawl_args(urls, rules, out, *extra):
    return ["crawl", "--urls", str(urls), "--rules", str(rules), "--out", str(out), *extra]


def test_version_flag(capsys):
    assert main(["--version"]) == 0
    assert "segcrawl 0.1.0" in capsys.readouterr().out


def test_unknown_flag_is_usage_error(capsys):
    assert main(["crawl", "--frobnicate"]) == 2


def test_crawl_over_fixture_server(fixture_server, tmp_path, capsys):
    urls = write(tmp_path / "urls.txt", "\n".join(
        fixture_server.url_for(p) for p in ("/a", "/b", "/c")) + "\n")
    rules = write(tmp_path / "rules.json", PRICE_RULE)
    out = tmp_path / "out"
    code = main(crawl_args(urls, rules, out, "-n", "2", "-m", "2", "-k", "2",
                           "--fetcher", "live", "--allow-live"))
    assert code == 0
    stdout = capsys.readouterr().out
    assert "config: n=2 m=2 k=2" in stdout
    assert "fetched_ok=3 fetched_failed=0 records=3" in stdout

    records = [json.loads(line) for line in
               (out / "records.jsonl").read_text(encoding="utf-8").splitlines()]
    assert records == [
        {"url": fixture_server.url_for("/a"), "index": 0, "rule": "price",
         "value": "10", "segment": 0},
        {"url": fixture_server.url_for("/b"), "index": 1, "rule": "price",
         "value": "250", "segment": 0},
        {"url": fixture_server.url_for("/b"), "index": 1, "rule": "price",
         "value": "300", "segment": 0},
    ]
    assert (out / "errors.jsonl").read_text(encoding="utf-8") == ""
    timing_lines = (out / "timings.csv").read_text(encoding="utf-8").splitlines()
    assert timing_lines[0] == "group_id,start_ms,end_ms,duration_ms"
    assert len(timing_lines) == 3  # header + 2 groups


def test_crawl_empty_urls_file(tmp_path):
    urls = write(tmp_path / "urls.txt", "# only a comment\n\n")
    rules = write(tmp_path / "rules.json", PRICE_RULE)
    out = tmp_path / "out"
    assert main(crawl_args(urls, rules, out)) == 0
    assert (out / "records.jsonl").read_text(encoding="utf-8") == ""


def test_crawl_rejects_zero_groups(tmp_path, capsys):
    urls = write(tmp_path / "urls.txt", "http://site.test/a\n")
    rules = write(tmp_path / "rules.json", PRICE_RULE)
    assert main(crawl_args(urls, rules, tmp_path / "out", "-n", "0")) == 2


def test_crawl_missing_file(tmp_path):
    rules = write(tmp_path / "rules.json", PRICE_RULE)
    assert main(crawl_args(tmp_path / "absent.txt", rules, tmp_path / "out")) == 2


def test_crawl_live_requires_opt_in(tmp_path):
    urls = write(tmp_path / "urls.txt", "http://site.test/a\n")
    rules = write(tmp_path / "rules.json", PRICE_RULE)
    assert main(crawl_args(urls, rules, tmp_path / "out", "--fetcher", "live")) == 2


def test_crawl_with_all_failures_still_succeeds(tmp_path, capsys):
    # nothing listens on the discard port; every fetch errors, none crash
    urls = write(tmp_path / "urls.txt",
                 "http://127.0.0.1:9/x\nhttp://127.0.0.1:9/y\n")
    rules = write(tmp_path / "rules.json", PRICE_RULE)
    out = tmp_path / "out"
    code = main(crawl_args(urls, rules, out, "--fetcher", "live", "--allow-live",
                           "--timeout-ms", "300", "--retries", "0"))
    assert code == 0
    errors = [json.loads(line) for line in
              (out / "errors.jsonl").read_text(encoding="utf-8").splitlines()]
    assert [e["index"] for e in errors] == [0, 1]
    assert all(e["status"] in ("connection_error", "timeout") for e in errors)


def test_crawl_is_deterministic_for_fixed_seed(tmp_path):
    urls = write(tmp_path / "urls.txt",
                 "\n".join(f"http://site.test/p{i}" for i in range(12)) + "\n")
    rules = write(tmp_path / "rules.json", TOKEN_RULE)
    outs = []
    for name in ("first", "second"):
        out = tmp_path / name
        assert main(crawl_args(urls, rules, out, "--seed", "123",
                               "--sim-latency-ms", "0", "-n", "3", "-m", "2", "-k", "2")) == 0
        outs.append(out)
    assert (outs[0] / "records.jsonl").read_bytes() == (outs[1] / "records.jsonl").read_bytes()
    assert (outs[0] / "errors.jsonl").read_bytes() == (outs[1] / "errors.jsonl").read_bytes()


# --- bench ---------------------------------------------------------------------

def bench_plan(tmp_path, **overrides):
    payload = {
        "sizes": [6],
        "configs": [{"n": 1, "m": 1, "k": 1}, {"n": 2, "m": 2, "k": 2}],
        "repetitions": 2,
        "fetcher": "simulated",
        "sim_profile": {"base_latency_ms": 0.0, "seed": 4},
    }
    payload.update(overrides)
    return write(tmp_path / "plan.json", json.dumps(payload))


def test_bench_writes_summary_timings_and_plots(tmp_path, capsys):
    plan = bench_plan(tmp_path)
    out_base = tmp_path / "bench"
    assert main(["bench", "--plan", str(plan), "--out", str(out_base)]) == 0
    stdout = capsys.readouterr().out
    assert "config: n=1 m=1 k=1" in stdout
    assert "config: n=2 m=2 k=2" in stdout

    (run_dir,) = list(out_base.iterdir())
    summary = run_dir / "bench_summary.csv"
    lines = summary.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "experiment,n1m1k1,n2m2k2"
    assert len(lines) == 4  # header + 2 trials + average
    assert (run_dir / "timing_n1m1k1.csv").is_file()
    assert (run_dir / "timing_n2m2k2.csv").is_file()
    assert (run_dir / "plots" / "means.svg").is_file()
    assert (run_dir / "plots" / "single_vs_best.svg").is_file()


def test_bench_rejects_malformed_plan(tmp_path):
    plan = write(tmp_path / "plan.json", "{broken")
    assert main(["bench", "--plan", str(plan), "--out", str(tmp_path / "b")]) == 2


def test_bench_live_plan_requires_flag(tmp_path):
    urls = write(tmp_path / "urls.txt", "http://127.0.0.1:9/x\n")
    plan = bench_plan(tmp_path, fetcher="live", urls="urls.txt", sizes=[1])
    assert main(["bench", "--plan", str(plan), "--out", str(tmp_path / "b")]) == 2


# --- report ---------------------------------------------------------------------

def summary_csv(tmp_path, single="95.391", multi="18.027"):
    return write(tmp_path / "summary.csv",
                 "experiment,n1m1k1,n10m10k10\n"
                 f"1,{single},{multi}\n"
                 f"average,{single},{multi}\n")


def test_report_prints_saving_and_percent(tmp_path, capsys):
    summary = summary_csv(tmp_path)
    code = main(["report", "--summary", str(summary),
                 "--single", "n1m1k1", "--multi", "n10m10k10"])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "saved 77.364 s (81.10%)" in stdout
    assert (tmp_path / "comparison.svg").is_file()


def test_report_equal_columns(tmp_path, capsys):
    summary = summary_csv(tmp_path, single="5.000", multi="5.000")
    assert main(["report", "--summary", str(summary),
                 "--single", "n1m1k1", "--multi", "n10m10k10"]) == 0
    assert "saved 0.000 s (0.00%)" in capsys.readouterr().out


def test_report_zero_baseline_is_runtime_failure(tmp_path, capsys):
    summary = summary_csv(tmp_path, single="0.000", multi="0.000")
    assert main(["report", "--summary", str(summary),
                 "--single", "n1m1k1", "--multi", "n10m10k10"]) == 1


def test_report_missing_column_is_usage_error(tmp_path):
    summary = summary_csv(tmp_path)
    assert main(["report", "--summary", str(summary),
                 "--single", "n1m1k1", "--multi", "n9m9k9"]) == 2


def test_report_missing_file(tmp_path):
    assert main(["report", "--summary", str(tmp_path / "nope.csv"),
                 "--single", "a", "--multi", "b"]) == 2
