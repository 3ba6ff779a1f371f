"""End-to-end checks of the kprab command-line tool (path in $KPRAB_CLI)."""
import json
import math
import os
import pathlib
import subprocess

import pytest

CLI = os.environ.get("KPRAB_CLI", "kprab")


def run(tmp_path, cfg, *args, env=None):
    path = tmp_path / "job.json"
    if isinstance(cfg, str):
        path.write_text(cfg, encoding="utf-8")
    else:
        path.write_text(json.dumps(cfg), encoding="utf-8")
    full_env = dict(os.environ)
    full_env.pop("KPRAB_THREADS", None)
    full_env.update(env or {})
    return subprocess.run([CLI, "--config", str(path), "--out", str(tmp_path / "out"), *args],
                          capture_output=True, text=True, env=full_env, timeout=300)


def is_shortest(text):
    # Python's repr is also the shortest round-trip form; it only adds ".0" to integers
    r = repr(float(text))
    return text == r or (r.endswith(".0") and text == r[:-2])


def read_csv(path):
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    return lines[0], [tuple(row.split(",")) for row in lines[1:]]


BASE = {"k": 1, "alpha": 1, "mu": 1, "gamma": 1, "omega": -1}


def test_minimal_eval(tmp_path):
    r = run(tmp_path, {"command": "eval", **BASE, "z": 1})
    assert r.returncode == 0, r.stderr
    assert float(r.stdout) == pytest.approx(math.e, rel=1e-14)
    header, rows = read_csv(tmp_path / "out" / "eval.csv")
    assert header == "x,value"
    assert rows == [("1", r.stdout.strip())]


def test_eval_range_is_shortest_round_trip(tmp_path):
    r = run(tmp_path, {"command": "eval", "k": 1.5, "alpha": 1.2, "mu": 0.9, "gamma": 0.5, "omega": 0,
                       "z_min": -5, "z_max": 5, "points": 41})
    assert r.returncode == 0, r.stderr
    _, rows = read_csv(tmp_path / "out" / "eval.csv")
    assert len(rows) == 41
    for i, (x, v) in enumerate(rows):
        assert is_shortest(v) and is_shortest(x)
        assert float(x) == pytest.approx(-5 + 0.25 * i)


def test_negative_mu_names_the_bound(tmp_path):
    r = run(tmp_path, {"command": "eval", **BASE, "mu": -1, "z": 1})
    assert r.returncode == 1
    assert "mu must be > 0" in r.stderr


def test_nu_out_of_range(tmp_path):
    r = run(tmp_path, {"command": "apply", "operator": "hilfer", **BASE, "mu": 0.5, "nu": 1.5,
                       "test_function": "t"})
    assert r.returncode == 1
    assert "nu must be in [0,1]" in r.stderr


def test_unknown_key_is_fatal(tmp_path):
    r = run(tmp_path, {"command": "eval", **BASE, "z": 1, "gama": 2})
    assert r.returncode == 1
    assert '"gama"' in r.stderr


def test_parse_error_reports_position(tmp_path):
    r = run(tmp_path, '{"command": "eval",\n "k": 1,\n "alpha": }')
    assert r.returncode == 1
    assert "line 3" in r.stderr and "column" in r.stderr


def test_nested_values_rejected(tmp_path):
    r = run(tmp_path, {"command": "eval", **BASE, "z": [1, 2]})
    assert r.returncode == 1
    assert '"z"' in r.stderr


def test_subcommand_must_match_config(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"command": "eval", **BASE, "z": 1}))
    r = subprocess.run([CLI, "transform", "--config", str(path)], capture_output=True, text=True)
    assert r.returncode == 1
    assert "does not match" in r.stderr


def test_transform_kernel(tmp_path):
    r = run(tmp_path, {"command": "transform", **BASE, "u": 2})
    assert r.returncode == 0, r.stderr
    assert float(r.stdout) == pytest.approx(1 / 3, rel=1e-15)


def test_transform_outside_convergence_domain(tmp_path):
    r = run(tmp_path, {"command": "transform", **BASE, "omega": -2, "u": 0.5})
    assert r.returncode == 1
    assert "convergence condition" in r.stderr


def test_transform_of_sampled_function(tmp_path):
    r = run(tmp_path, {"command": "transform", "kind": "sumudu", "target": "function", **BASE, "u": 0.5,
                       "test_function": "exp_neg", "t_end": 40, "grid_n": 8000})
    assert r.returncode == 0, r.stderr
    assert float(r.stdout) == pytest.approx(1 / 1.5, rel=1e-5)


def test_apply_integral_of_one(tmp_path):
    r = run(tmp_path, {"command": "apply", "operator": "integral", "k": 1.5, "alpha": 1.2, "mu": 0.9,
                       "gamma": 0.5, "omega": -0.3, "test_function": "one", "t_end": 2}, "--grid-n", "8")
    assert r.returncode == 0, r.stderr
    header, rows = read_csv(tmp_path / "out" / "apply.csv")
    assert header == "x,value"
    assert len(rows) == 9
    assert float(rows[4][1]) == pytest.approx(0.81593668408657932504, rel=1e-12)


def test_apply_reads_csv_input(tmp_path):
    data = tmp_path / "f.csv"
    xs = [i / 64 for i in range(129)]
    data.write_text("x,value\n" + "".join(f"{x!r},{1.0!r}\n" for x in xs), encoding="utf-8")
    cfg = {"command": "apply", "operator": "integral", "k": 1.5, "alpha": 1.2, "mu": 0.9, "gamma": 0.5,
           "omega": -0.3, "input": "f.csv"}
    r = run(tmp_path, cfg)
    assert r.returncode == 0, r.stderr
    from_csv = (tmp_path / "out" / "apply.csv").read_bytes()
    r = run(tmp_path, {**{k: v for k, v in cfg.items() if k != "input"}, "test_function": "one", "t_end": 2,
                       "grid_n": 128})
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "out" / "apply.csv").read_bytes() == from_csv


def test_csv_round_trip(tmp_path):
    # the CLI writes shortest round-trip decimals; feeding its output back in must not change a bit
    cfg = {"command": "apply", "operator": "integral", "k": 1.5, "alpha": 1.2, "mu": 0.9, "gamma": 0.5,
           "omega": -0.3, "test_function": "sin", "t_end": 2, "grid_n": 64}
    assert run(tmp_path, cfg).returncode == 0
    first = tmp_path / "first.csv"
    first.write_bytes((tmp_path / "out" / "apply.csv").read_bytes())
    _, rows = read_csv(first)
    assert all(is_shortest(v) for _, v in rows)
    second = {k: v for k, v in cfg.items() if k not in ("test_function", "t_end", "grid_n")}
    assert run(tmp_path, {**second, "input": "first.csv"}).returncode == 0
    again = tmp_path / "again.csv"
    again.write_bytes((tmp_path / "out" / "apply.csv").read_bytes())
    # P(first) read from CSV equals P applied to the in-memory samples of first
    third_in = tmp_path / "third.csv"
    third_in.write_text("x,value\n" + "".join(f"{float(x)!r},{float(v)!r}\n" for x, v in rows), encoding="utf-8")
    assert run(tmp_path, {**second, "input": "third.csv"}).returncode == 0
    assert (tmp_path / "out" / "apply.csv").read_bytes() == again.read_bytes()


def test_relaxation(tmp_path):
    r = run(tmp_path, {"command": "solve-relaxation", "k": 1.3, "alpha": 1, "mu": 0.6, "gamma": 0.2,
                       "omega": -0.2, "nu": 0.4, "lambda": -0.5, "delta": 0.1, "K_init": 1, "t_end": 2},
            "--grid-n", "256")
    assert r.returncode == 0, r.stderr
    header, rows = read_csv(tmp_path / "out" / "relaxation.csv")
    assert header == "x,value"
    assert len(rows) == 257
    assert "residual" in r.stderr


def gaussian_csv(path):
    n, span = 256, 32.0
    lines = ["x,value"]
    for i in range(n + 1):
        x = -span / 2 + span * i / n
        lines.append(f"{x!r},{math.exp(-x * x / 8)!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


DIFFUSION = {"command": "solve-diffusion", "k": 2, "alpha": 1.5, "mu": 1.2, "gamma": 0.3, "omega": -0.2,
             "nu": 0.5, "K_diff": 1, "profile": "g.csv", "times": "0.1,0.25,0.5"}


def test_diffusion_writes_one_file_per_time(tmp_path):
    gaussian_csv(tmp_path / "g.csv")
    r = run(tmp_path, DIFFUSION)
    assert r.returncode == 0, r.stderr
    names = sorted(p.name for p in (tmp_path / "out").iterdir())
    assert names == ["u_t0.1.csv", "u_t0.25.csv", "u_t0.5.csv"]
    mass = []
    for name in names:
        header, rows = read_csv(tmp_path / "out" / name)
        assert header == "x,u"
        assert len(rows) == 257
        u = [float(v) for _, v in rows]
        mass.append(sum(u) - 0.5 * (u[0] + u[-1]))
        assert max(u) < 1.0
    assert max(mass) - min(mass) < 1e-8 * mass[0]


def test_outputs_are_deterministic_across_threads(tmp_path):
    gaussian_csv(tmp_path / "g.csv")
    assert run(tmp_path, DIFFUSION, "--threads", "1").returncode == 0
    one = {p.name: p.read_bytes() for p in (tmp_path / "out").iterdir()}
    assert run(tmp_path, DIFFUSION, "--threads", "auto").returncode == 0
    assert {p.name: p.read_bytes() for p in (tmp_path / "out").iterdir()} == one
    assert run(tmp_path, DIFFUSION, env={"KPRAB_THREADS": "3"}).returncode == 0
    assert {p.name: p.read_bytes() for p in (tmp_path / "out").iterdir()} == one


def test_bad_thread_settings(tmp_path):
    r = run(tmp_path, {"command": "eval", **BASE, "z": 1}, "--threads", "many")
    assert r.returncode == 1 and "--threads" in r.stderr
    r = run(tmp_path, {"command": "eval", **BASE, "z": 1}, env={"KPRAB_THREADS": "0"})
    assert r.returncode == 1 and "KPRAB_THREADS" in r.stderr


def test_missing_input_file(tmp_path):
    r = run(tmp_path, {"command": "solve-diffusion", **BASE, "mu": 0.5, "nu": 0.5, "K_diff": 1,
                       "profile": "nope.csv", "times": "1"})
    assert r.returncode == 1
    assert "profile file not found" in r.stderr


def test_unresolvable_diffusion_mode_is_a_convergence_error(tmp_path):
    n, span = 256, 20.0
    rows = ["x,value"] + [f"{-span / 2 + span * i / n!r},{math.exp(-(-span / 2 + span * i / n) ** 2)!r}"
                          for i in range(n + 1)]
    (tmp_path / "g.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    r = run(tmp_path, {**DIFFUSION, "times": "1", "modes": 64})
    assert r.returncode == 1
    assert "convergence error" in r.stderr and "mode p=" in r.stderr
