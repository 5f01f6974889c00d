import pytest

from stabilis.cli import run
from stabilis.generators import fixture_suite, random_graph
from stabilis.graph import WeightedGraph, render_graph


@pytest.fixture
def write(tmp_path):
    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return put


def graph_file(write, G, name="g.txt"):
    return write(name, render_graph(G))


def test_greedy_on_edge(write, tmp_path, capsys):
    g = graph_file(write, fixture_suite("edge31"))
    cert = tmp_path / "c.txt"
    assert run(["solve", "--alg", "greedy", "--graph", g, "--out", str(cert)]) == 0
    out = capsys.readouterr().out
    assert "solution 1\n" in out
    assert "gamma 1" in cert.read_text()
    assert run(["verify", "--graph", g, "--cert", str(cert)]) == 0


def test_stability_star(write, capsys):
    g = graph_file(write, fixture_suite("star213"))
    assert run(["stability", "--graph", g]) == 0
    assert "threshold 3/2 witness 1" in capsys.readouterr().out


def test_gap_then_lp(write, tmp_path, capsys):
    inst = tmp_path / "gap.txt"
    assert run(["nmc", "gap", "--k", "3", "--epsilon", "1/2", "--out", str(inst)]) == 0
    assert run(["nmc", "lp", "--instance", str(inst)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "value 15/8"
    assert run(["nmc", "robust", "--instance", str(inst)]) == 2


CERTIFYING = [
    ["--alg", "greedy"], ["--alg", "modified-greedy"], ["--alg", "bf"],
    ["--alg", "certified", "--seed", "3"], ["--alg", "robust-deg"], ["--alg", "robust-lp"],
]


@pytest.mark.parametrize("flags", CERTIFYING, ids=lambda f: f[1])
@pytest.mark.parametrize("seed", range(4))
def test_solve_outputs_verify(write, tmp_path, capsys, flags, seed):
    G = random_graph(seed, 8, 0.35)
    if flags[1] == "bf":
        G = G.with_weights([1] * G.n)
    if flags[1] in ("robust-deg", "robust-lp"):
        from stabilis.generators import boost_to_stable
        G = boost_to_stable(G, G.max_degree + 1)
    g = graph_file(write, G)
    cert = tmp_path / "c.txt"
    assert run(["solve", "--graph", g, "--out", str(cert), *flags]) == 0
    capsys.readouterr()
    assert run(["verify", "--graph", g, "--cert", str(cert)]) == 0


def test_verify_rejects(write, capsys):
    g = graph_file(write, WeightedGraph.build(2, [(1, 2)], [1, 3]))
    c = write("c.txt", "solution 1\ngamma 1\n")
    assert run(["verify", "--graph", g, "--cert", c]) == 2


def test_not_stable_verdict(write, capsys):
    g = graph_file(write, fixture_suite("c5"))
    assert run(["solve", "--alg", "robust-lp", "--graph", g]) == 2
    assert capsys.readouterr().out.startswith("not-stable")


def test_errors_exit_one(write, capsys):
    assert run(["solve", "--alg", "nope", "--graph", "x"]) == 1
    assert run([]) == 1
    bad = write("bad.txt", "p edge 2 1\ne 1 9\n")
    assert run(["stability", "--graph", bad]) == 1
    assert run(["stability", "--graph", "/nonexistent/file"]) == 1
    assert run(["solve", "--alg", "greedy", "--graph", bad, "--epsilon", "0.5"]) == 1


def test_lp_and_estimate(write, capsys):
    g = graph_file(write, fixture_suite("c5"))
    assert run(["lp", "--graph", g]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "value 5/2"
    assert run(["estimate-vc", "--graph", g, "--beta", "3"]) == 0
    row = capsys.readouterr().out.splitlines()[1].split("\t")
    assert row[:5] == ["3/2", "5/2", "5/2", "5/2", "5"]


def test_gen_fixture_list(capsys):
    assert run(["gen", "fixture", "--list"]) == 0
    assert "petersen" in capsys.readouterr().out.split()
    assert run(["gen", "fixture", "--name", "matching-tight"]) == 1


def test_check_rounding_report(write, capsys):
    g = graph_file(write, fixture_suite("c5"))
    assert run(["check-rounding", "--scheme", "hochbaum", "--graph", g, "--trials", "400", "--seed", "1"]) == 0
    assert capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["solve", "--alg", "certified", "--seed", "5", "--trace"],
    ["nmc", "round", "--seed", "2"],
    ["gen", "planted", "--n", "9", "--k", "3", "--seed", "4"],
])
def test_deterministic_stdout(write, capsys, argv):
    if argv[0] == "nmc":
        path = write("i.txt", "")
        assert run(["nmc", "gap", "--k", "4", "--epsilon", "1/4", "--out", path]) == 0
        argv = argv + ["--instance", path]
    elif argv[0] == "solve":
        argv = argv + ["--graph", graph_file(write, random_graph(11, 9, 0.4))]
    capsys.readouterr()
    outs = []
    for _ in range(2):
        assert run(argv) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] and outs[0]
