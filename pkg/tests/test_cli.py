import json
import os

import pytest

from bigraded.cli import main
from bigraded.docio import parse, serialize
from bigraded.rings import ZZ
from bigraded.bicomplex import Bicomplex, BicomplexMap
from bigraded.model import GeneratorRef, generator_map


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_then_check(tmp_path, capsys):
    f = str(tmp_path / "d.json")
    code, _, _ = run(capsys, "gen", "twisted-disc", "4", "0", "-o", f)
    assert code == 0
    code, out, _ = run(capsys, "check", f)
    assert code == 0
    assert "valid" in out


def test_check_rejects_garbage(tmp_path, capsys):
    f = str(tmp_path / "bad.json")
    with open(f, "w") as fh:
        fh.write("{nope")
    code, _, err = run(capsys, "check", f)
    assert code == 1
    assert "JSON" in err


def test_homology_output(tmp_path, capsys):
    f = str(tmp_path / "s.json")
    run(capsys, "gen", "sphere", "2", "1", "-o", f)
    code, out, _ = run(capsys, "homology", f)
    assert code == 0
    assert "3" in out and "k^1" in out


def test_e2_and_ss(tmp_path, capsys):
    f = str(tmp_path / "b.json")
    run(capsys, "gen", "twisted-boundary", "3", "0", "--ring", "Q", "-o", f)
    code, out, _ = run(capsys, "e2", f)
    assert code == 0 and "page 2" in out
    code, out, _ = run(capsys, "ss", f, "--max-page", "3")
    assert code == 0 and "stable from page" in out
    # field required
    f2 = str(tmp_path / "bz.json")
    run(capsys, "gen", "twisted-boundary", "3", "0", "-o", f2)
    code, _, err = run(capsys, "e2", f2)
    assert code == 1 and "field" in err


def test_tensor_roundtrip(tmp_path, capsys):
    a = str(tmp_path / "a.json")
    out = str(tmp_path / "t.json")
    run(capsys, "gen", "sphere", "0", "1", "--ring", "Q", "-o", a)
    code, _, _ = run(capsys, "tensor", a, a, "-o", out)
    assert code == 0
    obj = parse(open(out).read())
    assert dict(obj.ranks) == {(0, 2): 1}


def test_classify_quotient(tmp_path, capsys):
    from bigraded.bicomplex import bic_disc, v_boundary
    from bigraded.matrices import ExactMatrix

    d = bic_disc(2, 0, 1, ZZ)
    b = v_boundary(2, 1, 1, ZZ)
    g = BicomplexMap(d, b, {pq: ExactMatrix.identity(ZZ, 1) for pq in b.ranks})
    f = str(tmp_path / "g.json")
    with open(f, "w") as fh:
        fh.write(serialize(g))
    code, out, _ = run(capsys, "classify", f, "--structure", "ce")
    assert code == 0
    assert "fibration: false" in out
    assert "(2, 0)" in out


def test_lift_success_and_failure(tmp_path, capsys):
    i = generator_map(GeneratorRef("TotI_VBoundaryToDisc", 2, 0), ZZ)
    zero = Bicomplex(ZZ, {}, {}, {})
    sq = tmp_path / "sq"
    os.makedirs(sq)
    (sq / "i.json").write_text(serialize(i))
    (sq / "g.json").write_text(serialize(BicomplexMap(i.target, zero, {})))
    (sq / "u.json").write_text(serialize(i))
    (sq / "f.json").write_text(serialize(BicomplexMap(i.target, zero, {})))
    out = str(tmp_path / "h.json")
    code, _, _ = run(capsys, "lift", str(sq), "-o", out)
    assert code == 0
    h = parse(open(out).read())
    assert isinstance(h, BicomplexMap)
    # unsolvable: ask for a retraction
    (sq / "g.json").write_text(serialize(i))
    (sq / "u.json").write_text(serialize(BicomplexMap.identity(i.source)))
    (sq / "f.json").write_text(serialize(BicomplexMap.identity(i.target)))
    code, _, err = run(capsys, "lift", str(sq))
    assert code == 1 and "no lift" in err


def test_ce_resolve(tmp_path, capsys):
    from bigraded.chain import ChainComplex
    from bigraded.matrices import ExactMatrix

    c = ChainComplex(ZZ, {0: 1, 1: 1}, {1: ExactMatrix.from_rows(ZZ, [[2]])})
    f = str(tmp_path / "c.json")
    with open(f, "w") as fh:
        fh.write(serialize(c))
    out = str(tmp_path / "eps.json")
    code, _, _ = run(capsys, "ce-resolve", f, "-o", out)
    assert code == 0
    eps = parse(open(out).read())
    assert isinstance(eps, BicomplexMap)
    assert dict(eps.source.ranks) == {(0, 0): 2, (0, 1): 1, (1, 0): 1}


def test_gen_rejects_bad_parameters(capsys):
    code, _, err = run(capsys, "gen", "twisted-disc", "-1", "0")
    assert code == 1


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["classify", "x.json", "--structure", "banana"])
    assert info.value.code == 2


def test_verify_paper_small(capsys):
    code, out, _ = run(capsys, "verify-paper", "--max-p", "2", "--seed", "1")
    assert code == 0
    assert "7/7 checks passed" in out


def test_verify_paper_reproducible(capsys):
    _, out1, _ = run(capsys, "verify-paper", "--max-p", "1", "--seed", "3")
    _, out2, _ = run(capsys, "verify-paper", "--max-p", "1", "--seed", "3")
    assert out1 == out2
