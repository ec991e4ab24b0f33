import os

from trojanclimb.harness.rundirs import make_rundir


def test_numbered(tmp_path):
    root = str(tmp_path / 'runinfo')
    first = make_rundir(root)
    second = make_rundir(root)
    assert os.path.basename(first) == '000'
    assert os.path.basename(second) == '001'
    assert os.path.isabs(first)


def test_continues_after_gaps(tmp_path):
    root = tmp_path / 'runinfo'
    (root / '007').mkdir(parents=True)
    (root / 'notes').mkdir()
    assert os.path.basename(make_rundir(str(root))) == '008'
