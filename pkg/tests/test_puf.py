import os
import random

import pytest

from fsmlock import (CrDatabase, CrDbError, CrPair, MockPuf, enroll, load_db,
                     mix64, respond, save_db)
from fsmlock.bits import BitString

# Frozen output of an independent scratch implementation of the mixing
# function, computed before this package was written.
RESPOND_1_2_64 = 2092789425003139053
DEVICE_ID_SEED_1 = "10451216379200822465"


def test_respond_matches_frozen_fixture():
    assert respond(MockPuf(1), 2, 64).value == RESPOND_1_2_64


def test_respond_is_deterministic():
    a = respond(MockPuf(7), 12345, 6)
    b = respond(MockPuf(7), 12345, 6)
    assert a == b


def test_respond_width_prefix_property():
    wide = respond(MockPuf(1), 2, 64)
    narrow = respond(MockPuf(1), 2, 6)
    assert narrow.value == wide.value & 0b111111
    beyond = respond(MockPuf(1), 2, 130)
    assert beyond.value & ((1 << 64) - 1) == wide.value


def test_respond_distinct_across_seeds():
    # at 64 bits, distinct devices answering alike would be a mixer bug
    rng = random.Random(42)
    seeds = {rng.getrandbits(64) for _ in range(1000)}
    responses = {respond(MockPuf(s), 5, 64).value for s in seeds}
    assert len(responses) == len(seeds)


def test_respond_validation():
    with pytest.raises(ValueError):
        respond(MockPuf(1), 2, 0)
    with pytest.raises(ValueError):
        respond(MockPuf(1), 2, 513)
    with pytest.raises(ValueError):
        respond(MockPuf(1), 1 << 64, 6)
    with pytest.raises(ValueError):
        MockPuf(-1)


def test_mix64_is_64_bit():
    assert 0 <= mix64(0) < 1 << 64
    assert mix64(1) == int(DEVICE_ID_SEED_1)


def test_enroll():
    device_id, pairs = enroll(1, [2, 3, 4], 6)
    assert device_id == DEVICE_ID_SEED_1
    assert [p.challenge for p in pairs] == [2, 3, 4]
    assert pairs[0].response == respond(MockPuf(1), 2, 6)
    assert enroll(1, [2, 3, 4], 6) == (device_id, pairs)
    with pytest.raises(ValueError):
        enroll(1, [], 6)


def test_database_add_and_lookup():
    db = CrDatabase()
    _, pairs = enroll(1, [2], 6)
    db.add("dev-a", pairs)
    assert db.pairs_for("dev-a") == tuple(pairs)
    with pytest.raises(ValueError):
        db.add("dev-a", pairs)
    with pytest.raises(ValueError):
        db.add("dev-b", [])
    with pytest.raises(KeyError):
        db.pairs_for("dev-b")


def test_database_roundtrip(tmp_path):
    db = CrDatabase()
    for seed in (1, 2):
        device_id, pairs = enroll(seed, [10, 11, 12], 8)
        db.add(device_id, pairs)
    path = os.path.join(tmp_path, "crdb.tsv")
    save_db(db, path)
    assert load_db(path).records == db.records


def test_database_empty_roundtrip(tmp_path):
    path = os.path.join(tmp_path, "empty.tsv")
    save_db(CrDatabase(), path)
    assert load_db(path).records == {}


def test_database_comments_and_blanks(tmp_path):
    path = os.path.join(tmp_path, "crdb.tsv")
    path_text = "# a comment\n\ndev\t000000000000000a\t0110\n"
    with open(path, "w") as handle:
        handle.write(path_text)
    db = load_db(path)
    assert db.records == {"dev": (CrPair(10, BitString.from_text("0110")),)}


def test_database_truncated_line_fails_whole_load(tmp_path):
    path = os.path.join(tmp_path, "crdb.tsv")
    with open(path, "w") as handle:
        handle.write("dev\t000000000000000a\t0110\ndev\t000000000000000b\n")
    with pytest.raises(CrDbError) as err:
        load_db(path)
    assert err.value.line == 2


def test_database_malformed_fields(tmp_path):
    path = os.path.join(tmp_path, "crdb.tsv")
    for bad in ("dev\tzz\t0110\n", "dev\t0a\t01x0\n", "\t0a\t0110\n"):
        with open(path, "w") as handle:
            handle.write(bad)
        with pytest.raises(CrDbError):
            load_db(path)


def test_save_is_atomic_replace(tmp_path):
    path = os.path.join(tmp_path, "crdb.tsv")
    db = CrDatabase()
    db.add("dev", [CrPair(1, BitString.from_text("01"))])
    save_db(db, path)
    save_db(db, path)  # overwrite goes through rename, not append
    assert load_db(path).records == db.records
    assert [name for name in os.listdir(tmp_path) if name.startswith("crdb.tsv.tmp")] == []
