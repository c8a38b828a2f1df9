"""Smoke tests for the bdatp python extension."""

import json

import pytest

import bdatp


def test_bch_roundtrip_and_correction():
    params = bdatp.build_code(4, 2)
    assert (params.n, params.k_msg, params.d_min) == (15, 7, 5)
    message = bdatp.BitVec("1011001")
    codeword = bdatp.bch_encode(params, message)
    assert bdatp.is_codeword(params, codeword.bits)

    noisy = codeword.bits ^ bdatp.BitVec("010000000000100")
    decoded = bdatp.bch_decode(params, noisy)
    assert decoded is not None
    fixed, errors = decoded
    assert errors == 2
    assert fixed.bits == codeword.bits


def test_projection_is_seeded_and_orthonormal():
    key = bdatp.gen_matrix(7, 16, 8)
    again = bdatp.gen_matrix(7, 16, 8)
    assert key.rows == again.rows
    assert bdatp.orthonormality_defect(key) < 1e-9
    out = bdatp.project(key, [1.0] * 16)
    assert len(out.values) == 8
    with pytest.raises(ValueError):
        bdatp.gen_matrix(1, 4, 8)


def test_commitment_accepts_within_t_only():
    params = bdatp.build_code(4, 2)
    template = bdatp.BitVec("101100111000101")
    commitment = bdatp.commit(template, params, seed=9)
    assert bdatp.verify_commitment(commitment, params, template) == 0
    one_flip = template ^ bdatp.BitVec("100000000000000")
    assert bdatp.verify_commitment(commitment, params, one_flip) == 1
    three_flips = template ^ bdatp.BitVec("111000000000000")
    assert bdatp.verify_commitment(commitment, params, three_flips) is None


def test_store_enroll_verify_revoke(tmp_path):
    config = bdatp.StageConfig(d=32, k=16, m=4, t=2, cohort_classes=6)
    training = bdatp.synth_classes(
        seed=5, num_classes=1, samples_per_class=11, dim=32, within_sigma=0.15
    )
    probe = training[-1]
    training = training[:-1]

    store = bdatp.Store(str(tmp_path / "store"))
    result = store.enroll("alice", training, config, bdatp.EnrollSeeds(1, 2, 3))
    assert result.converged
    assert store.exists("alice")

    verdict = store.verify("alice", probe.values)
    assert verdict.accept
    assert verdict.block_errors[0] == 0 or verdict.block_errors[0] >= 0

    stranger = bdatp.synth_classes(
        seed=99, num_classes=1, samples_per_class=1, dim=32, within_sigma=0.15
    )[0]
    assert not store.verify("alice", stranger.values).accept

    with pytest.raises(KeyError):
        store.verify("bob", probe.values)
    with pytest.raises(KeyError):
        store.enroll("alice", training, config, bdatp.EnrollSeeds(1, 2, 3))

    reissued = store.revoke("alice", training, config, bdatp.EnrollSeeds(7, 8, 9))
    assert reissued.record.projection_seed == 7
    assert store.verify("alice", probe.values).accept


def test_record_serialization_roundtrip(tmp_path):
    config = bdatp.StageConfig(d=32, k=16, m=4, t=2, cohort_classes=6)
    training = bdatp.synth_classes(
        seed=3, num_classes=1, samples_per_class=8, dim=32, within_sigma=0.1
    )
    result = bdatp.enroll_record(
        "u", training, config, bdatp.EnrollSeeds(1, 2, 3), created_at=1000
    )
    blob = bdatp.serialize_record(result.record)
    record = bdatp.deserialize_record(blob)
    assert record.user_id == "u"
    assert record.created_at == 1000
    assert bdatp.serialize_record(record) == blob
    with pytest.raises(ValueError):
        bdatp.deserialize_record(blob[:-3])


def test_benchmark_and_security_report():
    spec = bdatp.BenchmarkSpec(seed=2, num_classes=4, samples_per_class=6,
                               probes_per_class=2)
    summary = bdatp.run_benchmark(spec, bdatp.StageConfig())
    assert summary["schema"] == "bdatp.benchmark/1"
    assert summary["genuine_accept_rate"] >= 0.95
    assert summary["imposter_accept_rate"] <= 0.01
    assert summary["binary_beats_cancelable"] is True
    assert len(summary["genuine_histogram"]) == 64

    report = bdatp.security_report("paper-novel")
    stages = {s["stage"]: s for s in report["stages"]}
    assert stages["random_projection"]["brute_force_bits"] == 3771
    assert stages["fuzzy_commitment"]["brute_force_bits"] == 11339
    assert stages["full_algorithm"]["brute_force_bits"] == 6799
    assert [s["smart_attack_rating"] for s in report["stages"]] == [
        "Low", "High", "High", "High",
    ]
    # The report is JSON-serializable as handed out.
    json.dumps(report)


def test_synth_determinism_and_match_scores():
    a = bdatp.synth_classes(seed=7, num_classes=2, samples_per_class=3, dim=8)
    b = bdatp.synth_classes(seed=7, num_classes=2, samples_per_class=3, dim=8)
    assert [v.values for v in a] == [v.values for v in b]
    assert a[0].label == "class_0"

    assert bdatp.real_match_score([1.0, 0.0], [1.0, 1.0], 256) == 181
    assert bdatp.binary_match_score(bdatp.BitVec("1010"), bdatp.BitVec("1010")) == 4
    assert bdatp.hamming(bdatp.BitVec("0000"), bdatp.BitVec("1111")) == 4
