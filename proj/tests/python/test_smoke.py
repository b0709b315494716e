"""Python binding smoke tests: known values and one end-to-end round trip."""

import json
import math
import os

import numpy as np
import pytest

import glyphlab


def test_noise_schedule_products():
    sched = glyphlab.build_noise_schedule(3, 0.1, 0.1)
    assert sched.alphas_bar == pytest.approx([0.9, 0.81, 0.729], abs=1e-12)
    assert sched.sigmas[0] < sched.sigmas[1] < sched.sigmas[2]


def test_forward_noise_scalar_point():
    sched = glyphlab.build_noise_schedule(1, 0.75, 0.75)  # alpha_bar = 0.25
    z0 = np.ones((1, 2, 2))
    eps = np.ones((1, 2, 2))
    out = glyphlab.forward_noise(z0, 1, eps, sched)
    assert out == pytest.approx(0.5 + math.sqrt(0.75))


def test_karras_ladder_shape():
    sig = glyphlab.karras_sigma_ladder(50, 0.02, 10.0, 7.0)
    assert len(sig) == 51
    assert sig[0] == pytest.approx(10.0)
    assert sig[-1] == 0.0
    assert all(a > b for a, b in zip(sig, sig[1:]))


def test_pingpong_lambda():
    pp = glyphlab.GuidanceSchedule.pingpong(1)
    assert [glyphlab.lambda_at(pp, t) for t in range(6)] == [0, 1, 0, 1, 0, 1]
    pp2 = glyphlab.GuidanceSchedule.pingpong(2)
    assert [glyphlab.lambda_at(pp2, t) for t in range(8)] == [0, 0, 1, 1, 0, 0, 1, 1]


def test_encode_text():
    e1 = glyphlab.encode_text("HSBC bank sign")
    e2 = glyphlab.encode_text("HSBC bank sign")
    assert e1.shape == (glyphlab.ENCODER_DIM,)
    assert np.array_equal(e1, e2)
    assert np.linalg.norm(e1) == pytest.approx(1.0)
    assert np.linalg.norm(glyphlab.encode_text("")) == 0.0


def test_edit_distance_and_f1():
    assert glyphlab.edit_distance("kitten", "sitting") == 3
    box = (0.1, 0.1, 0.4, 0.2)
    p, r, f1 = glyphlab.word_f1([("HSBC", box)], [("hsbc", box)])
    assert (p, r, f1) == (1.0, 1.0, 1.0)
    assert glyphlab.char_accuracy([("HSBD", box)], [("HSBC", box)]) == pytest.approx(0.75)


def test_psnr_point():
    a = np.full((16, 16, 3), 0.5)
    b = a + 0.1
    assert glyphlab.psnr(a, b) == pytest.approx(20.0)
    assert glyphlab.psnr(a, a) == 99.0


def test_verbalize_position():
    assert glyphlab.verbalize_position((0.4, 0.4, 0.6, 0.6)) == "center"
    assert glyphlab.verbalize_position((0.0, 0.0, 0.2, 0.2)) == "top left"
    assert (
        glyphlab.render_cue_sentence("HSBC", "center")
        == "HSBC is displayed at the center of the image"
    )


def test_corpus_roundtrip_and_ocr(tmp_path):
    PIL = pytest.importorskip("PIL.Image")
    out = tmp_path / "ds"
    manifest_path = glyphlab.generate_corpus(str(out), num_scenes=3, seed=12)
    lines = [json.loads(l) for l in open(manifest_path)]
    assert len(lines) == 12  # 4 quadrants per scene

    pos_hq = [l for l in lines if l["quadrant"] == "pos-HQ"]
    row = pos_hq[0]
    img = np.asarray(PIL.open(os.path.join(out, row["hr_path"]))).astype(np.float64) / 255.0
    words = glyphlab.ocr_oracle(img)
    gt = [(a["text"], tuple(a["box"])) for a in row["annotations"]]
    p, r, f1 = glyphlab.word_f1(words, gt)
    assert f1 == 1.0
