import numpy as np
import pytest

from risctl import codebook as cb
from risctl.errors import ConfigurationError


def test_dft_gram_identity():
    book = cb.dft_codebook(100, 100)
    gram = np.conj(book.theta) @ book.theta.T
    assert np.max(np.abs(gram - 100 * np.eye(100))) < 1e-9
    assert book.has_gram_identity()


def test_dft_gram_identity_rectangular():
    book = cb.dft_codebook(16, 40)
    gram = np.conj(book.theta) @ book.theta.T
    assert np.max(np.abs(gram - 40 * np.eye(16))) < 1e-9


def test_dft_entries_are_unit_modulus():
    book = cb.dft_codebook(25, 30)
    assert np.allclose(np.abs(book.theta), 1.0, atol=1e-12)


def test_cardinality_below_element_count_rejected():
    with pytest.raises(ConfigurationError):
        cb.dft_codebook(100, 99)


def test_non_unit_modulus_rejected():
    theta = np.ones((4, 4), dtype=complex)
    theta[0, 0] = 2.0
    with pytest.raises(ConfigurationError):
        cb.Codebook(theta=theta, kind="channel-estimation")


def test_subsample_stride_three():
    book = cb.dft_codebook(100, 100)
    sub = cb.subsample(book, 3, kind="beam-sweeping-fixed")
    assert sub.cardinality == 34  # ceil(100 / 3)
    assert np.allclose(sub.config(1), book.config(3))
    # strided subset generally loses orthogonality
    assert not sub.has_gram_identity()


def test_config_indexing_matches_columns():
    book = cb.dft_codebook(9, 12)
    assert np.allclose(book.config(5), book.theta[:, 5])


def test_b_conf_warning(caplog):
    with caplog.at_level("WARNING"):
        cb.check_config_index_bits(6, 100)  # needs 7 bits
    assert any("b_conf" in rec.message for rec in caplog.records)
    caplog.clear()
    with caplog.at_level("WARNING"):
        cb.check_config_index_bits(7, 100)
    assert not caplog.records
