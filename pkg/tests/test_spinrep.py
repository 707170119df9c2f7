import numpy as np
import pytest

from fermigap import quadform as qf
from fermigap import spinrep as sr
from fermigap.errors import CapacityError, InputError


def dyadic_w(n, rng, scale=2 ** 20):
    return rng.integers(-scale, scale, size=(n, n)) / scale


# Reference kron-built Paulis for cross-checking the permutation assembly.
_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_word(word):
    out = np.array([[1.0 + 0j]])
    for ch in word:
        out = np.kron(out, _PAULI[ch])
    return out


class TestWBijection:
    def test_diagonal_w_is_diagonal_a(self):
        pair = sr.w_to_ab(np.diag([1.0, 2.0, 3.0]))
        assert np.array_equal(pair.a, np.diag([1.0, 2.0, 3.0]))
        assert np.array_equal(pair.b, np.zeros((3, 3)))

    def test_nearest_neighbour_signs(self):
        # offset m=1 keeps the sign, m=2 flips it
        w = np.zeros((3, 3))
        w[0, 1] = 2.0
        w[0, 2] = 2.0
        pair = sr.w_to_ab(w)
        assert pair.a[0, 1] == 1.0 and pair.b[0, 1] == 1.0
        assert pair.a[0, 2] == -1.0 and pair.b[0, 2] == -1.0

    def test_roundtrip_exact_on_dyadic_w(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            w = dyadic_w(6, rng)
            assert np.array_equal(sr.ab_to_w(sr.w_to_ab(w)), w)

    def test_roundtrip_close_on_general_w(self):
        rng = np.random.default_rng(2)
        w = rng.standard_normal((7, 7))
        np.testing.assert_allclose(sr.ab_to_w(sr.w_to_ab(w)), w, rtol=0, atol=1e-15)

    def test_rejects_nonsquare(self):
        with pytest.raises(InputError):
            sr.w_to_ab(np.zeros((2, 3)))


class TestPauliAssembly:
    @pytest.mark.parametrize("word", ["Z", "XX", "YY", "XZX", "YZY", "IZXX", "YZZY"])
    def test_matches_kron_reference(self, word):
        np.testing.assert_array_equal(sr.pauli_string_matrix(word),
                                      kron_word(word).real)

    def test_rejects_odd_y_count(self):
        with pytest.raises(InputError):
            sr.pauli_string_matrix("YZ")

    def test_terms_enumeration(self):
        w = np.arange(4.0).reshape(2, 2) + 1.0
        terms = dict((word, coeff) for coeff, word in sr.PauliHamiltonian(w).terms)
        assert terms == {"ZI": 1.0, "IZ": 4.0, "XX": 2.0, "YY": 3.0}

    def test_dense_hamiltonian_matches_term_sum(self):
        rng = np.random.default_rng(3)
        h = sr.PauliHamiltonian(rng.standard_normal((3, 3)))
        explicit = sum(coeff * sr.pauli_string_matrix(word)
                       for coeff, word in h.terms)
        np.testing.assert_allclose(sr.dense_hamiltonian(h), explicit, atol=1e-14)

    def test_single_site_field(self):
        vals = sr.dense_spectrum_oracle(sr.PauliHamiltonian(np.array([[1.0]])))
        np.testing.assert_array_equal(vals, [-1.0, 1.0])

    def test_capacity_cap(self):
        with pytest.raises(CapacityError):
            sr.pauli_string_matrix("Z" * (sr.DENSE_QUBIT_CAP + 1))


class TestOracleAgreement:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_subset_sum_matches_dense(self, n):
        rng = np.random.default_rng(10 + n)
        h = sr.PauliHamiltonian(rng.standard_normal((n, n)))
        dense = sr.dense_spectrum_oracle(h)
        fermionic = qf.subset_sum_spectrum(qf.lieb_decompose(h.to_pair()))
        np.testing.assert_allclose(fermionic, dense, atol=1e-10)

    def test_route_equality(self):
        # dense_hamiltonian(W) == fermionic assembly of (A, B) through JW ops
        rng = np.random.default_rng(20)
        w = rng.standard_normal((4, 4))
        h = sr.PauliHamiltonian(w)
        built = sr.fermionic_assembly(h.to_pair(), sr.jw_operators(4))
        assert np.abs(built.imag).max() <= 1e-13
        np.testing.assert_allclose(built.real, sr.dense_hamiltonian(h), atol=1e-12)

    def test_quasiparticle_route(self):
        rng = np.random.default_rng(21)
        pair = qf.symmetrize_split(rng.standard_normal((3, 3)))
        ops = sr.jw_operators(3)
        direct = sr.fermionic_assembly(pair, ops)
        quasi = sr.quasiparticle_assembly(qf.lieb_decompose(pair), ops)
        np.testing.assert_allclose(quasi, direct, atol=1e-12)


class TestFcr:
    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_jw_operators_pass(self, n):
        report = sr.fcr_check(sr.jw_operators(n))
        assert report.passed
        assert report.max_residual <= 1e-13

    @pytest.mark.parametrize("n", [1, 2])
    def test_spin32_operators_pass(self, n):
        ops = sr.spin32_operators(n)
        assert ops.m == 2 * n
        assert ops.dimension == 4 ** n
        report = sr.fcr_check(ops)
        assert report.passed

    def test_broken_set_fails(self):
        ops = sr.jw_operators(2)
        broken = sr.FermionOperatorSet((ops.ops[0], 1.001 * ops.ops[1]))
        assert not sr.fcr_check(broken).passed

    def test_transform_preserves_fcr(self):
        rng = np.random.default_rng(22)
        pair = qf.symmetrize_split(rng.standard_normal((3, 3)))
        d = qf.lieb_decompose(pair)
        etas = sr.unitary_fcr_transform(sr.jw_operators(3),
                                        (d.x + d.y) / 2.0, (d.x - d.y) / 2.0)
        assert sr.fcr_check(etas).passed

    def test_non_orthogonal_transform_rejected(self):
        with pytest.raises(InputError, match="not orthogonal"):
            sr.unitary_fcr_transform(sr.jw_operators(2),
                                     np.eye(2), 0.1 * np.eye(2))


class TestClusterModel:
    @pytest.mark.parametrize("n", [4, 5, 7])
    def test_pair_is_circulant_half_offsets(self, n):
        pair = sr.build_cluster_w(n).to_pair()
        row_a = pair.a[0]
        row_b = pair.b[0]
        expect_a = np.zeros(n)
        expect_b = np.zeros(n)
        # offsets +2 and -2 coincide when n = 4 and the halves add up
        expect_a[2] += 0.5
        expect_a[n - 2] += 0.5
        expect_b[2] += 0.5
        expect_b[n - 2] -= 0.5
        np.testing.assert_array_equal(row_a, expect_a)
        np.testing.assert_array_equal(row_b, expect_b)
        for j in range(n):
            np.testing.assert_array_equal(pair.a[j], np.roll(row_a, j))
            np.testing.assert_array_equal(pair.b[j], np.roll(row_b, j))

    def test_ground_energy(self):
        # all n singular values equal 1, so E0 = -n
        h = sr.build_cluster_w(5)
        e0, _ = sr.dense_ground_state(h)
        assert e0 == pytest.approx(-5.0, abs=1e-10)

    def test_stabilizer_expectations(self):
        n = 4
        _, psi = sr.dense_ground_state(sr.build_cluster_w(n))
        for coeff, word in sr.build_cluster_w(n).terms:
            if coeff == 0.0:
                continue
            val = psi @ sr.pauli_string_matrix(word) @ psi
            # every term sits at its minimal energy -|coeff| in the ground
            # state, i.e. the stabilizer -sign(coeff)*word has expectation +1
            assert -np.sign(coeff) * val == pytest.approx(1.0, abs=1e-10)


class TestIsingModel:
    def test_w_layout(self):
        w = sr.build_ising_w(3, 0.25).w
        np.testing.assert_array_equal(w, [[0.75, 0.25, 0.0],
                                          [0.0, 0.75, 0.25],
                                          [0.0, 0.0, 0.75]])

    def test_endpoint_gaps(self):
        # s = 0 is the pure field: sector gap 2(1+1) = 4
        sv = np.linalg.svd(sr.build_ising_w(6, 0.0).to_pair().c, compute_uv=False)
        assert 2.0 * (sv[-1] + sv[-2]) == pytest.approx(4.0)

    def test_min_gap_near_transition(self):
        gap, s_star = sr.ising_min_gap(16)
        assert 0.4 < s_star < 0.6
        assert 0.0 < gap < 2.0

    def test_scaling_slope(self):
        mins, slope = sr.ising_gap_scaling([8, 16, 32])
        assert np.all(np.diff(mins) < 0)
        assert -1.3 < slope < -0.7
