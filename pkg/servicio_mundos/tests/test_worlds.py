import numpy as np
import pytest

from app.core.exceptions import (
    DegenerateSpectrumError,
    DimensionMismatchError,
    IncompleteBasisError,
    LinearDependenceError,
    NotNormalizedError,
    NotOrthonormalError,
)
from app.models.hilbert_models import HermitianOperator, Ket
from app.models.world_models import EvolutionGenerator, World, gram_deviation
from app.services import bell, hilbert, worlds

SQRT_HALF = 1 / np.sqrt(2)


def test_validate_world_accepts_standard_kets():
    W = worlds.validate_world([Ket.of(1, 0), Ket.of(0, 1)])
    assert W.dim == 2
    assert worlds.worlds_equal(W, worlds.standard_world(2))


def test_validate_world_reports_gram_deviation():
    with pytest.raises(NotOrthonormalError) as excinfo:
        worlds.validate_world([Ket.of(1, 0), Ket.of(SQRT_HALF, SQRT_HALF)])
    assert excinfo.value.details["max_deviation"] == pytest.approx(SQRT_HALF)


def test_validate_world_rejects_incomplete_basis():
    with pytest.raises(IncompleteBasisError):
        worlds.validate_world([Ket.of(1, 0, 0), Ket.of(0, 1, 0)])


def test_validate_world_rejects_mixed_dimensions():
    with pytest.raises(DimensionMismatchError):
        worlds.validate_world([Ket.of(1, 0), Ket.of(0, 1, 0)])


def test_world_needs_dimension_two():
    with pytest.raises(DimensionMismatchError):
        World(vectors=[[1.0]])


def test_worlds_equal_ignores_phases_but_not_order(standard2):
    rephased = World(vectors=[[1j, 0], [0, -1]])
    swapped = World(vectors=[[0, 1], [1, 0]])
    assert worlds.worlds_equal(standard2, rephased)
    assert not worlds.worlds_equal(standard2, swapped)
    assert worlds.worlds_equal_up_to_permutation(standard2, swapped)


def test_worlds_equal_rejects_dimension_mismatch(standard2):
    with pytest.raises(DimensionMismatchError):
        worlds.worlds_equal(standard2, worlds.standard_world(3))


def test_fourier_world_of_dim_two_is_hadamard(hadamard):
    expected = np.array([[1, 1], [1, -1]]) * SQRT_HALF
    assert np.allclose(hadamard.vectors, expected)


def test_named_world_errors():
    with pytest.raises(DimensionMismatchError):
        worlds.named_world("hadamard", 3)
    with pytest.raises(ValueError):
        worlds.named_world("bogus", 2)


def test_random_world_is_seeded():
    assert np.array_equal(worlds.random_world(5, 3).vectors, worlds.random_world(5, 3).vectors)


def test_random_worlds_differ_across_seeds():
    W = worlds.random_world(4, 7)
    assert gram_deviation(W.vectors) <= 1e-9
    assert not worlds.worlds_equal(worlds.random_world(4, 1), worlds.random_world(4, 2))


def test_worlds_equal_is_an_equivalence(rng):
    W = worlds.random_world(5, 12)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(2, 5)))
    W2 = World(vectors=phases[0][:, None] * W.vectors)
    W3 = World(vectors=phases[1][:, None] * W2.vectors)
    other = worlds.random_world(5, 13)

    assert worlds.worlds_equal(W, W)
    assert worlds.worlds_equal(W, W2) and worlds.worlds_equal(W2, W)
    assert worlds.worlds_equal(W2, W3)
    assert worlds.worlds_equal(W, W3, 2e-9)
    assert not worlds.worlds_equal(W, other) and not worlds.worlds_equal(other, W)


def test_evolve_world_at_time_zero_is_identity():
    W = worlds.random_world(4, 1)
    gen = EvolutionGenerator(A=hilbert.random_hermitian(4, 2))
    assert worlds.worlds_equal(worlds.evolve_world(W, gen, 0.0), W)


def test_evolve_world_backward_undoes_forward():
    W = worlds.random_world(6, 5)
    gen = EvolutionGenerator(A=hilbert.random_hermitian(6, 6))
    there = worlds.evolve_world(W, gen, 2.5)
    assert worlds.worlds_equal(worlds.evolve_world(there, gen, -2.5), W, 1e-8)


def test_quarter_turn_about_sigma_x_swaps_the_standard_world(standard2, sigma_x):
    # exp(i pi/2 sigma_x) = i sigma_x
    W = worlds.evolve_world(standard2, EvolutionGenerator(A=sigma_x), np.pi / 2)
    assert worlds.worlds_equal(W, World(vectors=[[0, 1j], [1j, 0]]))
    assert worlds.worlds_equal(W, World(vectors=[[0, 1], [1, 0]]))


def test_evolution_by_zero_generator_is_trivial(standard2):
    gen = EvolutionGenerator(A=HermitianOperator(entries=np.zeros((2, 2))))
    assert worlds.worlds_equal(worlds.evolve_world(standard2, gen, 3.0), standard2)


def test_evolve_world_rejects_generator_of_other_dimension():
    gen = EvolutionGenerator(A=hilbert.random_hermitian(3, 0))
    with pytest.raises(DimensionMismatchError):
        worlds.evolve_world(worlds.standard_world(2), gen, 1.0)


def test_evolution_semigroup_on_random_draws(rng):
    for _ in range(200):
        dim = int(rng.integers(2, 17))
        W = worlds.random_world(dim, int(rng.integers(0, 2**31)))
        gen = EvolutionGenerator(A=hilbert.random_hermitian(dim, int(rng.integers(0, 2**31))))
        t, s = rng.uniform(-3, 3, size=2)

        direct = worlds.evolve_world(W, gen, t + s)
        stepped = worlds.evolve_world(worlds.evolve_world(W, gen, s), gen, t)

        assert gram_deviation(direct.vectors) <= 1e-9
        assert worlds.worlds_equal(direct, stepped, 1e-8)


def test_product_world_index_convention(standard2, hadamard):
    pw = worlds.product_world(standard2, hadamard)
    assert pw.combined.dim == 4
    assert np.allclose(pw.combined.vectors[1], np.kron([1, 0], hadamard.vectors[1]))
    assert np.allclose(pw.combined.vectors[2], np.kron([0, 1], hadamard.vectors[0]))


def test_product_worlds_are_detected_as_products(rng):
    for _ in range(100):
        dim_a, dim_b = (int(d) for d in rng.integers(2, 5, size=2))
        WA = worlds.random_world(dim_a, int(rng.integers(0, 2**31)))
        WB = worlds.random_world(dim_b, int(rng.integers(0, 2**31)))
        pw = worlds.product_world(WA, WB)
        assert worlds.is_product_world(pw.combined, dim_a, dim_b, 1e-8)


def test_bell_basis_is_not_a_product():
    assert not worlds.is_product_world(bell.bell_basis(), 2, 2, 1e-8)


def test_is_product_world_rejects_bad_factorization():
    with pytest.raises(DimensionMismatchError):
        worlds.is_product_world(worlds.standard_world(4), 3, 2)


def test_schmidt_coefficients_of_bell_state():
    coefficients = worlds.schmidt_coefficients(bell.bell_state(0.0), 2, 2)
    assert np.allclose(coefficients, [SQRT_HALF, SQRT_HALF])


def test_connecting_unitary_carries_one_world_onto_another():
    W, W2 = worlds.random_world(4, 10), worlds.random_world(4, 11)
    U = worlds.connecting_unitary(W, W2)
    assert hilbert.is_unitary(U)
    for n in range(4):
        assert np.allclose(U.entries @ W.vectors[n], W2.vectors[n])


def test_world_containing_starts_with_the_ket():
    ket = Ket.of(0.6, 0.8j, 0)
    W = worlds.world_containing(ket)
    assert W.dim == 3
    assert np.allclose(W.vectors[0], ket.amplitudes)


def test_world_containing_rejects_unnormalized_ket():
    with pytest.raises(NotNormalizedError):
        worlds.world_containing(Ket.of(1, 1))


def test_eigenworld_orders_by_eigenvalue(sigma_z, standard2):
    W = worlds.eigenworld(sigma_z)
    assert worlds.worlds_equal(W, World(vectors=[[0, 1], [1, 0]]))
    assert worlds.worlds_equal_up_to_permutation(W, standard2)


def test_eigenworld_rejects_degenerate_spectrum():
    with pytest.raises(DegenerateSpectrumError):
        worlds.eigenworld(HermitianOperator(entries=np.eye(3)))


@pytest.mark.parametrize("n", [0, 1, 2])
def test_world_containing_a_standard_vector(n):
    ket = Ket(amplitudes=np.eye(3)[n])
    W = worlds.world_containing(ket)
    assert np.allclose(W.vectors[0], ket.amplitudes)
    assert gram_deviation(W.vectors) <= 1e-12


def test_world_containing_random_kets(rng):
    for _ in range(50):
        dim = int(rng.integers(2, 9))
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        ket = Ket(amplitudes=v / np.linalg.norm(v))
        W = worlds.world_containing(ket)
        assert np.allclose(W.vectors[0], ket.amplitudes, atol=1e-12)
        assert gram_deviation(W.vectors) <= 1e-9


def test_gram_schmidt_dependence_is_an_orthonormality_error():
    with pytest.raises(LinearDependenceError) as excinfo:
        hilbert.gram_schmidt(np.array([[1, 0, 0], [0, 1, 0], [1, 1, 0]]))
    assert isinstance(excinfo.value, NotOrthonormalError)
    assert excinfo.value.details["index"] == 2
