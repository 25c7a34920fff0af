import pytest
from hypothesis import given, strategies

from src.core.sign_vectors import (
    AmbientSizeError,
    ElementIndexError,
    Sign,
    SignParseError,
    SignVector,
    canonical,
    compose,
    compose_all,
    is_face_cell,
    is_orthogonal,
    negate,
    positions_of,
    reorient,
    support,
)

SIZE = 6
sign_vectors = strategies.lists(
    strategies.sampled_from([-1, 0, 1]), min_size=SIZE, max_size=SIZE
).map(SignVector.from_signs)
position_sets = strategies.sets(strategies.integers(0, SIZE - 1))


class TestSignVector:
    """Construction, parsing and accessors."""

    def test_from_string_round_trip(self):
        """Test that the serialized form survives parsing."""
        v = SignVector.from_string("+0-+")
        assert v.signs == (Sign.PLUS, Sign.ZERO, Sign.MINUS, Sign.PLUS)
        assert v.to_string() == "+0-+"

    def test_invalid_symbol(self):
        """Test that unknown symbols are rejected."""
        with pytest.raises(SignParseError):
            SignVector.from_string("+x-")

    def test_overlapping_supports_rejected(self):
        """Test that an entry cannot be both + and -."""
        with pytest.raises(ValueError):
            SignVector(3, plus=0b001, minus=0b001)

    def test_index_out_of_range(self):
        """Test that positions outside the ground set raise."""
        with pytest.raises(ElementIndexError):
            SignVector.zero(3)[3]

    def test_large_ground_set(self):
        """Test that bitmasks beyond 64 elements work."""
        v = SignVector.all_plus(100)
        assert len(support(v)) == 100
        assert v[99] is Sign.PLUS

    def test_positions_of(self):
        assert positions_of(0b10110) == (1, 2, 4)


class TestOperations:
    """Composition, faces and reorientation."""

    # ========================================================================
    # 1. EXAMPLES
    # ========================================================================

    def test_compose_example(self):
        """Test (+,0,-) o (-,+,+) = (+,+,-)."""
        x = SignVector.from_string("+0-")
        y = SignVector.from_string("-++")
        assert compose(x, y).to_string() == "++-"

    def test_compose_size_mismatch(self):
        """Test that vectors over different ground sets cannot be composed."""
        with pytest.raises(AmbientSizeError):
            compose(SignVector.zero(2), SignVector.zero(3))

    def test_face_cell_examples(self):
        """Test the face order on cells."""
        w = SignVector.from_string("+-+")
        assert is_face_cell(SignVector.from_string("+0+"), w)
        assert not is_face_cell(SignVector.from_string("-00"), w)
        assert is_face_cell(SignVector.zero(3), w)

    def test_reorient_positions(self):
        """Test that only the given positions flip."""
        v = SignVector.from_string("+-0+")
        assert reorient(v, [0, 2]).to_string() == "--0+"

    def test_orthogonality(self):
        """Test both branches of orthogonality."""
        assert is_orthogonal(SignVector.from_string("+0"), SignVector.from_string("0-"))
        assert is_orthogonal(SignVector.from_string("++"), SignVector.from_string("+-"))
        assert not is_orthogonal(SignVector.from_string("++"), SignVector.from_string("++"))

    def test_canonical_picks_lex_first(self):
        v = SignVector.from_string("+-0")
        assert canonical(v).to_string() == "-+0"
        assert canonical(negate(v)) == canonical(v)

    def test_compose_all_empty(self):
        assert compose_all([], 4).is_zero()

    # ========================================================================
    # 2. PROPERTIES
    # ========================================================================

    @given(sign_vectors, sign_vectors, sign_vectors)
    def test_compose_associative(self, x, y, z):
        assert compose(compose(x, y), z) == compose(x, compose(y, z))

    @given(sign_vectors, sign_vectors)
    def test_compose_support_is_union(self, x, y):
        assert support(compose(x, y)) == support(x) | support(y)

    @given(sign_vectors, sign_vectors)
    def test_left_argument_is_face_of_composition(self, x, y):
        assert is_face_cell(x, compose(x, y))
        assert compose(x, y) == compose(x, compose(x, y))

    @given(sign_vectors, position_sets)
    def test_reorient_is_involution(self, v, positions):
        assert reorient(reorient(v, positions), positions) == v

    @given(sign_vectors)
    def test_negation_is_reorientation_of_everything(self, v):
        assert negate(v) == reorient(v, range(SIZE))
        assert -(-v) == v

    @given(sign_vectors, sign_vectors)
    def test_face_order_antisymmetric(self, x, y):
        if is_face_cell(x, y) and is_face_cell(y, x):
            assert x == y

    @given(sign_vectors, sign_vectors)
    def test_orthogonality_symmetric(self, x, y):
        assert is_orthogonal(x, y) == is_orthogonal(y, x)
