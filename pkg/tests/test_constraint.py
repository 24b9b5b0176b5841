import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from suslov.constraint import (SUSLOV_SPLIT, ConstraintSubspace, in_dual_subspace,
                               include_d, project_d, project_dual, restrict)

finite = st.floats(min_value=-1e6, max_value=1e6,
                   allow_nan=False, allow_infinity=False)
vec3 = st.tuples(finite, finite, finite)


def test_suslov_split_defaults():
    assert SUSLOV_SPLIT.d_indices == (0, 1)
    assert SUSLOV_SPLIT.complement_indices == (2,)
    assert np.array_equal(SUSLOV_SPLIT.basis, np.eye(3))


def test_partition_validated():
    with pytest.raises(ValueError):
        ConstraintSubspace(d_indices=(0, 1), complement_indices=(1,))
    with pytest.raises(ValueError):
        ConstraintSubspace(d_indices=(0,), complement_indices=(2,))


@given(vec3)
def test_projection_masks_are_exact(v):
    x = np.array(v)
    px = project_d(SUSLOV_SPLIT, x)
    assert px[0] == x[0] and px[1] == x[1] and px[2] == 0.0
    # idempotent, bit for bit
    assert np.array_equal(project_d(SUSLOV_SPLIT, px), px)
    assert in_dual_subspace(SUSLOV_SPLIT, project_dual(SUSLOV_SPLIT, x))


@given(st.tuples(finite, finite))
def test_include_then_restrict(v):
    xd = np.array(v)
    full = include_d(SUSLOV_SPLIT, xd)
    assert full[2] == 0.0
    assert np.array_equal(restrict(SUSLOV_SPLIT, full), xd)


def test_in_dual_subspace_is_strict():
    assert in_dual_subspace(SUSLOV_SPLIT, np.array([3.0, -1.0, 0.0]))
    assert not in_dual_subspace(SUSLOV_SPLIT, np.array([0.0, 0.0, 1e-300]))


def test_custom_split_slots():
    s = ConstraintSubspace(d_indices=(0, 2), complement_indices=(1,))
    full = include_d(s, np.array([5.0, 7.0]))
    assert np.array_equal(full, np.array([5.0, 0.0, 7.0]))
    assert np.array_equal(restrict(s, np.array([1.0, 2.0, 3.0])), np.array([1.0, 3.0]))
    assert np.array_equal(project_d(s, np.array([1.0, 2.0, 3.0])),
                          np.array([1.0, 0.0, 3.0]))
