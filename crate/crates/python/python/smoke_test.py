"""Smoke test for the pycumulative extension module."""

import pycumulative as pc


def main():
    assert pc.c_count([3, 1, 1], 3) == 2
    assert pc.c_count([3, 2, 2], 2) == 1
    assert pc.c_count([1, 1, 1, 1], 3) == 0
    assert pc.brute_c([3, 1, 1], 3) == 2
    assert pc.w_count(3, [2, 1]) == 1
    assert pc.brute_w(3, [2, 1]) == [[1, 1, 2]]
    assert pc.is_cumulative([1, 1, 2], 3)
    assert not pc.is_cumulative([], 3)
    assert pc.partial_sums([1, 2, 3]) == [1, 3, 6]
    assert pc.residue_profile([3, 1, 1], 3) == (1, [2, 0])
    assert pc.scale_profile(7, [1, 1, 0, 0, 0, 0], 3) == [0, 0, 1, 0, 0, 1]
    assert pc.scale_composition([2, 3], 3, 7) == [6, 2]
    assert pc.mod_inverse(4, 7) == 2
    assert pc.lemma1_nonempty(3, [2, 1])

    verdict = pc.theorem1_nonzero([1, 1, 1, 1], 3)
    assert not verdict["nonzero"]
    assert verdict["summary"] == "(i) pass, (ii) fail: max 4 > 2"
    assert pc.remark_sufficient([2, 1], 5)

    assert pc.witness([5, 5, 2], 5)[0] == [2, 5, 5]
    assert pc.witness([1, 1, 1, 1], 3) == (None, "none")
    assert pc.witness_pattern(3, [3, 1]) == [1, 1, 2, 1]
    assert pc.rearrangements([2, 1, 1]) == [[1, 1, 2], [1, 2, 1], [2, 1, 1]]
    assert pc.cumulative_rearrangements([1, 3, 1], 3, sort=True) == [[1, 1, 3], [1, 3, 1]]
    assert len(pc.partitions_of(7)) == 15

    big = [5 * k for k in range(30, 0, -1)] + [2, 2, 2, 1, 1, 1]
    assert pc.c_count(big, 5) > 2**64

    try:
        pc.c_count([1, 2], 3)
    except ValueError:
        pass
    else:
        raise AssertionError("unsorted input accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
