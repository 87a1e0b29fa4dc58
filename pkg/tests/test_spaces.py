import random

import pytest

from bidifilter import LruSpace, SlruSpace


def test_lru_insert_order():
    sp = LruSpace(2)
    sp.insert("a")
    assert list(sp.keys()) == ["a"]
    sp.insert("b")
    assert list(sp.keys()) == ["a", "b"]  # b most recent


def test_lru_touch_moves_to_mru():
    sp = LruSpace(3)
    for k in "abc":
        sp.insert(k)
    sp.touch("a")
    assert list(sp.keys()) == ["b", "c", "a"]
    assert sp.peek_victim() == "b"


def test_lru_peek_victim():
    sp = LruSpace(3)
    assert sp.peek_victim() is None
    for k in "abc":
        sp.insert(k)
    assert sp.peek_victim() == "a"
    assert list(sp.keys()) == ["a", "b", "c"]  # peek does not mutate


def test_lru_errors():
    sp = LruSpace(1)
    sp.insert("a")
    with pytest.raises(ValueError):
        sp.insert("a")  # duplicate
    with pytest.raises(ValueError):
        sp.insert("b")  # over capacity
    with pytest.raises(KeyError):
        sp.touch("zzz")
    with pytest.raises(KeyError):
        sp.remove("zzz")


def test_remove_last_element():
    sp = LruSpace(2)
    sp.insert("a")
    sp.remove("a")
    assert len(sp) == 0
    assert sp.peek_victim() is None


def test_insert_count_instrumentation():
    sp = LruSpace(5)
    for k in range(5):
        sp.insert(k)
    sp.touch(0)
    sp.remove(1)
    sp.insert(9)
    assert sp.insert_count == 6


def test_size_deltas():
    # touch keeps size; insert +1; remove -1
    sp = SlruSpace(4)
    sp.insert("a")
    n = len(sp)
    sp.touch("a")
    assert len(sp) == n
    sp.insert("b")
    assert len(sp) == n + 1
    sp.remove("a")
    assert len(sp) == n


def test_slru_insert_goes_to_probation():
    sp = SlruSpace(10)
    sp.insert("a")
    assert "a" in sp._probation
    assert "a" not in sp._protected


def test_slru_touch_promotes_to_protected():
    sp = SlruSpace(10)
    sp.insert("a")
    sp.touch("a")
    assert "a" in sp._protected


def test_slru_protected_overflow_demotes_to_probation_mru():
    # capacity 5, protected quota = ceil(0.8*5) = 4
    sp = SlruSpace(5)
    for k in "abcde":
        sp.insert(k)
    for k in "abcd":
        sp.touch(k)
    assert len(sp._protected) == 4
    sp.touch("e")  # fifth promotion exceeds the quota
    assert "e" in sp._protected
    assert "a" in sp._probation  # protected LRU pushed back
    assert len(sp) == 5  # internal exchange, no eviction
    sp.check()


def test_slru_victim_prefers_probation():
    sp = SlruSpace(4)
    for k in "abcd":
        sp.insert(k)
    sp.touch("a")
    sp.touch("b")
    assert sp.peek_victim() == "c"  # probation LRU, not protected's a
    sp.remove("c")
    sp.remove("d")
    assert sp.peek_victim() == "a"  # probation empty: protected LRU


def test_slru_errors_and_quota():
    sp = SlruSpace(2)
    sp.insert("a")
    sp.insert("b")
    with pytest.raises(ValueError):
        sp.insert("c")
    with pytest.raises(ValueError):
        sp.insert("a")
    with pytest.raises(KeyError):
        sp.touch("nope")
    assert sp.protected_capacity == 2  # ceil(0.8*2)


def _drive_lru(space, key):
    # the standard caller contract: hit touches, miss evicts-then-inserts
    if key in space:
        space.touch(key)
    else:
        if len(space) >= space.capacity:
            space.remove(space.peek_victim())
        space.insert(key)


def test_lru_inclusion_property():
    # contents of an LRU of capacity c stay a subset of capacity c+1
    rnd = random.Random(13)
    for trial in range(20):
        small = LruSpace(rnd.randint(1, 8))
        big = LruSpace(small.capacity + 1)
        for _ in range(300):
            k = rnd.randint(0, 20)
            _drive_lru(small, k)
            _drive_lru(big, k)
            assert set(small.keys()) <= set(big.keys())


def test_peek_then_remove_equals_destructive_pop():
    rnd = random.Random(14)
    for space_cls in (LruSpace, SlruSpace):
        sp = space_cls(6)
        for _ in range(500):
            k = rnd.randint(0, 15)
            _drive_lru(sp, k)
            victim = sp.peek_victim()
            if victim is not None and rnd.random() < 0.2:
                n = len(sp)
                sp.remove(victim)
                assert victim not in sp
                assert len(sp) == n - 1
        if isinstance(sp, SlruSpace):
            sp.check()


def test_capacity_zero_space():
    sp = LruSpace(0)
    assert sp.peek_victim() is None
    with pytest.raises(ValueError):
        sp.insert("a")
