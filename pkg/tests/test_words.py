from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from blinks.models import ModelPoint, catalog, connecting_phi0, letter_admissible, same_orbit
from blinks.params import INF, Mobius
from blinks.words import (FormClass, IsIsomorphism, Iso, Position, Triangular, Word, cancel_scan, compose_special,
                          inverse_word, is_tame_triangular, length, normal_form, position, proper_base_points,
                          reduce)

from helpers import close_word, random_word

P = ModelPoint


def tri(src, dst, tag="g", k=2):
    return Triangular.new(src, dst, k, tag)


def general_chain(n, start=P("F2_D2", 0)):
    """n letters alternating between F2_D2 and F0_D0 with every junction in general position."""
    letters, here = [], start
    for i in range(n):
        other = "F0_D0" if here.model == "F2_D2" else "F2_D2"
        dst = P(other, Fraction(i + 2))
        letters.append(tri(here, dst, f"t{i}"))
        here = P(other, Fraction(-i - 5))
    return Word(tuple(letters))


def all_general(w):
    tri_letters = w.letters
    if any(isinstance(x, Iso) for x in tri_letters):
        return len(tri_letters) == 1
    return all(position(a, b) is Position.GENERAL for a, b in zip(tri_letters, tri_letters[1:]))


def test_position_examples():
    l1 = tri(P("F0_D0", 2), P("F2_D2", Fraction(3, 2)))
    l2 = tri(P("F2_D2", Fraction(3, 2)), P("F0_D0", 5))
    assert position(l1, l2) is Position.SPECIAL
    a = tri(P("F0_D0", INF), P("F0_D0", 0))
    b = tri(P("F0_D0", INF), P("F0_D0", 0))
    assert position(a, b) is Position.GENERAL
    with pytest.raises(ValueError):
        position(l1, a)
    with pytest.raises(ValueError):
        position(l1, Iso.named("F2_D2", "shift"))


def test_compose_special_examples():
    l = tri(P("F2_D2", 1), P("F0_D0", 2), "a")
    iso = compose_special(l, l.inverse())
    assert isinstance(iso, Iso) and iso.action.is_identity()
    m = tri(P("F0_D0", 2), P("F2_D2", 4), "b")
    merged = compose_special(l, m)
    assert isinstance(merged, Triangular)
    assert merged.src == l.src and merged.dst == m.dst
    assert merged.k is None
    with pytest.raises(ValueError):
        compose_special(l, tri(P("F0_D0", 3), P("F2_D2", 4)))


def test_compose_special_with_oracle():
    l1 = tri(P("F2_D2", 1), P("F2_D2", 2), "a")
    l2 = tri(P("F2_D2", 2), P("F2_D2", 5), "b")
    iso = compose_special(l1, l2, oracle=lambda x, y: True)
    assert isinstance(iso, Iso)
    assert iso(P("F2_D2", 1)) == P("F2_D2", 5)
    assert isinstance(compose_special(l1, l2, oracle=lambda x, y: False), Triangular)


def test_cancellation_through_automorphisms():
    # a o s^-1 o b with s an automorphism: the inner pair cancels only after absorbing s
    l = tri(P("F2_D2", 1), P("F0_D0", 2), "a")
    s = Iso.named("F0_D0", "scale2")
    w = Word((l, s, s.inverse(), l.inverse()))
    assert reduce(w) == Word()
    shifted = l.conjugate(Mobius.identity(), s.action)
    assert shifted.dst == P("F0_D0", 4)
    assert reduce(Word((shifted, l.inverse().conjugate(s.action.inverse(), Mobius.identity())))) == Word()


def test_reduce_examples():
    l = tri(P("F2_D2", 1), P("F0_D0", 2), "a")
    assert reduce(Word((l, l.inverse()))) == Word()
    g = general_chain(4)
    assert reduce(g) == g
    a = tri(P("F2_D2", 1), P("F2_D2", 2), "a")
    b = tri(P("F2_D2", 3), P("F2_D2", 7), "b")
    align = Iso("F2_D2", "F2_D2", Mobius(1, 1, 0, 1))
    w = Word((a, align, b))
    r = reduce(w)
    assert len(r.triangular) == 1
    assert r.letters[0].src == a.src and r.letters[0].dst == b.dst


def test_length_examples():
    assert length(Word()) == 0
    assert length(Word((tri(P("F2_D2", 1), P("F0_D0", 2)),))) == 1
    for n in range(1, 6):
        assert length(general_chain(n)) == n


def test_proper_base_points_examples():
    assert proper_base_points(Word()) is IsIsomorphism
    g = general_chain(2)
    assert proper_base_points(g) == (g.letters[0].src, g.letters[1].dst)
    l = tri(P("F2_D2", 1), P("F0_D0", 2), "a")
    m = tri(P("F0_D0", 2), P("F2_D2", 4), "b")
    assert proper_base_points(Word((l, m))) == (l.src, m.dst)
    iso = Iso.named("F2_D2", "shift")
    assert proper_base_points(Word((iso,))) is IsIsomorphism


def test_cancel_scan_examples():
    a = tri(P("F2_D2", 1), P("F0_D0", 2), "a")
    b = tri(P("F2_D2", 3), P("F0_D0", 5), "b")
    assert cancel_scan(Word((a, a.inverse(), b))) == 2
    assert cancel_scan(general_chain(4)) is None
    assert cancel_scan(Word((a,))) is None
    assert cancel_scan(Word()) is None


def test_normal_form_examples():
    l = tri(P("F2_D2", 1), P("F2_D2", 1), "a")
    conj, core, cls = normal_form(Word((l,)))
    assert cls is FormClass.SPECIAL_TRIANGULAR and conj == Word() and core == Word((l,))
    phi1 = tri(P("F2_D2", 1), P("F0_D0", 2), "a")
    phi2 = tri(P("F0_D0", 3), P("F2_D2", 1), "b")
    conj, core, cls = normal_form(Word((phi1, phi2)))
    assert len(conj.triangular) >= 1
    assert len(core.triangular) <= 1
    assert normal_form(Word())[2] is FormClass.BIREGULAR
    g = Word((phi1, tri(P("F0_D0", 3), P("F2_D2", 5), "c")))
    conj, core, cls = normal_form(g)
    assert cls is FormClass.GENERAL_PAIR and conj == Word()
    for k in (2, 3):
        assert length(g.power(k)) == 2 * k
    with pytest.raises(ValueError):
        normal_form(Word((phi1,)))
    with pytest.raises(AssertionError):
        normal_form(Word((phi1, phi2)), budget=0)


def test_tameness_examples():
    assert is_tame_triangular(tri(P("F1_D0", 2), P("F1_D0", -5)))
    t = Fraction(4, 9)
    assert is_tame_triangular(tri(P("F0_C01", t), P("F0_C01", -t - Fraction(2, 3))))
    assert not is_tame_triangular(tri(P("F0_C01", 0), P("F0_C01", 1)))
    assert not is_tame_triangular(tri(P("F1_D1", 2), P("F1_D1", 3)))
    with pytest.raises(ValueError):
        is_tame_triangular(connecting_phi0())
    with pytest.raises(ValueError):
        is_tame_triangular(Iso.named("F2_D2", "shift"))


def test_letter_validation():
    with pytest.raises(ValueError):
        Triangular.new(P("F2_D2", INF), P("F0_D0", 0))
    with pytest.raises(ValueError):
        Triangular.new(P("F2_D2", 1), P("F0_D0", 0), k=1)
    with pytest.raises(ValueError):
        Iso("F2_D2", "F0_D0", Mobius.identity())
    with pytest.raises(ValueError):
        Iso("F2_D2", "F2_D2", Mobius(0, 1, 1, 0))
    with pytest.raises(ValueError):
        Word((tri(P("F2_D2", 1), P("F0_D0", 2)), tri(P("F2_D2", 1), P("F0_D0", 2))))


def test_word_json_roundtrip():
    data = {"letters": [
        {"type": "tri", "src": {"model": "F2_D2", "param": "1/2"}, "dst": {"model": "F0_D0", "param": "3"},
         "k": 2, "tag": "g1"},
        {"type": "iso", "src": "F0_D0", "dst": "F0_D0", "action": "scale2"},
    ]}
    w = Word.from_json(data)
    assert Word.from_json(w.to_json()) == w
    r = reduce(w)
    assert Word.from_json(r.to_json()) == r
    for bad in ({}, {"letters": [{"type": "rot"}]}, {"letters": [{"type": "iso", "src": "F0_D0", "action": "x"}]}):
        with pytest.raises(ValueError):
            Word.from_json(bad)


words = st.builds(lambda rnd: random_word(rnd), st.randoms(use_true_random=False))
quick = settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@quick
@given(words)
def test_reduce_idempotent_and_minimal(w):
    r = reduce(w)
    assert reduce(r) == r
    assert all_general(r)
    assert Word.from_json(r.to_json()) == r


@quick
@given(st.randoms(use_true_random=False), st.integers(1, 6))
def test_general_position_words_are_fixed(rnd, n):
    start = P(rnd.choice(["F2_D2", "F0_D0"]), Fraction(rnd.randint(1, 9)))
    w = general_chain(n, start)
    assert all_general(w)
    assert reduce(w) == w
    assert reduce(w, "right") == w


@quick
@given(words)
def test_strategies_agree(w):
    left, right = reduce(w, "left"), reduce(w, "right")
    lt, rt = left.triangular, right.triangular
    assert len(lt) == len(rt)
    assert proper_base_points(left) == proper_base_points(w)
    if lt:
        assert (lt[0].src, lt[-1].dst) == (rt[0].src, rt[-1].dst)
    for a, b in zip(lt, rt):
        for p, q in ((a.src, b.src), (a.dst, b.dst)):
            assert p.model == q.model and same_orbit(p.model, p.param, q.param)


@quick
@given(words, words)
def test_length_additivity(u, v):
    u, v = reduce(u), reduce(v)
    ut, vt = u.triangular, v.triangular
    if not ut or not vt or ut[-1].dst.model != vt[0].src.model or ut[-1].dst == vt[0].src:
        return
    uv = Word(tuple(ut) + tuple(vt))
    assert length(uv) == len(ut) + len(vt)
    assert proper_base_points(uv) == (ut[0].src, vt[-1].dst)


@quick
@given(st.randoms(use_true_random=False))
def test_power_growth(rnd):
    w = close_word(rnd, reduce(random_word(rnd)))
    if w is None:
        return
    w = reduce(w)
    tri_letters = w.triangular
    if not tri_letters or tri_letters[0].src.model != tri_letters[-1].dst.model:
        return
    if tri_letters[0].src == tri_letters[-1].dst:
        return
    for k in range(1, 5):
        assert length(w.power(k)) == k * len(tri_letters)


@quick
@given(st.randoms(use_true_random=False))
def test_normal_form_properties(rnd):
    w = close_word(rnd, random_word(rnd))
    if w is None:
        return
    tri_letters = reduce(w).triangular
    if tri_letters and tri_letters[0].src.model != tri_letters[-1].dst.model:
        return
    conj, core, cls = normal_form(w)
    n = len(core.triangular)
    assert n <= length(w)
    if cls is FormClass.BIREGULAR:
        assert n == 0
    elif cls is FormClass.SPECIAL_TRIANGULAR:
        assert n == 1 and core.triangular[0].src == core.triangular[0].dst
    else:
        assert core.triangular[0].src != core.triangular[-1].dst
    back = reduce(inverse_word(conj).then(core).then(conj))
    assert len(back.triangular) == length(w)
    assert proper_base_points(back) == proper_base_points(w)


@quick
@given(words)
def test_d4_letters_reach_generating_points(w):
    anchors = [P("F2_D2", 0), P("F2_D2", INF), P("F0_D0", 0), P("F0_D0", 1)]
    for x in reduce(w).triangular:
        for p in (x.src, x.dst):
            if p.model == "P2_CONIC":
                continue
            assert any(a.model == p.model and same_orbit(p.model, a.param, p.param) for a in anchors)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_tameness_conjugation_invariant(rnd):
    m = rnd.choice([m for d in range(1, 7) for m in catalog(d) if m.generators])
    params = [Fraction(rnd.randint(-5, 5), rnd.randint(1, 3)), INF, *(p for c in m.orbits for p in c.params)]
    src, dst = P(m.id, rnd.choice(params)), P(m.id, rnd.choice(params))
    if not letter_admissible(src, dst):
        return
    letter = tri(src, dst)
    g = rnd.choice(list(m.generators.values()))
    conj = letter.conjugate(g.inverse(), g)
    assert conj.src == P(m.id, g(src.param)) and conj.dst == P(m.id, g(dst.param))
    assert is_tame_triangular(conj) == is_tame_triangular(letter)
