"""Words in triangular maps and isomorphisms of pairs.

A word lists its letters in the order they are applied: ``letters[0]`` acts
first, so the word ``[phi_1, ..., phi_n]`` stands for ``phi_n o ... o phi_1``.
"""

from dataclasses import dataclass
from enum import Enum

from .models import ModelPoint, letter_admissible, model, same_orbit
from .params import Mobius

__all__ = [
    "ModelPoint", "Generator", "Piece", "Triangular", "Iso", "Word", "Position", "FormClass",
    "IsIsomorphism", "position", "compose_special", "reduce",
    "length", "proper_base_points", "cancel_scan", "normal_form", "is_tame_triangular",
    "inverse_word", "letter_from_json",
]


class Position(Enum):
    SPECIAL = "special"
    GENERAL = "general"


class FormClass(Enum):
    BIREGULAR = "biregular"
    SPECIAL_TRIANGULAR = "special_triangular"
    GENERAL_PAIR = "general_pair"


class _IsIsomorphism:
    def __repr__(self):
        return "IsIsomorphism"


IsIsomorphism = _IsIsomorphism()


def _action_json(g, m):
    named = next((name for name, h in m.generators.items() if h == g), None)
    return named if named else {"matrix": g.to_json()}


def _action_from_json(data, m):
    if isinstance(data, str):
        try:
            return m.generators[data]
        except KeyError:
            raise ValueError(f"{m.id} has no automorphism generator {data!r}") from None
    if isinstance(data, dict) and "matrix" in data:
        g = Mobius.from_json(data["matrix"], m.field)
    else:
        g = Mobius.from_json(data, m.field)
    if not m.contains_action(g):
        raise ValueError(f"{g} is not an automorphism of {m.id}")
    return g


@dataclass(frozen=True)
class Generator:
    """A formal triangular map between two boundary points."""

    tag: str
    src: ModelPoint
    dst: ModelPoint
    k: int
    inverted: bool = False

    def inverse(self):
        return Generator(self.tag, self.dst, self.src, self.k, not self.inverted)

    @property
    def name(self):
        return self.tag + ("^-1" if self.inverted else "")


@dataclass(frozen=True)
class Piece:
    """``post o gen o pre`` for automorphisms ``pre`` and ``post`` of the end models."""

    gen: Generator
    pre: Mobius
    post: Mobius

    @property
    def src(self):
        return ModelPoint(self.gen.src.model, self.pre.inverse()(self.gen.src.param))

    @property
    def dst(self):
        return ModelPoint(self.gen.dst.model, self.post(self.gen.dst.param))

    def inverse(self):
        return Piece(self.gen.inverse(), self.post.inverse(), self.pre.inverse())

    def is_inverse_of(self, other):
        return self.gen == other.gen.inverse() and (self.pre @ other.post).is_identity()


@dataclass(frozen=True)
class Triangular:
    """A triangular letter: a formal product of special-position pieces."""

    pieces: tuple

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise ValueError("a triangular letter needs at least one piece")
        for a, b in zip(pieces, pieces[1:]):
            if a.dst != b.src:
                raise ValueError("pieces of a triangular letter must meet in special position")
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def new(cls, src, dst, k=2, tag="g"):
        if isinstance(k, bool) or not isinstance(k, int) or k < 2:
            raise ValueError("k must be an integer >= 2")
        if not letter_admissible(src, dst):
            raise ValueError(f"no triangular map from {src} to {dst}: pencils are not isomorphic")
        ident = Mobius.identity()
        return cls((Piece(Generator(tag, src, dst, k), ident, ident),))

    @property
    def src(self):
        return self.pieces[0].src

    @property
    def dst(self):
        return self.pieces[-1].dst

    @property
    def k(self):
        """Degree of a single generator; None for merged letters."""
        return self.pieces[0].gen.k if len(self.pieces) == 1 else None

    @property
    def tag(self):
        return "*".join(p.gen.name for p in reversed(self.pieces))

    def inverse(self):
        return Triangular(tuple(p.inverse() for p in reversed(self.pieces)))

    def conjugate(self, before, after):
        """``after o self o before``, for automorphisms of the source and target models."""
        first, last = self.pieces[0], self.pieces[-1]
        if len(self.pieces) == 1:
            return Triangular((Piece(first.gen, first.pre @ before, after @ first.post),))
        return Triangular((Piece(first.gen, first.pre @ before, first.post), *self.pieces[1:-1],
                           Piece(last.gen, last.pre, after @ last.post)))

    def __str__(self):
        return f"{self.tag}: {self.src} -> {self.dst}"

    def to_json(self):
        data = {"type": "tri", "src": self.src.to_json(), "dst": self.dst.to_json(),
                "k": self.k, "tag": self.tag}
        if len(self.pieces) > 1 or not (self.pieces[0].pre.is_identity() and self.pieces[0].post.is_identity()):
            data["pieces"] = [_piece_json(p) for p in self.pieces]
        return data


def _piece_json(p):
    g = p.gen
    return {"tag": g.tag, "inverted": g.inverted, "k": g.k,
            "src": g.src.to_json(), "dst": g.dst.to_json(),
            "pre": _action_json(p.pre, model(g.src.model)),
            "post": _action_json(p.post, model(g.dst.model))}


def _piece_from_json(data):
    try:
        src, dst = ModelPoint.from_json(data["src"]), ModelPoint.from_json(data["dst"])
        gen = Generator(data["tag"], src, dst, data.get("k"), bool(data.get("inverted", False)))
        pre = _action_from_json(data.get("pre", {"matrix": [["1", "0"], ["0", "1"]]}), model(src.model))
        post = _action_from_json(data.get("post", {"matrix": [["1", "0"], ["0", "1"]]}), model(dst.model))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed piece {data!r}: {exc}") from None
    return Piece(gen, pre, post)


@dataclass(frozen=True)
class Iso:
    """An isomorphism of pairs acting on the boundary parameter."""

    src_model: str
    dst_model: str
    action: Mobius

    def __post_init__(self):
        if self.src_model != self.dst_model:
            raise ValueError("the catalog has no isomorphisms between distinct models")
        if not model(self.src_model).contains_action(self.action):
            raise ValueError(f"{self.action} is not an automorphism of {self.src_model}")

    @classmethod
    def named(cls, model_id, name):
        return cls(model_id, model_id, _action_from_json(name, model(model_id)))

    def __call__(self, p):
        return ModelPoint(self.dst_model, self.action(p.param))

    def inverse(self):
        return Iso(self.dst_model, self.src_model, self.action.inverse())

    def __str__(self):
        return f"iso {self.src_model} {self.action}"

    def to_json(self):
        return {"type": "iso", "src": self.src_model, "dst": self.dst_model,
                "action": _action_json(self.action, model(self.src_model))}


def _src_model(letter):
    return letter.src_model if isinstance(letter, Iso) else letter.src.model


def _dst_model(letter):
    return letter.dst_model if isinstance(letter, Iso) else letter.dst.model


def letter_from_json(data):
    if not isinstance(data, dict):
        raise ValueError(f"malformed letter {data!r}")
    kind = data.get("type")
    try:
        if kind == "iso":
            m = model(data["src"])
            if data.get("dst", m.id) != m.id:
                raise ValueError("the catalog has no isomorphisms between distinct models")
            return Iso(m.id, m.id, _action_from_json(data["action"], m))
        if kind == "tri":
            if "pieces" in data:
                letter = Triangular(tuple(_piece_from_json(p) for p in data["pieces"]))
                if letter.src != ModelPoint.from_json(data["src"]) or letter.dst != ModelPoint.from_json(data["dst"]):
                    raise ValueError("letter endpoints disagree with its pieces")
                return letter
            return Triangular.new(ModelPoint.from_json(data["src"]), ModelPoint.from_json(data["dst"]),
                                  data.get("k", 2), data.get("tag", "g"))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed letter {data!r}: {exc}") from None
    raise ValueError(f"unknown letter type {kind!r}")


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __post_init__(self):
        letters = tuple(self.letters)
        for i, (a, b) in enumerate(zip(letters, letters[1:])):
            if _dst_model(a) != _src_model(b):
                raise ValueError(f"letters {i} and {i + 1} do not compose: {_dst_model(a)} vs {_src_model(b)}")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def then(self, other):
        """The word applying ``self`` first and ``other`` second."""
        return Word(self.letters + tuple(other.letters))

    def power(self, k):
        if k < 0:
            return inverse_word(self).power(-k)
        return Word(self.letters * k)

    @property
    def triangular(self):
        return [x for x in self.letters if isinstance(x, Triangular)]

    def to_json(self):
        return {"letters": [x.to_json() for x in self.letters]}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or not isinstance(data.get("letters"), list):
            raise ValueError("word JSON must be an object with a 'letters' list")
        return cls(tuple(letter_from_json(x) for x in data["letters"]))


def inverse_word(w):
    return Word(tuple(x.inverse() for x in reversed(w.letters)))


def position(l1, l2):
    """Relative position of ``l1`` followed by ``l2``."""
    if not isinstance(l1, Triangular) or not isinstance(l2, Triangular):
        raise ValueError("position is defined for triangular letters")
    if l1.dst.model != l2.src.model:
        raise ValueError(f"letters do not compose: {l1.dst.model} vs {l2.src.model}")
    return Position.SPECIAL if l1.dst == l2.src else Position.GENERAL


def compose_special(l1, l2, oracle=None):
    """``l2 o l1`` for a special-position pair: an Iso or a single triangular letter."""
    if position(l1, l2) is not Position.SPECIAL:
        raise ValueError("letters are in general position")
    left, right = list(l1.pieces), list(l2.pieces)
    cancelled = False
    while left and right and right[0].is_inverse_of(left[-1]):
        a, b = left.pop(), right.pop(0)
        glue = b.post @ a.pre
        cancelled = True
        if right:
            right[0] = Piece(right[0].gen, right[0].pre @ glue, right[0].post)
        elif left:
            left[-1] = Piece(left[-1].gen, left[-1].pre, glue @ left[-1].post)
        else:
            return Iso(l1.src.model, l1.src.model, glue)
    if not cancelled and oracle is not None and oracle(l1, l2):
        src, dst = l1.src, l2.dst
        return Iso(src.model, dst.model, model(src.model).transporter(src.param, dst.param))
    return Triangular(tuple(left + right))


def _absorb(letters, strategy):
    """Fold every Iso into a neighbouring triangular letter."""
    out = list(letters)
    if strategy == "left":
        i = len(out) - 1
        while i >= 0:
            x = out[i]
            if isinstance(x, Iso) and i + 1 < len(out):
                nxt = out.pop(i + 1)
                out[i] = _attach(x, nxt, before=True)
            i -= 1
        if len(out) >= 2 and isinstance(out[-1], Iso):
            iso = out.pop()
            out[-1] = _attach(iso, out[-1], before=False)
    elif strategy == "right":
        i = 0
        while i < len(out):
            x = out[i]
            if isinstance(x, Iso) and i > 0:
                prev = out.pop(i - 1)
                i -= 1
                out[i] = _attach(x, prev, before=False)
            i += 1
        if len(out) >= 2 and isinstance(out[0], Iso):
            iso = out.pop(0)
            out[0] = _attach(iso, out[0], before=True)
    else:
        raise ValueError(f"unknown reduction strategy {strategy!r}")
    return out


def _attach(iso, letter, before):
    """``letter o iso`` if ``before`` else ``iso o letter``."""
    if isinstance(letter, Iso):
        if before:
            return Iso(iso.src_model, letter.dst_model, letter.action @ iso.action)
        return Iso(letter.src_model, iso.dst_model, iso.action @ letter.action)
    ident = Mobius.identity()
    return letter.conjugate(iso.action, ident) if before else letter.conjugate(ident, iso.action)


def _drop_identity(letters):
    if len(letters) == 1 and isinstance(letters[0], Iso) and letters[0].action.is_identity():
        return []
    return letters


def reduce(w, strategy="left", oracle=None):
    """Rewrite ``w`` into a minimal decomposition: all adjacent letters in general position."""
    letters = _absorb(w.letters, strategy)
    if strategy == "right":
        letters = [x.inverse() for x in reversed(letters)]
        inv_oracle = None if oracle is None else (lambda a, b: oracle(b.inverse(), a.inverse()))
        result = _reduce_left(letters, inv_oracle)
        return Word(tuple(x.inverse() for x in reversed(result.letters)))
    return _reduce_left(letters, oracle)


def _reduce_left(letters, oracle):
    stack = []
    pending = list(letters)
    while pending:
        cur = pending.pop(0)
        if isinstance(cur, Iso):
            if pending:
                pending[0] = _attach(cur, pending[0], before=True)
            elif stack:
                stack[-1] = _attach(cur, stack[-1], before=False)
            else:
                stack.append(cur)
            continue
        if stack and isinstance(stack[-1], Triangular) and position(stack[-1], cur) is Position.SPECIAL:
            pending.insert(0, compose_special(stack.pop(), cur, oracle))
            continue
        stack.append(cur)
    return Word(tuple(_drop_identity(stack)))


def length(w):
    return len(reduce(w).triangular)


def proper_base_points(w):
    r = reduce(w)
    tri = r.triangular
    if not tri:
        return IsIsomorphism
    return tri[0].src, tri[-1].dst


def cancel_scan(w):
    """Index ``i`` in 2..n-1 such that the first ``i`` triangular letters compose to an isomorphism.

    Returns None unless ``w`` is strictly birational with proper base point
    different from that of its first triangular letter.
    """
    ends = proper_base_points(w)
    letters = _absorb(w.letters, "left")
    tri_positions = [j for j, x in enumerate(letters) if isinstance(x, Triangular)]
    n = len(tri_positions)
    if ends is IsIsomorphism or n < 2 or ends[0] == letters[tri_positions[0]].src:
        return None
    for i in range(2, n):
        if not reduce(Word(tuple(letters[:tri_positions[i - 1] + 1]))).triangular:
            return i
    return None


def normal_form(w, budget=None):
    """Conjugate a self-map word until it is biregular, special triangular or a general pair.

    Returns ``(conjugator, core, class)`` with ``w = conjugator o core o conjugator^-1``.
    """
    if w.letters and _src_model(w.letters[0]) != _dst_model(w.letters[-1]):
        raise ValueError("normal form needs a word from a model to itself")
    core = reduce(w)
    conj = Word()
    if budget is None:
        budget = len(core.triangular)
    steps = 0
    while True:
        tri = core.triangular
        n = len(tri)
        if n == 0:
            return conj, core, FormClass.BIREGULAR
        bs, bsinv = tri[0].src, tri[-1].dst
        if bs != bsinv:
            return conj, core, FormClass.GENERAL_PAIR
        if n == 1:
            return conj, core, FormClass.SPECIAL_TRIANGULAR
        if steps >= budget:
            raise AssertionError("conjugation budget exhausted: length failed to decrease")
        last = tri[-1]
        nxt = reduce(Word((last,)).then(core).then(Word((last.inverse(),))))
        if len(nxt.triangular) >= n:
            raise AssertionError("conjugation did not shorten the word")
        conj = Word((last,)).then(conj)
        core = nxt
        steps += 1


def is_tame_triangular(letter):
    if not isinstance(letter, Triangular):
        raise ValueError("tameness test applies to triangular letters")
    if letter.src.model != letter.dst.model:
        raise ValueError("tameness test needs a self-map of one model")
    return same_orbit(letter.src.model, letter.src.param, letter.dst.param)
