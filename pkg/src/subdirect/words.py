"""Free-group words: reduction, conjugacy, roots, centralizers, homomorphisms.

Letters are signed integers: ``i`` is the i-th generator (1-based) and ``-i``
its formal inverse.  Every :class:`Word` is freely reduced on construction.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

__all__ = [
    "Alphabet",
    "Word",
    "FreeHom",
    "reduce",
    "cyclic_reduce",
    "primitive_root",
    "free_conjugacy",
    "centralizer",
    "apply_hom",
    "commutator",
    "exponent_vector",
    "parse_word",
]


@dataclass(frozen=True)
class Alphabet:
    """Generators ``1..rank`` of a free group, each with a formal inverse.

    An alphabet doubles as the free group it generates when used as the
    target of a :class:`FreeHom`.
    """

    rank: int
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != self.rank or len(set(self.names)) != self.rank:
                raise ValueError("names must be distinct, one per letter")

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    def letter_name(self, x: int) -> str:
        i = abs(x)
        if self.names is not None:
            name = self.names[i - 1]
        elif self.rank <= 26:
            name = "abcdefghijklmnopqrstuvwxyz"[i - 1]
        else:
            name = f"x{i}"
        return name if x > 0 else name[0].upper() + name[1:]

    def word(self, letters: Iterable[int] = ()) -> "Word":
        return Word(self, letters)

    def gen(self, i: int) -> "Word":
        return Word(self, (i,))

    @property
    def gens(self) -> list["Word"]:
        return [self.gen(i) for i in self.letters]

    # group-target protocol
    def identity(self) -> "Word":
        return Word(self, ())

    def multiply(self, u: "Word", v: "Word") -> "Word":
        return u * v

    def inverse(self, u: "Word") -> "Word":
        return u.inverse()

    def check(self, u: Any) -> "Word":
        if not isinstance(u, Word) or u.alphabet.rank != self.rank:
            raise TypeError(f"expected a word over a rank-{self.rank} alphabet")
        return u


def _reduce_letters(letters: Iterable[int], rank: int) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if x == 0 or abs(x) > rank:
            raise ValueError(f"letter {x} outside alphabet of rank {rank}")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """A freely reduced word.  Immutable and hashable."""

    __slots__ = ("alphabet", "letters")

    def __init__(self, alphabet: Alphabet, letters: Iterable[int] = ()):
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "letters", _reduce_letters(letters, alphabet.rank))

    @classmethod
    def _trusted(cls, alphabet: Alphabet, letters: tuple[int, ...]) -> "Word":
        w = cls.__new__(cls)
        object.__setattr__(w, "alphabet", alphabet)
        object.__setattr__(w, "letters", letters)
        return w

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @property
    def syllables(self) -> tuple[tuple[int, int], ...]:
        """The word as ``(letter index, sign)`` pairs."""
        return tuple((abs(x), 1 if x > 0 else -1) for x in self.letters)

    def _same(self, other: "Word"):
        if self.alphabet.rank != other.alphabet.rank:
            raise ValueError("words over different alphabets")

    def __mul__(self, other: "Word") -> "Word":
        self._same(other)
        a, b = self.letters, other.letters
        k = 0
        while k < len(a) and k < len(b) and a[-1 - k] == -b[k]:
            k += 1
        return Word._trusted(self.alphabet, a[: len(a) - k] + b[k:])

    def inverse(self) -> "Word":
        return Word._trusted(self.alphabet, tuple(-x for x in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.alphabet.identity()
        core, conj = cyclic_reduce(self)
        return Word._trusted(
            self.alphabet, conj.letters + core.letters * n + conj.inverse().letters
        )

    def conjugate(self, g: "Word") -> "Word":
        """Return ``g * self * g^-1``."""
        return g * self * g.inverse()

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.alphabet.rank == other.alphabet.rank
            and self.letters == other.letters
        )

    def __hash__(self) -> int:
        return hash((self.alphabet.rank, self.letters))

    def __lt__(self, other: "Word") -> bool:
        return (len(self), self.letters) < (len(other), other.letters)

    def __str__(self) -> str:
        return "".join(self.alphabet.letter_name(x) for x in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self) or 'ε'!s})"


def reduce(raw: Sequence[int], alphabet: Alphabet) -> Word:
    """Freely reduce a sequence of signed letters."""
    return Word(alphabet, raw)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() * v.inverse() * u * v


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with ``core`` cyclically reduced."""
    x = w.letters
    i, j = 0, len(x) - 1
    while i < j and x[i] == -x[j]:
        i += 1
        j -= 1
    return Word._trusted(w.alphabet, x[i : j + 1]), Word._trusted(w.alphabet, x[:i])


def primitive_root(w: Word) -> tuple[Word, int]:
    """Return ``(root, k)`` with ``w == root**k``, ``k`` maximal."""
    if not w:
        raise ValueError("the identity has no primitive root")
    core, conj = cyclic_reduce(w)
    c = core.letters
    n = len(c)
    for p in range(1, n + 1):
        if n % p == 0 and c[:p] * (n // p) == c:
            root = Word._trusted(w.alphabet, c[:p])
            return root.conjugate(conj), n // p
    raise AssertionError("unreachable")


def free_conjugacy(u: Word, v: Word) -> Word | None:
    """Return ``g`` with ``g u g^-1 == v``, or ``None`` when none exists.

    Among rotations matching the cyclic cores, the least offset is used.
    """
    u._same(v)
    cu, a = cyclic_reduce(u)
    cv, b = cyclic_reduce(v)
    x, y = cu.letters, cv.letters
    if len(x) != len(y):
        return None
    if not x:
        return b * a.inverse()
    doubled = x + x
    for k in range(len(x)):
        if doubled[k : k + len(x)] == y:
            # rotation by k: y = p^-1 x p with p = x[:k]
            p = Word._trusted(u.alphabet, x[:k])
            return b * p.inverse() * a.inverse()
    return None


def centralizer(w: Word, alphabet: Alphabet | None = None) -> list[Word]:
    """Generators of the centralizer of ``w`` in the free group."""
    alphabet = alphabet or w.alphabet
    if not w:
        return alphabet.gens
    return [primitive_root(w)[0]]


def exponent_vector(w: Word) -> tuple[int, ...]:
    """Image of ``w`` in the abelianization ``Z^rank``."""
    v = [0] * w.alphabet.rank
    for x in w.letters:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


class FreeHom:
    """A homomorphism from a free group, given by one image per letter.

    ``target`` supplies the arithmetic: any object with ``identity()``,
    ``multiply(a, b)``, ``inverse(a)`` and ``check(a)``.  Alphabets (free
    groups), :class:`~subdirect.presentations.FiniteGroup`,
    :class:`~subdirect.intlin.AbelianGroup` and
    :class:`~subdirect.nilpotent.MagnusAlgebra` all qualify.
    """

    def __init__(self, source: Alphabet, images: Sequence[Any], target: Any):
        if len(images) != source.rank:
            raise ValueError(f"need {source.rank} images, got {len(images)}")
        self.source = source
        self.target = target
        self.images = tuple(target.check(img) for img in images)
        self._inverses = tuple(target.inverse(img) for img in self.images)

    def image_of_letter(self, x: int):
        return self.images[x - 1] if x > 0 else self._inverses[-x - 1]

    def __call__(self, w: Word):
        return apply_hom(self, w)

    def __repr__(self) -> str:
        return f"FreeHom(rank={self.source.rank}, target={self.target!r})"


def apply_hom(phi: FreeHom, w: Word):
    """Evaluate ``phi`` on ``w`` letter by letter in the target's arithmetic."""
    if w.alphabet.rank != phi.source.rank:
        raise ValueError("word is not over the homomorphism's source alphabet")
    t = phi.target
    acc = t.identity()
    for x in w.letters:
        acc = t.multiply(acc, phi.image_of_letter(x))
    return acc


_TOKEN = re.compile(r"([A-Za-z])(\d*)|(\S)")


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse ``"aB"`` / ``"a1 B2"`` style text: lowercase names are generators, uppercase inverses."""
    lookup = {alphabet.letter_name(i): i for i in alphabet.letters}
    letters = []
    for m in _TOKEN.finditer(text):
        if m.group(3) is not None:
            if m.group(3) in "1ε":  # explicit identity
                continue
            raise ValueError(f"unexpected character {m.group(3)!r} in word {text!r}")
        name = m.group(1).lower() + m.group(2)
        if name not in lookup:
            raise ValueError(f"unknown generator {name!r} (alphabet: {sorted(lookup)})")
        letters.append(lookup[name] if m.group(1).islower() else -lookup[name])
    return Word(alphabet, letters)
