"""Dehn twists acting on crossing words.

A twist about an embedded curve c is performed directly on the cut
polygon: the target is realized together with c, every crossing between
them is resolved by splicing in one full copy of c's crossing word, and
the spliced word is reduced.  The copy enters the word with c's own
orientation or the reversed one; which of the two depends on the local
crossing sign and on the handedness of the twist.  Positive means the
twist turns traffic to the right when looking along c.

Crossings between the target and c appear in the realization in two
forms and both are spliced:

*  a crossing of two chords inside the polygon inserts the copy after
   the target token that starts the crossed chord, phased to begin with
   the c-token that follows the crossing along c;
*  a strip crossing next to an arc inserts the copy just before the
   target token that crosses the arc, phased to begin with c's own
   passage through that strip when both words traverse the arc the same
   way, or just after it when they traverse it opposite ways.

The handedness conventions are pinned by the annulus and four-holed
sphere fixtures in the test suite rather than trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .surface import (
    ArcImage,
    Arrangement,
    Curve,
    Page,
    geometric_intersection,
    invert_word,
    normalize,
    pushoff,
)


# Relative handedness of the two crossing kinds, fixed by requiring that
# opposite twists undo each other and that a positive twist about the
# annulus core straightens the spanning arc.  See the convention notes.
_CHORD_CHIRALITY = -1
_STRIP_CHIRALITY = 1


@dataclass(frozen=True)
class TwistWord:
    """A composition of signed Dehn twists; the rightmost letter acts first."""

    letters: tuple

    def __post_init__(self):
        letters = tuple((curve, sign) for curve, sign in self.letters)
        for curve, sign in letters:
            if not isinstance(curve, Curve):
                raise TypeError("twist letters must be built from Curve values")
            if not curve.normalized or not curve.crossings:
                raise ValueError("twist curves must be normalized and essential")
            if sign not in (1, -1):
                raise ValueError(f"twist sign must be +1 or -1, got {sign!r}")
        object.__setattr__(self, "letters", letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((c, -s) for c, s in reversed(self.letters)))

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)


def _loop(curve_word, start, dir_sign, include_start):
    """One full copy of the twist curve, phased at a crossing.

    The copy begins with the token at index start (or just after it) and
    wraps around; a negative direction inserts the reversed copy.
    """
    if include_start:
        forward = curve_word[start:] + curve_word[:start]
    else:
        forward = curve_word[start + 1:] + curve_word[:start + 1]
    return forward if dir_sign > 0 else invert_word(forward)


def dehn_twist(page: Page, c: Curve, sign: int, target):
    """Image of a curve or arc under the signed Dehn twist about c."""
    if not isinstance(c, Curve):
        raise TypeError("can only twist about a Curve")
    if not c.normalized:
        raise ValueError("twist curve must be normalized")
    if not c.crossings:
        raise ValueError("cannot twist about a trivial curve")
    if sign not in (1, -1):
        raise ValueError(f"twist sign must be +1 or -1, got {sign!r}")
    if isinstance(target, ArcImage) and target.along_arc is not None:
        raise ValueError("twist a pushoff representative, not a basis-arc placeholder")
    if not isinstance(target, (Curve, ArcImage)):
        raise TypeError(f"cannot twist {type(target).__name__}")
    if not target.normalized:
        raise ValueError("twist target must be normalized")

    if geometric_intersection(page, c, target) == 0:
        return target

    arr = Arrangement(page, [c, target])
    word_c = c.crossings
    events_t = arr.events[1]

    # polygon crossings, attributed to the target chord they sit on
    interior: dict[int, list] = {j: [] for j in range(len(arr.chords[1]))}
    for j, chord_t in enumerate(arr.chords[1]):
        pos_p = arr.position[chord_t[0]]
        pos_q = arr.position[chord_t[1]]
        for l, chord_c in enumerate(arr.chords[0]):
            pos_r = arr.position[chord_c[0]]
            pos_s = arr.position[chord_c[1]]
            r_inside = arr._between(pos_r, pos_p, pos_q)
            s_inside = arr._between(pos_s, pos_p, pos_q)
            if r_inside == s_inside:
                continue
            sigma = 1 if r_inside else -1
            inside = pos_r if r_inside else pos_s
            offset = (inside - pos_p) % arr.n_positions
            loop = _loop(word_c, l, _CHORD_CHIRALITY * sign * sigma,
                         include_start=False)
            interior[j].append((offset, loop))
        interior[j].sort(key=lambda pair: pair[0])

    # strip crossings, attributed to the target token they sit at
    flips: dict[int, list] = {}
    for arc, k_c, k_t in arr.flips_between(0, 1):
        eps_c = arr.events[0][k_c][2]
        eps_t = events_t[k_t][2]
        tf_c, ts_c = arr.strand_params(0, k_c)
        tf_t, ts_t = arr.strand_params(1, k_t)
        sigma = eps_t * eps_c * (1 if ts_t > ts_c else -1)
        loop = _loop(word_c, k_c, _STRIP_CHIRALITY * sign * sigma,
                     include_start=eps_c == eps_t)
        # Where along the target's passage the strands cross.  Strands run
        # straight between their two attachment ranks, so the crossing sits
        # at the parameter where the rank difference changes sign; several
        # crossings at one token are spliced in the order the target meets
        # them, which runs against the parameter when the target enters on
        # the second copy.
        d_f = tf_c - tf_t
        d_s = ts_c - ts_t
        depth = Fraction(d_f, d_f - d_s)
        flips.setdefault(k_t, []).append((depth if eps_t > 0 else -depth, loop))
    for stack in flips.values():
        stack.sort(key=lambda pair: pair[0])

    def splice(j):
        return [tok for _off, loop in interior[j] for tok in loop]

    def flip_splice(k):
        return [tok for _d, loop in flips.get(k, ()) for tok in loop]

    if isinstance(target, Curve):
        out = []
        m = len(events_t)
        for j in range(m):
            out.append(target.crossings[j])
            out.extend(splice(j))
            out.extend(flip_splice((j + 1) % m))
        image = normalize(page, Curve(tuple(out)))
    else:
        out = list(splice(0))
        for k in range(1, len(events_t) - 1):
            out.extend(flip_splice(k))
            out.append((events_t[k][1], events_t[k][2]))
            out.extend(splice(k))
        image = normalize(
            page, ArcImage(target.start_slot, target.end_slot, tuple(out)))

    if isinstance(image, Curve) and not image.crossings:
        raise RuntimeError("internal error: twist trivialized an essential curve")
    if isinstance(image, Curve) or image.crossings:
        if Arrangement(page, [image]).self_crossings(0) != 0:
            raise RuntimeError("internal error: twist produced a self-crossing image")
    return image


def apply_word(page: Page, word: TwistWord, targets):
    """Images of arcs under a twist word, rightmost letter first."""
    images = list(targets)
    for curve, sign in reversed(word.letters):
        images = [dehn_twist(page, curve, sign, t) for t in images]
    return tuple(images)


def same_action_on_basis(page: Page, w1: TwistWord, w2: TwistWord) -> bool:
    """Do two twist words move every basis pushoff arc the same way?"""
    basis = [pushoff(page, i) for i in range(1, page.n_arcs + 1)]
    return apply_word(page, w1, basis) == apply_word(page, w2, basis)


__all__ = ["TwistWord", "dehn_twist", "apply_word", "same_action_on_basis"]
