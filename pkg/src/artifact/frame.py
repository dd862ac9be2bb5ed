"""Finite belief-selection frames.

A frame has states 0..n-1, a serial belief map (each state believes a
non-empty set of states) and a total selection function taking a state
and a non-empty event to an event. Events are int bitmasks over the
states; no constraint beyond totality is placed on the selection, so a
selected event may be empty.

The lifted selection U(s, E) is the union of f(s', E) over the states s'
believed at s. The seven checkable frame conditions are stated in terms
of U and the belief map; ``check_property`` evaluates one of them on a
frame and reports the first counterexample in a fixed scan order (states
ascending, then event masks ascending, pairs in lexicographic order).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

__all__ = [
    "Frame", "FrameFormatError", "PROPERTY_IDS", "bits", "mask_from_indices",
    "indices_from_mask", "check_property", "frame_count", "enumerate_frames",
    "sample_frame", "frame_to_json", "frame_from_json",
]


class FrameFormatError(ValueError):
    pass


def bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def indices_from_mask(mask: int) -> list[int]:
    return list(bits(mask))


def mask_from_indices(indices, n: int) -> int:
    mask = 0
    for i in indices:
        if not 0 <= i < n:
            raise FrameFormatError(f"state index {i} out of range for {n} states")
        if mask >> i & 1:
            raise FrameFormatError(f"duplicate state index {i}")
        mask |= 1 << i
    return mask


@dataclass(frozen=True, slots=True)
class Frame:
    n: int
    belief: tuple[int, ...]
    selection: tuple[tuple[int, ...], ...]  # selection[s][e - 1], e a non-empty mask

    def __post_init__(self):
        if self.n < 1:
            raise FrameFormatError("a frame needs at least one state")
        full = (1 << self.n) - 1
        if len(self.belief) != self.n:
            raise FrameFormatError("belief map must cover every state")
        for s, b in enumerate(self.belief):
            if b == 0:
                raise FrameFormatError(f"belief set of state {s} is empty")
            if b & ~full:
                raise FrameFormatError(f"belief set of state {s} out of range")
        if len(self.selection) != self.n:
            raise FrameFormatError("selection must cover every state")
        for s, row in enumerate(self.selection):
            if len(row) != full:
                raise FrameFormatError(
                    f"selection at state {s} must cover every non-empty event")
            for value in row:
                if value & ~full:
                    raise FrameFormatError(f"selected event at state {s} out of range")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def select(self, s: int, event: int) -> int:
        if event == 0:
            raise ValueError("selection is undefined on the empty event")
        return self.selection[s][event - 1]

    def update(self, s: int, event: int) -> int:
        """U(s, E): union of selections over the believed states."""
        if event == 0:
            raise ValueError("update is undefined on the empty event")
        out = 0
        for sp in bits(self.belief[s]):
            out |= self.selection[sp][event - 1]
        return out


# ---------------------------------------------------------------------------
# frame conditions

def _scan_events(n: int):
    return range(1, 1 << n)


def _p_star_2_diamond_1(fr: Frame):
    for s in range(fr.n):
        for e in _scan_events(fr.n):
            if fr.update(s, e) & ~e:
                return False, (s, e)
    return True, None


def _p_diamond_2(fr: Frame):
    for s in range(fr.n):
        b = fr.belief[s]
        for e in _scan_events(fr.n):
            if b & ~e == 0 and fr.update(s, e) != b:
                return False, (s, e)
    return True, None


def _p_star_5b_diamond_3b(fr: Frame):
    for s in range(fr.n):
        for e in _scan_events(fr.n):
            if all(fr.selection[sp][e - 1] == 0 for sp in bits(fr.belief[s])):
                return False, (s, e)
    return True, None


def _p_star_7_diamond_5(fr: Frame):
    for s in range(fr.n):
        for e in _scan_events(fr.n):
            ue = fr.update(s, e)
            for f in _scan_events(fr.n):
                if e & f == 0:
                    continue
                if ue & f & ~fr.update(s, e & f):
                    return False, (s, e, f)
    return True, None


def _p_diamond_6w(fr: Frame):
    for s in range(fr.n):
        for e in _scan_events(fr.n):
            ue = fr.update(s, e)
            for f in _scan_events(fr.n):
                if e & f == 0:
                    continue
                uf = fr.update(s, f)
                if ue & ~f == 0 and uf & ~e == 0 and ue != uf:
                    return False, (s, e, f)
    return True, None


def _p_diamond_7s(fr: Frame):
    for s in range(fr.n):
        for e in _scan_events(fr.n):
            ue = fr.update(s, e)
            for f in _scan_events(fr.n):
                if fr.update(s, e | f) & ~(ue | fr.update(s, f)):
                    return False, (s, e, f)
    return True, None


def _p_star_4(fr: Frame):
    full = fr.full
    for s in range(fr.n):
        b = fr.belief[s]
        for e in range(full + 1):
            if b & e == 0:
                continue
            ue = fr.update(s, e)
            for f in range(full + 1):
                if b & ~((full & ~e) | f):
                    continue
                if ue & ~f:
                    return False, (s, e, f)
    return True, None


_CHECKERS = {
    "P_star_2_diamond_1": _p_star_2_diamond_1,
    "P_diamond_2": _p_diamond_2,
    "P_star_5b_diamond_3b": _p_star_5b_diamond_3b,
    "P_star_7_diamond_5": _p_star_7_diamond_5,
    "P_diamond_6w": _p_diamond_6w,
    "P_diamond_7s": _p_diamond_7s,
    "P_star_4": _p_star_4,
}

PROPERTY_IDS = tuple(_CHECKERS)


def check_property(fr: Frame, prop_id: str):
    """Returns (holds, counterexample). The counterexample is (s, E) or
    (s, E, F) with events as masks, the first one in scan order."""
    try:
        checker = _CHECKERS[prop_id]
    except KeyError:
        raise ValueError(f"unknown frame property {prop_id!r}") from None
    return checker(fr)


# ---------------------------------------------------------------------------
# enumeration and sampling

def frame_count(n: int) -> int:
    events = (1 << n) - 1
    return events ** n * (1 << n) ** (n * events)


def enumerate_frames(n: int):
    """All frames on n states, in a fixed order. Exhaustive enumeration
    is refused for n >= 3 (the space is astronomically large)."""
    if n >= 3:
        raise ValueError(
            f"refusing to enumerate {frame_count(n)} frames; use sample_frame")
    full = (1 << n) - 1
    slots = n * full
    for belief in itertools.product(range(1, full + 1), repeat=n):
        for flat in itertools.product(range(full + 1), repeat=slots):
            selection = tuple(flat[s * full:(s + 1) * full] for s in range(n))
            yield Frame(n, belief, selection)


def sample_frame(n: int, rng: random.Random) -> Frame:
    full = (1 << n) - 1
    belief = tuple(rng.randrange(1, full + 1) for _ in range(n))
    selection = tuple(
        tuple(rng.randrange(full + 1) for _ in range(full)) for _ in range(n))
    return Frame(n, belief, selection)


# ---------------------------------------------------------------------------
# serialization

def frame_to_json(fr: Frame) -> dict:
    return {
        "states": fr.n,
        "belief": [indices_from_mask(b) for b in fr.belief],
        "selection": [
            {"s": s, "event": indices_from_mask(e), "value": indices_from_mask(fr.selection[s][e - 1])}
            for s in range(fr.n)
            for e in _scan_events(fr.n)
        ],
    }


def frame_from_json(data) -> Frame:
    if not isinstance(data, dict):
        raise FrameFormatError("frame document must be an object")
    try:
        n = data["states"]
        belief_lists = data["belief"]
        entries = data["selection"]
    except (KeyError, TypeError) as exc:
        raise FrameFormatError(f"missing frame field: {exc}") from None
    if not isinstance(n, int) or n < 1:
        raise FrameFormatError("states must be a positive integer")
    if not isinstance(belief_lists, list) or len(belief_lists) != n:
        raise FrameFormatError("belief must list one set per state")
    belief = tuple(mask_from_indices(ix, n) for ix in belief_lists)
    full = (1 << n) - 1
    table: dict[tuple[int, int], int] = {}
    if not isinstance(entries, list):
        raise FrameFormatError("selection must be a list of entries")
    for entry in entries:
        try:
            s, event, value = entry["s"], entry["event"], entry["value"]
        except (KeyError, TypeError):
            raise FrameFormatError(f"malformed selection entry: {entry!r}") from None
        if not isinstance(s, int) or not 0 <= s < n:
            raise FrameFormatError(f"selection entry state {s!r} out of range")
        e = mask_from_indices(event, n)
        if e == 0:
            raise FrameFormatError("selection entry on the empty event")
        if (s, e) in table:
            raise FrameFormatError(f"duplicate selection entry for s={s}, event={event}")
        table[s, e] = mask_from_indices(value, n)
    missing = [(s, e) for s in range(n) for e in _scan_events(n) if (s, e) not in table]
    if missing:
        s, e = missing[0]
        raise FrameFormatError(
            f"selection is not total: no entry for s={s}, event={indices_from_mask(e)}")
    selection = tuple(tuple(table[s, e] for e in _scan_events(n)) for s in range(n))
    return Frame(n, belief, selection)
