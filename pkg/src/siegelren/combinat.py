"""Periodic A/B words of anti-renormalization and their jump bookkeeping.

A word is stored over one period; index ``j`` of the bi-infinite sequence
reads ``letters[j % q]``, so ``seq[-1]`` is the last letter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .rotnum import return_times

A, B = "A", "B"

_JUMP = {(A, B): 0, (B, A): 0, (A, A): -1, (B, B): 1}


@dataclass(frozen=True)
class PacWord:
    """One period of a word over {A, B}; ``p`` is set for words built from a rotation ``p/q``."""

    letters: str
    p: int | None = None

    def __post_init__(self):
        if not self.letters or set(self.letters) - {A, B}:
            raise ValueError(f"invalid word {self.letters!r}")

    @property
    def q(self) -> int:
        return len(self.letters)

    def __getitem__(self, j: int) -> str:
        return self.letters[j % len(self.letters)]

    def __str__(self) -> str:
        return " ".join(self.letters)

    @cached_property
    def _prefix(self):
        # cumulative (nu, mu, kappa) over jumps 1..k for k = 0..q
        rows = [(0, 0, 0)]
        nu = mu = ka = 0
        for k in range(1, self.q + 1):
            i = jump(self, k)
            nu += i == 1
            mu += i == -1
            ka += i == 0
            rows.append((nu, mu, ka))
        return rows

    def invariant_violations(self) -> list[str]:
        """Which defining constraints of ``build_seq(p, q)`` fail (empty when valid)."""
        if self.p is None:
            return ["word has no rotation data"]
        p, q = self.p, self.q
        bad = []
        if self[0] != A:
            bad.append("seq[0] != A")
        if self[-1] != B:
            bad.append("seq[-1] != B")
        if self[-p - 1] != A:
            bad.append("seq[-p-1] != A")
        if self[-p] != B:
            bad.append("seq[-p] != B")
        skip = {(-p) % q, (-p - 1) % q}
        shifted = [j for j in range(q) if j not in skip and self[j + p] != self[j]]
        if shifted:
            bad.append(f"seq[j+p] != seq[j] at j={shifted[:5]}")
        rt = return_times(p, q)
        if self.letters.count(A) != rt.a or self.letters.count(B) != rt.b:
            bad.append("letter counts differ from the return times")
        return bad


def build_seq_block(q: int, ps=None) -> tuple[np.ndarray, np.ndarray]:
    """Words for several numerators at once: ``(ps, W)`` with ``W[k, j] = 1`` for A, 0 for B.

    Row k is the word of ``ps[k]/q`` (default: every p coprime to q).  The site
    ``j = i*p`` has ``i = j*b mod q``, so it carries A iff ``j*b mod q < a``, that is
    iff ``floor((j+1) b/q) == floor(j b/q)``: a mechanical word of slope ``b/q``.
    """
    if ps is None:
        ps = [p for p in range(1, q) if math.gcd(p, q) == 1]
    ps = np.asarray(ps, dtype=np.int64)
    # j*b/q is an integer only at j = 0 and j = q and otherwise lies at least 1/q from
    # one; binary32 resolves that while q**2 < 2**24, beyond that binary64 is used
    dtype = np.float32 if q < 4096 else np.float64
    bs = np.array([return_times(int(p), q).b for p in ps], dtype=dtype)
    fl = np.outer(bs, np.arange(q + 1, dtype=dtype))
    np.divide(fl, dtype(q), out=fl)
    np.floor(fl, out=fl)
    words = (fl[:, 1:] == fl[:, :-1]).view(np.uint8)
    return ps, words


def block_violations(q: int, ps: np.ndarray, words: np.ndarray) -> np.ndarray:
    """Per-row flag: the word breaks one of the defining constraints or has the wrong letter counts."""
    rows = np.arange(len(ps))
    a = np.array([return_times(int(p), q).a for p in ps], dtype=np.int64)
    bad = (words[:, 0] != 1) | (words[:, -1] != 0)
    bad |= words[rows, (-ps - 1) % q] != 1
    bad |= words[rows, (-ps) % q] != 0
    # row k shifted by p_k: a window into the doubled word
    doubled = np.concatenate([words, words], axis=1)
    shifted = np.lib.stride_tricks.sliding_window_view(doubled, q, axis=1)[rows, ps]
    diff = shifted != words
    diff[rows, (-ps) % q] = False
    diff[rows, (-ps - 1) % q] = False
    bad |= diff.any(axis=1)
    bad |= np.count_nonzero(words, axis=1) != a
    return bad


def build_seq(p: int, q: int) -> PacWord:
    """The unique q-periodic word for the rotation p/q.

    A sits at ``i*p`` for ``i < a`` and B at ``-1 + i*p`` for ``i < b``, where
    ``(a, b)`` are the return times.
    """
    return_times(p, q)  # validates p, q
    _, words = build_seq_block(q, [p])
    return PacWord("".join(A if x else B for x in words[0]), p)


def dual_word(word: PacWord) -> PacWord:
    """Swap A and B and reflect ``j -> -1 - j``; maps ``build_seq(p, q)`` to ``build_seq(q - p, q)``."""
    swap = {A: B, B: A}
    letters = "".join(swap[word[-1 - j]] for j in range(word.q))
    return PacWord(letters, None if word.p is None else word.q - word.p)


def jump(word: PacWord, j: int) -> int:
    """Jump between consecutive sectors: read from the letter pair ``(seq[j-1], seq[j])``."""
    return _JUMP[(word[j - 1], word[j])]


def jump_stats(word: PacWord, j: int) -> tuple[int, int, int]:
    """Signed counts ``(nu, mu, kappa)`` of +1, -1 and 0 jumps between 0 and ``j``.

    For ``j > 0`` the jumps ``1..j`` are counted; for ``j < 0`` the jumps
    ``j+1..0`` are counted with a minus sign.
    """
    q = word.q
    pre = word._prefix
    pn, pm, pk = pre[q]
    if j >= 0:
        full, rem = divmod(j, q)
        rn, rm, rk = pre[rem]
        return full * pn + rn, full * pm + rm, full * pk + rk
    # jumps j+1..0 repeat those of q+j+1..q; a partial window of length rem ends at q
    full, rem = divmod(-j, q)
    hn, hm, hk = pre[q - rem]
    return -(full * pn + pn - hn), -(full * pm + pm - hm), -(full * pk + pk - hk)


def total_jump(word: PacWord, k: int) -> int:
    """Jump from sector 0 to sector k, i.e. ``nu(k) - mu(k)``."""
    nu, mu, _ = jump_stats(word, k)
    return nu - mu


def zero_jumps_per_period(word: PacWord) -> int:
    return word._prefix[word.q][2]


def is_mixed(word: PacWord) -> bool:
    """Periodic words are mixed iff some period contains the pair (A, B) or (B, A)."""
    return zero_jumps_per_period(word) > 0


def kappa_divergence_check(word: PacWord, horizon: int) -> bool:
    """Finite check that ``kappa(j) -> +-infinity`` as ``j -> +-infinity``.

    Passes when the word has zero jumps and ``|kappa(+-horizon)|`` is at
    least the per-period rate ``horizon/q * zeros`` minus ``q``.
    """
    if horizon < word.q:
        raise ValueError("horizon must be at least one period")
    zeros = zero_jumps_per_period(word)
    bound = horizon * zeros / word.q - word.q
    if zeros == 0:
        return False
    return jump_stats(word, horizon)[2] >= bound and -jump_stats(word, -horizon)[2] >= bound


def jump_table(word: PacWord, js) -> list[dict]:
    rows = []
    for j in js:
        nu, mu, ka = jump_stats(word, j)
        rows.append({"j": j, "pair": word[j - 1] + word[j], "iota": jump(word, j),
                     "nu": nu, "mu": mu, "kappa": ka, "total": nu - mu})
    return rows
