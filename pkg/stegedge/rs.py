import collections
import logging

import numpy

from stegedge.errors import GroupTooShort, StegEdgeError
from stegedge.images import MAX_INTENSITY
from stegedge.metrics import payload_bits_for_rate

__all__ = ['RsMask', 'RsStats', 'RsCurvePoint', 'discrimination', 'flip', 'rs_statistics', 'rs_curve',
           'DEFAULT_MASK']

DEFAULT_MASK = (0, 1, 1, 0)


def _flip_tables():
    values = numpy.arange(MAX_INTENSITY + 1, dtype=numpy.int16)
    positive = values ^ 1
    # F-1 pairs -1/0, 1/2, 3/4 ...; odd values go up, even ones down
    negative = numpy.where(values % 2 == 1, values + 1, values - 1)
    negative = numpy.where((negative < 0) | (negative > MAX_INTENSITY), values, negative)
    return {1: positive, -1: negative, 0: values}


_FLIPS = _flip_tables()


class RsMask:
    def __init__(self, entries):
        entries = tuple(int(e) for e in entries)
        if len(entries) < 2:
            raise ValueError("a mask needs at least two entries")
        if any(e not in (-1, 0, 1) for e in entries):
            raise ValueError("mask entries must be -1, 0 or 1, not {}".format(entries))
        if not any(entries):
            raise ValueError("a mask needs at least one nonzero entry")
        self.entries = entries

    @classmethod
    def parse(cls, text):
        return cls(int(e) for e in text.replace(' ', '').split(','))

    def negated(self):
        return RsMask(-e for e in self.entries)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, RsMask) and self.entries == other.entries

    def __repr__(self):
        return "RsMask({})".format(list(self.entries))


class RsStats(collections.namedtuple('RsStats', 'r_m s_m r_neg_m s_neg_m group_count')):
    __slots__ = ()

    @property
    def unusable_m(self):
        return 1.0 - self.r_m - self.s_m if self.group_count else 0.0

    @property
    def unusable_neg_m(self):
        return 1.0 - self.r_neg_m - self.s_neg_m if self.group_count else 0.0

    def divergence(self):
        return abs(self.r_m - self.r_neg_m), abs(self.s_m - self.s_neg_m)


RsCurvePoint = collections.namedtuple('RsCurvePoint', 'rate stats error')


def discrimination(group):
    group = numpy.asarray(group, dtype=numpy.int64)
    if len(group) < 2:
        raise GroupTooShort("need at least two pixels, not {}".format(len(group)))
    return int(numpy.abs(numpy.diff(group)).sum())


def flip(value, direction):
    return int(_FLIPS[direction][value])


def _flipped(groups, mask):
    result = groups.copy()
    for position, direction in enumerate(mask.entries):
        result[:, position] = _FLIPS[direction][groups[:, position]]
    return result


def _smoothness(groups):
    return numpy.abs(numpy.diff(groups, axis=1)).sum(axis=1)


def rs_statistics(img, mask):
    n = len(mask)
    count = img.size // n
    if count == 0:
        return RsStats(0.0, 0.0, 0.0, 0.0, 0)
    groups = img.flat()[:count * n].astype(numpy.int16).reshape(count, n)
    original = _smoothness(groups)
    positive = _smoothness(_flipped(groups, mask))
    negative = _smoothness(_flipped(groups, mask.negated()))
    return RsStats(numpy.count_nonzero(positive > original) / count,
                   numpy.count_nonzero(positive < original) / count,
                   numpy.count_nonzero(negative > original) / count,
                   numpy.count_nonzero(negative < original) / count,
                   count)


def rs_curve(cover, rates, embedder, mask, seed=0):
    """
    RS statistics of stego images at each embedding rate, in percent. The
    embedder gets the cover and a random bit array; rates it can't manage are
    kept in the series with their error.
    """
    rates = list(rates)
    if rates != sorted(rates):
        raise ValueError("rates must be in ascending order")
    rng = numpy.random.default_rng(seed)
    result = []
    for rate in rates:
        if rate == 0:
            result.append(RsCurvePoint(rate, rs_statistics(cover, mask), None))
            continue
        bits = rng.integers(0, 2, size=payload_bits_for_rate(rate, cover), dtype=numpy.uint8)
        try:
            stego = embedder(cover, bits)
        except StegEdgeError as e:
            logging.getLogger().warning("skipped rate {}%: {}".format(rate, e))
            result.append(RsCurvePoint(rate, None, e))
            continue
        result.append(RsCurvePoint(rate, rs_statistics(stego, mask), None))
    return result
