import collections
import logging

import numpy

from stegedge.errors import EmptyPayload, ParameterOutOfRange, InvalidBlockSize, InsufficientCapacity
from stegedge.images import GrayImage

__all__ = ['PayloadSplit', 'Thresholds', 'RegionPlan', 'CapacitySummary', 'split_payload', 'm_set_size',
           'select_thresholds', 'case_labels', 'block_capacity', 'build_region_plan', 'capacity_summary',
           'region_image', 'THRESHOLD_RANGES', 'DEFAULT_BLOCK_SIZE', 'PERMISSIVE_THRESHOLDS']

DEFAULT_BLOCK_SIZE = 32

# allowed threshold values for classes 1, 2 and 3; class k's M-set stops at 2^(3+k)
THRESHOLD_RANGES = ((0, 15), (16, 31), (32, 63))


class PayloadSplit(collections.namedtuple('PayloadSplit', 'len1 len2 len3')):
    __slots__ = ()

    @property
    def total(self):
        return self.len1 + self.len2 + self.len3

    def bits_needed(self, case):
        return self[case - 1]

    def pixels_needed(self, case):
        # a case-k pixel carries k bits; the last one may be part-filled
        return -(-self[case - 1] // case)

    def offsets(self):
        return 0, self.len1, self.len1 + self.len2, self.total


class Thresholds:
    def __init__(self, t1, t2, t3, shortfall=(False, False, False)):
        for k, (t, (low, high)) in enumerate(zip((t1, t2, t3), THRESHOLD_RANGES), start=1):
            if not low <= t <= high:
                raise ParameterOutOfRange("T{} must be in [{}, {}], not {}".format(k, low, high, t))
        self.t1 = int(t1)
        self.t2 = int(t2)
        self.t3 = int(t3)
        self.shortfall = tuple(bool(s) for s in shortfall)

    def has_shortfall(self):
        return any(self.shortfall)

    def __iter__(self):
        return iter((self.t1, self.t2, self.t3))

    def __eq__(self, other):
        return isinstance(other, Thresholds) and tuple(self) == tuple(other)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(tuple(self))

    def __repr__(self):
        return "Thresholds({}, {}, {})".format(self.t1, self.t2, self.t3)


# loosest thresholds that still ask for some edge; a pixel predicted exactly carries nothing
PERMISSIVE_THRESHOLDS = Thresholds(1, 16, 32)


class RegionPlan:
    """
    The embeddable pixels, in the order bits go into them: blocks left to
    right and top to bottom, pixels row-major inside each block.
    """

    def __init__(self, block_size, rows, cols, cases, blocks_used=0):
        self.block_size = block_size
        self.rows = _frozen(rows, numpy.int64)
        self.cols = _frozen(cols, numpy.int64)
        self.cases = _frozen(cases, numpy.int8)
        self.blocks_used = blocks_used

    @property
    def per_case_counts(self):
        return tuple(int(numpy.count_nonzero(self.cases == case)) for case in (1, 2, 3))

    @property
    def ordered_pixels(self):
        return [(int(r), int(c), int(k)) for r, c, k in zip(self.rows, self.cols, self.cases)]

    def capacity(self):
        return tuple(count * case for case, count in enumerate(self.per_case_counts, start=1))

    def pixels_for_case(self, case):
        chosen = self.cases == case
        return self.rows[chosen], self.cols[chosen]

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, RegionPlan) and self.block_size == other.block_size and \
               numpy.array_equal(self.rows, other.rows) and \
               numpy.array_equal(self.cols, other.cols) and \
               numpy.array_equal(self.cases, other.cases)

    def __repr__(self):
        return "RegionPlan(z={}, pixels={}, cases={})".format(self.block_size, len(self), self.per_case_counts)


CapacitySummary = collections.namedtuple('CapacitySummary', 'total_bits case_pixels block_count useful_blocks')


def _frozen(values, dtype):
    array = numpy.array(values, dtype=dtype).ravel()
    array.flags.writeable = False
    return array


def split_payload(total_bits):
    if total_bits < 1:
        raise EmptyPayload("nothing to embed")
    len1 = total_bits * 6 // 10
    len2 = total_bits * 3 // 10
    return PayloadSplit(len1, len2, total_bits - len1 - len2)


def _check_parameter(p, k):
    if k not in (1, 2, 3):
        raise ParameterOutOfRange("class index must be 1, 2 or 3, not {}".format(k))
    low, high = THRESHOLD_RANGES[k - 1]
    if not low <= p <= high:
        raise ParameterOutOfRange("p{} must be in [{}, {}], not {}".format(k, low, high, p))


def m_set_size(edges, p, k):
    _check_parameter(p, k)
    interior = edges.interior()
    return int(numpy.count_nonzero((interior >= p) & (interior < 2 ** (3 + k))))


def select_thresholds(edges, split):
    """
    For each class picks the largest parameter whose M-set still holds as many
    pixels as the sub-payload has bits. A class with no such parameter falls
    back to the bottom of its range and is flagged; whether the payload really
    fits is left to build_region_plan.
    """
    histogram = numpy.bincount(edges.interior().ravel(), minlength=64)[:64]
    chosen = []
    shortfall = []
    for k, (low, high) in enumerate(THRESHOLD_RANGES, start=1):
        # counts[i] is |M(low + i)|
        counts = numpy.cumsum(histogram[low:high + 1][::-1])[::-1]
        satisfying = numpy.flatnonzero(counts >= split[k - 1])
        if len(satisfying):
            chosen.append(low + int(satisfying[-1]))
            shortfall.append(False)
        else:
            logging.getLogger().warning("threshold shortfall for class {}: {} pixels available, {} bits requested"
                                        .format(k, int(counts[0]), split[k - 1]))
            chosen.append(low)
            shortfall.append(True)
    return Thresholds(*chosen, shortfall=shortfall)


def _classify(values, th):
    labels = numpy.zeros(values.shape, dtype=numpy.int8)
    labels[values >= th.t1] = 1
    labels[values >= th.t2] = 2
    labels[values >= th.t3] = 3
    return labels


def case_labels(edges, th):
    """Case label per pixel, 0 where nothing can be embedded."""
    labels = _classify(edges.values, th)
    labels[0, :] = 0
    labels[:, 0] = 0
    return labels


def block_capacity(edges, block_origin, z, th):
    row, col = block_origin
    if not (0 <= row < edges.height and 0 <= col < edges.width):
        raise ParameterOutOfRange("block origin {} is outside a {}x{} map".format(block_origin, edges.width,
                                                                                  edges.height))
    labels = _classify(edges.values[row:row + z, col:col + z], th)
    if row == 0:
        labels[0, :] = 0
    if col == 0:
        labels[:, 0] = 0
    # the label is also the number of bits the pixel carries
    return int(labels.sum())


def _block_raster_order(height, width, z):
    block_rows = -(-height // z)
    block_cols = -(-width // z)
    index = numpy.full((block_rows * z, block_cols * z), -1, dtype=numpy.int64)
    index[:height, :width] = numpy.arange(height * width, dtype=numpy.int64).reshape(height, width)
    order = index.reshape(block_rows, z, block_cols, z).transpose(0, 2, 1, 3).ravel()
    return order[order >= 0], block_cols


def _check_block_size(z):
    if z < 1:
        raise InvalidBlockSize("block size must be at least 1, not {}".format(z))


def build_region_plan(edges, z, th, split):
    _check_block_size(z)
    labels = case_labels(edges, th)
    order, block_cols = _block_raster_order(edges.height, edges.width, z)
    ordered_labels = labels.ravel()[order]
    eligible = ordered_labels > 0
    positions = order[eligible]
    cases = ordered_labels[eligible]
    rows, cols = numpy.divmod(positions, edges.width)
    blocks = (rows // z) * block_cols + cols // z

    last = -1
    short = False
    for case in (1, 2, 3):
        wanted = split.pixels_needed(case)
        if wanted == 0:
            continue
        found = numpy.flatnonzero(cases == case)
        if len(found) < wanted:
            short = True
        else:
            last = max(last, int(found[wanted - 1]))
    if short:
        available = tuple(int(numpy.count_nonzero(cases == case)) * case for case in (1, 2, 3))
        raise InsufficientCapacity(split, available)

    if last < 0:
        return RegionPlan(z, [], [], [], 0)

    # the block where the last condition was met is taken whole
    end = int(numpy.searchsorted(blocks, blocks[last], side='right'))
    blocks_used = len(numpy.unique(blocks[:end]))
    logging.getLogger().debug("region plan: {} pixels from {} blocks of {}x{}".format(end, blocks_used, z, z))
    return RegionPlan(z, rows[:end], cols[:end], cases[:end], blocks_used)


def capacity_summary(edges, z, th=PERMISSIVE_THRESHOLDS):
    _check_block_size(z)
    labels = case_labels(edges, th)
    block_rows = -(-edges.height // z)
    block_cols = -(-edges.width // z)
    rows, cols = numpy.indices(labels.shape)
    block_ids = (rows // z) * block_cols + cols // z
    per_block = numpy.bincount(block_ids.ravel(), weights=labels.ravel(), minlength=block_rows * block_cols)
    case_pixels = tuple(int(numpy.count_nonzero(labels == case)) for case in (1, 2, 3))
    return CapacitySummary(int(labels.sum()), case_pixels, block_rows * block_cols,
                           int(numpy.count_nonzero(per_block)))


def region_image(plan, width, height):
    """Plan pixels shaded 85, 170 or 255 by case on black."""
    shade = numpy.zeros((height, width), dtype=numpy.uint8)
    shade[plan.rows, plan.cols] = plan.cases.astype(numpy.uint8) * 85
    return GrayImage(shade)
