import numpy

from stegedge.errors import PayloadTooLarge, OddPayloadLength
from stegedge.images import GrayImage, MAX_INTENSITY, as_bit_array, bits_from_array

__all__ = ['BaselineConfig', 'lsb_embed', 'lsbm_embed', 'lsbmr_embed', 'baseline_embed', 'baseline_extract',
           'BASELINE_METHODS']

BASELINE_METHODS = ('lsb', 'lsbm', 'lsbmr')


class BaselineConfig:
    def __init__(self, method='lsb', seed=0, scatter=False):
        if method not in BASELINE_METHODS:
            raise ValueError("unknown method {}; try one of {}".format(method, ", ".join(BASELINE_METHODS)))
        self.method = method
        self.seed = seed
        self.scatter = scatter

    def rng(self):
        return numpy.random.default_rng(self.seed)

    def __repr__(self):
        return "BaselineConfig({}, seed={}, scatter={})".format(self.method, self.seed, self.scatter)


def _visit_order(pixel_count, wanted, rng, scatter):
    if wanted > pixel_count:
        raise PayloadTooLarge("{} bits won't fit in {} pixels".format(wanted, pixel_count))
    if scatter:
        return rng.permutation(pixel_count)[:wanted]
    return numpy.arange(wanted)


def _prepare(cover, payload, cfg):
    bits = as_bit_array(payload).astype(numpy.int16)
    rng = cfg.rng()
    order = _visit_order(cover.size, len(bits), rng, cfg.scatter)
    return bits, rng, order, cover.flat().astype(numpy.int16)


def _finish(cover, flat):
    return GrayImage(flat.astype(numpy.uint8).reshape(cover.height, cover.width))


def lsb_embed(cover, payload, cfg):
    bits, rng, order, flat = _prepare(cover, payload, cfg)
    flat[order] = (flat[order] & 0xFE) | bits
    return _finish(cover, flat)


def _steps(values, rng):
    # a random +1 or -1, pushed back inside the range at the ends
    step = rng.choice(numpy.array([-1, 1], dtype=numpy.int16), size=len(values))
    step = numpy.where(values == 0, 1, step)
    return numpy.where(values == MAX_INTENSITY, -1, step)


def lsbm_embed(cover, payload, cfg):
    bits, rng, order, flat = _prepare(cover, payload, cfg)
    values = flat[order]
    steps = _steps(values, rng)
    flat[order] = numpy.where((values & 1) != bits, values + steps, values)
    return _finish(cover, flat)


def _pair_bit(x, y):
    return ((x >> 1) + y) & 1


def lsbmr_embed(cover, payload, cfg):
    """
    Pairs (x, y) of consecutive visited pixels carry two bits: m1 as the LSB
    of x and m2 as the LSB of floor(x/2) + y. At most one of the pair moves,
    by one, except when x sits at 0 or 255 and the move it needs would leave
    the range; then x takes the other direction and y makes up the parity.
    """
    if len(as_bit_array(payload)) % 2:
        raise OddPayloadLength("LSBMR embeds bits in pairs; pad the payload to an even length")
    bits, rng, order, flat = _prepare(cover, payload, cfg)
    first, second = order[0::2], order[1::2]
    m1, m2 = bits[0::2], bits[1::2]
    x, y = flat[first], flat[second]

    new_x = x.copy()
    moving = (x & 1) != m1
    downward = _pair_bit(x - 1, y) == m2
    new_x = numpy.where(moving, numpy.where(downward, x - 1, x + 1), new_x)
    new_x = numpy.where(new_x < 0, 1, numpy.where(new_x > MAX_INTENSITY, MAX_INTENSITY - 1, new_x))

    steps = _steps(y, rng)
    new_y = numpy.where(_pair_bit(new_x, y) != m2, y + steps, y)

    flat[first] = new_x
    flat[second] = new_y
    return _finish(cover, flat)


_EMBEDDERS = {'lsb': lsb_embed, 'lsbm': lsbm_embed, 'lsbmr': lsbmr_embed}


def baseline_embed(cover, payload, cfg):
    return _EMBEDDERS[cfg.method](cover, payload, cfg)


def baseline_extract(stego, method, payload_bits, seed=0, scatter=False):
    """
    Reads a baseline payload back. seed only matters for scattered
    embedding, where it fixes the pixel visiting order.
    """
    if method not in BASELINE_METHODS:
        raise ValueError("unknown method {}".format(method))
    if method == 'lsbmr' and payload_bits % 2:
        raise OddPayloadLength("LSBMR payloads have an even number of bits")
    order = _visit_order(stego.size, payload_bits, numpy.random.default_rng(seed), scatter)
    values = stego.flat().astype(numpy.int16)[order]
    if method == 'lsbmr':
        x, y = values[0::2], values[1::2]
        bits = numpy.stack([x & 1, _pair_bit(x, y)], axis=1).ravel()
    else:
        bits = values & 1
    return bits_from_array(bits)
