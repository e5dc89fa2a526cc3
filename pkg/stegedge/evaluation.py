import collections
import logging
import math

import numpy

from stegedge.baselines import BaselineConfig, baseline_embed, BASELINE_METHODS
from stegedge.codec import embed
from stegedge.errors import StegEdgeError
from stegedge.metrics import psnr, modification_rate, pixel_change_rate, payload_bits_for_rate
from stegedge.planner import DEFAULT_BLOCK_SIZE

__all__ = ['CurvePoint', 'ComparisonRow', 'METHODS', 'DEFAULT_RATES', 'random_payload', 'embedder_for',
           'distortion_curve', 'compare_methods']

METHODS = ('proposed',) + BASELINE_METHODS
DEFAULT_RATES = (0, 10, 20, 30, 50)

CurvePoint = collections.namedtuple('CurvePoint',
                                    'rate bits psnr modification_rate pixel_change_rate error')

ComparisonRow = collections.namedtuple('ComparisonRow',
                                       'rate method average_psnr average_modification_rate '
                                       'average_pixel_change_rate images failures')


def random_payload(bit_count, seed=0):
    return numpy.random.default_rng(seed).integers(0, 2, size=bit_count, dtype=numpy.uint8)


def embedder_for(method, block_size=DEFAULT_BLOCK_SIZE, seed=0, scatter=False):
    if method == 'proposed':
        def embedder(cover, bits):
            return embed(cover, bits, block_size)[0]
    elif method in BASELINE_METHODS:
        cfg = BaselineConfig(method, seed, scatter)

        def embedder(cover, bits):
            if method == 'lsbmr' and len(bits) % 2:
                bits = numpy.append(bits, 0)
            return baseline_embed(cover, bits, cfg)
    else:
        raise ValueError("unknown method {}; try one of {}".format(method, ", ".join(METHODS)))
    return embedder


def distortion_curve(cover, rates, method='proposed', block_size=DEFAULT_BLOCK_SIZE, seed=0):
    embedder = embedder_for(method, block_size, seed)
    result = []
    for rate in rates:
        bit_count = payload_bits_for_rate(rate, cover)
        if bit_count == 0:
            result.append(CurvePoint(rate, 0, math.inf, 0.0, 0.0, None))
            continue
        try:
            stego = embedder(cover, random_payload(bit_count, seed))
        except StegEdgeError as e:
            logging.getLogger().warning("skipped rate {}% for {}: {}".format(rate, method, e))
            result.append(CurvePoint(rate, bit_count, None, None, None, e))
            continue
        result.append(CurvePoint(rate, bit_count, psnr(cover, stego), modification_rate(cover, stego),
                                 pixel_change_rate(cover, stego), None))
    return result


def _average(values):
    finite = [v for v in values if not math.isinf(v)]
    if not finite:
        return math.inf if values else None
    return sum(finite) / len(finite)


def compare_methods(covers, rates, methods=METHODS, block_size=DEFAULT_BLOCK_SIZE, seed=0):
    """
    Average PSNR, modification rate and pixel change rate per rate and method.
    Covers a method can't embed into at some rate count as failures and are
    left out of that row's averages.
    """
    covers = list(covers)
    rows = []
    for rate in rates:
        for method in methods:
            points = [distortion_curve(cover, [rate], method, block_size, seed + i)[0]
                      for i, cover in enumerate(covers)]
            good = [p for p in points if p.error is None]
            rows.append(ComparisonRow(rate, method,
                                      _average([p.psnr for p in good]),
                                      _average([p.modification_rate for p in good]),
                                      _average([p.pixel_change_rate for p in good]),
                                      len(good), len(points) - len(good)))
    return rows
