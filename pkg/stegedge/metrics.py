import collections
import math

import numpy

from stegedge.errors import DimensionMismatch
from stegedge.images import MAX_INTENSITY

__all__ = ['QualityReport', 'EmbeddingRate', 'mse', 'psnr', 'modification_rate', 'pixel_change_rate',
           'embedding_rate', 'bit_rate', 'payload_bits_for_rate', 'quality_report', 'INFINITE_PSNR']

# psnr of two identical images
INFINITE_PSNR = math.inf

EmbeddingRate = collections.namedtuple('EmbeddingRate', 'bpp percent')

QualityReport = collections.namedtuple('QualityReport',
                                       'mse psnr modification_rate pixel_change_rate embedding_rate')


def _check_same_size(a, b):
    if (a.width, a.height) != (b.width, b.height):
        raise DimensionMismatch("can't compare a {}x{} image with a {}x{} one".format(
            a.width, a.height, b.width, b.height))


def mse(a, b):
    _check_same_size(a, b)
    difference = a.pixels.astype(numpy.int64) - b.pixels.astype(numpy.int64)
    return float(numpy.sum(difference * difference)) / a.size


def psnr_for_mse(error):
    if error == 0:
        return INFINITE_PSNR
    return 10 * math.log10(MAX_INTENSITY ** 2 / error)


def psnr(a, b):
    return psnr_for_mse(mse(a, b))


def modification_rate(a, b):
    """Flipped bit positions, over all eight planes, per pixel."""
    _check_same_size(a, b)
    return float(numpy.unpackbits(a.pixels ^ b.pixels).sum()) / a.size


def pixel_change_rate(a, b):
    _check_same_size(a, b)
    return float(numpy.count_nonzero(a.pixels != b.pixels)) / a.size


def embedding_rate(report, img):
    return bit_rate(report.bits_embedded, img)


def bit_rate(bits, img):
    bpp = bits / img.size
    return EmbeddingRate(bpp, 100.0 * bpp)


def payload_bits_for_rate(rate, img):
    """A k% rate means a payload of k% of the pixel count, in bits."""
    return int(round(rate / 100.0 * img.size))


def quality_report(cover, stego, bits_embedded=None):
    error = mse(cover, stego)
    rate = bit_rate(bits_embedded, cover) if bits_embedded is not None else None
    return QualityReport(error, psnr_for_mse(error), modification_rate(cover, stego),
                         pixel_change_rate(cover, stego), rate)
