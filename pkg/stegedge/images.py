import gzip
import logging
import os
import re

import bitstring
import numpy

from stegedge.errors import MalformedHeader, TruncatedData, UnsupportedMaxval, PlaneOutOfRange

__all__ = ['GrayImage', 'BitPlane', 'load_pgm', 'save_pgm', 'read_image', 'write_image',
           'get_bit', 'set_bit', 'bit_plane', 'as_bit_array', 'bits_from_array', 'MAX_INTENSITY']

MAX_INTENSITY = 255

# whitespace and #-to-end-of-line comments, then one header token
_pgm_token = re.compile(rb'(?:\s|#[^\r\n]*)*([^\s#]+)')
_pgm_whitespace = b' \t\n\r\x0b\x0c'


class GrayImage:
    """
    An 8-bit single-channel raster. Pixels are held as a read-only numpy array
    of shape (height, width), so row r, column c is pixels[r, c].
    """

    def __init__(self, pixels):
        array = numpy.array(pixels)
        if array.ndim != 2 or array.size == 0:
            raise ValueError("need a non-empty 2-d pixel array, not shape {}".format(array.shape))
        if array.dtype != numpy.uint8:
            if array.dtype.kind not in 'iub':
                raise ValueError("pixels must be integers, not {}".format(array.dtype))
            if array.min() < 0 or array.max() > MAX_INTENSITY:
                raise ValueError("pixels must lie in [0, {}]".format(MAX_INTENSITY))
            array = array.astype(numpy.uint8)
        array.flags.writeable = False
        self.pixels = array

    @classmethod
    def from_sequence(cls, width, height, values):
        values = list(values)
        if len(values) != width * height:
            raise ValueError("{}x{} image needs {} pixels, got {}".format(width, height, width * height, len(values)))
        return cls(numpy.array(values).reshape(height, width))

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def size(self):
        return self.pixels.size

    def flat(self):
        return self.pixels.ravel()

    def __eq__(self, other):
        return isinstance(other, GrayImage) and numpy.array_equal(self.pixels, other.pixels)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return "GrayImage({}x{})".format(self.width, self.height)


class BitPlane:
    def __init__(self, width, height, bits, plane_index):
        _check_plane(plane_index)
        bits = numpy.asarray(bits, dtype=numpy.uint8).reshape(height, width)
        bits.flags.writeable = False
        self.width = width
        self.height = height
        self.bits = bits
        self.plane_index = plane_index

    def to_image(self):
        return GrayImage(self.bits * MAX_INTENSITY)

    def __eq__(self, other):
        return isinstance(other, BitPlane) and self.plane_index == other.plane_index and \
               numpy.array_equal(self.bits, other.bits)

    def __repr__(self):
        return "BitPlane({}x{}, plane {})".format(self.width, self.height, self.plane_index)


def _check_plane(plane):
    if not 1 <= plane <= 8:
        raise PlaneOutOfRange("bit plane must be in [1, 8], not {}".format(plane))


def get_bit(pixel, plane):
    """Bit of weight 2^(plane-1); works on single values and numpy arrays alike."""
    _check_plane(plane)
    return (pixel >> (plane - 1)) & 1


def set_bit(pixel, plane, b):
    _check_plane(plane)
    mask = 1 << (plane - 1)
    return (pixel & (0xFF ^ mask)) | ((b & 1) << (plane - 1))


def bit_plane(img, plane):
    return BitPlane(img.width, img.height, get_bit(img.pixels, plane), plane)


def _next_token(data, pos):
    m = _pgm_token.match(data, pos)
    if not m:
        raise MalformedHeader("PGM header ends early at byte {}".format(pos))
    return m.group(1), m.end()


def _header_int(token, name):
    if not token.isdigit():
        raise MalformedHeader("PGM {} should be a number, not {!r}".format(name, token))
    return int(token)


def load_pgm(data):
    """
    Parses a binary (P5) PGM with maxval up to 255. Pixel values are taken
    as-is; there is no rescaling for smaller maxvals.
    """
    data = bytes(data)
    if not data.startswith(b'P5'):
        raise MalformedHeader("not a binary PGM; magic is {!r}".format(data[:2]))
    magic, pos = _next_token(data, 0)
    if magic != b'P5':
        raise MalformedHeader("not a binary PGM; magic is {!r}".format(magic))
    token, pos = _next_token(data, pos)
    width = _header_int(token, 'width')
    token, pos = _next_token(data, pos)
    height = _header_int(token, 'height')
    token, pos = _next_token(data, pos)
    maxval = _header_int(token, 'maxval')
    if width < 1 or height < 1:
        raise MalformedHeader("PGM dimensions must be positive, not {}x{}".format(width, height))
    if maxval > MAX_INTENSITY:
        raise UnsupportedMaxval("only 8-bit PGMs are supported; maxval is {}".format(maxval))
    if maxval < 1:
        raise MalformedHeader("PGM maxval must be positive")
    if pos >= len(data) or data[pos] not in _pgm_whitespace:
        raise MalformedHeader("PGM header must end with a single whitespace character")
    pos += 1

    expected = width * height
    payload = data[pos:pos + expected]
    if len(payload) < expected:
        raise TruncatedData("PGM declares {} pixels but has {} bytes".format(expected, len(payload)))
    if len(data) > pos + expected:
        logging.getLogger().warning("ignored {} trailing bytes after image data".format(len(data) - pos - expected))
    return GrayImage(numpy.frombuffer(payload, dtype=numpy.uint8).reshape(height, width))


def save_pgm(img):
    header = "P5\n{} {}\n{}\n".format(img.width, img.height, MAX_INTENSITY)
    return header.encode('ascii') + img.pixels.tobytes()


def read_image(source):
    if isinstance(source, (str, os.PathLike)):
        if str(source).endswith('.gz'):
            reader = gzip.open(source, mode='rb')
        else:
            reader = open(source, mode='rb')
        with reader as f:
            return load_pgm(f.read())
    return load_pgm(source.read())


def write_image(img, dest):
    if isinstance(dest, (str, os.PathLike)):
        if str(dest).endswith('.gz'):
            writer = gzip.open(dest, mode='wb')
        else:
            writer = open(dest, mode='wb')
        with writer as f:
            f.write(save_pgm(img))
    else:
        dest.write(save_pgm(img))


def as_bit_array(payload):
    """
    Turns a payload into a numpy array of 0/1 values. Bytes are read most
    significant bit first, which is also the order bitstring uses.
    """
    if isinstance(payload, (bytes, bytearray)):
        return numpy.unpackbits(numpy.frombuffer(bytes(payload), dtype=numpy.uint8))
    if isinstance(payload, bitstring.Bits):
        raw = numpy.frombuffer(payload.tobytes(), dtype=numpy.uint8)
        return numpy.unpackbits(raw)[:len(payload)]
    array = numpy.asarray(payload).ravel()
    if array.size and not ((array == 0) | (array == 1)).all():
        raise ValueError("payload bits must be 0 or 1")
    return array.astype(numpy.uint8)


def bits_from_array(array):
    array = numpy.asarray(array, dtype=numpy.uint8)
    return bitstring.Bits(bytes=numpy.packbits(array).tobytes(), length=len(array))
