import collections
import logging

import bitstring
import numpy

from stegedge.errors import (ImageTooNarrow, PayloadTooLarge, EmptyPayload, InvalidBlockSize, BadMagic,
                             UnsupportedVersion, CorruptHeader, DimensionMismatch, PlanMismatch,
                             InsufficientCapacity, ParameterOutOfRange)
from stegedge.images import GrayImage, as_bit_array, bits_from_array
from stegedge.metrics import psnr
from stegedge.mmed import mmed_map
from stegedge.planner import (Thresholds, split_payload, select_thresholds, build_region_plan,
                              DEFAULT_BLOCK_SIZE, THRESHOLD_RANGES)

__all__ = ['StegoHeader', 'EmbedReport', 'write_header', 'read_header', 'embed', 'extract', 'replay_plan',
           'HEADER_MAGIC', 'HEADER_VERSION', 'HEADER_BITS', 'MAX_PAYLOAD_BITS']

HEADER_MAGIC = 0xA5
HEADER_VERSION = 0x01
HEADER_FORMAT = 'uint:8, uint:8, uint:8, uint:8, uint:8, uint:8, uint:24'
HEADER_BITS = 72
MAX_PAYLOAD_BITS = 2 ** 24 - 1
MAX_BLOCK_SIZE = 255


class StegoHeader(collections.namedtuple('StegoHeader', 'magic version z t1 t2 t3 payload_bits')):
    """
    The 72-bit record carried in plane 1 of the first pixels of row 0. Fields
    are packed in order, each most significant bit first.
    """
    __slots__ = ()

    @classmethod
    def for_embedding(cls, z, thresholds, payload_bits):
        return cls(HEADER_MAGIC, HEADER_VERSION, z, thresholds.t1, thresholds.t2, thresholds.t3, payload_bits)

    @classmethod
    def from_bits(cls, bits):
        return cls(*bitstring.Bits(bits).unpack(HEADER_FORMAT))

    def to_bits(self):
        return bitstring.pack(HEADER_FORMAT, *self)

    def thresholds(self):
        return Thresholds(self.t1, self.t2, self.t3)


class EmbedReport:
    def __init__(self, bits_embedded, pixels_used, thresholds, plan, flipped_bits, psnr_hint=None):
        self.bits_embedded = bits_embedded
        self.pixels_used = tuple(pixels_used)
        self.thresholds = thresholds
        self.plan = plan
        self.flipped_bits = flipped_bits
        self.psnr_hint = psnr_hint

    def __repr__(self):
        return "EmbedReport(bits={}, pixels={}, {}, flipped={})".format(
            self.bits_embedded, self.pixels_used, self.thresholds, self.flipped_bits)


def _check_width(img):
    if img.width < HEADER_BITS:
        raise ImageTooNarrow("the header needs an image at least {} pixels wide, not {}".format(
            HEADER_BITS, img.width))


def write_header(img, h):
    _check_width(img)
    bits = as_bit_array(h.to_bits())
    pixels = img.pixels.copy()
    pixels[0, :HEADER_BITS] = (pixels[0, :HEADER_BITS] & 0xFE) | bits
    return GrayImage(pixels)


def read_header(img):
    _check_width(img)
    header = StegoHeader.from_bits(bits_from_array(img.pixels[0, :HEADER_BITS] & 1))
    if header.magic != HEADER_MAGIC:
        raise BadMagic("no stego header found (magic {:#04x})".format(header.magic))
    if header.version != HEADER_VERSION:
        raise UnsupportedVersion("header version {} is not supported".format(header.version))
    if header.z < 1:
        raise CorruptHeader("header block size is 0")
    for k, (t, (low, high)) in enumerate(zip((header.t1, header.t2, header.t3), THRESHOLD_RANGES), start=1):
        if not low <= t <= high:
            raise CorruptHeader("header T{} is {}, outside [{}, {}]".format(k, t, low, high))
    return header


def _case_pixels(plan, split, case):
    rows, cols = plan.pixels_for_case(case)
    wanted = split.pixels_needed(case)
    if len(rows) < wanted:
        raise PlanMismatch("plan has {} case-{} pixels but {} are needed".format(len(rows), case, wanted))
    return rows[:wanted], cols[:wanted]


def _chunked(bits, case):
    # one row per pixel; -1 marks the planes left alone in a part-filled last pixel
    padded = numpy.full(-(-len(bits) // case) * case, -1, dtype=numpy.int16)
    padded[:len(bits)] = bits
    return padded.reshape(-1, case)


# a case-k pixel hides bit t in plane t+1 XORed with plane t+1+k; key planes are never written
def _embed_along(pixels, plan, split, bits):
    offsets = split.offsets()
    for case in (1, 2, 3):
        sub_payload = bits[offsets[case - 1]:offsets[case]]
        if len(sub_payload) == 0:
            continue
        rows, cols = _case_pixels(plan, split, case)
        chunks = _chunked(sub_payload, case)
        values = pixels[rows, cols].astype(numpy.int16)
        for target in range(case):
            secret = chunks[:, target]
            key = (values >> (target + case)) & 1
            written = (values & (0xFF ^ (1 << target))) | ((key ^ secret) << target)
            values = numpy.where(secret >= 0, written, values)
        pixels[rows, cols] = values.astype(numpy.uint8)


def _extract_along(pixels, plan, split):
    offsets = split.offsets()
    recovered = numpy.zeros(split.total, dtype=numpy.uint8)
    for case in (1, 2, 3):
        wanted = split.bits_needed(case)
        if wanted == 0:
            continue
        rows, cols = _case_pixels(plan, split, case)
        values = pixels[rows, cols].astype(numpy.int16)
        planes = [((values >> target) & 1) ^ ((values >> (target + case)) & 1) for target in range(case)]
        recovered[offsets[case - 1]:offsets[case]] = numpy.stack(planes, axis=1).ravel()[:wanted]
    return recovered


def embed(cover, payload, z=DEFAULT_BLOCK_SIZE):
    _check_width(cover)
    bits = as_bit_array(payload)
    if len(bits) == 0:
        raise EmptyPayload("nothing to embed")
    if len(bits) > MAX_PAYLOAD_BITS:
        raise PayloadTooLarge("payload is {} bits; the header holds at most {}".format(len(bits), MAX_PAYLOAD_BITS))
    if not 1 <= z <= MAX_BLOCK_SIZE:
        raise InvalidBlockSize("block size must be in [1, {}], not {}".format(MAX_BLOCK_SIZE, z))

    edges = mmed_map(cover)
    split = split_payload(len(bits))
    thresholds = select_thresholds(edges, split)
    plan = build_region_plan(edges, z, thresholds, split)

    pixels = cover.pixels.copy()
    _embed_along(pixels, plan, split, bits)
    stego = write_header(GrayImage(pixels), StegoHeader.for_embedding(z, thresholds, len(bits)))

    flipped = int(numpy.unpackbits(cover.pixels ^ stego.pixels).sum())
    pixels_used = tuple(split.pixels_needed(case) for case in (1, 2, 3))
    logging.getLogger().info("embedded {} bits with {} in {} pixels".format(len(bits), thresholds, sum(pixels_used)))
    return stego, EmbedReport(len(bits), pixels_used, thresholds, plan, flipped, psnr(cover, stego))


def replay_plan(cover, header):
    """Rebuilds, from the cover and a header, the plan embed walked."""
    if header.payload_bits < 1:
        raise CorruptHeader("header declares an empty payload")
    split = split_payload(header.payload_bits)
    try:
        thresholds = header.thresholds()
    except ParameterOutOfRange as e:
        raise CorruptHeader(str(e))
    try:
        return build_region_plan(mmed_map(cover), header.z, thresholds, split), split
    except InsufficientCapacity as e:
        raise PlanMismatch("cover cannot hold the declared payload; is it the right cover? ({})".format(e))


def extract(cover, stego):
    if (cover.width, cover.height) != (stego.width, stego.height):
        raise DimensionMismatch("cover is {}x{} but stego is {}x{}".format(
            cover.width, cover.height, stego.width, stego.height))
    header = read_header(stego)
    plan, split = replay_plan(cover, header)
    bits = _extract_along(stego.pixels, plan, split)
    logging.getLogger().info("extracted {} bits with {}".format(len(bits), header.thresholds()))
    return bits_from_array(bits)
