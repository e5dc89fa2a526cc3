import io
import os
import tempfile
from unittest import TestCase

import bitstring
import numpy
from testfixtures import LogCapture

from stegedge import *

tiny_pgm = b'P5\n3 2\n255\n' + bytes([0, 1, 2, 253, 254, 255])


class TestGrayImage(TestCase):
    def test_from_sequence(self):
        img = GrayImage.from_sequence(3, 2, [0, 1, 2, 3, 4, 5])
        self.assertEqual(3, img.width)
        self.assertEqual(2, img.height)
        self.assertEqual(6, img.size)
        self.assertEqual(5, img.pixels[1, 2])

    def test_wrong_count(self):
        with self.assertRaises(ValueError):
            GrayImage.from_sequence(3, 2, [0, 1, 2])

    def test_out_of_range_values(self):
        with self.assertRaises(ValueError):
            GrayImage([[0, 256]])
        with self.assertRaises(ValueError):
            GrayImage([[-1, 0]])

    def test_rejects_empty_and_flat_arrays(self):
        with self.assertRaises(ValueError):
            GrayImage(numpy.zeros((0, 4), dtype=numpy.uint8))
        with self.assertRaises(ValueError):
            GrayImage([1, 2, 3])

    def test_pixels_are_read_only(self):
        img = GrayImage([[1, 2], [3, 4]])
        with self.assertRaises(ValueError):
            img.pixels[0, 0] = 9

    def test_does_not_share_the_callers_array(self):
        source = numpy.array([[1, 2], [3, 4]], dtype=numpy.uint8)
        img = GrayImage(source)
        source[0, 0] = 99
        self.assertEqual(1, img.pixels[0, 0])

    def test_equality(self):
        self.assertEqual(GrayImage([[1, 2]]), GrayImage([[1, 2]]))
        self.assertNotEqual(GrayImage([[1, 2]]), GrayImage([[1, 3]]))
        self.assertNotEqual(GrayImage([[1, 2]]), GrayImage([[1], [2]]))

    def test_repr(self):
        self.assertEqual('GrayImage(3x2)', repr(GrayImage(numpy.zeros((2, 3), dtype=numpy.uint8))))


class TestBits(TestCase):
    def test_get_bit(self):
        self.assertEqual(1, get_bit(0b00000101, 1))
        self.assertEqual(0, get_bit(0b00000101, 2))
        self.assertEqual(1, get_bit(0b00000101, 3))
        self.assertEqual(1, get_bit(0b10000000, 8))

    def test_set_bit(self):
        self.assertEqual(0b00000111, set_bit(0b00000101, 2, 1))
        self.assertEqual(0b00000100, set_bit(0b00000101, 1, 0))
        self.assertEqual(0b00000101, set_bit(0b00000101, 1, 1))
        self.assertEqual(0, set_bit(128, 8, 0))

    def test_set_bit_uses_only_the_low_bit(self):
        self.assertEqual(0b00000101, set_bit(0b00000101, 2, 2))
        self.assertEqual(0b00000111, set_bit(0b00000101, 2, 3))
        self.assertEqual(0b10000000, set_bit(0, 8, 0xFF))

    def test_set_then_get(self):
        for pixel in (0, 1, 77, 128, 255):
            for plane in range(1, 9):
                for b in (0, 1):
                    changed = set_bit(pixel, plane, b)
                    self.assertEqual(b, get_bit(changed, plane))
                    self.assertEqual(pixel & ~(1 << (plane - 1)), changed & ~(1 << (plane - 1)))

    def test_works_on_arrays(self):
        pixels = numpy.array([4, 5, 6, 7], dtype=numpy.uint8)
        self.assertEqual([0, 1, 0, 1], list(get_bit(pixels, 1)))
        self.assertEqual([5, 5, 7, 7], list(set_bit(pixels, 1, 1)))

    def test_plane_out_of_range(self):
        for plane in (0, 9, -1):
            with self.assertRaises(PlaneOutOfRange):
                get_bit(5, plane)
            with self.assertRaises(PlaneOutOfRange):
                set_bit(5, plane, 1)

    def test_bit_plane(self):
        img = GrayImage([[1, 2], [3, 4]])
        plane = bit_plane(img, 2)
        self.assertEqual(2, plane.plane_index)
        self.assertEqual([[0, 1], [1, 0]], plane.bits.tolist())
        self.assertEqual([[0, 255], [255, 0]], plane.to_image().pixels.tolist())

    def test_bit_plane_rejects_bad_plane(self):
        with self.assertRaises(PlaneOutOfRange):
            bit_plane(GrayImage([[1]]), 0)


class TestPgm(TestCase):
    def test_load(self):
        img = load_pgm(tiny_pgm)
        self.assertEqual(3, img.width)
        self.assertEqual(2, img.height)
        self.assertEqual([[0, 1, 2], [253, 254, 255]], img.pixels.tolist())

    def test_save(self):
        self.assertEqual(tiny_pgm, save_pgm(load_pgm(tiny_pgm)))

    def test_comments_and_odd_whitespace(self):
        data = b'P5 # made by hand\n3\t2 # size\n# another comment\n255\n' + bytes(range(6))
        self.assertEqual(list(range(6)), load_pgm(data).flat().tolist())

    def test_pixel_data_may_start_with_whitespace_bytes(self):
        data = b'P5\n2 1\n255\n' + bytes([10, 32])
        self.assertEqual([10, 32], load_pgm(data).flat().tolist())

    def test_small_maxval_kept_as_is(self):
        self.assertEqual([[3, 15]], load_pgm(b'P5\n2 1\n15\n' + bytes([3, 15])).pixels.tolist())

    def test_wrong_magic(self):
        with self.assertRaises(MalformedHeader):
            load_pgm(b'P2\n3 2\n255\n0 1 2 3 4 5')
        with self.assertRaises(MalformedHeader):
            load_pgm(b'')

    def test_bad_numbers(self):
        with self.assertRaises(MalformedHeader):
            load_pgm(b'P5\nthree 2\n255\n' + bytes(6))
        with self.assertRaises(MalformedHeader):
            load_pgm(b'P5\n0 2\n255\n')

    def test_header_ends_early(self):
        with self.assertRaises(MalformedHeader):
            load_pgm(b'P5\n3 2')

    def test_sixteen_bit(self):
        with self.assertRaises(UnsupportedMaxval):
            load_pgm(b'P5\n1 1\n65535\n' + bytes(2))

    def test_truncated(self):
        with self.assertRaises(TruncatedData):
            load_pgm(tiny_pgm[:-1])

    def test_format_errors_share_exit_status(self):
        for e in (MalformedHeader, TruncatedData, UnsupportedMaxval):
            self.assertTrue(issubclass(e, ImageFormatError))
            self.assertEqual(2, e.exit_status)

    def test_trailing_data_is_ignored_with_a_warning(self):
        with LogCapture() as logs:
            img = load_pgm(tiny_pgm + b'extra')
            self.assertEqual(6, img.size)
        logs.check(('root', 'WARNING', 'ignored 5 trailing bytes after image data'))


class TestImageFiles(TestCase):
    def test_file_round_trip(self):
        img = GrayImage(numpy.arange(48, dtype=numpy.uint8).reshape(6, 8))
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, 'img.pgm')
            write_image(img, path)
            self.assertEqual(img, read_image(path))

    def test_gzip_round_trip(self):
        img = GrayImage(numpy.arange(48, dtype=numpy.uint8).reshape(6, 8))
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, 'img.pgm.gz')
            write_image(img, path)
            with open(path, 'rb') as f:
                self.assertEqual(b'\x1f\x8b', f.read(2))
            self.assertEqual(img, read_image(path))

    def test_file_objects(self):
        buffer = io.BytesIO()
        write_image(load_pgm(tiny_pgm), buffer)
        buffer.seek(0)
        self.assertEqual(load_pgm(tiny_pgm), read_image(buffer))

    def test_missing_file(self):
        with self.assertRaises(OSError):
            read_image('/nonexistent/cover.pgm')


class TestPayloadBits(TestCase):
    def test_bytes_are_msb_first(self):
        self.assertEqual([1, 0, 1, 0, 0, 0, 0, 1], as_bit_array(b'\xa1').tolist())

    def test_from_bitstring(self):
        self.assertEqual([1, 0, 1], as_bit_array(bitstring.Bits(bin='101')).tolist())

    def test_from_sequence(self):
        self.assertEqual([0, 1, 1], as_bit_array([0, 1, 1]).tolist())

    def test_rejects_non_bits(self):
        with self.assertRaises(ValueError):
            as_bit_array([0, 2])

    def test_to_bitstring(self):
        bits = bits_from_array([1, 0, 1, 1])
        self.assertIsInstance(bits, bitstring.Bits)
        self.assertEqual('1011', bits.bin)
        self.assertEqual(b'\xa1', bits_from_array(as_bit_array(b'\xa1')).tobytes())
