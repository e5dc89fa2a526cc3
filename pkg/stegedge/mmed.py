import numpy

from stegedge.images import GrayImage, MAX_INTENSITY

__all__ = ['EdgeMap', 'mmed_pixel', 'mmed_map', 'MAX_MMED']

MAX_MMED = 2 * MAX_INTENSITY


class EdgeMap:
    """
    Per-pixel MMED prediction-error magnitudes. Row 0 and column 0 have no
    complete template and are always 0.
    """

    def __init__(self, values):
        values = numpy.array(values, dtype=numpy.int16)
        if values.ndim != 2:
            raise ValueError("edge map must be 2-d, not shape {}".format(values.shape))
        values.flags.writeable = False
        self.values = values

    @property
    def width(self):
        return self.values.shape[1]

    @property
    def height(self):
        return self.values.shape[0]

    def interior(self):
        return self.values[1:, 1:]

    def __getitem__(self, position):
        return int(self.values[position])

    def to_image(self):
        # for looking at only; extraction never reads this back
        return GrayImage(numpy.minimum(self.values, MAX_INTENSITY))

    def __eq__(self, other):
        return isinstance(other, EdgeMap) and numpy.array_equal(self.values, other.values)

    def __repr__(self):
        return "EdgeMap({}x{})".format(self.width, self.height)


def mmed_pixel(x, a, b, c):
    """
    a is the upper-left neighbour, b the one above and c the one to the left.
    """
    x, a, b, c = int(x), int(a), int(b), int(c)
    if a >= max(b, c):
        return abs(x - min(b, c))
    elif a <= min(b, c):
        return abs(x - max(b, c))
    else:
        return abs(x - (b + c - a))


def mmed_map(img):
    px = img.pixels.astype(numpy.int16)
    x = px[1:, 1:]
    a = px[:-1, :-1]
    b = px[:-1, 1:]
    c = px[1:, :-1]

    high = numpy.maximum(b, c)
    low = numpy.minimum(b, c)
    prediction = numpy.where(a >= high, low, numpy.where(a <= low, high, b + c - a))

    values = numpy.zeros(px.shape, dtype=numpy.int16)
    values[1:, 1:] = numpy.abs(x - prediction)
    return EdgeMap(values)
