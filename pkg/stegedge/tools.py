import logging
import math
import sys
from contextlib import contextmanager

import click

from stegedge import (read_image, write_image, bit_plane, mmed_map, split_payload, select_thresholds,
                      build_region_plan, capacity_summary, region_image, embed, extract, quality_report,
                      payload_bits_for_rate, RsMask, rs_statistics, rs_curve, BaselineConfig, baseline_embed,
                      baseline_extract, embedder_for, distortion_curve, compare_methods, StegEdgeError,
                      DEFAULT_BLOCK_SIZE, DEFAULT_MASK, DEFAULT_RATES, METHODS, BASELINE_METHODS)

_existing_file = click.Path(exists=True, dir_okay=False)
_output_file = click.Path(dir_okay=False, writable=True)

block_size_option = click.option('--block-size', '-z', type=click.IntRange(1, 255), default=DEFAULT_BLOCK_SIZE,
                                 envvar='STEGEDGE_BLOCK_SIZE', show_default=True,
                                 help='edge of the square blocks the region selector works in')
seed_option = click.option('--seed', type=int, default=0, show_default=True)


@contextmanager
def exit_status_for_failures():
    try:
        yield
    except BrokenPipeError:
        sys.exit(0)
    except StegEdgeError as e:
        print("error: {}".format(e), file=sys.stderr)
        sys.exit(e.exit_status)
    except OSError as e:
        print("error: {}".format(e), file=sys.stderr)
        sys.exit(2)


def psnr_text(value):
    if value is None:
        return ''
    if math.isinf(value):
        return 'inf'
    return "{:.2f}".format(value)


def number_text(value, places=4):
    if value is None:
        return ''
    return "{:.{places}f}".format(value, places=places)


def parse_mask(ctx, param, value):
    try:
        return RsMask.parse(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


def read_payload(path):
    with open(path, 'rb') as f:
        return f.read()


@click.group()
@click.option('--verbose', is_flag=True)
def cli(verbose):
    """ Edge adaptive LSB steganography for grayscale PGM images. """
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s: %(message)s")


@cli.command()
@click.argument('cover', type=_existing_file)
@block_size_option
def capacity(cover, block_size):
    """ Reports how many bits a cover can take at the loosest thresholds. """
    with exit_status_for_failures():
        summary = capacity_summary(mmed_map(read_image(cover)), block_size)
        print("    capacity: {} bits".format(summary.total_bits))
        for case, count in enumerate(summary.case_pixels, start=1):
            print("      case {}: {} pixels".format(case, count))
        print("      blocks: {} of {} usable".format(summary.useful_blocks, summary.block_count))


@cli.command('embed')
@click.argument('cover', type=_existing_file)
@click.argument('payload', type=_existing_file)
@click.option('--output', '-o', type=_output_file, required=True)
@click.option('--regions', type=_output_file, help='also write a map of the pixels used')
@block_size_option
def embed_command(cover, payload, output, regions, block_size):
    """ Hides a payload file in a cover image. """
    with exit_status_for_failures():
        img = read_image(cover)
        stego, report = embed(img, read_payload(payload), block_size)
        write_image(stego, output)
        if regions:
            write_image(region_image(report.plan, img.width, img.height), regions)
        print("     payload: {} bits".format(report.bits_embedded))
        print("  thresholds: {} {} {}".format(*report.thresholds))
        print(" pixels used: {} / {} / {}".format(*report.pixels_used))
        print("flipped bits: {}".format(report.flipped_bits))
        print("        psnr: {} dB".format(psnr_text(report.psnr_hint)))


@cli.command('extract')
@click.argument('cover', type=_existing_file)
@click.argument('stego', type=_existing_file)
@click.option('--output', '-o', type=_output_file, required=True)
def extract_command(cover, stego, output):
    """ Recovers a payload, given the stego image and its original cover. """
    with exit_status_for_failures():
        bits = extract(read_image(cover), read_image(stego))
        with open(output, 'wb') as f:
            f.write(bits.tobytes())
        print("recovered {} bits".format(len(bits)))


@cli.command()
@click.argument('cover', type=_existing_file)
@click.argument('stego', type=_existing_file)
@click.option('--bits', type=int, help='payload size, for the embedding rate')
def metrics(cover, stego, bits):
    """ Compares a stego image with its cover. """
    with exit_status_for_failures():
        report = quality_report(read_image(cover), read_image(stego), bits)
        print("         mse: {:.6f}".format(report.mse))
        print("        psnr: {} dB".format(psnr_text(report.psnr)))
        print("modification: {:.4f} bpp".format(report.modification_rate))
        print("pixel change: {:.4f}".format(report.pixel_change_rate))
        if report.embedding_rate:
            print("   embedding: {:.4f} bpp ({:.2f}%)".format(*report.embedding_rate))


@cli.command('rs-analyze')
@click.argument('image', type=_existing_file)
@click.option('--mask', callback=parse_mask, default=",".join(str(e) for e in DEFAULT_MASK), show_default=True)
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False, allow_dash=True),
              help='write a rate sweep here as CSV ("-" for stdout)')
@click.option('--rate', '-r', 'rates', type=float, multiple=True, help='embedding rate in percent; repeatable')
@click.option('--method', type=click.Choice(METHODS), default='proposed', show_default=True)
@block_size_option
@seed_option
def rs_analyze(image, mask, csv_path, rates, method, block_size, seed):
    """ RS steganalysis of an image, optionally swept over embedding rates. """
    with exit_status_for_failures():
        img = read_image(image)
        stats = rs_statistics(img, mask)
        print("      groups: {}".format(stats.group_count))
        print("         R_m: {:.4f}".format(stats.r_m))
        print("         S_m: {:.4f}".format(stats.s_m))
        print("        R_-m: {:.4f}".format(stats.r_neg_m))
        print("        S_-m: {:.4f}".format(stats.s_neg_m))
        if csv_path:
            curve = rs_curve(img, sorted(rates or DEFAULT_RATES), embedder_for(method, block_size, seed), mask, seed)
            lines = ["rate,r_m,s_m,r_neg_m,s_neg_m"]
            for point in curve:
                if point.stats is None:
                    lines.append("{:g},,,,".format(point.rate))
                else:
                    lines.append("{:g},{:.6f},{:.6f},{:.6f},{:.6f}".format(point.rate, *point.stats[:4]))
            with click.open_file(csv_path, 'w') as f:
                f.write("\n".join(lines) + "\n")


@cli.command()
@click.argument('image', type=_existing_file)
@click.option('--output-prefix', '-o', required=True, help='planes are written to PREFIX-plane<k>.pgm')
@click.option('--plane', '-p', 'planes', type=click.IntRange(1, 8), multiple=True, default=(1, 2, 3),
              show_default=True)
def bitplanes(image, output_prefix, planes):
    """ Writes bit planes as black and white images for a visual attack. """
    with exit_status_for_failures():
        img = read_image(image)
        for plane in planes:
            path = "{}-plane{}.pgm".format(output_prefix, plane)
            write_image(bit_plane(img, plane).to_image(), path)
            print(path)


@cli.command()
@click.argument('cover', type=_existing_file)
@click.option('--output', '-o', type=_output_file, required=True)
def edgemap(cover, output):
    """ Writes the MMED edge map, clamped to 255, for inspection. """
    with exit_status_for_failures():
        write_image(mmed_map(read_image(cover)).to_image(), output)


@cli.command()
@click.argument('cover', type=_existing_file)
@click.option('--rate', '-r', type=float, required=True, help='embedding rate in percent')
@click.option('--output', '-o', type=_output_file, required=True)
@block_size_option
def regions(cover, rate, output, block_size):
    """ Shows which pixels a payload of the given rate would go into. """
    with exit_status_for_failures():
        img = read_image(cover)
        edges = mmed_map(img)
        split = split_payload(payload_bits_for_rate(rate, img))
        plan = build_region_plan(edges, block_size, select_thresholds(edges, split), split)
        write_image(region_image(plan, img.width, img.height), output)
        print("{} pixels in {} blocks; by case {} / {} / {}".format(len(plan), plan.blocks_used,
                                                                   *plan.per_case_counts))


@cli.command('baseline-embed')
@click.argument('cover', type=_existing_file)
@click.argument('payload', type=_existing_file)
@click.option('--output', '-o', type=_output_file, required=True)
@click.option('--method', type=click.Choice(BASELINE_METHODS), default='lsb', show_default=True)
@click.option('--scatter', is_flag=True, help='visit pixels in a seeded random order')
@seed_option
def baseline_embed_command(cover, payload, output, method, scatter, seed):
    """ Hides a payload with LSB replacement, LSB matching or LSBMR. """
    with exit_status_for_failures():
        data = read_payload(payload)
        write_image(baseline_embed(read_image(cover), data, BaselineConfig(method, seed, scatter)), output)
        print("embedded {} bits with {}".format(8 * len(data), method))


@cli.command('baseline-extract')
@click.argument('stego', type=_existing_file)
@click.option('--output', '-o', type=_output_file, required=True)
@click.option('--method', type=click.Choice(BASELINE_METHODS), default='lsb', show_default=True)
@click.option('--bits', type=click.IntRange(0), required=True, help='payload size in bits')
@click.option('--scatter', is_flag=True)
@seed_option
def baseline_extract_command(stego, output, method, bits, scatter, seed):
    """ Reads back a payload hidden by baseline-embed. """
    with exit_status_for_failures():
        recovered = baseline_extract(read_image(stego), method, bits, seed, scatter)
        with open(output, 'wb') as f:
            f.write(recovered.tobytes())


@cli.command()
@click.argument('cover', type=_existing_file)
@click.option('--rate', '-r', 'rates', type=float, multiple=True)
@click.option('--method', type=click.Choice(METHODS), default='proposed', show_default=True)
@block_size_option
@seed_option
def curve(cover, rates, method, block_size, seed):
    """ CSV of payload size against distortion across embedding rates. """
    with exit_status_for_failures():
        points = distortion_curve(read_image(cover), rates or DEFAULT_RATES, method, block_size, seed)
        print("rate,bits,psnr,modification_rate,pixel_change_rate")
        for p in points:
            print("{:g},{},{},{},{}".format(p.rate, p.bits, psnr_text(p.psnr), number_text(p.modification_rate),
                                            number_text(p.pixel_change_rate)))


@cli.command()
@click.argument('covers', type=_existing_file, nargs=-1, required=True)
@click.option('--rate', '-r', 'rates', type=float, multiple=True)
@click.option('--method', '-m', 'methods', type=click.Choice(METHODS), multiple=True)
@block_size_option
@seed_option
def compare(covers, rates, methods, block_size, seed):
    """ Average PSNR and modification rate per method and embedding rate. """
    with exit_status_for_failures():
        images = [read_image(c) for c in covers]
        rows = compare_methods(images, rates or [r for r in DEFAULT_RATES if r > 0], methods or METHODS,
                               block_size, seed)
        print("{:>6}  {:8}  {:>8}  {:>8}  {:>8}  {:>6}  {:>6}".format(
            'rate', 'method', 'psnr', 'mod', 'changed', 'images', 'failed'))
        for row in rows:
            print("{:>6g}  {:8}  {:>8}  {:>8}  {:>8}  {:>6}  {:>6}".format(
                row.rate, row.method, psnr_text(row.average_psnr), number_text(row.average_modification_rate),
                number_text(row.average_pixel_change_rate), row.images, row.failures))
