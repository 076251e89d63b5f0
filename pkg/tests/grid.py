"""Configuration grid shared by the round-trip and structural tests."""
from nrpolar.config import select_params

# (label, channel, A, G, rnti)
GRID_SPECS = [
    # UCI with PC bits (A <= 19), with and without the minimum-weight PC bit
    *[("pucch", "pucch", A, G, None) for A, G in [
        (12, 21), (12, 40), (12, 64), (13, 100), (14, 180), (15, 200), (16, 300),
        (17, 450), (18, 700), (19, 1000), (19, 2000), (12, 24)]],
    # UCI without PC bits
    *[("pucch", "pucch", A, G, None) for A, G in [
        (20, 31), (20, 50), (24, 60), (32, 100), (32, 108), (40, 70), (48, 150),
        (64, 120), (64, 300), (100, 180), (128, 400), (200, 350), (250, 1000),
        (300, 600), (359, 2000), (500, 1000)]],
    # PUSCH, including both segmentation triggers and odd A
    *[("pusch", "pusch", A, G, None) for A, G in [
        (360, 1088), (361, 1100), (400, 1500), (600, 3000), (1013, 2100),
        (1200, 4000), (1201, 4001), (1706, 8000), (1500, 16384), (800, 1087),
        (40, 8192), (1000, 2200), (400, 1100), (700, 1200),
        (1100, 1800), (300, 500)]],
    # PDCCH, padded (A < 12) and unpadded, with and without RNTI
    *[("pdcch", "pdcch", A, G, rnti) for A, G, rnti in [
        (1, 40, None), (8, 54, 0xBEEF), (11, 108, None), (12, 54, 0x0001), (20, 108, None),
        (24, 216, 0xFFFF), (32, 144, None), (40, 432, 0x1234), (48, 100, None),
        (57, 864, 0xBEEF), (64, 1728, None), (80, 200, 0x4321), (100, 200, None),
        (120, 8192, 0xBEEF), (140, 500, None), (140, 300, 0x00FF), (10, 4000, 0x8000),
        (44, 2000, None)]],
    ("pbch", "pbch", 32, 864, None),
]


def grid_configs():
    return [(label, select_params(ch, A, G, rnti)) for label, ch, A, G, rnti in GRID_SPECS]
