"""Printed matrices that the reproduction targets are compared against."""

EXAMPLE_1_1 = """\
000 000 000 000 000 000 000 000
000 101 111 010 110 011 001 100
000 100 010 110 001 101 011 111
000 111 110 001 011 100 101 010
000 001 101 100 111 110 010 011"""

EXAMPLE_3_2 = """\
00 00 00 00
00 01 10 11
00 10 11 01
00 11 01 10"""

EXAMPLE_3_3 = """\
000 000 000 000 000 000 000 000
000 001 010 100 011 110 111 101
000 010 100 011 110 111 101 001
000 100 011 110 111 101 001 010
000 011 110 111 101 001 010 100
000 110 111 101 001 010 100 011
000 111 101 001 010 100 011 110
000 101 001 010 100 011 110 111"""

HOM_IMAGE = """\
00 00 00 00 00 00 00 00
00 00 01 10 01 11 11 10
00 01 10 01 11 11 10 00
00 10 01 11 11 10 00 01
00 01 11 11 10 00 01 10
00 11 11 10 00 01 10 01
00 11 10 00 01 10 01 11
00 10 00 01 10 01 11 11"""

KRONECKER_A = """\
000 000 000 000
000 010 200 210
000 200 210 010
000 210 010 200"""

KRONECKER_B = """\
000 000 000 000
000 001 100 101
000 100 101 001
000 101 001 100"""

KRONECKER = """\
000 000 000 000 000 000 000 000 000 000 000 000 000 000 000 000
000 001 100 101 010 011 110 111 200 201 300 301 210 211 310 311
000 100 101 001 200 300 301 201 210 310 311 211 010 110 111 011
000 101 001 100 210 311 211 310 010 111 011 110 200 301 201 300"""

PAN_CHANG_E3 = """\
00 00 00 00 00 00 00 00 00 00 00 00 00 00 00 00
00 20 40 60 01 21 41 61 10 30 50 70 11 31 51 71
00 40 01 41 10 50 11 51 20 60 21 61 30 71 31 70
00 60 41 21 71 51 30 10 70 50 31 11 61 40 20 01"""

EXPANSION_Z4Z2_M = """\
01 10 20
21 01 10"""

EXPANSION_Z4Z2 = """\
00 00 00 00 00 00 00 00
00 10 01 11 21 31 20 30
00 20 10 30 01 21 11 31
00 30 11 01 20 10 31 21"""

EXPANSION_Z3Z3_M = """\
01 10
10 11"""

EXPANSION_Z3Z3 = """\
00 00 00 00 00 00 00 00 00
00 11 22 10 21 02 20 01 12
00 22 11 20 12 01 10 02 21
00 10 20 01 11 21 02 12 22
00 21 12 11 02 20 22 10 01
00 02 01 21 20 22 12 11 10
00 20 10 02 22 12 01 21 11
00 01 02 12 10 11 21 22 20
00 12 21 22 01 10 11 20 02"""

FIELD_Z2_3 = """\
001 010 100
010 100 011
100 011 110"""

FIELD_Z2_4 = """\
0001 0010 0100 1000
0010 0100 1000 0011
0100 1000 0011 0110
1000 0011 0110 1100"""

FIELD_IMAGE = """\
00 00 01 10
00 01 10 00
01 10 00 01
10 00 01 11"""

CONCAT_H = """\
010 300
300 610"""

CONCAT_Q = """\
001 100
100 201"""

CONCAT_Z9Z3Z3 = """\
010 300 001 100
300 610 100 201"""

CHAIN_Q1 = """\
00100 01000 10000
01000 10000 01100
10000 01100 11000"""

CHAIN_Q2 = """\
00010 02000 20000
02000 20000 02010
20000 02010 22000"""

CHAIN_TERMINAL = """\
00001 00020 00200 04000 40000
00020 00200 04000 40000 00201
00200 04000 40000 00201 04020"""

CHAIN_3X11 = """\
00001 00020 00200 04000 40000 00010 02000 20000 00100 01000 10000
00020 00200 04000 40000 00201 02000 20000 02010 01000 10000 01100
00200 04000 40000 00201 04020 20000 02010 22000 10000 01100 11000"""

CHAIN_Z16Z8Z4 = """\
002 020 040 400 800 001 010 100 200
042 002 822 020 400 010 201 001 100
840 402 800 820 (12)40 211 100 201 210"""

CHAIN_Z16Z8Z4_STRUCTURE = "Z16xZ8xZ4 > Z4xZ4xZ2"

CHAIN_ORDER_256_STRUCTURE = "Z256xZ32xZ16xZ4xZ2 > Z32xZ16xZ16xZ2 > Z16xZ4xZ4xZ2 > Z2xZ2xZ2"

EXAMPLE_4_4_B = [
    ["00", "00", "00", "00"],
    ["00", "10", "01", "11"],
    ["00", "01", "11", "10"],
    ["00", "11", "10", "01"],
]

EXAMPLE_4_4_E = [
    ["000", "000", "000"],
    ["001", "200", "200"],
    ["001", "000", "000"],
]

EXAMPLE_4_4_SETS = [
    "x H_1 ∪ y H_2 ∪ xy H_3",
    "yz H_1 ∪ x^3y H_2 ∪ x^3 H_3",
    "xyz H_1 ∪ x H_2 ∪ y H_3",
]

EXAMPLE_4_4_HYPERPLANES = ["<x^2>", "<z>", "<x^2z>"]
