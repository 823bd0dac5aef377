# database/ig26_tables.py
# Small quantum cohomology of the isotropic Grassmannian IG(2,6).
# Products with D1, D2, D3 are entered as printed; every other
# multiplication matrix follows from the recurrences, in order.

IG26_SPEC_TEXT = """\
BASIS
D0 0
D1 1
D2 2
D1,1 2
D3 3
D2,1 3
D4 4
D3,1 4
D4,1 5
D3,2 5
D4,2 6
D4,3 7

GRADING
q_degree 5
t_degree -1
divisor_beta 1

GENERATORS
D1 * D0 = D1
D1 * D1 = D2 + D1,1
D1 * D2 = D3 + D2,1
D1 * D1,1 = D2,1
D1 * D3 = 2*D4 + D3,1
D1 * D2,1 = D4 + 2*D3,1
D1 * D4 = D4,1 + q*D0
D1 * D3,1 = D4,1 + D3,2
D1 * D4,1 = D4,2 + q*D1
D1 * D3,2 = D4,2
D1 * D4,2 = D4,3 + q*D2
D1 * D4,3 = q*D3
D2 * D0 = D2
D2 * D1 = D3 + D2,1
D2 * D2 = 2*D4 + 2*D3,1
D2 * D1,1 = D4 + D3,1
D2 * D3 = 2*D4,1 + D3,2 + q*D0
D2 * D2,1 = 2*D4,1 + D3,2 + q*D0
D2 * D4 = D4,2 + q*D1
D2 * D3,1 = D4,2 + q*D1
D2 * D4,1 = D4,3 + q*D2 + q*D1,1
D2 * D3,2 = q*D2
D2 * D4,2 = q*D3 + q*D2,1
D2 * D4,3 = q*D4 + q*D3,1
D3 * D0 = D3
D3 * D1 = 2*D4 + D3,1
D3 * D2 = 2*D4,1 + D3,2 + q*D0
D3 * D1,1 = D4,1 + q*D0
D3 * D3 = 2*D4,2 + q*D1
D3 * D2,1 = D4,2 + 2*q*D1
D3 * D4 = D4,3 + q*D2
D3 * D3,1 = q*D2 + q*D1,1
D3 * D4,1 = q*D2,1 + q*D3
D3 * D3,2 = q*D2,1
D3 * D4,2 = 2*q*D3,1 + q*D4
D3 * D4,3 = q*D4,1 + q*D3,2

DERIVED
M1,1 = M1^2 - M2
M2,1 = M1*M2 - M3
M3,1 = -1/3*M1*(M3 - 2*M2,1)
M4 = M1*M2,1 - 2*M3,1
M4,1 = M1*M4 - q*M0
M3,2 = M1*M3,1 - M4,1
M4,2 = M1*M4,1 - q*M1
M4,3 = M1*M4,2 - q*M2

UNIT
D0

POINT
D4,3

DEFORM
D2
"""

# Spectrum of the q=1 specialization: one homomorphism per component ring.
# Classes missing from a row map to 0; the unit maps to 1.
CHARACTER_TABLE = {
    "Z0": {
        "variable": "e",
        "modulus": "e^2",
        "values": {
            "1": "0", "2": "e", "1,1": "-e", "2,1": "0", "3": "0", "3,1": "0",
            "4": "0", "4,1": "-1", "3,2": "1", "4,2": "0", "4,3": "-e",
        },
    },
    "Z1": {
        "variable": "s",
        "modulus": "s^5 + 1",
        "values": {
            "1": "s", "2": "0", "1,1": "s^2", "2,1": "s^3", "3": "-s^3", "3,1": "s^4",
            "4": "-s^4", "4,1": "0", "3,2": "-1", "4,2": "-s", "4,3": "-s^2",
        },
    },
    "Z2": {
        "variable": "u",
        "modulus": "u^5 - 27",
        "values": {
            "1": "u", "2": "2/3*u^2", "1,1": "1/3*u^2", "2,1": "1/3*u^3", "3": "1/3*u^3",
            "3,1": "1/9*u^4", "4": "1/9*u^4", "4,1": "2", "3,2": "1", "4,2": "u",
            "4,3": "1/3*u^2",
        },
    },
}

# Characteristic polynomial of M1 at q=1, as a product over the components
M1_CHARPOLY_AT_Q1 = "x^2*(x^5 + 1)*(x^5 - 27)"

# Square-zero element of the small ring
NILPOTENT_WITNESS = "D4,3 - q*D2 + q*D1,1"

SPEC_DESCRIPTION = "IG(2,6) small quantum cohomology"
