"""Published table values, kept exactly as printed.

Cells in scaled notation are stored as ``"mantissa e exponent"`` strings
(``"0.16894e-3"`` for 0.16894 x 10^-3) so the last printed digit, and with it
the comparison tolerance, can be recovered from the text.
"""

from __future__ import annotations

U = 0.5

# Table 1: partial sums at w = 1; rows are term counts 1..6.
TABLE1_POINTS = ((1.0, 0.1), (2.0, 0.5), (3.0, 1.0))
TABLE1_HPM = (
    ("0.5421", "0.0296", "0.0015"),
    ("0.6157", "0.0517", "0.0037"),
    ("0.6202", "0.0599", "0.0054"),
    ("0.6203", "0.0619", "0.0062"),
    ("0.6203", "0.0623", "0.0065"),
    ("0.6203", "0.0623", "0.0066"),
)
TABLE1_ADM = (
    ("0.5421", "0.0296", "0.0015"),
    ("0.6157", "0.0517", "0.0037"),
    ("0.6202", "0.0599", "0.0054"),
    ("0.6203", "0.0619", "0.0062"),
    ("0.6203", "0.0623", "0.0065"),
    ("0.6203", "0.0623", "0.0066"),
)

# Table 2: tau = 0.5, 5 terms; columns (exact, adm) for w = 0, 0.5, 1.
TABLE2_TAU = 0.5
TABLE2_W = (0.0, 0.5, 1.0)
TABLE2 = (
    (-2.0, "0.0780", "0.0780", "0.0321", "0.0321", "0.0140", "0.0141"),
    (-1.8, "0.1085", "0.1085", "0.0521", "0.0521", "0.0255", "0.0256"),
    (-1.6, "0.1499", "0.1499", "0.0843", "0.0843", "0.0463", "0.0464"),
    (-1.4, "0.2053", "0.2053", "0.1357", "0.1357", "0.0838", "0.0839"),
    (-1.2, "0.2777", "0.2776", "0.2168", "0.2166", "0.1510", "0.1509"),
    (-1.0, "0.3693", "0.3693", "0.3417", "0.3412", "0.2694", "0.2687"),
    (-0.8, "0.4804", "0.4804", "0.5274", "0.5268", "0.4728", "0.4709"),
    (-0.6, "0.6071", "0.6072", "0.7885", "0.7884", "0.8062", "0.8038"),
    (-0.4, "0.7398", "0.7400", "1.1239", "1.1253", "1.3085", "1.3107"),
    (-0.2, "0.8623", "0.8625", "1.4973", "1.4995", "1.9619", "1.9711"),
    (0.0, "0.9546", "0.9546", "1.8236", "1.8242", "2.6147", "2.6177"),
    (0.2, "0.9981", "0.9980", "1.9925", "1.9906", "2.9832", "2.9744"),
    (0.4, "0.9833", "0.9831", "1.9340", "1.9320", "2.8531", "2.8475"),
    (0.6, "0.9135", "0.9133", "1.6732", "1.6728", "2.3043", "2.3055"),
    (0.8, "0.8035", "0.8034", "1.3100", "1.3106", "1.6218", "1.6242"),
    (1.0, "0.6736", "0.6736", "0.9481", "0.9487", "1.0351", "1.0363"),
    (1.2, "0.5423", "0.5423", "0.6480", "0.6483", "0.6203", "0.6206"),
    (1.4, "0.4226", "0.4226", "0.4259", "0.4260", "0.3579", "0.3578"),
    (1.6, "0.3210", "0.3211", "0.2727", "0.2727", "0.2020", "0.2019"),
    (1.8, "0.2392", "0.2392", "0.1718", "0.1717", "0.1126", "0.1125"),
    (2.0, "0.1757", "0.1757", "0.1070", "0.1070", "0.0623", "0.0623"),
)

# Table 3: absolute error at tau = 1, w = 0.
TABLE3_TAU = 1.0
TABLE3_X = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)
TABLE3 = (
    ("0.16633", "0.14014", "0.00536", "0.16894e-3", "0.05289e-4", "0.01656e-5"),
    ("0.16633", "0.04438", "0.00198", "0.06271e-3", "0.0196e-4", "0.00615e-5"),
    ("0.02117", "0.00803", "0.00052", "0.01672e-3", "0.0052e-4", "0.00164e-5"),
    ("0.02117", "0.00029", "0.00011", "0.00345e-3", "0.0011e-4", "0.00034e-5"),
    ("0.00227", "0.00032", "0.00002", "0.00058e-3", "0.00018e-4", "0.00006e-5"),
)

# Table 4: absolute error at w = 0 for varying tau. The caption gives x = 5,
# but every printed cell is reproduced at x = 2.5 and none at x = 5.
TABLE4_X_CAPTION = 5.0
TABLE4_X = 2.5
TABLE4_TAU = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
TABLE4 = (
    ("0", "0.09406e-1", "0.20468e-1", "0.33453e-1", "0.48660e-1", "0.66420e-1"),
    ("0", "0.07481e-2", "0.31543e-2", "0.74844e-2", "0.14036e-2", "0.23140e-2"),
    ("0", "0.00378e-2", "0.03130e-2", "0.10915e-2", "0.26712e-2", "0.53820e-2"),
    ("0", "0.00124e-3", "0.02010e-3", "0.10286e-3", "0.32790e-3", "0.80512e-3"),
    ("0", "0.00020e-4", "0.00550e-4", "0.03909e-4", "0.151721e-4", "0.41623e-4"),
)
# (n_terms, tau) cells whose printed exponent breaks the row pattern; reported, never gating.
TABLE4_ADVISORY = frozenset({(2, 0.8), (2, 1.0)})

# Table 5: residual at x = 10, w = 0.
TABLE5_X = 10.0
TABLE5_TAU = (0.2, 0.4, 0.6, 0.8, 1.0)
TABLE5 = (
    ("-0.10409e-6", "-0.10409e-6", "-0.10409e-6", "-0.10409e-6", "-0.10409e-6"),
    ("-0.01803e-6", "-0.03605e-6", "-0.05408e-6", "-0.07211e-6", "-0.09014e-6"),
    ("-0.00156e-6", "-0.00625e-6", "-0.01405e-6", "-0.02498e-6", "-0.03903e-6"),
    ("-0.00009e-6", "-0.00072e-6", "-0.00243e-6", "-0.00577e-6", "-0.01127e-6"),
    ("-0.00000e-6", "-0.00006e-6", "-0.00032e-6", "-0.00010e-6", "-0.00243e-6"),
)

# Table 6: residual at tau = 1, w = 0.
TABLE6_TAU = 1.0
TABLE6_X = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)
TABLE6 = (
    ("0", "-0.09576", "-0.00338", "-0.01062e-2", "-0.03325e-4", "-0.10409e-6"),
    ("0.375", "-0.09358", "-0.00294", "-0.00920e-2", "-0.02880e-4", "-0.09014e-6"),
    ("-0.21094", "-0.04036", "-0.00128", "-0.00398e-2", "-0.01247e-4", "-0.03903e-6"),
    ("-0.04101", "-0.00822", "-0.00037", "-0.00115e-2", "-0.00360e-4", "-0.01127e-6"),
    ("0.07251", "-0.00041", "-0.00008", "-0.00025e-2", "-0.00078e-4", "-0.00244e-6"),
)
