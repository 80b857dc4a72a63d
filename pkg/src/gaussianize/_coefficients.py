"""Polynomial coefficients shared by the numba and numpy kernels.

erf/erfc: rational approximations from the FreeBSD msun ``s_erf.c``
(Sun Microsystems, 1993; freely redistributable with this notice), max
error below 1 ulp over the double range.

erf_inv starting guess: the single-precision polynomial of M. Giles,
"Approximating the erfinv function" (GPU Computing Gems, 2011), relative
error around 1e-7 before refinement.
"""
import math

ERX = 8.45062911510467529297e-01
EFX = 1.28379167095512586316e-01

# erf on [0, 0.84375]
PP0 = 1.28379167095512558561e-01
PP1 = -3.25042107247001499370e-01
PP2 = -2.84817495755985104766e-02
PP3 = -5.77027029648944159157e-03
PP4 = -2.37630166566501626084e-05
QQ1 = 3.97917223959155352819e-01
QQ2 = 6.50222499887672944485e-02
QQ3 = 5.08130628187576562776e-03
QQ4 = 1.32494738004321644526e-04
QQ5 = -3.96022827877536812320e-06

# erf on [0.84375, 1.25]
PA0 = -2.36211856075265944077e-03
PA1 = 4.14856118683748331666e-01
PA2 = -3.72207876035701323847e-01
PA3 = 3.18346619901161753674e-01
PA4 = -1.10894694282396677476e-01
PA5 = 3.54783043256182359371e-02
PA6 = -2.16637559486879084300e-03
QA1 = 1.06420880400844228286e-01
QA2 = 5.40397917702171048937e-01
QA3 = 7.18286544141962662868e-02
QA4 = 1.26171219808761642112e-01
QA5 = 1.36370839120290507362e-02
QA6 = 1.19844998467991074170e-02

# erfc on [1.25, 1/0.35]
RA0 = -9.86494403484714822705e-03
RA1 = -6.93858572707181764372e-01
RA2 = -1.05586262253232909814e01
RA3 = -6.23753324503260060396e01
RA4 = -1.62396669462573470355e02
RA5 = -1.84605092906711035994e02
RA6 = -8.12874355063065934246e01
RA7 = -9.81432934416914548592e00
SA1 = 1.96512716674392571292e01
SA2 = 1.37657754143519042600e02
SA3 = 4.34565877475229228821e02
SA4 = 6.45387271733267880336e02
SA5 = 4.29008140027567833386e02
SA6 = 1.08635005541779435134e02
SA7 = 6.57024977031928170135e00
SA8 = -6.04244152148580987438e-02

# erfc on [1/0.35, 28]; the log form stays valid beyond 28
RB0 = -9.86494292470009928597e-03
RB1 = -7.99283237680523006574e-01
RB2 = -1.77579549177547519889e01
RB3 = -1.60636384855821916062e02
RB4 = -6.37566443368389627722e02
RB5 = -1.02509513161107724954e03
RB6 = -4.83519191608651397019e02
SB1 = 3.03380607434824582924e01
SB2 = 3.25792512996573918826e02
SB3 = 1.53672958608443695994e03
SB4 = 3.19985821950859553908e03
SB5 = 2.55305040643316442583e03
SB6 = 4.74528541206955367215e02
SB7 = -2.24409524465858183362e01

ERF_BREAK_SMALL = 0.84375
ERF_BREAK_MID = 1.25
ERF_BREAK_TAIL = 1.0 / 0.35
ERF_SATURATE = 6.0
ERFC_UNDERFLOW = 28.0
TINY_ERF = 2.0**-28
TINY_ERFC = 2.0**-56
DEKKER = 134217729.0  # 2**27 + 1

# Giles, central branch (w < 5), highest degree first
GILES_CENTRAL = (
    2.81022636e-08,
    3.43273939e-07,
    -3.5233877e-06,
    -4.39150654e-06,
    0.00021858087,
    -0.00125372503,
    -0.00417768164,
    0.246640727,
    1.50140941,
)
# Giles, tail branch (w >= 5), highest degree first
GILES_TAIL = (
    -0.000200214257,
    0.000100950558,
    0.00134934322,
    -0.00367342844,
    0.00573950773,
    -0.0076224613,
    0.00943887047,
    1.00167406,
    2.83297682,
)
# beyond this w = -log(q(2-q)) the asymptotic erfc inverse seeds the iteration
GILES_MAX_W = 16.0

TWO_OVER_SQRTPI = 2.0 / math.sqrt(math.pi)
SQRT2 = math.sqrt(2.0)
INV_SQRT2 = 1.0 / math.sqrt(2.0)
LN2 = math.log(2.0)
LOG_PI = math.log(math.pi)

# Halley refinement: cubic convergence from a 1e-7 start needs two steps;
# the extra headroom covers the asymptotic deep-tail seed.
HALLEY_MAX_ITER = 8
HALLEY_RTOL = 4.0e-16

BOXCOX_LOG_THRESHOLD = 1e-9
