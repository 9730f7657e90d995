"""Exact arithmetic-progression sums of Borwein-type polynomials."""

from .borwein import (
    BorweinParams,
    borwein_poly,
    check_sign_pattern,
    decompose_mod_p,
    exponent_set,
    laurent_borwein,
    q_pochhammer,
    shift_data,
)
from .charsieve import (
    Character,
    PrecisionPolicy,
    li_wan_check,
    n_d_alternating,
    n_d_char_formula,
    n_d_main_term,
    s_m_chi_brute,
    s_m_chi_closed,
    z_m,
)
from .polyarith import CyclicPoly, DensePoly, LaurentPoly, cyclic_mul, eval_at_one, poly_mul, reduce_cyclic
from .progsum import (
    corollary_threshold,
    gp_check,
    progression_sum,
    theorem_main_check,
    v_of,
    zaharescu_bound,
)

__version__ = "0.1.0"
