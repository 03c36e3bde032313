use std::fmt;

use super::bi::BiPoly;
use super::uni::{gcd_uni, UniPoly};
use crate::error::{Error, Result};
use crate::gf::Fe;

/// A fractional polynomial N/D in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMap<'a> {
    num: UniPoly<'a>,
    den: UniPoly<'a>,
}

impl<'a> RationalMap<'a> {
    /// Cancels gcd(N, D) and makes D monic. Fails on D = 0.
    pub fn new(num: UniPoly<'a>, den: UniPoly<'a>) -> Result<Self> {
        num.ctx().same_as(den.ctx())?;
        if den.is_zero() {
            return Err(Error::Degree("zero denominator".into()));
        }
        let g = gcd_uni(&num, &den)?;
        let num = num.exact_div(&g)?;
        let den = den.exact_div(&g)?;
        let lead_inv = den.leading().unwrap().inv()?;
        Ok(RationalMap {
            num: num.scale(lead_inv),
            den: den.scale(lead_inv),
        })
    }

    pub fn polynomial(f: UniPoly<'a>) -> Self {
        let ctx = f.ctx();
        RationalMap {
            num: f,
            den: UniPoly::one(ctx),
        }
    }

    pub fn num(&self) -> &UniPoly<'a> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<'a> {
        &self.den
    }

    /// `None` at a pole.
    pub fn eval(&self, a: Fe<'a>) -> Option<Fe<'a>> {
        let d = self.den.eval(a);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(a) / d)
        }
    }
}

impl fmt::Debug for RationalMap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Display for RationalMap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

/// (N(x)D(y) - N(y)D(x)) / (x - y) for a normalized map.
pub fn difference_quotient<'a>(g: &RationalMap<'a>) -> BiPoly<'a> {
    difference_quotient_raw(&g.num, &g.den).expect("antisymmetric numerator divides exactly")
}

/// Same as [`difference_quotient`] for an arbitrary pair (N, D), common
/// factors included. Synthetic division by (y - x) along y: the remainder
/// must vanish, otherwise the input was not antisymmetric.
pub fn difference_quotient_raw<'a>(num: &UniPoly<'a>, den: &UniPoly<'a>) -> Result<BiPoly<'a>> {
    num.ctx().same_as(den.ctx())?;
    let ctx = num.ctx();
    let full = &(&BiPoly::from_x(num) * &BiPoly::from_y(den))
        - &(&BiPoly::from_y(num) * &BiPoly::from_x(den));
    if full.is_zero() {
        return Ok(full);
    }
    // full = sum_j c_j(x) y^j = (y - x) * sum_j b_j(x) y^j
    let c = full.y_coeffs();
    let d = c.len() - 1;
    let x = UniPoly::x(ctx);
    let mut b = vec![UniPoly::zero(ctx); d];
    let mut carry = UniPoly::zero(ctx);
    for j in (1..=d).rev() {
        carry = &c[j] + &(&x * &carry);
        b[j - 1] = carry.clone();
    }
    let remainder = &c[0] + &(&x * &carry);
    if !remainder.is_zero() {
        return Err(Error::InexactDivision);
    }
    // full / (x - y) = -B
    Ok(-&BiPoly::from_y_coeffs(ctx, &b))
}
