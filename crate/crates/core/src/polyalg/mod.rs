//! Univariate and bivariate polynomials over a [`FieldCtx`], rational maps,
//! difference-quotient curves and resultants.

mod bi;
mod rational;
mod resultant;
mod uni;

pub use bi::{exact_divide, BiPoly};
pub use rational::{difference_quotient, difference_quotient_raw, RationalMap};
pub use resultant::{resultant_y, sylvester_det};
pub use uni::{gcd_uni, quadratic_distinct_roots_in, UniPoly};

use crate::error::{Error, Result};
use crate::expr::{self, Expr, Op};
use crate::gf::{Fe, FieldCtx};

/// Parses a bivariate polynomial in `x`, `y` with `w` bound to `w_value`.
pub fn parse_bipoly<'a>(ctx: &'a FieldCtx, src: &str, w_value: Fe<'a>) -> Result<BiPoly<'a>> {
    let e = expr::parse(src)?;
    eval_bi(ctx, &e, w_value, src)
}

/// Parses a univariate polynomial in `x` (`T` is accepted as an alias),
/// with `w` bound to the field generator.
pub fn parse_unipoly<'a>(ctx: &'a FieldCtx, src: &str) -> Result<UniPoly<'a>> {
    parse_unipoly_with(ctx, src, ctx.generator())
}

pub fn parse_unipoly_with<'a>(
    ctx: &'a FieldCtx,
    src: &str,
    w_value: Fe<'a>,
) -> Result<UniPoly<'a>> {
    let b = parse_bipoly(ctx, src, w_value)?;
    if b.deg_y().unwrap_or(0) > 0 {
        return Err(Error::parse(src, "unexpected variable y"));
    }
    Ok(b.y_coeff(0))
}

/// Parses `"(N)/(D)"` (or a bare polynomial) into a normalized rational map.
pub fn parse_rational<'a>(ctx: &'a FieldCtx, src: &str) -> Result<RationalMap<'a>> {
    let (n, d) = parse_fraction_parts(ctx, src, ctx.generator())?;
    RationalMap::new(n, d)
}

/// Numerator and denominator of `"(N)/(D)"` without cancelling common factors.
pub fn parse_fraction_parts<'a>(
    ctx: &'a FieldCtx,
    src: &str,
    w_value: Fe<'a>,
) -> Result<(UniPoly<'a>, UniPoly<'a>)> {
    let (n, d) = expr::split_fraction(src)?;
    let num = parse_unipoly_with(ctx, n, w_value)?;
    let den = match d {
        Some(d) => parse_unipoly_with(ctx, d, w_value)?,
        None => UniPoly::one(ctx),
    };
    Ok((num, den))
}

fn eval_bi<'a>(ctx: &'a FieldCtx, e: &Expr, w: Fe<'a>, src: &str) -> Result<BiPoly<'a>> {
    expr::walk(
        e,
        &|leaf| match leaf {
            Expr::Int(v) => Ok(BiPoly::constant(ctx.from_int((v % ctx.p()) as i64))),
            Expr::Sym('w') => Ok(BiPoly::constant(w)),
            Expr::Sym('x') => Ok(BiPoly::x(ctx)),
            Expr::Sym('y') => Ok(BiPoly::y(ctx)),
            Expr::Sym(c) => Err(Error::parse(src, format!("unknown symbol {c}"))),
            _ => unreachable!(),
        },
        &|op| match op {
            Op::Neg(a) => -&a,
            Op::Add(a, b) => &a + &b,
            Op::Sub(a, b) => &a - &b,
            Op::Mul(a, b) => &a * &b,
            Op::Pow(a, k) => {
                // Constants are raised in the field so huge exponents such
                // as w^1216 stay cheap.
                if a.deg_x().unwrap_or(0) == 0 && a.deg_y().unwrap_or(0) == 0 {
                    BiPoly::constant(a.coeff(0, 0).pow(k))
                } else {
                    a.pow(k as u32)
                }
            }
        },
    )
}

pub(crate) fn mono(vars: &[(&str, usize)]) -> String {
    vars.iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| {
            if *e == 1 {
                v.to_string()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub(crate) fn format_terms(terms: Vec<(String, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .into_iter()
        .map(|(c, m)| match (c.as_str(), m.is_empty()) {
            (_, true) => c,
            ("1", false) => m,
            (_, false) if c.contains('+') => format!("({c})*{m}"),
            (_, false) => format!("{c}*{m}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
