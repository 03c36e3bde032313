use rayon::prelude::*;

use super::bi::BiPoly;
use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::gf::{Embedding, Fe, FieldCtx};

/// Determinant of the Sylvester matrix of `f` and `g`, given as coefficient
/// lists (low degree first) whose lengths fix the formal degrees; leading
/// zeros are allowed.
pub fn sylvester_det<'a>(ctx: &'a FieldCtx, f: &[Fe<'a>], g: &[Fe<'a>]) -> Fe<'a> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return ctx.one();
    }
    let mut mat = vec![vec![ctx.zero(); size]; size];
    for r in 0..n {
        for (k, &c) in f.iter().rev().enumerate() {
            mat[r][r + k] = c;
        }
    }
    for r in 0..m {
        for (k, &c) in g.iter().rev().enumerate() {
            mat[n + r][r + k] = c;
        }
    }
    determinant(ctx, mat)
}

fn determinant<'a>(ctx: &'a FieldCtx, mut mat: Vec<Vec<Fe<'a>>>) -> Fe<'a> {
    let size = mat.len();
    let mut det = ctx.one();
    for col in 0..size {
        let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
            return ctx.zero();
        };
        if piv != col {
            mat.swap(piv, col);
            det = -det;
        }
        let pv = mat[col][col];
        det *= pv;
        let inv = pv.inv().expect("pivot is nonzero");
        for r in col + 1..size {
            let factor = mat[r][col] * inv;
            if factor.is_zero() {
                continue;
            }
            let (top, rest) = mat.split_at_mut(r);
            for (dst, &src) in rest[0][col..size].iter_mut().zip(&top[col][col..size]) {
                *dst -= factor * src;
            }
        }
    }
    det
}

/// Res_y(F, G) as a polynomial in x.
///
/// Both inputs are specialized at `deg bound + 1` distinct x-values, where
/// the bound is deg_x(F)·deg_y(G) + deg_y(F)·deg_x(G); each specialization
/// keeps the formal y-degrees so the Sylvester determinant agrees with the
/// specialization of the generic resultant. The values are interpolated.
/// When the base field has too few elements the samples are taken in an
/// extension field and the coefficients are mapped back after checking
/// that they are fixed by the base Frobenius.
pub fn resultant_y<'a>(f: &BiPoly<'a>, g: &BiPoly<'a>) -> Result<UniPoly<'a>> {
    f.ctx().same_as(g.ctx())?;
    let ctx = f.ctx();
    let (df, dg) = match (f.deg_y(), g.deg_y()) {
        (Some(a), Some(b)) if a > 0 && b > 0 => (a, b),
        _ => {
            return Err(Error::Degree(
                "resultant needs positive y-degree on both sides".into(),
            ))
        }
    };
    let bound = f.deg_x().unwrap() * dg + df * g.deg_x().unwrap();
    let npts = bound as u64 + 1;
    if ctx.order() >= npts {
        return Ok(interpolated(f, g, npts));
    }
    let mut k = 1;
    while ctx.order().saturating_pow(k as u32 + 1) < npts {
        k += 1;
    }
    let ext = FieldCtx::new(ctx.p(), ctx.n() * (k + 1))?;
    let emb = Embedding::new(ctx, &ext)?;
    let lift = |b: &BiPoly<'a>| {
        BiPoly::new(
            &ext,
            b.grid()
                .iter()
                .map(|r| r.iter().map(|&c| emb.lift(c)).collect())
                .collect(),
        )
    };
    let r = interpolated(&lift(f), &lift(g), npts);
    let coeffs = r
        .coeffs()
        .iter()
        .map(|&c| emb.lower(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(UniPoly::new(ctx, coeffs))
}

fn interpolated<'e>(f: &BiPoly<'e>, g: &BiPoly<'e>, npts: u64) -> UniPoly<'e> {
    let ctx = f.ctx();
    let (fc, gc) = (f.y_coeffs(), g.y_coeffs());
    let xs: Vec<Fe<'e>> = (0..npts).map(|v| ctx.elem(v)).collect();
    let ys: Vec<Fe<'e>> = xs
        .par_iter()
        .map(|&a| {
            let fa: Vec<Fe<'e>> = fc.iter().map(|c| c.eval(a)).collect();
            let ga: Vec<Fe<'e>> = gc.iter().map(|c| c.eval(a)).collect();
            sylvester_det(ctx, &fa, &ga)
        })
        .collect();
    lagrange(ctx, &xs, &ys)
}

/// The unique polynomial of degree < n through n points with distinct xs.
pub(crate) fn lagrange<'e>(ctx: &'e FieldCtx, xs: &[Fe<'e>], ys: &[Fe<'e>]) -> UniPoly<'e> {
    // full = prod (x - x_j)
    let mut full = UniPoly::one(ctx);
    for &xj in xs {
        full = &full * &UniPoly::new(ctx, vec![-xj, ctx.one()]);
    }
    let mut acc = UniPoly::zero(ctx);
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let basis = full
            .exact_div(&UniPoly::new(ctx, vec![-xi, ctx.one()]))
            .expect("x_i is a root of the full product");
        let denom = xs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(ctx.one(), |d, (_, &xj)| d * (xi - xj));
        acc = &acc + &basis.scale(yi / denom);
    }
    acc
}
