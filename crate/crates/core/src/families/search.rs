//! Exhaustive search over x(x^2+Ax+B)^2/(x^2+Cx+D)^2, A, B, C, D in F_5.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::permcheck::{permutes_fn, DomainMode, Witness};
use crate::polyalg::UniPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Search {
    pub ks: Vec<u32>,
    /// Quadruples that permute F_{5^k} for every k searched.
    pub survivors: Vec<[u64; 4]>,
    /// Listed quadruples that did not survive.
    pub missing: Vec<[u64; 4]>,
    /// Survivors that are not listed.
    pub extras: Vec<[u64; 4]>,
    /// For each listed quadruple that failed: the first failing k and witness.
    pub failures: Vec<([u64; 4], u32, Option<Witness>)>,
}

/// First failing k and its witness.
type FirstFailure = (u32, Option<Witness>);

/// The search cap bounds 5^k for the largest k.
pub fn search_table1(ks: &[u32], listed: &[[u64; 4]], cap: u64) -> Result<Table1Search> {
    let mut ks = ks.to_vec();
    ks.sort();
    ks.dedup();
    let fields = ks
        .iter()
        .map(|&k| {
            let size = 5u128.pow(k);
            if k == 0 || size > cap as u128 {
                return Err(Error::cap(
                    format!("table1 search over F_5^{k}"),
                    size,
                    cap as u128,
                ));
            }
            FieldCtx::new(5, k as usize)
        })
        .collect::<Result<Vec<_>>>()?;
    let quads: Vec<[u64; 4]> = (0..625u64)
        .map(|i| [i / 125, (i / 25) % 5, (i / 5) % 5, i % 5])
        .collect();
    let results: Vec<([u64; 4], Option<FirstFailure>)> = quads
        .par_iter()
        .map(|&q| {
            for (ctx, &k) in fields.iter().zip(&ks) {
                let fail = test_quadruple(ctx, q);
                if let Some(w) = fail {
                    return (q, Some((k, w)));
                }
            }
            (q, None)
        })
        .collect();
    let survivors: Vec<[u64; 4]> = results
        .iter()
        .filter(|r| r.1.is_none())
        .map(|r| r.0)
        .collect();
    let missing: Vec<[u64; 4]> = listed
        .iter()
        .filter(|q| !survivors.contains(q))
        .copied()
        .collect();
    let extras = survivors
        .iter()
        .filter(|q| !listed.contains(q))
        .copied()
        .collect();
    let failures = results
        .iter()
        .filter(|r| missing.contains(&r.0))
        .map(|r| {
            let (k, w) = r.1.unwrap();
            (r.0, k, w)
        })
        .collect();
    Ok(Table1Search {
        ks,
        survivors,
        missing,
        extras,
        failures,
    })
}

/// `None` if the quadruple permutes the field, else the failure witness.
/// The denominator is taken as written, so a root of x^2+Cx+D in the field
/// is a pole even when it cancels.
fn test_quadruple(ctx: &FieldCtx, [a, b, c, d]: [u64; 4]) -> Option<Option<Witness>> {
    let i = |v: u64| v as i64;
    let num = &UniPoly::x(ctx) * &UniPoly::from_ints(ctx, &[i(b), i(a), 1]).pow(2);
    let den = UniPoly::from_ints(ctx, &[i(d), i(c), 1]).pow(2);
    let dom: Vec<_> = ctx.elements().collect();
    let r = permutes_fn(&dom, DomainMode::FullField, |z| {
        let dz = den.eval(z);
        (!dz.is_zero()).then(|| num.eval(z) / dz)
    });
    (!r.verdict).then_some(r.witness)
}
