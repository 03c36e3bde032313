//! Permutation oracles: exhaustive testing on a whole field or on a
//! subgroup of roots of unity, the PLZ criterion for x^r h(x^{(Q-1)/d}),
//! the fractional polynomial x^{r-l} h~(x)/h(x) attached to x^r h(x^{q-1}),
//! and the search for points of a curve on mu x mu.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx};
use crate::polyalg::{BiPoly, RationalMap, UniPoly};

/// Default cap on full-field brute-force evaluations.
pub const FULL_FIELD_CAP: u64 = 1 << 26;

/// The d-th roots of unity in an ambient field.
#[derive(Clone, Debug)]
pub struct MuSubgroup<'a> {
    d: u64,
    ctx: &'a FieldCtx,
    generator: Fe<'a>,
    elements: Vec<Fe<'a>>,
}

impl<'a> MuSubgroup<'a> {
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// gamma^{(Q-1)/d} for the smallest primitive gamma.
    pub fn generator(&self) -> Fe<'a> {
        self.generator
    }

    /// generator^0, generator^1, ..., generator^{d-1}.
    pub fn elements(&self) -> &[Fe<'a>] {
        &self.elements
    }

    /// The elements in ascending encoding order.
    pub fn sorted(&self) -> Vec<Fe<'a>> {
        let mut v = self.elements.clone();
        v.sort();
        v
    }

    pub fn contains(&self, z: Fe<'a>) -> bool {
        !z.is_zero() && z.pow(self.d).is_one()
    }
}

/// mu_d inside `ctx`; d must divide |ctx| - 1.
pub fn mu_subgroup(ctx: &FieldCtx, d: u64) -> Result<MuSubgroup<'_>> {
    let order = ctx.order() - 1;
    if d == 0 || !order.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, order });
    }
    let generator = ctx.find_primitive().pow(order / d);
    let mut elements = Vec::with_capacity(d as usize);
    let mut cur = ctx.one();
    for _ in 0..d {
        elements.push(cur);
        cur *= generator;
    }
    Ok(MuSubgroup {
        d,
        ctx,
        generator,
        elements,
    })
}

/// mu_{q+1} inside F_{q^2}, built from `F_{p^{2k}}`.
pub fn mu_q_plus_1(ctx: &FieldCtx) -> Result<MuSubgroup<'_>> {
    if !ctx.n().is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "{ctx} is not of the form F_{{q^2}}"
        )));
    }
    let q = ctx.p().pow(ctx.n() as u32 / 2);
    mu_subgroup(ctx, q + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainMode {
    FullField,
    MuSubgroup,
    Subset,
}

/// Why a map fails to permute its domain. Elements are integer encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// a != b with the same image.
    Collision { a: u64, b: u64, image: u64 },
    /// The denominator vanishes at a.
    Pole { a: u64 },
    /// The image of a lies outside the domain.
    Escape { a: u64, image: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationReport {
    pub verdict: bool,
    pub witness: Option<Witness>,
    pub domain_size: u64,
    pub evaluated: u64,
    pub mode: DomainMode,
}

impl PermutationReport {
    /// Re-evaluates `f` at the witness and confirms the failure it claims.
    pub fn recheck<'a>(&self, ctx: &'a FieldCtx, f: impl Fn(Fe<'a>) -> Option<Fe<'a>>) -> bool {
        match self.witness {
            None => self.verdict,
            Some(Witness::Pole { a }) => f(ctx.elem(a)).is_none(),
            Some(Witness::Collision { a, b, image }) => {
                a != b
                    && f(ctx.elem(a)) == Some(ctx.elem(image))
                    && f(ctx.elem(b)) == Some(ctx.elem(image))
            }
            Some(Witness::Escape { a, image }) => f(ctx.elem(a)) == Some(ctx.elem(image)),
        }
    }
}

/// Core scan shared by every oracle. Failures are attributed to the
/// smallest domain element involved (integer-encoding order): a pole at a,
/// an image of a outside the domain, or a collision of a with the smallest
/// other element sharing its image. Images are computed in parallel; the
/// witness does not depend on the number of worker threads.
pub fn permutes_fn<'a, F>(domain: &[Fe<'a>], mode: DomainMode, f: F) -> PermutationReport
where
    F: Fn(Fe<'a>) -> Option<Fe<'a>> + Sync,
{
    let mut dom: Vec<Fe<'a>> = domain.to_vec();
    dom.sort();
    dom.dedup();
    let images: Vec<Option<Fe<'a>>> = dom.par_iter().map(|&a| f(a)).collect();
    let members: Option<HashSet<u64>> = match mode {
        DomainMode::FullField => None,
        _ => Some(dom.iter().map(|e| e.encoding()).collect()),
    };
    // image -> the two smallest preimages
    let mut pre: HashMap<u64, (u64, Option<u64>)> = HashMap::with_capacity(dom.len());
    for (a, img) in dom.iter().zip(&images) {
        if let Some(img) = img {
            pre.entry(img.encoding())
                .and_modify(|e| {
                    if e.1.is_none() {
                        e.1 = Some(a.encoding())
                    }
                })
                .or_insert((a.encoding(), None));
        }
    }
    let mut witness = None;
    for (a, img) in dom.iter().zip(&images) {
        let a = a.encoding();
        let Some(img) = img else {
            witness = Some(Witness::Pole { a });
            break;
        };
        let image = img.encoding();
        if members.as_ref().is_some_and(|m| !m.contains(&image)) {
            witness = Some(Witness::Escape { a, image });
            break;
        }
        if let (_, Some(b)) = pre[&image] {
            witness = Some(Witness::Collision { a, b, image });
            break;
        }
    }
    PermutationReport {
        verdict: witness.is_none(),
        witness,
        domain_size: dom.len() as u64,
        evaluated: images.len() as u64,
        mode,
    }
}

/// Does `g` permute the set `s`? Poles, escapes and collisions all count as
/// failures.
pub fn permutes_set<'a>(g: &RationalMap<'a>, s: &[Fe<'a>]) -> Result<PermutationReport> {
    for e in s {
        g.num().ctx().same_as(e.ctx())?;
    }
    Ok(permutes_fn(s, DomainMode::Subset, |a| g.eval(a)))
}

/// Does `g` permute mu?
pub fn permutes_mu<'a>(g: &RationalMap<'a>, mu: &MuSubgroup<'a>) -> Result<PermutationReport> {
    g.num().ctx().same_as(mu.ctx)?;
    Ok(permutes_fn(&mu.elements, DomainMode::MuSubgroup, |a| {
        g.eval(a)
    }))
}

/// Does the rational map `g` permute the whole field?
pub fn permutes_field<'a>(g: &RationalMap<'a>, cap: u64) -> Result<PermutationReport> {
    let ctx = g.num().ctx();
    check_cap(ctx, cap)?;
    let dom: Vec<Fe<'a>> = ctx.elements().collect();
    Ok(permutes_fn(&dom, DomainMode::FullField, |a| g.eval(a)))
}

fn check_cap(ctx: &FieldCtx, cap: u64) -> Result<()> {
    if ctx.order() > cap {
        return Err(Error::cap(
            format!("brute force over {ctx}"),
            ctx.order() as u128,
            cap as u128,
        ));
    }
    Ok(())
}

/// Exhaustive permutation test of a polynomial over its coefficient field.
pub fn is_pp_brute<'a>(f: &UniPoly<'a>, cap: u64) -> Result<PermutationReport> {
    let ctx = f.ctx();
    check_cap(ctx, cap)?;
    let dom: Vec<Fe<'a>> = ctx.elements().collect();
    Ok(permutes_fn(&dom, DomainMode::FullField, |a| {
        Some(f.eval(a))
    }))
}

/// f_{r,d,h}(x) = x^r h(x^{(Q-1)/d}) over the field of `h`.
pub fn plz_polynomial<'a>(r: u64, d: u64, h: &UniPoly<'a>) -> Result<UniPoly<'a>> {
    let ctx = h.ctx();
    let order = ctx.order() - 1;
    if d == 0 || !order.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, order });
    }
    let e = (order / d) as usize;
    let deg = r as usize + e * h.degree().unwrap_or(0);
    let mut coeffs = vec![ctx.zero(); deg + 1];
    for (i, &c) in h.coeffs().iter().enumerate() {
        coeffs[r as usize + e * i] = c;
    }
    Ok(UniPoly::new(ctx, coeffs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlzReport {
    /// gcd(r, (Q-1)/d) = 1.
    pub gcd_ok: bool,
    /// Does z -> z^r h(z)^{(Q-1)/d} permute mu_d?
    pub mu: PermutationReport,
    pub verdict: bool,
}

/// The PLZ criterion: x^r h(x^{(Q-1)/d}) permutes F_Q iff
/// gcd(r, (Q-1)/d) = 1 and z^r h(z)^{(Q-1)/d} permutes mu_d.
///
/// Any r >= 1 is accepted; on mu_d the exponent r only matters mod d.
pub fn plz_check<'a>(r: u64, d: u64, h: &UniPoly<'a>) -> Result<PlzReport> {
    let ctx = h.ctx();
    let mu = mu_subgroup(ctx, d)?;
    let e = (ctx.order() - 1) / d;
    let gcd_ok = crate::gf::prime_poly::gcd_u64(r, e) == 1;
    let r_mod = r % d;
    let report = permutes_fn(&mu.elements, DomainMode::MuSubgroup, |z| {
        Some(z.pow(r_mod) * h.eval(z).pow(e))
    });
    Ok(PlzReport {
        gcd_ok,
        verdict: gcd_ok && report.verdict,
        mu: report,
    })
}

/// x^{r-l} h~(x) / h(x) with l = deg h, which agrees with x^r h(x)^{q-1}
/// on mu_{q+1} wherever h does not vanish. The coefficients of `h` must lie
/// in F_q (checked via x -> x^q). A negative r - l moves the monomial into
/// the denominator.
pub fn fractional_associate<'a>(r: u64, h: &UniPoly<'a>, q: u64) -> Result<RationalMap<'a>> {
    let ctx = h.ctx();
    let l = h
        .degree()
        .ok_or_else(|| Error::InvalidParams("h must be nonzero".into()))?;
    let m = subfield_degree(ctx, q)?;
    for c in h.coeffs() {
        if !c.in_subfield(m)? {
            return Err(Error::NotInSubfield { q });
        }
    }
    let rev = h.reversal();
    let (num, den) = if r as usize >= l {
        (rev.shift(r as usize - l), h.clone())
    } else {
        (rev, h.shift(l - r as usize))
    };
    RationalMap::new(num, den)
}

/// m with q = p^m and m | n.
pub(crate) fn subfield_degree(ctx: &FieldCtx, q: u64) -> Result<usize> {
    let mut m = 0usize;
    let mut t = 1u64;
    while t < q {
        t = t.saturating_mul(ctx.p());
        m += 1;
    }
    if t != q || m == 0 || !ctx.n().is_multiple_of(m) {
        return Err(Error::InvalidParams(format!(
            "{q} is not the order of a subfield of {ctx}"
        )));
    }
    Ok(m)
}

/// First (a, b) in ascending encoding order with a != b, a, b in mu and
/// H(a, b) = 0.
pub fn curve_mu_point_search<'a>(
    h: &BiPoly<'a>,
    mu: &MuSubgroup<'a>,
) -> Result<Option<(Fe<'a>, Fe<'a>)>> {
    h.ctx().same_as(mu.ctx)?;
    let elems = mu.sorted();
    let hits: Vec<Option<(Fe<'a>, Fe<'a>)>> = elems
        .par_iter()
        .map(|&a| {
            let row = h.specialize_x(a);
            elems
                .iter()
                .find(|&&b| b != a && row.eval(b).is_zero())
                .map(|&b| (a, b))
        })
        .collect();
    Ok(hits.into_iter().flatten().next())
}
