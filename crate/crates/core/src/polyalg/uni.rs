use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx};

/// Dense univariate polynomial, coefficients low degree first. The zero
/// polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly<'a> {
    ctx: &'a FieldCtx,
    coeffs: Vec<Fe<'a>>,
}

impl<'a> UniPoly<'a> {
    pub fn new(ctx: &'a FieldCtx, coeffs: Vec<Fe<'a>>) -> Self {
        for c in &coeffs {
            assert!(c.ctx().id() == ctx.id(), "coefficient from a foreign field");
        }
        let mut p = UniPoly { ctx, coeffs };
        p.trim();
        p
    }

    pub fn zero(ctx: &'a FieldCtx) -> Self {
        UniPoly {
            ctx,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: &'a FieldCtx) -> Self {
        Self::constant(ctx.one())
    }

    pub fn constant(c: Fe<'a>) -> Self {
        Self::new(c.ctx(), vec![c])
    }

    /// The polynomial `x`.
    pub fn x(ctx: &'a FieldCtx) -> Self {
        Self::monomial(ctx.one(), 1)
    }

    pub fn monomial(c: Fe<'a>, deg: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![ctx.zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(ctx, coeffs)
    }

    /// From small integers (reduced mod p), low degree first.
    pub fn from_ints(ctx: &'a FieldCtx, ints: &[i64]) -> Self {
        Self::new(ctx, ints.iter().map(|&c| ctx.from_int(c)).collect())
    }

    /// From integer encodings, low degree first (the positional list form).
    pub fn from_encodings(ctx: &'a FieldCtx, enc: &[u64]) -> Result<Self> {
        let coeffs = enc
            .iter()
            .map(|&v| ctx.try_elem(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ctx, coeffs))
    }

    pub fn encodings(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.encoding()).collect()
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[Fe<'a>] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero past the degree).
    pub fn coeff(&self, i: usize) -> Fe<'a> {
        self.coeffs.get(i).copied().unwrap_or(self.ctx.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<Fe<'a>> {
        self.coeffs.last().copied()
    }

    /// Horner evaluation; sparse polynomials of large degree are evaluated
    /// term by term instead.
    pub fn eval(&self, a: Fe<'a>) -> Fe<'a> {
        let nonzero = self.coeffs.iter().filter(|c| !c.is_zero()).count();
        if self.coeffs.len() > 16 && nonzero * 8 < self.coeffs.len() {
            return self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .fold(self.ctx.zero(), |acc, (i, &c)| acc + c * a.pow(i as u64));
        }
        self.coeffs
            .iter()
            .rev()
            .fold(self.ctx.zero(), |acc, &c| acc * a + c)
    }

    pub fn scale(&self, c: Fe<'a>) -> Self {
        Self::new(self.ctx, self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Scaled to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(l.inv().expect("leading coefficient is nonzero")),
            None => self.clone(),
        }
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ctx.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(self.ctx, coeffs)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * self.ctx.from_int((i as u64 % self.ctx.p()) as i64))
            .collect();
        Self::new(self.ctx, coeffs)
    }

    /// Coefficients reversed relative to the degree: x^{deg h} h(1/x).
    pub fn reversal(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(self.ctx, c)
    }

    /// Division with remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        self.ctx.same_as(d.ctx)?;
        let dd = d.degree().ok_or(Error::InexactDivision)?;
        let lead_inv = d.leading().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(self.ctx), self.clone()));
        }
        let mut q = vec![self.ctx.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k] * lead_inv;
            if c.is_zero() {
                continue;
            }
            q[k - dd] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                r[k - dd + i] -= c * di;
            }
        }
        Ok((Self::new(self.ctx, q), Self::new(self.ctx, r)))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Roots in the coefficient field with multiplicities, by exhaustive
    /// search. The field must be small enough to enumerate.
    pub fn roots(&self) -> Result<Vec<(Fe<'a>, usize)>> {
        let cap = crate::gf::SMALL_FIELD_CAP;
        if self.ctx.order() > cap {
            return Err(Error::cap(
                "root search",
                self.ctx.order() as u128,
                cap as u128,
            ));
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        if rest.is_zero() {
            return Err(Error::Degree("roots of the zero polynomial".into()));
        }
        for a in self.ctx.elements() {
            let lin = Self::new(self.ctx, vec![-a, self.ctx.one()]);
            let mut mult = 0;
            while rest.degree().unwrap_or(0) > 0 && rest.eval(a).is_zero() {
                rest = rest.exact_div(&lin)?;
                mult += 1;
            }
            if mult > 0 {
                out.push((a, mult));
            }
        }
        Ok(out)
    }

    /// Human-readable form in the given variable, highest degree first.
    /// Coefficients are written as polynomials in `w` (the field generator).
    pub fn to_string_in(&self, var: &str) -> String {
        let terms: Vec<(String, usize)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.to_poly_string("w"), i))
            .collect();
        super::format_terms(
            terms
                .into_iter()
                .map(|(c, i)| (c, super::mono(&[(var, i)])))
                .collect(),
        )
    }
}

/// Monic gcd of two polynomials, not both zero.
pub fn gcd_uni<'a>(f: &UniPoly<'a>, g: &UniPoly<'a>) -> Result<UniPoly<'a>> {
    f.ctx.same_as(g.ctx)?;
    if f.is_zero() && g.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// True iff the quadratic `f` has two distinct roots in F_{p^m}, i.e. its
/// discriminant is a nonzero square there. Odd characteristic only.
pub fn quadratic_distinct_roots_in(f: &UniPoly<'_>, p: u64, m: usize) -> Result<bool> {
    let ctx = f.ctx;
    if ctx.p() != p {
        return Err(Error::Characteristic(p));
    }
    if p == 2 {
        return Err(Error::Characteristic(2));
    }
    if f.degree() != Some(2) {
        return Err(Error::Degree(format!(
            "expected a quadratic, got degree {:?}",
            f.degree()
        )));
    }
    for c in &f.coeffs {
        if !c.in_subfield(m)? {
            return Err(Error::NotInSubfield { q: p.pow(m as u32) });
        }
    }
    let (c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2));
    let disc = b * b - ctx.from_int(4) * a * c;
    if disc.is_zero() {
        return Ok(false);
    }
    let q = p.pow(m as u32);
    Ok(disc.pow((q - 1) / 2).is_one())
}

impl fmt::Debug for UniPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("x"))
    }
}

impl fmt::Display for UniPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("x"))
    }
}

impl<'a> Add for &UniPoly<'a> {
    type Output = UniPoly<'a>;
    fn add(self, rhs: Self) -> UniPoly<'a> {
        assert!(
            self.ctx.id() == rhs.ctx.id(),
            "polynomials over different fields"
        );
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            self.ctx,
            (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect(),
        )
    }
}

impl<'a> Sub for &UniPoly<'a> {
    type Output = UniPoly<'a>;
    fn sub(self, rhs: Self) -> UniPoly<'a> {
        assert!(
            self.ctx.id() == rhs.ctx.id(),
            "polynomials over different fields"
        );
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            self.ctx,
            (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect(),
        )
    }
}

impl<'a> Neg for &UniPoly<'a> {
    type Output = UniPoly<'a>;
    fn neg(self) -> UniPoly<'a> {
        UniPoly::new(self.ctx, self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl<'a> Mul for &UniPoly<'a> {
    type Output = UniPoly<'a>;
    fn mul(self, rhs: Self) -> UniPoly<'a> {
        assert!(
            self.ctx.id() == rhs.ctx.id(),
            "polynomials over different fields"
        );
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.ctx);
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(self.ctx, out)
    }
}
