//! Arithmetic in F_p and F_{p^n}.
//!
//! A [`FieldCtx`] owns the modulus and, for fields up to [`TABLE_CAP`]
//! elements, exp/log tables over a primitive element. Elements are the
//! lightweight [`Fe`] handles: an integer encoding `sum c_i p^i` of the
//! coefficient vector together with a reference to the owning context.
//! Mixing elements of two contexts panics in the operator impls; the
//! polynomial layer checks contexts up front and returns
//! [`Error::ContextMismatch`] instead.
//!
//! Subfields are never embedded explicitly: `F_{p^m}` inside `F_{p^n}` is the
//! fixed field of `x -> x^{p^m}`, see [`Fe::in_subfield`].

mod embed;
pub(crate) mod prime_poly;

pub use embed::Embedding;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};
use crate::expr::{self, Expr, Op};
use prime_poly::{mulmod, powmod};

/// Largest field order accepted by [`FieldCtx::new`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 40;
/// Fields up to this order get exp/log tables.
pub const TABLE_CAP: u64 = 1 << 21;
/// Cap for operations that enumerate whole fields or their primitive elements.
pub const SMALL_FIELD_CAP: u64 = 1 << 16;

const MAX_DEGREE: usize = 64;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The finite field F_{p^n} = F_p[t]/(modulus).
pub struct FieldCtx {
    id: u64,
    p: u64,
    n: usize,
    order: u64,
    modulus: Vec<u64>,
    pow_p: Vec<u64>,
    group_primes: Vec<u64>,
    primitive: u64,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (modulus {:?})", self.p, self.n, self.modulus)
    }
}

/// Contexts compare by identity, not by parameters.
impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for FieldCtx {}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.n)
    }
}

/// Parses a field spec of the form `"p^n"` or `"p"`.
pub fn parse_field_spec(s: &str) -> Result<(u64, usize)> {
    let s = s.trim();
    let (p, n) = match s.split_once('^') {
        Some((p, n)) => (p.trim(), n.trim()),
        None => (s, "1"),
    };
    let p = p
        .parse::<u64>()
        .map_err(|_| Error::parse(s, "expected a prime before '^'"))?;
    let n = n
        .parse::<usize>()
        .map_err(|_| Error::parse(s, "expected an extension degree after '^'"))?;
    Ok((p, n))
}

impl FieldCtx {
    /// F_{p^n} with the lexicographically smallest monic irreducible modulus
    /// (coefficients compared from the constant term up). F_{2^7} is pinned
    /// to `t^7 + t + 1`.
    pub fn new(p: u64, n: usize) -> Result<Self> {
        Self::with_cap(p, n, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u64, n: usize, cap: u64) -> Result<Self> {
        Self::check_size(p, n, cap)?;
        let modulus = if (p, n) == (2, 7) {
            vec![1, 1, 0, 0, 0, 0, 0, 1]
        } else {
            prime_poly::smallest_irreducible(p, n)
        };
        Ok(Self::build(p, modulus))
    }

    /// F_p[t]/(modulus) for a caller-supplied monic irreducible modulus,
    /// coefficients low degree first.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self> {
        let n = modulus.len().saturating_sub(1);
        Self::check_size(p, n, DEFAULT_FIELD_CAP)?;
        if modulus[n] != 1
            || modulus.iter().any(|&c| c >= p)
            || !prime_poly::is_irreducible(modulus, p)
        {
            return Err(Error::BadModulus(p));
        }
        Ok(Self::build(p, modulus.to_vec()))
    }

    fn check_size(p: u64, n: usize, cap: u64) -> Result<()> {
        if n < 1 {
            return Err(Error::ZeroDegree);
        }
        if !prime_poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if order > cap as u128 || n > MAX_DEGREE {
            return Err(Error::cap(format!("F_{p}^{n}"), order, cap as u128));
        }
        Ok(())
    }

    fn build(p: u64, modulus: Vec<u64>) -> Self {
        let n = modulus.len() - 1;
        let order = p.pow(n as u32);
        let pow_p = (0..n).map(|i| p.pow(i as u32)).collect();
        let mut ctx = FieldCtx {
            id: NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
            p,
            n,
            order,
            modulus,
            pow_p,
            group_primes: prime_poly::prime_factors(order - 1),
            primitive: 0,
            tables: None,
        };
        ctx.primitive = (1..order)
            .find(|&v| ctx.is_primitive_raw(v))
            .expect("the multiplicative group is cyclic");
        if order <= TABLE_CAP {
            ctx.tables = Some(ctx.walk_powers());
        }
        ctx
    }

    /// exp/log tables by repeated multiplication with the primitive,
    /// kept in digit form so each step is a few shifts by t.
    fn walk_powers(&self) -> Tables {
        let (p, n, order) = (self.p, self.n, self.order);
        let mut exp = Vec::with_capacity(order as usize - 1);
        let mut log = vec![0u32; order as usize];
        if p == 2 {
            let high = 1u64 << n;
            let reduce = self.undigits(&self.modulus[..n]);
            let mut enc = 1u64;
            for i in 0..order - 1 {
                exp.push(enc as u32);
                log[enc as usize] = i as u32;
                let (mut a, mut g, mut acc) = (enc, self.primitive, 0u64);
                while g != 0 {
                    if g & 1 == 1 {
                        acc ^= a;
                    }
                    g >>= 1;
                    a <<= 1;
                    if a & high != 0 {
                        a ^= high | reduce;
                    }
                }
                enc = acc;
            }
            return Tables { exp, log };
        }
        let mut g = [0u64; MAX_DEGREE];
        self.digits(self.primitive, &mut g);
        let g_terms: Vec<(usize, u64)> = (0..n).filter(|&j| g[j] != 0).map(|j| (j, g[j])).collect();
        let mut cur = [0u64; MAX_DEGREE];
        cur[0] = 1;
        let mut enc = 1u64;
        let mut shifted = [0u64; MAX_DEGREE];
        let mut next = [0u64; MAX_DEGREE];
        for i in 0..order - 1 {
            exp.push(enc as u32);
            log[enc as usize] = i as u32;
            if n == 1 {
                enc = mulmod(enc, self.primitive, p);
                continue;
            }
            next[..n].fill(0);
            shifted[..n].copy_from_slice(&cur[..n]);
            let mut at = 0;
            for &(j, c) in &g_terms {
                while at < j {
                    let top = shifted[n - 1];
                    for k in (1..n).rev() {
                        shifted[k] = (shifted[k - 1] + (p - top * self.modulus[k] % p)) % p;
                    }
                    shifted[0] = (p - top * self.modulus[0] % p) % p;
                    at += 1;
                }
                for k in 0..n {
                    next[k] = (next[k] + c * shifted[k]) % p;
                }
            }
            cur[..n].copy_from_slice(&next[..n]);
            enc = self.undigits(&cur[..n]);
        }
        Tables { exp, log }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of elements, p^n.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn same_as(&self, other: &FieldCtx) -> Result<()> {
        if self.id == other.id {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn elem(&self, v: u64) -> Fe<'_> {
        assert!(v < self.order, "encoding {v} out of range for {self}");
        Fe { ctx: self, v }
    }

    pub fn try_elem(&self, v: u64) -> Result<Fe<'_>> {
        if v < self.order {
            Ok(Fe { ctx: self, v })
        } else {
            Err(Error::BadEncoding(v))
        }
    }

    pub fn zero(&self) -> Fe<'_> {
        Fe { ctx: self, v: 0 }
    }

    pub fn one(&self) -> Fe<'_> {
        Fe { ctx: self, v: 1 }
    }

    /// Image of an integer under Z -> F_p -> F_{p^n}.
    pub fn from_int(&self, c: i64) -> Fe<'_> {
        let v = c.rem_euclid(self.p as i64) as u64;
        Fe { ctx: self, v }
    }

    /// Element from coefficients over F_p, low degree first.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fe<'_>> {
        if coeffs.len() > self.n || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::BadEncoding(coeffs.len() as u64));
        }
        let v = coeffs.iter().zip(&self.pow_p).map(|(c, q)| c * q).sum();
        Ok(Fe { ctx: self, v })
    }

    /// The class of the indeterminate `t`, a root of the modulus.
    pub fn generator(&self) -> Fe<'_> {
        if self.n == 1 {
            // Root of the degree-one modulus t + c.
            self.from_int(-(self.modulus[0] as i64))
        } else {
            Fe {
                ctx: self,
                v: self.p,
            }
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe<'_>> + '_ {
        (0..self.order).map(move |v| Fe { ctx: self, v })
    }

    /// Primitive element of smallest integer encoding.
    pub fn find_primitive(&self) -> Fe<'_> {
        Fe {
            ctx: self,
            v: self.primitive,
        }
    }

    /// Every primitive element, ascending by encoding.
    pub fn list_primitives(&self) -> Result<Vec<Fe<'_>>> {
        self.list_primitives_capped(SMALL_FIELD_CAP)
    }

    pub fn list_primitives_capped(&self, cap: u64) -> Result<Vec<Fe<'_>>> {
        if self.order > cap {
            return Err(Error::cap(
                "list_primitives",
                self.order as u128,
                cap as u128,
            ));
        }
        let g = self.find_primitive();
        let m = self.order - 1;
        let mut out: Vec<Fe<'_>> = (1..=m)
            .filter(|&j| prime_poly::gcd_u64(j, m) == 1)
            .map(|j| g.pow(j))
            .collect();
        out.sort();
        Ok(out)
    }

    /// The elements of F_{p^m} inside this field, ascending by encoding.
    pub fn subfield_elements(&self, m: usize) -> Result<Vec<Fe<'_>>> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NotSubfield { m, n: self.n });
        }
        let sub = self.p.pow(m as u32);
        if sub > SMALL_FIELD_CAP.max(TABLE_CAP) {
            return Err(Error::cap(
                "subfield enumeration",
                sub as u128,
                TABLE_CAP as u128,
            ));
        }
        let step = (self.order - 1) / (sub - 1);
        let g = self.find_primitive().pow(step);
        let mut out = vec![self.zero()];
        let mut cur = self.one();
        for _ in 0..sub - 1 {
            out.push(cur);
            cur *= g;
        }
        out.sort();
        Ok(out)
    }

    /// Parses a polynomial string in the generator symbol `w`, e.g.
    /// `"w^3+2*w"`. Bare integers are residues mod p.
    pub fn parse_element(&self, s: &str) -> Result<Fe<'_>> {
        let e = expr::parse(s)?;
        self.eval_expr(&e, self.generator(), s)
    }

    /// Evaluates an expression in `w` with `w` bound to `w_value`.
    pub fn eval_expr<'a>(&'a self, e: &Expr, w_value: Fe<'a>, src: &str) -> Result<Fe<'a>> {
        expr::walk(
            e,
            &|leaf| match leaf {
                Expr::Int(v) => Ok(self.from_int((v % self.p) as i64)),
                Expr::Sym('w') => Ok(w_value),
                Expr::Sym(c) => Err(Error::parse(src, format!("symbol {c} not allowed here"))),
                _ => unreachable!(),
            },
            &|op| match op {
                Op::Neg(a) => -a,
                Op::Add(a, b) => a + b,
                Op::Sub(a, b) => a - b,
                Op::Mul(a, b) => a * b,
                Op::Pow(a, k) => a.pow(k),
            },
        )
    }

    // ---- raw arithmetic on encodings ----

    fn digits(&self, mut v: u64, out: &mut [u64; MAX_DEGREE]) {
        for d in out.iter_mut().take(self.n) {
            *d = v % self.p;
            v /= self.p;
        }
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        d.iter()
            .take(self.n)
            .zip(&self.pow_p)
            .map(|(c, q)| c * q)
            .sum()
    }

    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.n == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &place in &self.pow_p {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        for &place in &self.pow_p {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * place;
            a /= self.p;
        }
        out
    }

    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let m = self.order as usize - 1;
                let s = t.log[a as usize] as usize + t.log[b as usize] as usize;
                t.exp[if s >= m { s - m } else { s }] as u64
            }
            None => self.mul_generic(a, b),
        }
    }

    fn mul_generic(&self, a: u64, b: u64) -> u64 {
        let (p, n) = (self.p, self.n);
        if n == 1 {
            return mulmod(a, b, p);
        }
        let mut da = [0u64; MAX_DEGREE];
        let mut db = [0u64; MAX_DEGREE];
        self.digits(a, &mut da);
        self.digits(b, &mut db);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if da[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + mulmod(da[i], db[j], p)) % p;
            }
        }
        // t^n = -(m_0 + ... + m_{n-1} t^{n-1})
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let sub = mulmod(c, self.modulus[i], p);
                prod[k - n + i] = (prod[k - n + i] + p - sub) % p;
            }
        }
        self.undigits(&prod[..n])
    }

    pub(crate) fn pow_raw(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let m = self.order as u128 - 1;
            let idx = (t.log[a as usize] as u128 * e as u128) % m;
            return t.exp[idx as usize] as u64;
        }
        if self.n == 1 {
            return powmod(a, e, self.p);
        }
        let e = e % (self.order - 1);
        let (mut acc, mut base, mut e) = (1u64, a, if e == 0 { self.order - 1 } else { e });
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_generic(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_generic(base, base);
            }
        }
        acc
    }

    pub(crate) fn inv_raw(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in {self}");
        if let Some(t) = &self.tables {
            let m = self.order as usize - 1;
            let l = t.log[a as usize] as usize;
            return t.exp[if l == 0 { 0 } else { m - l }] as u64;
        }
        self.pow_raw(a, self.order - 2)
    }

    fn is_primitive_raw(&self, v: u64) -> bool {
        let m = self.order - 1;
        self.group_primes
            .iter()
            .all(|&r| self.pow_generic(v, m / r) != 1)
    }

    fn pow_generic(&self, a: u64, mut e: u64) -> u64 {
        let (mut acc, mut base) = (1u64, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_generic(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_generic(base, base);
            }
        }
        acc
    }
}

/// An element of a [`FieldCtx`].
#[derive(Clone, Copy)]
pub struct Fe<'a> {
    ctx: &'a FieldCtx,
    v: u64,
}

impl<'a> Fe<'a> {
    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// Integer encoding `sum c_i p^i`.
    pub fn encoding(&self) -> u64 {
        self.v
    }

    /// Coefficient vector over F_p, low degree first, length n.
    pub fn coeffs(&self) -> Vec<u64> {
        let mut d = [0u64; MAX_DEGREE];
        self.ctx.digits(self.v, &mut d);
        d[..self.ctx.n].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn is_one(&self) -> bool {
        self.v == 1
    }

    pub fn pow(self, e: u64) -> Self {
        Fe {
            ctx: self.ctx,
            v: self.ctx.pow_raw(self.v, e),
        }
    }

    pub fn inv(self) -> Result<Self> {
        if self.v == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(Fe {
            ctx: self.ctx,
            v: self.ctx.inv_raw(self.v),
        })
    }

    /// x -> x^p.
    pub fn frobenius(self) -> Self {
        self.pow(self.ctx.p)
    }

    /// Least t > 0 with self^t = 1.
    pub fn order(self) -> Result<u64> {
        if self.v == 0 {
            return Err(Error::ZeroElement);
        }
        let mut t = self.ctx.order - 1;
        for &r in &self.ctx.group_primes {
            while t.is_multiple_of(r) && self.pow(t / r).is_one() {
                t /= r;
            }
        }
        Ok(t)
    }

    /// True iff self lies in F_{p^m}, i.e. self^{p^m} = self. Requires m | n.
    pub fn in_subfield(self, m: usize) -> Result<bool> {
        if m == 0 || !self.ctx.n.is_multiple_of(m) {
            return Err(Error::NotSubfield { m, n: self.ctx.n });
        }
        let mut x = self;
        for _ in 0..m {
            x = x.frobenius();
        }
        Ok(x == self)
    }

    /// Polynomial string in `sym`, highest degree first, e.g. `2*w^3+w+1`.
    pub fn to_poly_string(&self, sym: &str) -> String {
        let c = self.coeffs();
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => sym.to_string(),
                _ => format!("{sym}^{i}"),
            };
            parts.push(match (ci, mono.is_empty()) {
                (_, true) => ci.to_string(),
                (1, false) => mono,
                (_, false) => format!("{ci}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    fn check(&self, other: &Fe<'_>) {
        assert!(
            self.ctx.id == other.ctx.id,
            "arithmetic between elements of {} and {}",
            self.ctx,
            other.ctx
        );
    }
}

impl PartialEq for Fe<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id == other.ctx.id && self.v == other.v
    }
}

impl Eq for Fe<'_> {}

impl Hash for Fe<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.id.hash(state);
        self.v.hash(state);
    }
}

impl PartialOrd for Fe<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fe<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ctx.id, self.v).cmp(&(other.ctx.id, other.v))
    }
}

impl fmt::Debug for Fe<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly_string("w"))
    }
}

impl fmt::Display for Fe<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly_string("w"))
    }
}

impl<'a> Add for Fe<'a> {
    type Output = Fe<'a>;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        Fe {
            ctx: self.ctx,
            v: self.ctx.add_raw(self.v, rhs.v),
        }
    }
}

impl<'a> Sub for Fe<'a> {
    type Output = Fe<'a>;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        Fe {
            ctx: self.ctx,
            v: self.ctx.add_raw(self.v, self.ctx.neg_raw(rhs.v)),
        }
    }
}

impl<'a> Mul for Fe<'a> {
    type Output = Fe<'a>;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        Fe {
            ctx: self.ctx,
            v: self.ctx.mul_raw(self.v, rhs.v),
        }
    }
}

impl<'a> Div for Fe<'a> {
    type Output = Fe<'a>;
    /// Panics on division by zero.
    fn div(self, rhs: Self) -> Self {
        self.check(&rhs);
        Fe {
            ctx: self.ctx,
            v: self.ctx.mul_raw(self.v, self.ctx.inv_raw(rhs.v)),
        }
    }
}

impl<'a> Neg for Fe<'a> {
    type Output = Fe<'a>;
    fn neg(self) -> Self {
        Fe {
            ctx: self.ctx,
            v: self.ctx.neg_raw(self.v),
        }
    }
}

impl AddAssign for Fe<'_> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fe<'_> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fe<'_> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}
