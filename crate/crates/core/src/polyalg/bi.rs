use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx};

/// Dense bivariate polynomial. `grid[i][j]` is the coefficient of x^i y^j.
/// Canonical: the last row and the last column are not identically zero;
/// the zero polynomial has an empty grid.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly<'a> {
    ctx: &'a FieldCtx,
    grid: Vec<Vec<Fe<'a>>>,
}

impl<'a> BiPoly<'a> {
    /// Builds from a possibly ragged grid; rows are padded and trimmed.
    pub fn new(ctx: &'a FieldCtx, mut grid: Vec<Vec<Fe<'a>>>) -> Self {
        let width = grid.iter().map(Vec::len).max().unwrap_or(0);
        for row in &mut grid {
            for c in row.iter() {
                assert!(c.ctx().id() == ctx.id(), "coefficient from a foreign field");
            }
            row.resize(width, ctx.zero());
        }
        let mut p = BiPoly { ctx, grid };
        p.canonicalize();
        p
    }

    fn canonicalize(&mut self) {
        while self
            .grid
            .last()
            .is_some_and(|r| r.iter().all(|c| c.is_zero()))
        {
            self.grid.pop();
        }
        if self.grid.is_empty() {
            return;
        }
        loop {
            let w = self.grid[0].len();
            if w == 0 || self.grid.iter().any(|r| !r[w - 1].is_zero()) {
                break;
            }
            for r in &mut self.grid {
                r.pop();
            }
        }
    }

    pub fn zero(ctx: &'a FieldCtx) -> Self {
        BiPoly {
            ctx,
            grid: Vec::new(),
        }
    }

    pub fn constant(c: Fe<'a>) -> Self {
        Self::new(c.ctx(), vec![vec![c]])
    }

    pub fn monomial(c: Fe<'a>, i: usize, j: usize) -> Self {
        let ctx = c.ctx();
        let mut grid = vec![vec![ctx.zero(); j + 1]; i + 1];
        grid[i][j] = c;
        Self::new(ctx, grid)
    }

    pub fn x(ctx: &'a FieldCtx) -> Self {
        Self::monomial(ctx.one(), 1, 0)
    }

    pub fn y(ctx: &'a FieldCtx) -> Self {
        Self::monomial(ctx.one(), 0, 1)
    }

    /// x - y.
    pub fn diagonal(ctx: &'a FieldCtx) -> Self {
        &Self::x(ctx) - &Self::y(ctx)
    }

    /// f(x) viewed as a bivariate polynomial.
    pub fn from_x(f: &UniPoly<'a>) -> Self {
        Self::new(f.ctx(), f.coeffs().iter().map(|&c| vec![c]).collect())
    }

    /// f(y) viewed as a bivariate polynomial.
    pub fn from_y(f: &UniPoly<'a>) -> Self {
        if f.is_zero() {
            return Self::zero(f.ctx());
        }
        Self::new(f.ctx(), vec![f.coeffs().to_vec()])
    }

    /// Assembles sum_j c_j(x) y^j.
    pub fn from_y_coeffs(ctx: &'a FieldCtx, cols: &[UniPoly<'a>]) -> Self {
        let rows = cols
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .map_or(0, |d| d + 1);
        let mut grid = vec![vec![ctx.zero(); cols.len()]; rows];
        for (j, c) in cols.iter().enumerate() {
            for (i, &a) in c.coeffs().iter().enumerate() {
                grid[i][j] = a;
            }
        }
        Self::new(ctx, grid)
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.grid.len().checked_sub(1)
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.grid.first().and_then(|r| r.len().checked_sub(1))
    }

    /// Total degree.
    pub fn degree(&self) -> Option<usize> {
        self.terms().map(|(i, j, _)| i + j).max()
    }

    pub fn grid(&self) -> &[Vec<Fe<'a>>] {
        &self.grid
    }

    pub fn coeff(&self, i: usize, j: usize) -> Fe<'a> {
        self.grid
            .get(i)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or(self.ctx.zero())
    }

    /// Nonzero terms (i, j, c), x-degree major.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Fe<'a>)> + '_ {
        self.grid.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, &c)| (i, j, c))
        })
    }

    /// Coefficient of y^j as a polynomial in x.
    pub fn y_coeff(&self, j: usize) -> UniPoly<'a> {
        UniPoly::new(
            self.ctx,
            self.grid
                .iter()
                .map(|r| r.get(j).copied().unwrap_or(self.ctx.zero()))
                .collect(),
        )
    }

    /// All y-coefficients, index j.
    pub fn y_coeffs(&self) -> Vec<UniPoly<'a>> {
        match self.deg_y() {
            Some(d) => (0..=d).map(|j| self.y_coeff(j)).collect(),
            None => Vec::new(),
        }
    }

    pub fn eval(&self, a: Fe<'a>, b: Fe<'a>) -> Fe<'a> {
        self.grid.iter().rev().fold(self.ctx.zero(), |acc, row| {
            acc * a + row.iter().rev().fold(self.ctx.zero(), |s, &c| s * b + c)
        })
    }

    /// F(a, y) as a polynomial in y.
    pub fn specialize_x(&self, a: Fe<'a>) -> UniPoly<'a> {
        let w = self.deg_y().map_or(0, |d| d + 1);
        let coeffs = (0..w)
            .map(|j| {
                self.grid
                    .iter()
                    .rev()
                    .fold(self.ctx.zero(), |acc, r| acc * a + r[j])
            })
            .collect();
        UniPoly::new(self.ctx, coeffs)
    }

    pub fn scale(&self, c: Fe<'a>) -> Self {
        Self::new(
            self.ctx,
            self.grid
                .iter()
                .map(|r| r.iter().map(|&a| a * c).collect())
                .collect(),
        )
    }

    /// Exchanges the roles of x and y.
    pub fn swap_xy(&self) -> Self {
        let (rows, cols) = (self.grid.len(), self.deg_y().map_or(0, |d| d + 1));
        let grid = (0..cols)
            .map(|j| (0..rows).map(|i| self.grid[i][j]).collect())
            .collect();
        Self::new(self.ctx, grid)
    }

    /// x^{deg_x} y^{deg_y} F(1/x, 1/y): the grid reversed along both axes.
    pub fn reciprocal_transform(&self) -> Self {
        let grid = self
            .grid
            .iter()
            .rev()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        Self::new(self.ctx, grid)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.ctx.one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The coefficient of the largest (i, j) in x-major order.
    pub fn leading(&self) -> Option<Fe<'a>> {
        let last = self.grid.last()?;
        last.iter().rev().find(|c| !c.is_zero()).copied()
    }

    /// Scaled so that [`leading`](Self::leading) is 1.
    pub fn normalized(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(l.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Returns `c` with `self = c * other`, if such a nonzero scalar exists.
    pub fn scalar_ratio(&self, other: &Self) -> Option<Fe<'a>> {
        if self.ctx.id() != other.ctx.id() || self.is_zero() || other.is_zero() {
            return None;
        }
        if self.deg_x() != other.deg_x() || self.deg_y() != other.deg_y() {
            return None;
        }
        let c = self.leading()? / other.leading()?;
        if *self == other.scale(c) {
            Some(c)
        } else {
            None
        }
    }

    /// Human-readable form, e.g. `x^2*y^2 + w^7*x^2*y + 3`, with field
    /// coefficients written in the generator `w`.
    pub fn to_string_xy(&self) -> String {
        let mut terms: Vec<(usize, usize, Fe<'a>)> = self.terms().collect();
        terms.sort_by_key(|t| std::cmp::Reverse((t.0 + t.1, t.0)));
        super::format_terms(
            terms
                .into_iter()
                .map(|(i, j, c)| (c.to_poly_string("w"), super::mono(&[("x", i), ("y", j)])))
                .collect(),
        )
    }

    /// Row-major grid of integer encodings with a bidegree header:
    /// `bideg <dx> <dy>` then one line per x-degree.
    pub fn to_grid_string(&self) -> String {
        let (dx, dy) = match (self.deg_x(), self.deg_y()) {
            (Some(a), Some(b)) => (a as i64, b as i64),
            _ => (-1, -1),
        };
        let mut s = format!("bideg {dx} {dy}\n");
        for r in &self.grid {
            let row: Vec<String> = r.iter().map(|c| c.encoding().to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_grid_string(ctx: &'a FieldCtx, s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(s, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 || h[0] != "bideg" {
            return Err(Error::parse(s, "header must be `bideg <dx> <dy>`"));
        }
        let dx: i64 = h[1].parse().map_err(|_| Error::parse(s, "bad dx"))?;
        let dy: i64 = h[2].parse().map_err(|_| Error::parse(s, "bad dy"))?;
        if dx < 0 {
            return Ok(Self::zero(ctx));
        }
        let mut grid = Vec::new();
        for line in lines {
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| Error::parse(s, "bad encoding"))
                        .and_then(|v| ctx.try_elem(v))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() as i64 != dy + 1 {
                return Err(Error::parse(s, "row length disagrees with header"));
            }
            grid.push(row);
        }
        if grid.len() as i64 != dx + 1 {
            return Err(Error::parse(s, "row count disagrees with header"));
        }
        let p = Self::new(ctx, grid);
        if p.deg_x() != Some(dx as usize) || p.deg_y() != Some(dy as usize) {
            return Err(Error::parse(s, "grid is not canonical"));
        }
        Ok(p)
    }
}

/// Q with F = G * Q, dividing with y as the main variable. Each step needs
/// the leading y-coefficient of G to divide that of the running remainder
/// in F_q[x]; the result is confirmed by multiplying back.
pub fn exact_divide<'a>(f: &BiPoly<'a>, g: &BiPoly<'a>) -> Result<BiPoly<'a>> {
    f.ctx.same_as(g.ctx)?;
    let dg = g.deg_y().ok_or(Error::InexactDivision)?;
    let g_cols = g.y_coeffs();
    let lead = &g_cols[dg];
    let mut rem = f.y_coeffs();
    let ctx = f.ctx;
    if f.is_zero() {
        return Ok(BiPoly::zero(ctx));
    }
    if rem.len() <= dg {
        return Err(Error::InexactDivision);
    }
    let mut quot = vec![UniPoly::zero(ctx); rem.len() - dg];
    for k in (dg..rem.len()).rev() {
        if rem[k].is_zero() {
            continue;
        }
        let q = rem[k].exact_div(lead)?;
        for (i, gc) in g_cols.iter().enumerate() {
            rem[k - dg + i] = &rem[k - dg + i] - &(&q * gc);
        }
        quot[k - dg] = q;
    }
    if rem.iter().any(|r| !r.is_zero()) {
        return Err(Error::InexactDivision);
    }
    let q = BiPoly::from_y_coeffs(ctx, &quot);
    if &(&q * g) != f {
        return Err(Error::InexactDivision);
    }
    Ok(q)
}

impl fmt::Debug for BiPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_xy())
    }
}

impl fmt::Display for BiPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_xy())
    }
}

fn zip_grid<'a>(
    a: &BiPoly<'a>,
    b: &BiPoly<'a>,
    op: impl Fn(Fe<'a>, Fe<'a>) -> Fe<'a>,
) -> BiPoly<'a> {
    assert!(
        a.ctx.id() == b.ctx.id(),
        "polynomials over different fields"
    );
    let rows = a.grid.len().max(b.grid.len());
    let cols = a.deg_y().max(b.deg_y()).map_or(0, |d| d + 1);
    let grid = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| op(a.coeff(i, j), b.coeff(i, j)))
                .collect()
        })
        .collect();
    BiPoly::new(a.ctx, grid)
}

impl<'a> Add for &BiPoly<'a> {
    type Output = BiPoly<'a>;
    fn add(self, rhs: Self) -> BiPoly<'a> {
        zip_grid(self, rhs, |a, b| a + b)
    }
}

impl<'a> Sub for &BiPoly<'a> {
    type Output = BiPoly<'a>;
    fn sub(self, rhs: Self) -> BiPoly<'a> {
        zip_grid(self, rhs, |a, b| a - b)
    }
}

impl<'a> Neg for &BiPoly<'a> {
    type Output = BiPoly<'a>;
    fn neg(self) -> BiPoly<'a> {
        self.scale(-self.ctx.one())
    }
}

impl<'a> Mul for &BiPoly<'a> {
    type Output = BiPoly<'a>;
    fn mul(self, rhs: Self) -> BiPoly<'a> {
        assert!(
            self.ctx.id() == rhs.ctx.id(),
            "polynomials over different fields"
        );
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero(self.ctx);
        }
        let (ra, ca) = (self.grid.len(), self.grid[0].len());
        let (rb, cb) = (rhs.grid.len(), rhs.grid[0].len());
        let mut grid = vec![vec![self.ctx.zero(); ca + cb - 1]; ra + rb - 1];
        for (i, j, a) in self.terms() {
            for (k, l, b) in rhs.terms() {
                grid[i + k][j + l] += a * b;
            }
        }
        BiPoly::new(self.ctx, grid)
    }
}
