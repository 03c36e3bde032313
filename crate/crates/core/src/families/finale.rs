//! Cubic h = Bx^3 + Cx^2 + x + A: sufficient conditions for h~/h to
//! permute mu_{q+1}, and the matching quadrinomials over F_{q^2}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx};
use crate::permcheck::subfield_degree;
use crate::polyalg::{quadratic_distinct_roots_in, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinaleConditions {
    /// A^2 - AC - B^2 + B = 0 and AT^2 + (1-B)T + A has distinct roots in F_q.
    pub condition_i: bool,
    /// q = 1 mod 3, 3B = 3AC + C^2 - 1 and
    /// 3T^2 - 3(3A+C)T + (3A+C)^2 - 1 has distinct roots in F_q.
    pub condition_ii: bool,
    /// A^2 - AC - B^2 + B = 0 and (B-1)/A not in F_q (A, B, C may lie in F_{q^2}).
    pub outside_fq: bool,
}

impl FinaleConditions {
    /// Either condition for coefficients in F_q.
    pub fn any_fq(&self) -> bool {
        self.condition_i || self.condition_ii
    }
}

/// Evaluates the three conditions. A, B, C live in a field containing F_q;
/// conditions (i) and (ii) are reported false unless all three lie in F_q.
pub fn finale_check<'a>(a: Fe<'a>, b: Fe<'a>, c: Fe<'a>, q: u64) -> Result<FinaleConditions> {
    let ctx = a.ctx();
    ctx.same_as(b.ctx())?;
    ctx.same_as(c.ctx())?;
    if ctx.p() == 2 {
        return Err(Error::Characteristic(2));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidParams("A and B must be nonzero".into()));
    }
    let m = subfield_degree(ctx, q)?;
    let one = ctx.one();
    let on_conic = a * a - a * c - b * b + b == ctx.zero();
    let in_fq = a.in_subfield(m)? && b.in_subfield(m)? && c.in_subfield(m)?;

    let condition_i = in_fq && on_conic && {
        let quad = UniPoly::new(ctx, vec![a, one - b, a]);
        quadratic_distinct_roots_in(&quad, ctx.p(), m)?
    };

    let three = ctx.from_int(3);
    let condition_ii = in_fq && q % 3 == 1 && !three.is_zero() && {
        let s = three * a + c;
        b * three == three * a * c + c * c - one && {
            let quad = UniPoly::new(ctx, vec![s * s - one, -(three * s), three]);
            quadratic_distinct_roots_in(&quad, ctx.p(), m)?
        }
    };

    let outside_fq = on_conic && !((b - one) / a).in_subfield(m)?;
    Ok(FinaleConditions {
        condition_i,
        condition_ii,
        outside_fq,
    })
}

/// A x^{q^2-q+1} + B x^{2q-1} + C x^q + x.
pub fn quadrinomial_build<'a>(a: Fe<'a>, b: Fe<'a>, c: Fe<'a>, q: u64) -> Result<UniPoly<'a>> {
    let ctx = a.ctx();
    ctx.same_as(b.ctx())?;
    ctx.same_as(c.ctx())?;
    let q = q as usize;
    let deg = q * q - q + 1;
    let mut coeffs = vec![ctx.zero(); deg + 1];
    coeffs[1] = ctx.one();
    coeffs[q] += c;
    coeffs[2 * q - 1] += b;
    coeffs[deg] += a;
    Ok(UniPoly::new(ctx, coeffs))
}

/// h = Bx^3 + Cx^2 + x + A.
pub fn finale_cubic<'a>(a: Fe<'a>, b: Fe<'a>, c: Fe<'a>) -> UniPoly<'a> {
    UniPoly::new(a.ctx(), vec![a, a.ctx().one(), c, b])
}

/// h(x) = A x^q + B x^2 + C x + 1, so the quadrinomial is x h(x^{q-1}).
pub fn quadrinomial_inner<'a>(a: Fe<'a>, b: Fe<'a>, c: Fe<'a>, q: u64) -> UniPoly<'a> {
    let ctx = a.ctx();
    let mut coeffs = vec![ctx.zero(); q as usize + 1];
    coeffs[0] = ctx.one();
    coeffs[1] += c;
    coeffs[2] += b;
    coeffs[q as usize] += a;
    UniPoly::new(ctx, coeffs)
}

/// F_{q^2} for q = p^k.
pub fn square_field(p: u64, k: u32) -> Result<FieldCtx> {
    FieldCtx::new(p, 2 * k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcheck::{is_pp_brute, plz_check, FULL_FIELD_CAP};

    #[test]
    fn exponents() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        let one = f9.one();
        let f = quadrinomial_build(one, one, one, 3).unwrap();
        let exps: Vec<usize> = (0..=f.degree().unwrap())
            .filter(|&i| !f.coeff(i).is_zero())
            .collect();
        assert_eq!(exps, vec![1, 3, 5, 7]);
        let f49 = FieldCtx::new(7, 2).unwrap();
        let one = f49.one();
        let f = quadrinomial_build(one, one, one, 7).unwrap();
        let exps: Vec<usize> = (0..=f.degree().unwrap())
            .filter(|&i| !f.coeff(i).is_zero())
            .collect();
        assert_eq!(exps, vec![1, 7, 13, 43]);
        let t = quadrinomial_build(f49.zero(), one, one, 7).unwrap();
        assert_eq!(t.degree(), Some(13));
    }

    #[test]
    fn derived_condition_ii_instance() {
        // 3A + C = 1, B = (3*1*5 + 25 - 1)/3 = 13 = 6 mod 7.
        let f49 = FieldCtx::new(7, 2).unwrap();
        let (a, b, c) = (f49.from_int(1), f49.from_int(6), f49.from_int(5));
        let r = finale_check(a, b, c, 7).unwrap();
        assert!(r.condition_ii);
        let f = quadrinomial_build(a, b, c, 7).unwrap();
        assert!(is_pp_brute(&f, FULL_FIELD_CAP).unwrap().verdict);
    }

    #[test]
    fn b_one_c_a() {
        for q in [5u64, 13] {
            let f = FieldCtx::new(q, 2).unwrap();
            for a in 1..q as i64 {
                let a = f.from_int(a);
                let r = finale_check(a, f.one(), a, q).unwrap();
                assert!(r.condition_i);
            }
        }
        let f = FieldCtx::new(7, 2).unwrap();
        let r = finale_check(f.one(), f.one(), f.one(), 7).unwrap();
        assert!(!r.condition_i);
    }

    #[test]
    fn congruence_gate() {
        let f = FieldCtx::new(5, 2).unwrap();
        for a in 1..5 {
            for b in 1..5 {
                for c in 0..5 {
                    let r = finale_check(f.from_int(a), f.from_int(b), f.from_int(c), 5).unwrap();
                    assert!(!r.condition_ii);
                }
            }
        }
    }

    #[test]
    fn preconditions() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert!(finale_check(f9.zero(), f9.one(), f9.one(), 3).is_err());
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert!(matches!(
            finale_check(f4.one(), f4.one(), f4.one(), 2),
            Err(Error::Characteristic(2))
        ));
    }

    #[test]
    fn plz_view_matches_brute_force() {
        let f49 = FieldCtx::new(7, 2).unwrap();
        let (a, b, c) = (f49.from_int(2), f49.from_int(3), f49.from_int(4));
        let f = quadrinomial_build(a, b, c, 7).unwrap();
        let plz = plz_check(1, 8, &quadrinomial_inner(a, b, c, 7)).unwrap();
        assert_eq!(
            plz.verdict,
            is_pp_brute(&f, FULL_FIELD_CAP).unwrap().verdict
        );
    }

    /// C = l and A = l B with l = +-1 make h~ = l h, a constant map.
    fn degenerate(a: Fe<'_>, b: Fe<'_>, c: Fe<'_>) -> bool {
        let one = a.ctx().one();
        [one, -one].into_iter().any(|l| c == l && a == l * b)
    }

    #[test]
    fn conditions_fail_exactly_on_degenerate_triples() {
        for (p, k) in [(5u64, 1usize), (7, 1), (3, 2)] {
            let f = FieldCtx::new(p, 2 * k).unwrap();
            let q = p.pow(k as u32);
            let fq = f.subfield_elements(k).unwrap();
            let mut seen = 0;
            for &a in fq.iter().filter(|e| !e.is_zero()) {
                for &b in fq.iter().filter(|e| !e.is_zero()) {
                    for &c in &fq {
                        if !finale_check(a, b, c, q).unwrap().any_fq() {
                            continue;
                        }
                        seen += 1;
                        let pp =
                            is_pp_brute(&quadrinomial_build(a, b, c, q).unwrap(), FULL_FIELD_CAP)
                                .unwrap();
                        assert_eq!(pp.verdict, !degenerate(a, b, c), "q={q} ({a}, {b}, {c})");
                    }
                }
            }
            assert!(seen > 0);
        }
    }

    #[test]
    fn outside_fq_sweep_q5() {
        // Brute force over F_25: only 20 of the 460 triples permute.
        let f = FieldCtx::new(5, 2).unwrap();
        let (mut total, mut pp) = (0, 0);
        let mut first_failure = None;
        for a in f.elements().filter(|e| !e.is_zero()) {
            for b in f.elements().filter(|e| !e.is_zero()) {
                for c in f.elements() {
                    if !finale_check(a, b, c, 5).unwrap().outside_fq {
                        continue;
                    }
                    total += 1;
                    let r = is_pp_brute(&quadrinomial_build(a, b, c, 5).unwrap(), FULL_FIELD_CAP)
                        .unwrap();
                    if r.verdict {
                        pp += 1;
                    } else if first_failure.is_none() {
                        first_failure =
                            Some(([a.encoding(), b.encoding(), c.encoding()], r.witness));
                    }
                }
            }
        }
        assert_eq!((total, pp), (460, 20));
        assert_eq!(
            first_failure,
            Some((
                [1, 5, 12],
                Some(crate::permcheck::Witness::Collision {
                    a: 0,
                    b: 9,
                    image: 0
                })
            ))
        );
    }
}
