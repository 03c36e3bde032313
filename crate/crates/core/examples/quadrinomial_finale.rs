//! A x^{q^2-q+1} + B x^{2q-1} + C x^q + x over F_{q^2}: the coefficient
//! conditions next to brute force.
use ppcurve::families::{finale_check, finale_triples, outside_fq_triples, quadrinomial_build};
use ppcurve::permcheck::{is_pp_brute, FULL_FIELD_CAP};
use ppcurve::{FieldCtx, Result};

fn main() -> Result<()> {
    for (p, k) in [(5u64, 1u32), (7, 1), (3, 2)] {
        let q = p.pow(k);
        let f = FieldCtx::new(p, 2 * k as usize)?;
        let triples = finale_triples(p, k)?;
        let mut bad = Vec::new();
        for t in &triples {
            let [a, b, c] = t.map(|v| f.elem(v));
            if !is_pp_brute(&quadrinomial_build(a, b, c, q)?, FULL_FIELD_CAP)?.verdict {
                // h~ = +-h: C = l, A = l B with l = +-1.
                bad.push(*t);
            }
        }
        println!(
            "q = {q}: {} triples meet a condition, {} fail to permute: {bad:?}",
            triples.len(),
            bad.len()
        );
    }

    let f = FieldCtx::new(7, 2)?;
    let (a, b, c) = (f.from_int(1), f.from_int(6), f.from_int(5));
    let cond = finale_check(a, b, c, 7)?;
    let pp = is_pp_brute(&quadrinomial_build(a, b, c, 7)?, FULL_FIELD_CAP)?;
    println!(
        "q = 7, (A, B, C) = (1, 6, 5): {cond:?}, permutes F_49: {}",
        pp.verdict
    );

    let f = FieldCtx::new(5, 2)?;
    let outside = outside_fq_triples(5, 1)?;
    let ok = outside
        .iter()
        .filter(|t| {
            let [a, b, c] = t.map(|v| f.elem(v));
            quadrinomial_build(a, b, c, 5)
                .and_then(|g| is_pp_brute(&g, FULL_FIELD_CAP))
                .is_ok_and(|r| r.verdict)
        })
        .count();
    println!(
        "q = 5, (B-1)/A outside F_5: {ok} of {} triples permute F_25",
        outside.len()
    );
    Ok(())
}
