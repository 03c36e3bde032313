//! The curve (g(x) - g(y))/(x - y) of a fractional polynomial and the
//! stored component factorizations.
use ppcurve::families::{verify_factorization, CatalogData};
use ppcurve::permcheck::{curve_mu_point_search, mu_q_plus_1};
use ppcurve::polyalg::{difference_quotient, parse_rational};
use ppcurve::{FieldCtx, Result};

fn main() -> Result<()> {
    let f = FieldCtx::new(3, 4)?;
    let g = parse_rational(&f, "(x^6+x^4-1)/(-x^7+x^3+x)")?;
    let curve = difference_quotient(&g);
    println!("curve of {g}:\n  {curve}");
    let mu = mu_q_plus_1(&f)?;
    match curve_mu_point_search(&curve, &mu)? {
        None => println!("no off-diagonal point in mu_10 x mu_10, so g permutes mu_10"),
        Some((a, b)) => println!("point ({a}, {b}) on the curve"),
    }

    let data = CatalogData::builtin();
    for case in &data.cases {
        let r = verify_factorization(case)?;
        println!(
            "{:<16} {:<7} ok={} w={:?} scalar={:?} exact={} [{} ms]",
            r.id, r.field, r.ok, r.primitive, r.scalar, r.exact, r.elapsed_ms
        );
    }
    Ok(())
}
