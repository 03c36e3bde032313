//! x^r h(x)^{q-1} on mu_{q+1} collapses to the rational map x^{r-l} h~(x)/h(x).
use ppcurve::permcheck::{fractional_associate, mu_q_plus_1, permutes_mu};
use ppcurve::polyalg::{parse_unipoly, UniPoly};
use ppcurve::{FieldCtx, Result};

fn main() -> Result<()> {
    // q = 9, working in F_81.
    let f = FieldCtx::new(3, 4)?;
    let q = 9;
    let w9 = f.subfield_elements(2)?[3];
    let h = &parse_unipoly(&f, "x^3 + 2*x + 1")? + &UniPoly::monomial(w9, 2);
    let r = 2;
    let g = fractional_associate(r, &h, q)?;
    println!("h = {h}\nfractional associate for r = {r}: {g}");

    let mu = mu_q_plus_1(&f)?;
    let mut agree = 0;
    for &z in mu.elements() {
        if h.eval(z).is_zero() {
            continue;
        }
        let direct = z.pow(r) * h.eval(z).pow(q - 1);
        assert_eq!(Some(direct), g.eval(z));
        agree += 1;
    }
    println!("identity holds at {agree} points of mu_{}", q + 1);

    let conj = ppcurve::polyalg::parse_rational(&f, "(-x^7+x^6+x)/(x^6+x-1)")?;
    let rep = permutes_mu(&conj, &mu)?;
    println!(
        "{conj} permutes mu_10: {} (witness {:?})",
        rep.verdict, rep.witness
    );
    Ok(())
}
