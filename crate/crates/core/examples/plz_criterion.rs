//! x^r h(x^{(Q-1)/d}) permutes F_Q iff gcd(r, (Q-1)/d) = 1 and
//! x^r h(x)^{(Q-1)/d} permutes mu_d. Compared here with brute force.
use ppcurve::permcheck::{is_pp_brute, plz_check, plz_polynomial, FULL_FIELD_CAP};
use ppcurve::polyalg::UniPoly;
use ppcurve::{FieldCtx, Result};

fn main() -> Result<()> {
    let f = FieldCtx::new(7, 2)?;
    let mut agree = 0;
    let mut permutations = 0;
    for (r, d) in [(1u64, 8u64), (3, 8), (1, 4), (5, 6), (2, 8)] {
        for a in 0..7 {
            for b in 1..7 {
                let h = UniPoly::from_ints(&f, &[b, a, 1]);
                let plz = plz_check(r, d, &h)?;
                let brute = is_pp_brute(&plz_polynomial(r, d, &h)?, FULL_FIELD_CAP)?;
                assert_eq!(plz.verdict, brute.verdict);
                agree += 1;
                permutations += plz.verdict as usize;
            }
        }
    }
    println!("{agree} instances over F_49: criterion and brute force agree ({permutations} permutations)");

    let h = UniPoly::from_ints(&f, &[1, 5, 6]);
    let rep = plz_check(1, 8, &h)?;
    println!(
        "x h(x^6) with h = {h}: gcd ok {}, permutes mu_8 {}",
        rep.gcd_ok, rep.mu.verdict
    );
    Ok(())
}
