//! Arithmetic in F_81 and its subgroups.
use ppcurve::permcheck::mu_q_plus_1;
use ppcurve::{FieldCtx, Result};

fn main() -> Result<()> {
    let f = FieldCtx::new(3, 4)?;
    println!("{f} with modulus {:?} (low degree first)", f.modulus());
    let w = f.generator();
    println!(
        "generator w = {} (encoding {}), order {}",
        w,
        w.encoding(),
        w.order()?
    );

    let a = f.parse_element("w^3 + 2*w + 1")?;
    let b = f.parse_element("w^40")?;
    println!("a = {a}, b = {b}");
    println!("a + b = {}", a + b);
    println!("a * b = {}", a * b);
    println!("a / b = {}", a / b);
    println!("a^81 == a: {}", a.pow(81) == a);
    println!(
        "frobenius(a) = {} = a^3: {}",
        a.frobenius(),
        a.frobenius() == a.pow(3)
    );

    let f9 = f.subfield_elements(2)?;
    println!(
        "F_9 inside F_81: {:?}",
        f9.iter().map(|e| e.encoding()).collect::<Vec<_>>()
    );

    let mu = mu_q_plus_1(&f)?;
    println!(
        "mu_10 = {:?}",
        mu.sorted().iter().map(|e| e.encoding()).collect::<Vec<_>>()
    );
    let z = mu.generator();
    println!("z^9 == 1/z for the mu generator: {}", z.pow(9) == z.inv()?);
    Ok(())
}
