//! Res_y of a curve component and its reciprocal transform, checked against
//! the stored root exponents.
use ppcurve::families::{verify_resultant, CatalogData};
use ppcurve::polyalg::{parse_bipoly, resultant_y};
use ppcurve::{FieldCtx, Result};

fn main() -> Result<()> {
    let f = FieldCtx::new(3, 2)?;
    let w = f.generator();
    let comp = parse_bipoly(&f, "x^3*y^3 + x^3*y + x*y^3 - x*y + w^2", w)?;
    let res = resultant_y(&comp, &comp.reciprocal_transform())?;
    println!("F = {comp}\nRes_y(F, F*) = {}", res.monic());

    let data = CatalogData::builtin();
    for case in &data.resultants {
        let r = verify_resultant(case)?;
        println!(
            "{:<14} {:<7} ok={} w={:?} sign={:?} exact={} [{} ms]",
            r.id, r.field, r.ok, r.primitive, r.sign, r.exact, r.elapsed_ms
        );
    }
    Ok(())
}
