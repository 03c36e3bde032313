//! Every x(x^2+Ax+B)^2/(x^2+Cx+D)^2 over F_5 that permutes F_5 and F_125.
use ppcurve::families::{search_table1, CatalogData};
use ppcurve::permcheck::FULL_FIELD_CAP;

fn main() -> ppcurve::Result<()> {
    let data = CatalogData::builtin();
    let s = search_table1(&[1, 3], &data.table1, FULL_FIELD_CAP)?;
    println!("{} survivors at k = 1 and 3:", s.survivors.len());
    for q in &s.survivors {
        let tag = if data.table1.contains(q) {
            "listed"
        } else {
            ""
        };
        println!("  A={} B={} C={} D={} {tag}", q[0], q[1], q[2], q[3]);
    }
    println!("listed rows missing: {:?}", s.missing);
    Ok(())
}
