//! Runs every family within a budget plus the audits and prints the matrix.
//!
//!     cargo run --release --example reproduce_all -- 1000000
use ppcurve::cli::{cmd_verify_all, Format, Record, RunConfig, VerifyAllArgs};
use ppcurve::families::Caps;

fn main() -> ppcurve::Result<()> {
    let max_cost = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1 << 20);
    let cfg = RunConfig {
        format: Format::Text,
        workers: 0,
        caps: Caps::default(),
        data: None,
    };
    let args = VerifyAllArgs {
        max_cost,
        audits: true,
        only: Vec::new(),
    };
    let out = cmd_verify_all(&args, &cfg)?;
    for r in &out.records {
        if matches!(r, Record::Summary(_))
            || !matches!(r, Record::Family(f) if f.outcome == ppcurve::families::Outcome::Pass)
        {
            println!("{}", r.to_text());
        }
    }
    println!("exit code {}", out.code);
    Ok(())
}
