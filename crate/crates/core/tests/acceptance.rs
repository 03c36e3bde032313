//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ppcurve::families::{
    ambient_field, build, finale_check, quadrinomial_build, search_table1, verify_factorization,
    verify_family, verify_resultant, Caps, CatalogData, FamilyReport, Instance,
};
use ppcurve::permcheck::{
    fractional_associate, is_pp_brute, mu_q_plus_1, permutes_fn, plz_check, plz_polynomial,
    DomainMode, Witness, FULL_FIELD_CAP,
};
use ppcurve::polyalg::UniPoly;
use ppcurve::{Fe, FieldCtx};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&CatalogData) -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    check(t < limit, format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn run_family(
    data: &CatalogData,
    id: &str,
    k: u32,
    params: &[u64],
) -> Result<FamilyReport, String> {
    let inst = Instance::fixed(id, k, params).map_err(|e| e.to_string())?;
    verify_family(&inst, data, Caps::default()).map_err(|e| format!("{id} k={k}: {e}"))
}

fn permutes_all(data: &CatalogData, id: &str, ks: &[u32], params: &[u64]) -> Result<(), String> {
    for &k in ks {
        let r = run_family(data, id, k, params)?;
        check(
            r.verdict,
            format!(
                "{id} {params:?} k={k}: no permutation, witness {:?}",
                r.witness
            ),
        )?;
    }
    Ok(())
}

/// Re-evaluates the built map at the witness.
fn witness_holds(inst: &Instance, w: &Witness) -> bool {
    let ctx = ambient_field(inst, Caps::default()).unwrap();
    let map = build(inst, &ctx).unwrap();
    match *w {
        Witness::Collision { a, b, image } => {
            a != b
                && map.eval(ctx.elem(a)) == Some(ctx.elem(image))
                && map.eval(ctx.elem(b)) == Some(ctx.elem(image))
        }
        Witness::Pole { a } => map.eval(ctx.elem(a)).is_none(),
        Witness::Escape { a, image } => map.eval(ctx.elem(a)) == Some(ctx.elem(image)),
    }
}

fn c1_conj1(data: &CatalogData) -> Outcome {
    let start = Instant::now();
    permutes_all(data, "conj1", &[2, 4, 6], &[])?;
    within(start, Duration::from_secs(1))
}

fn c2_conj2(data: &CatalogData) -> Outcome {
    let start = Instant::now();
    permutes_all(data, "conj2", &[1, 2, 3, 4, 5, 6], &[])?;
    within(start, Duration::from_secs(1))
}

fn c3_conj3(data: &CatalogData) -> Outcome {
    let start = Instant::now();
    permutes_all(data, "conj3", &[1, 3, 4, 5], &[])?;
    let k2 = run_family(data, "conj3", 2, &[])?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!(
        "{t}; k=2 verdict {} witness {:?}",
        k2.verdict, k2.witness
    ))
}

fn c4_binary(data: &CatalogData) -> Outcome {
    let start = Instant::now();
    for id in ["bin1", "bin2"] {
        permutes_all(data, id, &[2, 3, 4, 5, 6, 8, 9, 10], &[])?;
        let r = run_family(data, id, 7, &[])?;
        check(!r.verdict, format!("{id} permutes at n=7"))?;
        let w = r.witness.ok_or(format!("{id} n=7: no witness"))?;
        check(
            matches!(w, Witness::Collision { .. }),
            format!("{id} n=7: {w:?} is not a collision"),
        )?;
        let inst = Instance::fixed(id, 7, &[]).unwrap();
        check(
            witness_holds(&inst, &w),
            format!("{id} n=7: witness {w:?} does not recheck"),
        )?;
    }
    within(start, Duration::from_secs(1))
}

fn c5_binary_trinomials(data: &CatalogData) -> Outcome {
    let start = Instant::now();
    for id in ["gs1", "gs2"] {
        let mut permuting = Vec::new();
        for m in 1..=6 {
            if run_family(data, id, m, &[])?.verdict {
                permuting.push(m);
            }
        }
        check(
            permuting == [2, 6],
            format!("{id} permutes at m = {permuting:?}"),
        )?;
    }
    for id in ["gsfrac1", "gsfrac2", "gsfrac3"] {
        permutes_all(data, id, &[2, 6], &[])?;
    }
    within(start, Duration::from_secs(5))
}

/// x(x^2-x+2)^2/(x^2+x+2)^2 on F_5 in plain integer arithmetic.
fn f5odd_by_hand(x: i64) -> i64 {
    let m = |v: i64| v.rem_euclid(5);
    let num = m(x * m(x * x - x + 2).pow(2));
    let den = m(m(x * x + x + 2).pow(2));
    let inv = (1..5)
        .find(|&i| m(den * i) == 1)
        .expect("denominator is nonzero on F_5");
    m(num * inv)
}

fn c6_f5(data: &CatalogData) -> Outcome {
    let start = Instant::now();
    permutes_all(data, "f5even", &[2, 4], &[])?;
    permutes_all(data, "f5odd", &[1, 3, 5], &[])?;
    let expected = [(0, 0), (1, 4), (2, 3), (3, 2), (4, 1)];
    for (x, y) in expected {
        check(
            f5odd_by_hand(x) == y,
            format!("hand evaluation at {x} gives {}", f5odd_by_hand(x)),
        )?;
    }
    let inst = Instance::fixed("f5odd", 1, &[]).unwrap();
    let ctx = ambient_field(&inst, Caps::default()).unwrap();
    let map = build(&inst, &ctx).unwrap();
    for (x, y) in expected {
        let got = map.eval(ctx.elem(x as u64)).map(|v| v.encoding());
        check(
            got == Some(y as u64),
            format!("f5odd({x}) = {got:?}, want {y}"),
        )?;
    }
    within(start, Duration::from_secs(1))
}

fn c7_table1(data: &CatalogData) -> Outcome {
    let start = Instant::now();
    check(
        data.table1.len() == 10,
        format!("{} table1 rows", data.table1.len()),
    )?;
    for row in &data.table1 {
        permutes_all(data, "table1", &[1, 3], row)?;
    }
    let s = search_table1(&[1, 3], &data.table1, FULL_FIELD_CAP).map_err(|e| e.to_string())?;
    check(
        s.missing.is_empty(),
        format!("search misses {:?}", s.missing),
    )?;
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!(
        "{t}; {} survivors, unlisted {:?}",
        s.survivors.len(),
        s.extras
    ))
}

fn c8_table2(data: &CatalogData) -> Outcome {
    let start = Instant::now();
    check(
        data.table2.len() >= 4,
        format!("{} table2 rows", data.table2.len()),
    )?;
    let mut info = Vec::new();
    for row in &data.table2 {
        for k in [1, 3] {
            let r = run_family(data, "table2", k, row)?;
            check(!r.verdict, format!("table2 {row:?} permutes mu at k={k}"))?;
            let w = r
                .witness
                .ok_or(format!("table2 {row:?} k={k}: no witness"))?;
            let inst = Instance::fixed("table2", k, row).unwrap();
            check(
                witness_holds(&inst, &w),
                format!("table2 {row:?} k={k}: {w:?} does not recheck"),
            )?;

            // Informational: the same map on F_{3^k}.
            let f = FieldCtx::new(3, k as usize).unwrap();
            let map = build(&inst, &f).unwrap();
            let dom: Vec<Fe> = f.elements().collect();
            let full = permutes_fn(&dom, DomainMode::FullField, |z| map.eval(z));
            info.push(format!("{row:?}@F_3^{k}={}", full.verdict));
        }
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("{t}; field verdicts {}", info.join(" ")))
}

fn c9_factorizations(data: &CatalogData) -> Outcome {
    let start = Instant::now();
    let required = [
        "conj1",
        "conj2-conics",
        "conj3-conics",
        "bin1-conics",
        "bin2-conics",
        "gs-conics",
        "f5even",
        "f5odd",
    ];
    for id in required {
        check(data.case(id).is_some(), format!("missing case {id}"))?;
    }
    let t1 = data
        .cases
        .iter()
        .filter(|c| c.id.starts_with("table1-"))
        .count();
    let t2 = data
        .cases
        .iter()
        .filter(|c| c.id.starts_with("table2-"))
        .count();
    check(
        t1 == 10 && t2 >= 4,
        format!("{t1} table1 and {t2} table2 cases"),
    )?;
    let bin = data.case("bin1-conics").unwrap();
    check((bin.p, bin.n) == (2, 7), "bin1 conics not over F_128")?;
    let f128 = FieldCtx::new(2, 7).unwrap();
    check(
        f128.modulus() == [1, 1, 0, 0, 0, 0, 0, 1],
        "F_128 modulus is not w^7+w+1",
    )?;
    let mut exact = 0;
    for case in &data.cases {
        let r = verify_factorization(case).map_err(|e| format!("{}: {e}", case.id))?;
        check(r.ok, format!("{} does not factor", case.id))?;
        exact += r.exact as usize;
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("{t}; {} cases, {exact} exact", data.cases.len()))
}

fn c10_resultants(data: &CatalogData) -> Outcome {
    let start = Instant::now();
    let exps = |id: &str| -> Result<Vec<u64>, String> {
        let r = data
            .resultant(id)
            .ok_or(format!("missing resultant {id}"))?;
        let mut e: Vec<u64> = r.roots.iter().map(|x| x.0).collect();
        e.sort();
        Ok(e)
    };
    let conj = data.resultant("conj1-F").ok_or("missing conj1-F")?;
    check(
        conj.roots == [(2, 9), (6, 9)],
        format!("conj1-F roots {:?}", conj.roots),
    )?;
    check(
        exps("f5even-F1")? == [3, 4, 8, 9, 15, 16, 20, 21],
        "f5even J",
    )?;
    check(
        exps("f5odd")? == [1, 4, 5, 13, 14, 17, 20, 22],
        "f5odd exponents",
    )?;
    let t1 = data
        .resultants
        .iter()
        .filter(|r| r.id.starts_with("table1-"))
        .count();
    check(t1 == 10, format!("{t1} table1 resultants"))?;
    for case in &data.resultants {
        let r = verify_resultant(case).map_err(|e| format!("{}: {e}", case.id))?;
        check(r.ok, format!("{} does not match", case.id))?;
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("{t}; {} resultants", data.resultants.len()))
}

fn c11_plz(_: &CatalogData) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fields: Vec<FieldCtx> = [
        (2, 2),
        (2, 3),
        (2, 4),
        (2, 6),
        (3, 2),
        (3, 3),
        (3, 4),
        (5, 2),
        (7, 2),
    ]
    .iter()
    .map(|&(p, n)| FieldCtx::new(p, n).unwrap())
    .collect();
    let (mut runs, mut pps) = (0, 0);
    while runs < 240 {
        let f = &fields[rng.gen_range(0..fields.len())];
        let divisors: Vec<u64> = (1..f.order())
            .filter(|d| (f.order() - 1).is_multiple_of(*d))
            .collect();
        let d = divisors[rng.gen_range(0..divisors.len())];
        let r = rng.gen_range(1..f.order());
        let deg = rng.gen_range(0..4);
        let coeffs: Vec<Fe> = (0..=deg)
            .map(|_| f.elem(rng.gen_range(0..f.order())))
            .collect();
        let h = UniPoly::new(f, coeffs);
        if h.is_zero() {
            continue;
        }
        let plz = plz_check(r, d, &h).map_err(|e| e.to_string())?;
        let poly = plz_polynomial(r, d, &h).map_err(|e| e.to_string())?;
        let brute = is_pp_brute(&poly, FULL_FIELD_CAP).map_err(|e| e.to_string())?;
        check(
            plz.verdict == brute.verdict,
            format!(
                "r={r} d={d} h={h} over {f}: criterion {} brute {}",
                plz.verdict, brute.verdict
            ),
        )?;
        runs += 1;
        pps += brute.verdict as usize;
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("{t}; {runs} instances, {pps} permutations"))
}

fn c12_fractional_identity(_: &CatalogData) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut instances = 0;
    let mut points = 0;
    for (p, k) in [(2u64, 2usize), (5, 1), (2, 3), (3, 2), (5, 2)] {
        let f = FieldCtx::new(p, 2 * k).unwrap();
        let q = p.pow(k as u32);
        let fq = f.subfield_elements(k).unwrap();
        let mu = mu_q_plus_1(&f).unwrap();
        for _ in 0..50 {
            let deg = rng.gen_range(0..=6);
            let mut coeffs: Vec<Fe> = (0..deg).map(|_| fq[rng.gen_range(0..fq.len())]).collect();
            coeffs.push(fq[rng.gen_range(1..fq.len())]);
            let h = UniPoly::new(&f, coeffs);
            let r = rng.gen_range(1..=2 * q + 2);
            let g = fractional_associate(r, &h, q).map_err(|e| e.to_string())?;
            for &z in mu.elements() {
                if h.eval(z).is_zero() {
                    continue;
                }
                let direct = z.pow(r) * h.eval(z).pow(q - 1);
                check(
                    g.eval(z) == Some(direct),
                    format!("q={q} r={r} h={h} z={z}"),
                )?;
                points += 1;
            }
            instances += 1;
        }
    }
    Ok(format!("{instances} instances, {points} points"))
}

fn c13_finale(_: &CatalogData) -> Outcome {
    let start = Instant::now();
    let mut qualifying = 0;
    let mut failures = Vec::new();
    for (p, k) in [(5u64, 1usize), (7, 1), (3, 2)] {
        let f = FieldCtx::new(p, 2 * k).unwrap();
        let q = p.pow(k as u32);
        let fq = f.subfield_elements(k).unwrap();
        for &a in fq.iter().filter(|e| !e.is_zero()) {
            for &b in fq.iter().filter(|e| !e.is_zero()) {
                for &c in &fq {
                    if !finale_check(a, b, c, q)
                        .map_err(|e| e.to_string())?
                        .any_fq()
                    {
                        continue;
                    }
                    qualifying += 1;
                    let poly = quadrinomial_build(a, b, c, q).map_err(|e| e.to_string())?;
                    if !is_pp_brute(&poly, FULL_FIELD_CAP).unwrap().verdict {
                        failures.push(format!("q={q} (A,B,C)=({a},{b},{c})"));
                    }
                }
            }
        }
    }
    let f49 = FieldCtx::new(7, 2).unwrap();
    let (a, b, c) = (f49.from_int(1), f49.from_int(6), f49.from_int(5));
    let cond = finale_check(a, b, c, 7).unwrap();
    check(cond.any_fq(), "q=7 (1,6,5) meets no condition")?;
    check(
        is_pp_brute(&quadrinomial_build(a, b, c, 7).unwrap(), FULL_FIELD_CAP)
            .unwrap()
            .verdict,
        "q=7 (1,6,5) does not permute F_49",
    )?;
    check(
        failures.is_empty(),
        format!(
            "{} of {qualifying} qualifying triples do not permute: {}",
            failures.len(),
            failures.join("; ")
        ),
    )?;
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("{t}; {qualifying} qualifying triples"))
}

fn c14_outside_fq(_: &CatalogData) -> Outcome {
    let start = Instant::now();
    let f = FieldCtx::new(5, 2).unwrap();
    let mut qualifying = 0;
    let mut failures = Vec::new();
    for a in f.elements().filter(|e| !e.is_zero()) {
        for b in f.elements().filter(|e| !e.is_zero()) {
            for c in f.elements() {
                if !finale_check(a, b, c, 5).unwrap().outside_fq {
                    continue;
                }
                qualifying += 1;
                let rep =
                    is_pp_brute(&quadrinomial_build(a, b, c, 5).unwrap(), FULL_FIELD_CAP).unwrap();
                if !rep.verdict {
                    failures.push(([a.encoding(), b.encoding(), c.encoding()], rep.witness));
                }
            }
        }
    }
    // The same sweep read over F_{5^4}, for the record.
    let f625 = FieldCtx::new(5, 4).unwrap();
    let emb = ppcurve::gf::Embedding::new(&f, &f625).unwrap();
    let mut over_625 = 0;
    for a in f.elements().filter(|e| !e.is_zero()) {
        for b in f.elements().filter(|e| !e.is_zero()) {
            let c = (a * a - b * b + b) / a;
            if finale_check(a, b, c, 5).unwrap().outside_fq {
                let poly = quadrinomial_build(emb.lift(a), emb.lift(b), emb.lift(c), 5).unwrap();
                over_625 += is_pp_brute(&poly, FULL_FIELD_CAP).unwrap().verdict as usize;
            }
        }
    }
    let t = within(start, Duration::from_secs(60))?;
    check(qualifying > 0, "no qualifying triples")?;
    check(
        failures.is_empty(),
        format!(
            "{} of {qualifying} qualifying triples do not permute F_25; first {:?}; \
             {over_625} of {qualifying} permute F_625",
            failures.len(),
            failures[0]
        ),
    )?;
    Ok(format!("{t}; {qualifying} triples"))
}

fn main() {
    let data = CatalogData::builtin();
    let criteria: &[Criterion] = &[
        ("conj1 permutes mu at k = 2, 4, 6", c1_conj1),
        ("conj2 permutes mu at k = 1..6", c2_conj2),
        ("conj3 permutes mu at k = 1, 3, 4, 5", c3_conj3),
        ("bin1/bin2 permute mu except at n = 7", c4_binary),
        (
            "gs1/gs2 permute exactly at m = 2, 6; gsfrac at m = 2, 6",
            c5_binary_trinomials,
        ),
        ("F_5 families and the f5odd k = 1 table", c6_f5),
        (
            "table1 rows permute at k = 1, 3 and survive the search",
            c7_table1,
        ),
        ("table2 rows fail on mu at k = 1, 3", c8_table2),
        ("factorization audits", c9_factorizations),
        ("resultant audits", c10_resultants),
        ("criterion vs brute force on random instances", c11_plz),
        ("fractional identity on random h", c12_fractional_identity),
        (
            "coefficient conditions imply permutation, q = 5, 7, 9",
            c13_finale,
        ),
        (
            "(B-1)/A outside F_q implies permutation, q = 5",
            c14_outside_fq,
        ),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(|| f(&data))).unwrap_or_else(|e| {
            Err(format!(
                "panicked: {:?}",
                e.downcast_ref::<String>()
                    .cloned()
                    .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
            ))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
