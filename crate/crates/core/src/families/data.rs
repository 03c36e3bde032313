//! The line-based catalog data file: the table1 and table2 parameter lists,
//! factorization cases and resultant cases. See `data/catalog.txt` for the
//! format.

use std::path::Path;

use crate::error::{Error, Result};

pub const BUILTIN: &str = include_str!("../../data/catalog.txt");
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorMode {
    /// `w` ranges over every primitive element.
    Primitive,
    /// `w` is the root of the field modulus (or a Frobenius conjugate).
    ModulusRoot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    /// Curve of the reduced map.
    Reduced,
    /// Curve of N/D as written, common factors kept.
    Raw,
    /// N(x)D(y) - N(y)D(x) without dividing by x - y.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationCase {
    pub id: String,
    pub p: u64,
    pub n: usize,
    pub generator: GeneratorMode,
    pub target_kind: TargetKind,
    pub target: String,
    /// (template, multiplicity)
    pub factors: Vec<(String, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RightSide {
    Poly(String),
    Reciprocal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultantCase {
    pub id: String,
    pub p: u64,
    pub n: usize,
    pub generator: GeneratorMode,
    pub left: String,
    pub right: RightSide,
    /// (exponent of w, multiplicity)
    pub roots: Vec<(u64, u32)>,
    pub poly: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalogData {
    pub table1: Vec<[u64; 4]>,
    pub table2: Vec<[u64; 6]>,
    pub cases: Vec<FactorizationCase>,
    pub resultants: Vec<ResultantCase>,
}

#[derive(Default)]
struct Block {
    kind: &'static str,
    id: String,
    start: usize,
    field: Option<(u64, usize)>,
    generator: Option<GeneratorMode>,
    target: Option<(TargetKind, String)>,
    factors: Vec<(String, u32)>,
    left: Option<String>,
    right: Option<RightSide>,
    roots: Option<Vec<(u64, u32)>>,
    poly: Option<String>,
}

impl CatalogData {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("shipped catalog data parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(src: &str) -> Result<Self> {
        let mut out = CatalogData::default();
        let mut version = None;
        let mut block: Option<Block> = None;
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let (key, rest) = match text.split_once(char::is_whitespace) {
                Some((k, r)) => (k, r.trim()),
                None => (text, ""),
            };
            let err = |msg: String| Error::Data { line, msg };
            if let Some(b) = block.as_mut() {
                match key {
                    "end" => {
                        let b = block.take().unwrap();
                        out.finish(b)?;
                    }
                    "field" => {
                        let v = ints(rest, line)?;
                        if v.len() != 2 {
                            return Err(err("field needs `p n`".into()));
                        }
                        b.field = Some((v[0], v[1] as usize));
                    }
                    "generator" => {
                        b.generator = Some(match rest {
                            "primitive" => GeneratorMode::Primitive,
                            "modulus-root" => GeneratorMode::ModulusRoot,
                            _ => return Err(err(format!("unknown generator mode {rest:?}"))),
                        })
                    }
                    "target" | "target-raw" | "target-full" if b.kind == "case" => {
                        let kind = match key {
                            "target" => TargetKind::Reduced,
                            "target-raw" => TargetKind::Raw,
                            _ => TargetKind::Full,
                        };
                        b.target = Some((kind, rest.to_string()));
                    }
                    k if b.kind == "case" && (k == "factor" || k.starts_with("factor^")) => {
                        let mult = match k.strip_prefix("factor^") {
                            Some(m) => m
                                .parse()
                                .map_err(|_| err(format!("bad multiplicity {m:?}")))?,
                            None => 1,
                        };
                        if rest.is_empty() {
                            return Err(err("empty factor".into()));
                        }
                        b.factors.push((rest.to_string(), mult));
                    }
                    "left" if b.kind == "resultant" => b.left = Some(rest.to_string()),
                    "right" if b.kind == "resultant" => {
                        b.right = Some(if rest == "reciprocal" {
                            RightSide::Reciprocal
                        } else {
                            RightSide::Poly(rest.to_string())
                        })
                    }
                    "roots" if b.kind == "resultant" => {
                        let mut roots = Vec::new();
                        for tok in rest.split_whitespace() {
                            let (e, m) = tok.split_once(':').unwrap_or((tok, "1"));
                            let e = e
                                .parse()
                                .map_err(|_| err(format!("bad exponent {tok:?}")))?;
                            let m = m
                                .parse()
                                .map_err(|_| err(format!("bad multiplicity {tok:?}")))?;
                            roots.push((e, m));
                        }
                        b.roots = Some(roots);
                    }
                    "poly" if b.kind == "resultant" => b.poly = Some(rest.to_string()),
                    _ => {
                        return Err(err(format!(
                            "unexpected `{key}` inside {} {}",
                            b.kind, b.id
                        )))
                    }
                }
                continue;
            }
            match key {
                "version" => {
                    let v: u32 = rest
                        .parse()
                        .map_err(|_| err(format!("bad version {rest:?}")))?;
                    if v != FORMAT_VERSION {
                        return Err(err(format!("unsupported version {v}")));
                    }
                    version = Some(v);
                }
                _ if version.is_none() => return Err(err("missing `version` line".into())),
                "table1" => {
                    let v = ints(rest, line)?;
                    out.table1.push(
                        v.try_into()
                            .map_err(|_| err("table1 needs 4 values".into()))?,
                    );
                }
                "table2" => {
                    let v = ints(rest, line)?;
                    out.table2.push(
                        v.try_into()
                            .map_err(|_| err("table2 needs 6 values".into()))?,
                    );
                }
                "case" | "resultant" => {
                    if rest.is_empty() {
                        return Err(err(format!("{key} needs an id")));
                    }
                    block = Some(Block {
                        kind: if key == "case" { "case" } else { "resultant" },
                        id: rest.to_string(),
                        start: line,
                        ..Block::default()
                    });
                }
                _ => return Err(err(format!("unknown directive `{key}`"))),
            }
        }
        if let Some(b) = block {
            return Err(Error::Data {
                line: b.start,
                msg: format!("{} {} is not closed by `end`", b.kind, b.id),
            });
        }
        if version.is_none() {
            return Err(Error::Data {
                line: 0,
                msg: "missing `version` line".into(),
            });
        }
        Ok(out)
    }

    fn finish(&mut self, b: Block) -> Result<()> {
        let missing = |what: &str| Error::Data {
            line: b.start,
            msg: format!("{} {} has no {what}", b.kind, b.id),
        };
        let (p, n) = b.field.ok_or_else(|| missing("field"))?;
        let generator = b.generator.unwrap_or(GeneratorMode::Primitive);
        let taken = match b.kind {
            "case" => self.cases.iter().any(|c| c.id == b.id),
            _ => self.resultants.iter().any(|c| c.id == b.id),
        };
        if taken {
            return Err(Error::Data {
                line: b.start,
                msg: format!("duplicate id {}", b.id),
            });
        }
        if b.kind == "case" {
            let (target_kind, target) = b.target.clone().ok_or_else(|| missing("target"))?;
            if b.factors.is_empty() {
                return Err(missing("factor"));
            }
            self.cases.push(FactorizationCase {
                id: b.id,
                p,
                n,
                generator,
                target_kind,
                target,
                factors: b.factors,
            });
        } else {
            let left = b.left.clone().ok_or_else(|| missing("left"))?;
            let right = b.right.clone().ok_or_else(|| missing("right"))?;
            let roots = b.roots.clone().ok_or_else(|| missing("roots"))?;
            self.resultants.push(ResultantCase {
                id: b.id,
                p,
                n,
                generator,
                left,
                right,
                roots,
                poly: b.poly,
            });
        }
        Ok(())
    }

    pub fn case(&self, id: &str) -> Option<&FactorizationCase> {
        self.cases.iter().find(|c| c.id == id)
    }

    pub fn resultant(&self, id: &str) -> Option<&ResultantCase> {
        self.resultants.iter().find(|c| c.id == id)
    }
}

fn ints(s: &str, line: usize) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Data {
                line,
                msg: format!("expected an integer, got {t:?}"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_contents() {
        let d = CatalogData::builtin();
        assert_eq!(d.table1.len(), 10);
        assert_eq!(d.table1[0], [4, 2, 1, 2]);
        assert!(d.table2.contains(&[1, 1, 0, 2, 1, 1]));
        assert_eq!(d.table2.len(), 6);
        let c = d.case("conj1").unwrap();
        assert_eq!((c.p, c.n, c.target_kind), (3, 2, TargetKind::Full));
        assert_eq!(c.factors.len(), 3);
        assert_eq!(
            d.case("bin1-conics").unwrap().generator,
            GeneratorMode::ModulusRoot
        );
        let r = d.resultant("conj1-F").unwrap();
        assert_eq!(r.roots, vec![(2, 9), (6, 9)]);
        assert_eq!(r.right, RightSide::Reciprocal);
        assert_eq!(
            d.resultants
                .iter()
                .filter(|r| r.id.starts_with("table1-"))
                .count(),
            10
        );
    }

    #[test]
    fn multiplicity_suffix() {
        let d = CatalogData::builtin();
        let c = d.case("table2-221121").unwrap();
        assert_eq!(c.factors[0].1, 2);
        assert_eq!(c.factors.last().unwrap().1, 1);
    }

    #[test]
    fn malformed_input_reports_lines() {
        let e = CatalogData::parse("version 1\ntable1 1 2 3\n").unwrap_err();
        assert!(matches!(e, Error::Data { line: 2, .. }));
        let e = CatalogData::parse("table1 1 2 3 4\n").unwrap_err();
        assert!(matches!(e, Error::Data { line: 1, .. }));
        let e = CatalogData::parse("version 1\ncase a\nfield 3 2\n").unwrap_err();
        assert!(matches!(e, Error::Data { line: 2, .. }));
        let e = CatalogData::parse("version 2\n").unwrap_err();
        assert!(matches!(e, Error::Data { line: 1, .. }));
        let e = CatalogData::parse("version 1\ncase a\nfield 3 2\ntarget x\nend\n").unwrap_err();
        assert!(matches!(e, Error::Data { line: 2, .. }));
    }
}
