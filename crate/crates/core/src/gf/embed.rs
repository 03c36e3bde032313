use std::collections::HashMap;

use super::{Fe, FieldCtx, SMALL_FIELD_CAP};
use crate::error::{Error, Result};

/// Field embedding F_{p^n} -> F_{p^{nk}}, sending the base generator to a
/// root of the base modulus inside the extension.
///
/// Only used to borrow sample points from an extension when a base field is
/// too small for evaluation/interpolation. Results are brought back with
/// [`Embedding::lower`], which first checks the Frobenius fixed-point
/// condition.
pub struct Embedding<'b, 'e> {
    base: &'b FieldCtx,
    ext: &'e FieldCtx,
    images: Vec<u64>,
    back: HashMap<u64, u64>,
}

impl<'b, 'e> Embedding<'b, 'e> {
    pub fn new(base: &'b FieldCtx, ext: &'e FieldCtx) -> Result<Self> {
        if base.p() != ext.p() || !ext.n().is_multiple_of(base.n()) {
            return Err(Error::NotSubfield {
                m: base.n(),
                n: ext.n(),
            });
        }
        if base.order() > SMALL_FIELD_CAP {
            return Err(Error::cap(
                "embedding table",
                base.order() as u128,
                SMALL_FIELD_CAP as u128,
            ));
        }
        let eval_modulus = |b: Fe<'e>| {
            base.modulus()
                .iter()
                .rev()
                .fold(ext.zero(), |acc, &c| acc * b + ext.from_int(c as i64))
        };
        let root = ext
            .subfield_elements(base.n())?
            .into_iter()
            .find(|&b| eval_modulus(b).is_zero())
            .ok_or(Error::BadModulus(base.p()))?;
        let mut images = Vec::with_capacity(base.order() as usize);
        let mut back = HashMap::with_capacity(base.order() as usize);
        for e in base.elements() {
            let img = e
                .coeffs()
                .iter()
                .rev()
                .fold(ext.zero(), |acc, &c| acc * root + ext.from_int(c as i64));
            images.push(img.encoding());
            back.insert(img.encoding(), e.encoding());
        }
        Ok(Embedding {
            base,
            ext,
            images,
            back,
        })
    }

    pub fn lift(&self, e: Fe<'b>) -> Fe<'e> {
        assert!(e.ctx().id() == self.base.id(), "lift from a foreign field");
        self.ext.elem(self.images[e.encoding() as usize])
    }

    /// Inverse of [`lift`](Self::lift); fails if `e` is outside the image.
    pub fn lower(&self, e: Fe<'e>) -> Result<Fe<'b>> {
        self.ext.same_as(e.ctx())?;
        if !e.in_subfield(self.base.n())? {
            return Err(Error::NotInSubfield {
                q: self.base.order(),
            });
        }
        let v = self.back[&e.encoding()];
        Ok(self.base.elem(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_is_a_ring_map() {
        let base = FieldCtx::new(3, 2).unwrap();
        let ext = FieldCtx::new(3, 4).unwrap();
        let emb = Embedding::new(&base, &ext).unwrap();
        for a in base.elements() {
            for b in base.elements() {
                assert_eq!(emb.lift(a + b), emb.lift(a) + emb.lift(b));
                assert_eq!(emb.lift(a * b), emb.lift(a) * emb.lift(b));
            }
            assert_eq!(emb.lower(emb.lift(a)).unwrap(), a);
        }
        let outside = ext.find_primitive();
        assert!(emb.lower(outside).is_err());
    }
}
