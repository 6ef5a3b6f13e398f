//! The indecomposables `D_w` with their characters, the coinvariant algebra
//! acting on `B(w_0)`, and Hom dimensions between Bott–Samelson modules.

use super::algebra::{algebra_closure, hom_space, AlgebraPresentation};
use super::bs::{bs_module, FinModule};
use super::decompose::{decompose, local_iso};
use super::{char_of_word, Character};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{Matrix, ModMatrix};
use crate::rootdata::{RootDatum, WeylElt};

/// Isomorphism class of a summand within a catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummandLabel {
    D(WeylElt),
    Unidentified,
}

impl SummandLabel {
    pub fn name(&self, datum: &RootDatum) -> String {
        match self {
            SummandLabel::D(w) => format!("D_{}", datum.element_name(*w)),
            SummandLabel::Unidentified => "unidentified".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub w: WeylElt,
    /// The canonical word of `w`.
    pub word: Vec<usize>,
    pub module: FinModule,
    pub character: Character,
    /// Summands of `B(word)`: label, dimension, multiplicity.
    pub decomposition: Vec<(SummandLabel, usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    /// Longest word decomposed, when the catalog stops short of `w_0`.
    pub length_bound: Option<usize>,
}

impl Catalog {
    pub fn get(&self, w: WeylElt) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.w == w)
    }
}

/// `D_w` for all `w` with `l(w) <= max_length`, by increasing length: the
/// one summand of `B(w)` not isomorphic to an earlier `D_v`. Its character
/// is that of `B(w)` minus those of the other summands, and must have
/// `mult(w) = 1` with support in the Bruhat interval below `w`.
pub fn catalog(datum: &RootDatum, field: FieldSpec, max_length: Option<usize>, seed: u64) -> Result<Catalog> {
    let longest = datum.length(datum.longest());
    let bound = max_length.filter(|&b| b < longest);
    let mut entries: Vec<CatalogEntry> = Vec::new();
    for w in datum.elements() {
        if bound.is_some_and(|b| datum.length(w) > b) {
            break;
        }
        let word = datum.word(w).to_vec();
        let m = bs_module(datum, &word, field)?;
        let dec = decompose(&m, seed)?;
        let mut labels = Vec::new();
        let mut known = Character::zero();
        let mut fresh = Vec::new();
        for (idx, s) in dec.summands.iter().enumerate() {
            let mut label = SummandLabel::Unidentified;
            for e in &entries {
                if e.module.dim() == s.module.dim() && local_iso(&s.module, &e.module)?.is_some() {
                    label = SummandLabel::D(e.w);
                    known = known.add(&e.character.scale(s.mult as u64));
                    break;
                }
            }
            if label == SummandLabel::Unidentified {
                fresh.push(idx);
            }
            labels.push(label);
        }
        let describe = |labels: &[SummandLabel]| {
            dec.summands
                .iter()
                .zip(labels)
                .map(|(s, l)| format!("{} (dim {}) x{}", l.name(datum), s.module.dim(), s.mult))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let ambiguity = |detail: String| Error::CatalogAmbiguity { w: datum.element_name(w), detail };
        let [idx] = fresh[..] else {
            return Err(ambiguity(format!("{} new summands: {}", fresh.len(), describe(&labels))));
        };
        if dec.summands[idx].mult != 1 {
            return Err(ambiguity(format!("new summand repeated: {}", describe(&labels))));
        }
        let total = char_of_word(datum, &word);
        let Some(character) = total.checked_sub(&known) else {
            return Err(ambiguity(format!("known summands exceed the character: {}", describe(&labels))));
        };
        if character.get(w) != 1 || character.support().iter().any(|&v| !datum.bruhat_leq(v, w)) {
            return Err(ambiguity(format!("residual character {:?} is not that of D_w", character.named(datum))));
        }
        labels[idx] = SummandLabel::D(w);
        let decomposition = dec.summands.iter().zip(&labels).map(|(s, &l)| (l, s.module.dim(), s.mult)).collect();
        let module = dec.summands[idx].module.clone().with_provenance(format!("D_{}", datum.element_name(w)));
        entries.push(CatalogEntry { w, word, module, character, decomposition });
    }
    Ok(Catalog { entries, length_bound: bound })
}

/// The unital algebra generated by the action of `e^{+-varpi_i}` on
/// `B(w_0)`. Commutativity is that of the generators; locality holds iff
/// every generator minus the identity is nilpotent.
pub fn coinvariant_image(datum: &RootDatum, field: FieldSpec) -> Result<AlgebraPresentation> {
    let m = bs_module(datum, datum.word(datum.longest()), field)?;
    let gens = m.action();
    let basis = algebra_closure(field, m.dim(), gens);
    let is_commutative = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.mul(b) == b.mul(a)));
    let id = Matrix::identity(field, m.dim());
    let is_local = gens.iter().all(|g| {
        let x = g.sub(&id);
        match ModMatrix::reduce(&x) {
            Some(mm) if ModMatrix::exact(field) => mm.is_nilpotent(),
            Some(mm) if !mm.is_nilpotent() => false,
            _ => x.is_nilpotent(),
        }
    });
    Ok(AlgebraPresentation { dim: basis.len(), basis, is_local, is_commutative })
}

/// `dim Hom(B(x), B(y))` over canonical words, rows `x` and columns `y`
/// running over `w` with `l(w) <= max_length`.
pub fn cartan_of_category(
    datum: &RootDatum,
    field: FieldSpec,
    max_length: Option<usize>,
) -> Result<(Vec<WeylElt>, Vec<Vec<usize>>)> {
    let elements: Vec<WeylElt> =
        datum.elements().filter(|&w| max_length.is_none_or(|b| datum.length(w) <= b)).collect();
    let modules = elements.iter().map(|&w| bs_module(datum, datum.word(w), field)).collect::<Result<Vec<_>>>()?;
    let dims = modules
        .iter()
        .map(|x| modules.iter().map(|y| hom_space(x, y).map(|h| h.len())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok((elements, dims))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn a1_catalog() {
        let d = RootDatum::preset("A1").unwrap();
        for field in FieldSpec::standard() {
            let c = catalog(&d, field, None, 0).unwrap();
            assert_eq!(c.entries.len(), 2);
            assert_eq!(c.entries[0].character.named(&d), BTreeMap::from([("e".into(), 1)]));
            assert_eq!(c.entries[0].module.dim(), 1);
            assert_eq!(c.entries[1].character.named(&d), BTreeMap::from([("e".into(), 1), ("s1".into(), 1)]));
            assert_eq!(c.entries[1].module.dim(), 2);
            assert!(c.length_bound.is_none());
        }
    }

    #[test]
    fn a2_catalog_bookkeeping() {
        let d = RootDatum::preset("A2").unwrap();
        for field in FieldSpec::standard() {
            let c = catalog(&d, field, None, 0).unwrap();
            assert_eq!(c.entries.len(), 6);
            for e in &c.entries {
                let mut total = Character::zero();
                for (label, _, mult) in &e.decomposition {
                    let SummandLabel::D(v) = label else { panic!("unidentified summand") };
                    total = total.add(&c.get(*v).unwrap().character.scale(*mult as u64));
                }
                assert_eq!(total, char_of_word(&d, &e.word));
            }
            let top = &c.get(d.longest()).unwrap().character;
            assert!(d.elements().all(|w| top.get(w) == 1), "{field}: {:?}", top.named(&d));
        }
    }

    #[test]
    fn coinvariants_small() {
        for name in ["A1", "A2"] {
            let d = RootDatum::preset(name).unwrap();
            for field in FieldSpec::standard() {
                let a = coinvariant_image(&d, field).unwrap();
                assert_eq!(a.dim, d.order(), "{name} {field}");
                assert!(a.is_commutative && a.is_local);
            }
        }
        let d = RootDatum::preset("A1").unwrap();
        let a = coinvariant_image(&d, FieldSpec::Q).unwrap();
        assert!(a.basis.iter().any(|b| *b == Matrix::from_i64_rows(FieldSpec::Q, &[vec![0, -1], vec![1, 2]])));
    }

    #[test]
    fn a1_cartan() {
        let d = RootDatum::preset("A1").unwrap();
        let (elements, dims) = cartan_of_category(&d, FieldSpec::Q, None).unwrap();
        assert_eq!(elements.len(), 2);
        assert_eq!(dims, vec![vec![1, 1], vec![1, 2]]);
    }
}
