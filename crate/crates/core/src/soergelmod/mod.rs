//! Multiplicative Soergel theory at desk scale: Bott–Samelson modules and
//! bimodules, Hom spaces and endomorphism algebras, Krull–Schmidt
//! decompositions, tilting characters and the coinvariant algebra.

mod algebra;
mod bs;
mod catalog;
mod decompose;

pub use algebra::{algebra_closure, end_algebra, hom_space, AlgebraPresentation};
pub use bs::{bs_bimodule, bs_module, default_generators, demazure_split, BSBimodule, FinModule};
pub use catalog::{cartan_of_category, catalog, coinvariant_image, Catalog, CatalogEntry, SummandLabel};
pub(crate) use decompose::local_iso;
pub use decompose::{decompose, module_iso, Decomposition, IsoOutcome, Summand};

use std::collections::BTreeMap;

use crate::rootdata::{RootDatum, WeylElt};

/// Multiplicities `(T : Delta_w)`, finitely supported on `W`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Character {
    mult: BTreeMap<WeylElt, u64>,
}

impl Character {
    pub fn zero() -> Self {
        Character::default()
    }

    pub fn delta(w: WeylElt) -> Self {
        Character { mult: BTreeMap::from([(w, 1)]) }
    }

    pub fn get(&self, w: WeylElt) -> u64 {
        self.mult.get(&w).copied().unwrap_or(0)
    }

    pub fn add_mult(&mut self, w: WeylElt, m: u64) {
        if m > 0 {
            *self.mult.entry(w).or_insert(0) += m;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (WeylElt, u64)> + '_ {
        self.mult.iter().map(|(&w, &m)| (w, m))
    }

    pub fn support(&self) -> Vec<WeylElt> {
        self.mult.keys().copied().collect()
    }

    /// `sum_w mult(w)`.
    pub fn total(&self) -> u64 {
        self.mult.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, m) in other.iter() {
            out.add_mult(w, m);
        }
        out
    }

    pub fn scale(&self, k: u64) -> Self {
        let mut out = Character::zero();
        for (w, m) in self.iter() {
            out.add_mult(w, m * k);
        }
        out
    }

    /// `self - other` if no multiplicity goes negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut out = self.clone();
        for (w, m) in other.iter() {
            let have = out.mult.get_mut(&w)?;
            *have = have.checked_sub(m)?;
            if *have == 0 {
                out.mult.remove(&w);
            }
        }
        Some(out)
    }

    /// `v . chi . u`, i.e. `x -> chi(v^-1 x u^-1)`.
    pub fn translate(&self, datum: &RootDatum, v: WeylElt, u: WeylElt) -> Self {
        let mut out = Character::zero();
        for (x, m) in self.iter() {
            out.add_mult(datum.mul(datum.mul(v, x), u), m);
        }
        out
    }

    /// Keys are canonical words (`e` for the identity).
    pub fn named(&self, datum: &RootDatum) -> BTreeMap<String, u64> {
        self.iter().map(|(w, m)| (datum.element_name(w), m)).collect()
    }
}

/// The character of `B(word)`: starting from `Delta_e`, each letter `s`,
/// rightmost first, maps `chi` to `w -> chi(w) + chi(s w)`.
pub fn char_of_word(datum: &RootDatum, word: &[usize]) -> Character {
    word.iter().rev().fold(Character::delta(WeylElt::IDENTITY), |acc, &s| {
        let mut next = Character::zero();
        for w in datum.elements() {
            next.add_mult(w, acc.get(w) + acc.get(datum.simple_left(s, w)));
        }
        next
    })
}

/// `mult(x) = #{subwords of word whose product is x}`, by enumeration.
pub fn subword_character(datum: &RootDatum, word: &[usize]) -> Character {
    let mut out = Character::zero();
    for mask in 0u64..1 << word.len() {
        let x = word
            .iter()
            .enumerate()
            .filter(|(j, _)| mask >> j & 1 == 1)
            .fold(WeylElt::IDENTITY, |acc, (_, &s)| datum.mul(acc, datum.simple(s)));
        out.add_mult(x, 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_characters() {
        let a1 = RootDatum::preset("A1").unwrap();
        assert_eq!(char_of_word(&a1, &[]), Character::delta(WeylElt::IDENTITY));
        let c = char_of_word(&a1, &[0]);
        assert_eq!(c.named(&a1), BTreeMap::from([("e".to_string(), 1), ("s1".to_string(), 1)]));
        let a2 = RootDatum::preset("A2").unwrap();
        let c = char_of_word(&a2, &[0, 1, 0]);
        let names: Vec<(String, u64)> = c.named(&a2).into_iter().collect();
        let get = |n: &str| names.iter().find(|(k, _)| k == n).map(|x| x.1);
        assert_eq!(get("e"), Some(2));
        assert_eq!(get("s1"), Some(2));
        assert_eq!(get("s2"), Some(1));
        assert_eq!(get("s1s2"), Some(1));
        assert_eq!(get("s2s1"), Some(1));
        assert_eq!(get("s1s2s1"), Some(1));
        assert_eq!(c.total(), 8);
    }

    #[test]
    fn recursion_matches_subwords() {
        let b2 = RootDatum::preset("B2").unwrap();
        for word in [vec![0, 1, 0, 1], vec![1, 1, 0], vec![0, 0, 0, 1, 1]] {
            assert_eq!(char_of_word(&b2, &word), subword_character(&b2, &word));
        }
    }

    #[test]
    fn arithmetic_and_translation() {
        let a2 = RootDatum::preset("A2").unwrap();
        let all = a2.elements().fold(Character::zero(), |acc, w| acc.add(&Character::delta(w)));
        for v in a2.elements() {
            for u in a2.elements() {
                assert_eq!(all.translate(&a2, v, u), all);
            }
        }
        let c = char_of_word(&a2, &[0, 1]);
        assert_eq!(c.add(&c), c.scale(2));
        assert_eq!(c.scale(2).checked_sub(&c), Some(c.clone()));
        assert_eq!(Character::zero().checked_sub(&c), None);
    }
}
