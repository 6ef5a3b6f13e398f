//! The smash product `Q_W = Q ⋊ W` with basis `delta_w`, the anti-involution
//! `iota`, and the Demazure elements `y_s`, `y_w`.
//!
//! Elements are stored with left coefficients, `sum_w a_w delta_w`; the
//! product is `(a delta_w)(b delta_v) = a w(b) delta_{wv}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::field::FieldSpec;
use crate::laurent::{LaurentPoly, RootRational};
use crate::rootdata::{Lattice, RootDatum, WeylElt};

#[derive(Clone, PartialEq, Eq)]
pub struct QWElement {
    field: FieldSpec,
    rank: usize,
    coeffs: BTreeMap<WeylElt, RootRational>,
}

impl QWElement {
    pub fn zero(field: FieldSpec, rank: usize) -> Self {
        QWElement { field, rank, coeffs: BTreeMap::new() }
    }

    /// `a delta_w`.
    pub fn term(w: WeylElt, a: RootRational) -> Self {
        let mut x = Self::zero(a.field(), a.rank());
        x.add_term(w, a);
        x
    }

    pub fn delta(field: FieldSpec, rank: usize, w: WeylElt) -> Self {
        Self::term(w, RootRational::one(field, rank))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn add_term(&mut self, w: WeylElt, a: RootRational) {
        if a.is_zero() {
            return;
        }
        let merged = match self.coeffs.remove(&w) {
            Some(old) => &old + &a,
            None => a,
        };
        if !merged.is_zero() {
            self.coeffs.insert(w, merged);
        }
    }

    /// Left coefficient of `delta_w`.
    pub fn coefficient(&self, w: WeylElt) -> RootRational {
        self.coeffs.get(&w).cloned().unwrap_or_else(|| RootRational::zero(self.field, self.rank))
    }

    /// Right coefficient: `a delta_w = delta_w w^{-1}(a)`.
    pub fn right_coefficient(&self, datum: &RootDatum, w: WeylElt) -> RootRational {
        self.coefficient(w).act(datum, datum.inverse(w))
    }

    pub fn support(&self) -> impl Iterator<Item = WeylElt> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (WeylElt, &RootRational)> {
        self.coeffs.iter().map(|(w, a)| (*w, a))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, a) in &other.coeffs {
            out.add_term(*w, a.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, a) in &other.coeffs {
            out.add_term(*w, -a);
        }
        out
    }

    /// Left multiplication by a scalar of `Q`.
    pub fn scale_left(&self, a: &RootRational) -> Self {
        let mut out = Self::zero(self.field, self.rank);
        for (w, b) in &self.coeffs {
            out.add_term(*w, a * b);
        }
        out
    }

    pub fn mul(&self, datum: &RootDatum, other: &Self) -> Self {
        let mut out = Self::zero(self.field, self.rank);
        for (w, a) in &self.coeffs {
            for (v, b) in &other.coeffs {
                out.add_term(datum.mul(*w, *v), a * &b.act(datum, *w));
            }
        }
        out
    }

    /// `iota(a delta_w) = delta_{w^{-1}} a = w^{-1}(a) delta_{w^{-1}}`.
    pub fn iota(&self, datum: &RootDatum) -> Self {
        let mut out = Self::zero(self.field, self.rank);
        for (w, a) in &self.coeffs {
            let winv = datum.inverse(*w);
            out.add_term(winv, a.act(datum, winv));
        }
        out
    }
}

impl fmt::Debug for QWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|(w, a)| format!("[{a}] d{}", w.0)).collect();
        write!(f, "QW({})", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}

/// `Q_W` over a fixed datum and field, with a write-once cache of `y_w`.
pub struct KKRing<'a> {
    datum: &'a RootDatum,
    field: FieldSpec,
    y_cache: Vec<OnceLock<QWElement>>,
}

impl<'a> KKRing<'a> {
    pub fn new(datum: &'a RootDatum, field: FieldSpec) -> Self {
        KKRing { datum, field, y_cache: (0..datum.order()).map(|_| OnceLock::new()).collect() }
    }

    pub fn datum(&self) -> &'a RootDatum {
        self.datum
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn delta(&self, w: WeylElt) -> QWElement {
        QWElement::delta(self.field, self.datum.rank(), w)
    }

    pub fn mul(&self, x: &QWElement, y: &QWElement) -> QWElement {
        x.mul(self.datum, y)
    }

    pub fn iota(&self, x: &QWElement) -> QWElement {
        x.iota(self.datum)
    }

    /// `y_s = (1 / (1 - e^{-alpha_s})) (delta_e - e^{-alpha_s} delta_s)`.
    pub fn y_simple(&self, s: usize) -> QWElement {
        let rank = self.datum.rank();
        let neg: Lattice = self.datum.simple_coroot(s).iter().map(|x| -x).collect();
        let c = RootRational::inv_binomial(self.datum, self.field, &neg).expect("simple coroots are coroots");
        let mut x = QWElement::term(WeylElt::IDENTITY, c.clone());
        x.add_term(self.datum.simple(s), -&c.mul_poly(&LaurentPoly::monomial(self.field, neg)));
        debug_assert_eq!(x.rank, rank);
        x
    }

    /// Product of `y_s` along `word` (any word).
    pub fn y_word(&self, word: &[usize]) -> QWElement {
        word.iter().fold(self.delta(WeylElt::IDENTITY), |acc, &s| self.mul(&acc, &self.y_simple(s)))
    }

    /// `y_w` along the canonical reduced word; cached.
    pub fn y_element(&self, w: WeylElt) -> &QWElement {
        self.y_cache[w.index()].get_or_init(|| {
            let word = self.datum.word(w);
            match word.split_last() {
                None => self.delta(WeylElt::IDENTITY),
                Some((&last, rest)) => {
                    let prefix = self.datum.element_of_word(rest);
                    self.mul(self.y_element(prefix), &self.y_simple(last))
                }
            }
        })
    }

    /// Left `R`-coefficients of `x` in the basis `(y_w)`, when `x` lies in
    /// `Y_W` with denominator-free coefficients; `None` otherwise.
    pub fn expand_in_y_basis(&self, x: &QWElement) -> Option<BTreeMap<WeylElt, LaurentPoly>> {
        let mut residual = x.clone();
        let mut out = BTreeMap::new();
        for w in self.datum.elements().rev() {
            let top = residual.coefficient(w);
            if top.is_zero() {
                continue;
            }
            let y = self.y_element(w);
            let diag_inv = y.coefficient(w).unit_inverse()?;
            let c = &top * &diag_inv;
            residual = residual.sub(&y.scale_left(&c));
            out.insert(w, c.into_poly()?);
        }
        residual.coeffs.is_empty().then_some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::PRESETS;

    fn rr(datum: &RootDatum, field: FieldSpec, mu: &[i32]) -> RootRational {
        RootRational::inv_binomial(datum, field, mu).unwrap()
    }

    #[test]
    fn a1_y_s_and_iota() {
        let d = RootDatum::preset("A1").unwrap();
        let q = FieldSpec::Q;
        let kk = KKRing::new(&d, q);
        let s = d.simple(0);
        let ys = kk.y_simple(0);
        // (1/(1 - y^-2)) delta_e + (1/(1 - y^2)) delta_s
        let mut expected = QWElement::term(WeylElt::IDENTITY, rr(&d, q, &[-2]));
        expected.add_term(s, rr(&d, q, &[2]));
        assert_eq!(ys, expected);
        // iota(y_s) = (1/(1 - y^-2)) (delta_e + delta_s)
        let mut iota = QWElement::term(WeylElt::IDENTITY, rr(&d, q, &[-2]));
        iota.add_term(s, rr(&d, q, &[-2]));
        assert_eq!(kk.iota(&ys), iota);
        assert_eq!(kk.mul(&ys, &ys), ys);
        assert_eq!(kk.y_element(d.longest()), &ys);
        // (y delta_s)(y delta_s) = delta_e
        let ydelta = QWElement::term(s, RootRational::from_poly(LaurentPoly::monomial(q, Lattice::from_slice(&[1]))));
        assert_eq!(kk.mul(&ydelta, &ydelta), kk.delta(WeylElt::IDENTITY));
    }

    #[test]
    fn group_ring_embedding_and_unit() {
        let d = RootDatum::preset("A2").unwrap();
        let kk = KKRing::new(&d, FieldSpec::Q);
        for u in d.elements() {
            assert_eq!(kk.iota(&kk.delta(u)), kk.delta(d.inverse(u)));
            for v in d.elements() {
                assert_eq!(kk.mul(&kk.delta(u), &kk.delta(v)), kk.delta(d.mul(u, v)));
            }
        }
        let x = kk.y_element(d.longest()).clone();
        assert_eq!(kk.mul(&kk.delta(WeylElt::IDENTITY), &x), x);
        assert_eq!(kk.iota(&kk.iota(&x)), x);
    }

    #[test]
    fn idempotent_and_triangular() {
        for name in PRESETS {
            let d = RootDatum::preset(name).unwrap();
            let kk = KKRing::new(&d, FieldSpec::Q);
            for s in 0..d.rank() {
                let ys = kk.y_simple(s);
                assert_eq!(kk.mul(&ys, &ys), ys, "{name}");
            }
            if d.order() > 12 {
                continue;
            }
            for w in d.elements() {
                let y = kk.y_element(w);
                for v in y.support() {
                    assert!(d.bruhat_leq(v, w), "{name}");
                }
                assert!(y.coefficient(w).unit_inverse().is_some());
            }
        }
    }

    #[test]
    fn braid_relation_a2() {
        let d = RootDatum::preset("A2").unwrap();
        let kk = KKRing::new(&d, FieldSpec::Q);
        assert_eq!(kk.y_word(&[0, 1, 0]), kk.y_word(&[1, 0, 1]));
    }

    #[test]
    fn y_ring_closure_small() {
        for name in ["A1", "A2"] {
            let d = RootDatum::preset(name).unwrap();
            let kk = KKRing::new(&d, FieldSpec::Q);
            for u in d.elements() {
                for v in d.elements() {
                    let prod = kk.mul(kk.y_element(u), kk.y_element(v));
                    assert!(kk.expand_in_y_basis(&prod).is_some(), "{name}: y_{u:?} y_{v:?}");
                }
            }
        }
    }
}
