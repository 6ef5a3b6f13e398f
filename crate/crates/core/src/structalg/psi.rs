//! The `Q_W`-action on functions, the dual basis `psi_w`, and expansion of
//! congruence-satisfying functions in it.

use std::collections::BTreeMap;

use super::WFunction;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::kkring::{KKRing, QWElement};
use crate::laurent::{d_element, BinomialQuotient, LaurentPoly, RootRational};
use crate::rootdata::{Lattice, RootDatum, WeylElt};

/// `-w^{-1}(alpha_s)`, the exponent in the `y_s` action at `w`.
fn twisted_root(datum: &RootDatum, s: usize, w: WeylElt) -> Lattice {
    datum.act(datum.inverse(w), datum.simple_coroot(s)).iter().map(|x| -x).collect()
}

/// `(y_s f)(w) = (f(w) - e^{-w^{-1} alpha_s} f(s w)) / (1 - e^{-w^{-1} alpha_s})`.
pub fn ys_act(datum: &RootDatum, s: usize, f: &WFunction) -> Result<WFunction> {
    let mut values = Vec::with_capacity(datum.order());
    for w in datum.elements() {
        let mu = twisted_root(datum, s, w);
        let shifted = f.value(datum.simple_left(s, w)).shift(&mu);
        match (f.value(w) - &shifted).binomial_divide(&mu)? {
            BinomialQuotient::Quotient(q) => values.push(q),
            BinomialQuotient::NonDivisible { witness } => {
                return Err(Error::NonExactDivision { w: datum.element_name(w), witness: witness.to_string() })
            }
        }
    }
    Ok(WFunction::new(values))
}

/// The same formula on fraction-valued functions.
pub fn ys_act_rational(datum: &RootDatum, s: usize, f: &[RootRational]) -> Result<Vec<RootRational>> {
    datum
        .elements()
        .map(|w| {
            let mu = twisted_root(datum, s, w);
            let field = f[0].field();
            let shifted = f[datum.simple_left(s, w).index()].mul_poly(&LaurentPoly::monomial(field, mu.clone()));
            Ok(&(&f[w.index()] - &shifted) * &RootRational::inv_binomial(datum, field, &mu)?)
        })
        .collect()
}

fn pair_values(datum: &RootDatum, f: &[RootRational], x: &QWElement) -> RootRational {
    let field = x.field();
    x.terms().fold(RootRational::zero(field, datum.rank()), |acc, (u, a)| {
        &acc + &(&f[u.index()] * &a.act(datum, datum.inverse(u)))
    })
}

/// `f(sum_u a_u delta_u) = sum_u f(u) u^{-1}(a_u)`: the functional attached
/// to `f` is right-linear in the `delta` basis.
pub fn pair(datum: &RootDatum, f: &WFunction, x: &QWElement) -> RootRational {
    let vals: Vec<RootRational> = f.values().iter().cloned().map(RootRational::from_poly).collect();
    pair_values(datum, &vals, x)
}

/// `(y f)(w) = f(iota(y) delta_w)` for an arbitrary `y` in `Q_W`.
pub fn qw_act(datum: &RootDatum, y: &QWElement, f: &[RootRational]) -> Vec<RootRational> {
    let iy = y.iota(datum);
    let field = y.field();
    datum.elements().map(|w| pair_values(datum, f, &iy.mul(datum, &QWElement::delta(field, datum.rank(), w)))).collect()
}

/// The functions `psi_w`, indexed by canonical element order.
///
/// `psi_v` vanishes off `{w : v <= w}`, `psi_w(w)` is the product of
/// `1 - e^beta` over the inversions of `w`, and `psi_w(iota(y_{v^{-1}}))`
/// is `1` for `v = w` and `0` otherwise. (With the left action used by
/// `ys_act`, the functions dual to `iota(y_v)` themselves break the support
/// condition once `W` is nonabelian.)
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiBasis {
    psi: Vec<WFunction>,
}

/// `psi_{w0}` is `d` at `w0`; below, `psi_v = y_s psi_{sv} - psi_{sv}` for
/// the least `s` with `sv > v`.
pub fn psi_basis(datum: &RootDatum, field: FieldSpec) -> Result<PsiBasis> {
    let n = datum.order();
    let w0 = datum.longest();
    let mut psi: Vec<Option<WFunction>> = vec![None; n];
    psi[w0.index()] = Some(WFunction::indicator(datum, w0, &d_element(datum, field)));
    for v in datum.elements().rev().skip(1) {
        let s = (0..datum.rank()).find(|&i| !datum.is_left_descent(v, i)).expect("v is not longest");
        let up = psi[datum.simple_left(s, v).index()].as_ref().expect("longer elements come first");
        psi[v.index()] = Some(ys_act(datum, s, up)?.sub(up));
    }
    Ok(PsiBasis { psi: psi.into_iter().map(|p| p.expect("all filled")).collect() })
}

/// Which defining properties of the basis hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PsiCertificate {
    pub support: bool,
    pub diagonal: bool,
    pub duality: bool,
    pub choice_independent: bool,
}

impl PsiCertificate {
    pub fn pass(&self) -> bool {
        self.support && self.diagonal && self.duality && self.choice_independent
    }
}

impl PsiBasis {
    pub fn get(&self, w: WeylElt) -> &WFunction {
        &self.psi[w.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (WeylElt, &WFunction)> {
        self.psi.iter().enumerate().map(|(i, f)| (WeylElt(i as u32), f))
    }

    /// `psi_w(w) = prod_{beta in inv(w)} (1 - e^beta)`.
    pub fn diagonal(datum: &RootDatum, field: FieldSpec, w: WeylElt) -> LaurentPoly {
        datum.inversions(w).iter().fold(LaurentPoly::one(field, datum.rank()), |acc, &k| {
            &acc * &LaurentPoly::binomial(field, &datum.positive_coroots()[k])
        })
    }

    /// `y_s psi_w` is `psi_w + psi_{sw}` when `sw < w` and `0` otherwise,
    /// for every `s`; this makes the recursion independent of choices.
    pub fn check_recursion(&self, datum: &RootDatum) -> Result<bool> {
        for (w, f) in self.iter() {
            for s in 0..datum.rank() {
                let acted = ys_act(datum, s, f)?;
                let expected = if datum.is_left_descent(w, s) {
                    f.add(self.get(datum.simple_left(s, w)))
                } else {
                    WFunction::zero(datum, f.field())
                };
                if acted != expected {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn certify(&self, datum: &RootDatum, field: FieldSpec) -> Result<PsiCertificate> {
        let support =
            self.iter().all(|(v, f)| datum.elements().all(|w| datum.bruhat_leq(v, w) || f.value(w).is_zero()));
        let diagonal = self.iter().all(|(w, f)| *f.value(w) == Self::diagonal(datum, field, w));
        let kk = KKRing::new(datum, field);
        let one = RootRational::one(field, datum.rank());
        let zero = RootRational::zero(field, datum.rank());
        let duality = datum.elements().all(|v| {
            let iy = kk.iota(kk.y_element(datum.inverse(v)));
            self.iter().all(|(w, f)| pair(datum, f, &iy) == if v == w { one.clone() } else { zero.clone() })
        });
        let choice_independent = self.check_recursion(datum)?;
        Ok(PsiCertificate { support, diagonal, duality, choice_independent })
    }
}

/// Where and why a greedy expansion stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandFailure {
    pub w: WeylElt,
    pub coroot: Vec<i32>,
    pub witness: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiExpansion {
    Coefficients(BTreeMap<WeylElt, LaurentPoly>),
    Fail(ExpandFailure),
}

/// Greedy expansion `f = sum_w a_w psi_w`: at the least `w` (in canonical
/// order) with `f(w) != 0`, divide by `psi_w(w)` one inversion binomial at a
/// time and subtract.
pub fn psi_expand(datum: &RootDatum, basis: &PsiBasis, f: &WFunction) -> Result<PsiExpansion> {
    let mut residual = f.clone();
    let mut coeffs = BTreeMap::new();
    while let Some(w) = datum.elements().find(|&w| !residual.value(w).is_zero()) {
        let mut a = residual.value(w).clone();
        for k in datum.inversions(w) {
            let beta = &datum.positive_coroots()[k];
            match a.binomial_divide(beta)? {
                BinomialQuotient::Quotient(q) => a = q,
                BinomialQuotient::NonDivisible { witness } => {
                    return Ok(PsiExpansion::Fail(ExpandFailure { w, coroot: beta.to_vec(), witness }))
                }
            }
        }
        residual = residual.sub(&basis.get(w).scale(&a));
        coeffs.insert(w, a);
    }
    Ok(PsiExpansion::Coefficients(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::PRESETS;
    use crate::structalg::{gkm_check, TensorElement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn y(field: FieldSpec, e: i32) -> LaurentPoly {
        LaurentPoly::monomial(field, Lattice::from_slice(&[e]))
    }

    #[test]
    fn a1_basis() {
        let d = RootDatum::preset("A1").unwrap();
        let q = FieldSpec::Q;
        let b = psi_basis(&d, q).unwrap();
        let s = d.simple(0);
        assert_eq!(b.get(WeylElt::IDENTITY).values(), &[y(q, 0), y(q, 2)]);
        assert_eq!(b.get(s).values(), &[LaurentPoly::zero(q, 1), &y(q, 0) - &y(q, 2)]);
        let acted = ys_act(&d, 0, b.get(s)).unwrap();
        assert_eq!(acted, b.get(s).add(b.get(WeylElt::IDENTITY)));
    }

    #[test]
    fn constant_is_fixed() {
        for name in PRESETS {
            let d = RootDatum::preset(name).unwrap();
            let one = WFunction::constant(&d, &LaurentPoly::one(FieldSpec::Q, d.rank()));
            for s in 0..d.rank() {
                assert_eq!(ys_act(&d, s, &one).unwrap(), one);
            }
        }
    }

    #[test]
    fn explicit_action_matches_smash_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in ["A1", "A2", "B2"] {
            let d = RootDatum::preset(name).unwrap();
            let q = FieldSpec::Q;
            let kk = KKRing::new(&d, q);
            let f = TensorElement::random(q, d.rank(), 2, &mut rng).tau(&d, q);
            let vals: Vec<RootRational> = f.values().iter().cloned().map(RootRational::from_poly).collect();
            for s in 0..d.rank() {
                let generic = qw_act(&d, &kk.y_simple(s), &vals);
                let explicit = ys_act(&d, s, &f).unwrap();
                let rational = ys_act_rational(&d, s, &vals).unwrap();
                for w in d.elements() {
                    assert_eq!(generic[w.index()], RootRational::from_poly(explicit.value(w).clone()));
                    assert_eq!(rational[w.index()], generic[w.index()]);
                }
                assert_eq!(ys_act(&d, s, &explicit).unwrap(), explicit);
            }
        }
    }

    #[test]
    fn certified_small() {
        for name in ["A1", "A1xA1", "A2", "B2"] {
            let d = RootDatum::preset(name).unwrap();
            for field in [FieldSpec::Q, FieldSpec::prime(2).unwrap()] {
                let b = psi_basis(&d, field).unwrap();
                let c = b.certify(&d, field).unwrap();
                assert!(c.pass(), "{name} {field} {c:?}");
            }
        }
    }

    #[test]
    fn a1_expansion_and_failure() {
        let d = RootDatum::preset("A1").unwrap();
        let q = FieldSpec::Q;
        let b = psi_basis(&d, q).unwrap();
        let f = TensorElement::pure(y(q, 1), y(q, 1)).tau(&d, q);
        let expected = BTreeMap::from([(WeylElt::IDENTITY, y(q, 2)), (d.simple(0), &y(q, 0) + &y(q, 2))]);
        assert_eq!(psi_expand(&d, &b, &f).unwrap(), PsiExpansion::Coefficients(expected));
        for (w, p) in b.iter() {
            let single = BTreeMap::from([(w, LaurentPoly::one(q, 1))]);
            assert_eq!(psi_expand(&d, &b, p).unwrap(), PsiExpansion::Coefficients(single));
        }
        let bad = WFunction::new(vec![y(q, 0), y(q, 1)]);
        match psi_expand(&d, &b, &bad).unwrap() {
            PsiExpansion::Fail(fail) => {
                assert_eq!(fail.w, d.simple(0));
                assert!(!gkm_check(&d, &bad).unwrap().pass());
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
