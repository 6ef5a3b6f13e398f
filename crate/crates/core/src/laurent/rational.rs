use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::rootdata::{Lattice, RootDatum, WeylElt};

use super::LaurentPoly;

/// `numerator / prod (1 - e^beta)^m_beta` with `beta` positive coroots.
///
/// Kept reduced: no denominator binomial divides the numerator. Equality is
/// decided by cross-multiplication.
#[derive(Clone)]
pub struct RootRational {
    num: LaurentPoly,
    den: BTreeMap<Lattice, u32>,
}

impl RootRational {
    pub fn from_poly(num: LaurentPoly) -> Self {
        RootRational { num, den: BTreeMap::new() }
    }

    pub fn zero(field: FieldSpec, rank: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(field, rank))
    }

    pub fn one(field: FieldSpec, rank: usize) -> Self {
        Self::from_poly(LaurentPoly::one(field, rank))
    }

    /// `num / prod (1 - e^beta)^m`, reduced. Every `beta` must be a positive coroot.
    pub fn new(datum: &RootDatum, num: LaurentPoly, den: BTreeMap<Lattice, u32>) -> Result<Self> {
        for beta in den.keys() {
            if !datum.is_positive_coroot(beta) {
                return Err(Error::DenominatorOverflow(beta.to_vec()));
            }
        }
        let mut r = RootRational { num, den };
        r.reduce();
        Ok(r)
    }

    /// `1 / (1 - e^mu)` for any coroot `mu`, normalized with
    /// `1 - e^{-beta} = -e^{-beta} (1 - e^beta)`.
    pub fn inv_binomial(datum: &RootDatum, field: FieldSpec, mu: &[i32]) -> Result<Self> {
        let rank = datum.rank();
        match datum.coroot_position(mu) {
            Some((_, true)) => Ok(RootRational {
                num: LaurentPoly::one(field, rank),
                den: BTreeMap::from([(Lattice::from_slice(mu), 1)]),
            }),
            Some((k, false)) => {
                let beta = datum.positive_coroots()[k].clone();
                Ok(RootRational { num: -LaurentPoly::monomial(field, beta.clone()), den: BTreeMap::from([(beta, 1)]) })
            }
            None => Err(Error::DenominatorOverflow(mu.to_vec())),
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<Lattice, u32> {
        &self.den
    }

    pub fn field(&self) -> FieldSpec {
        self.num.field()
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this equals, if the denominator is trivial.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn into_poly(self) -> Option<LaurentPoly> {
        self.den.is_empty().then_some(self.num)
    }

    fn den_poly(&self, den: &BTreeMap<Lattice, u32>) -> LaurentPoly {
        den.iter().fold(LaurentPoly::one(self.field(), self.rank()), |acc, (b, m)| {
            &acc * &LaurentPoly::binomial(self.field(), b).pow(*m)
        })
    }

    /// Cancels every denominator binomial that divides the numerator.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<Lattice> = self.den.keys().cloned().collect();
        for beta in keys {
            while self.den[&beta] > 0 {
                match self.num.div_binomial(&beta) {
                    Some(q) => {
                        self.num = q;
                        *self.den.get_mut(&beta).unwrap() -= 1;
                    }
                    None => break,
                }
            }
            if self.den[&beta] == 0 {
                self.den.remove(&beta);
            }
        }
    }

    /// Inverse, when the numerator is a nonzero multiple of a monomial.
    pub fn unit_inverse(&self) -> Option<Self> {
        let (e, c) = self.num.as_monomial()?;
        let inv_c = c.inv()?;
        let neg: Lattice = e.iter().map(|x| -x).collect();
        let mono = LaurentPoly::from_terms(self.field(), self.rank(), [(neg, inv_c)]);
        Some(Self::from_poly(&mono * &self.den_poly(&self.den)))
    }

    /// Multiplication by a polynomial.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        let mut r = RootRational { num: &self.num * p, den: self.den.clone() };
        r.reduce();
        r
    }

    /// `w(x)`, renormalizing denominators to positive coroots.
    pub fn act(&self, datum: &RootDatum, w: WeylElt) -> Self {
        if w == WeylElt::IDENTITY {
            return self.clone();
        }
        let mut num = self.num.act(datum, w);
        let mut den = BTreeMap::new();
        for (beta, m) in &self.den {
            let image = datum.act(w, beta);
            let (k, positive) = datum.coroot_position(&image).expect("W permutes coroots");
            let pos = datum.positive_coroots()[k].clone();
            if !positive {
                let unit = -LaurentPoly::monomial(self.field(), pos.clone());
                num = &num * &unit.pow(*m);
            }
            *den.entry(pos).or_insert(0) += m;
        }
        let mut r = RootRational { num, den };
        r.reduce();
        r
    }
}

impl PartialEq for RootRational {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &self.den_poly(&other.den) == &other.num * &self.den_poly(&self.den)
    }
}

impl Eq for RootRational {}

impl fmt::Display for RootRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        for (n, (b, m)) in self.den.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            let mono = LaurentPoly::monomial(self.field(), b.clone());
            write!(f, "(1 - {mono})")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RootRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootRational({self})")
    }
}

impl Add<&RootRational> for &RootRational {
    type Output = RootRational;
    fn add(self, rhs: &RootRational) -> RootRational {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let mut den = self.den.clone();
        for (b, m) in &rhs.den {
            let e = den.entry(b.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let missing = |own: &BTreeMap<Lattice, u32>| -> BTreeMap<Lattice, u32> {
            den.iter().map(|(b, m)| (b.clone(), m - own.get(b).copied().unwrap_or(0))).filter(|(_, m)| *m > 0).collect()
        };
        let a = &self.num * &self.den_poly(&missing(&self.den));
        let b = &rhs.num * &rhs.den_poly(&missing(&rhs.den));
        let mut r = RootRational { num: &a + &b, den };
        r.reduce();
        r
    }
}

impl Neg for &RootRational {
    type Output = RootRational;
    fn neg(self) -> RootRational {
        RootRational { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub<&RootRational> for &RootRational {
    type Output = RootRational;
    fn sub(self, rhs: &RootRational) -> RootRational {
        self + &(-rhs)
    }
}

impl Mul<&RootRational> for &RootRational {
    type Output = RootRational;
    fn mul(self, rhs: &RootRational) -> RootRational {
        if self.is_zero() || rhs.is_zero() {
            return RootRational::zero(self.field(), self.rank());
        }
        let mut den = self.den.clone();
        for (b, m) in &rhs.den {
            *den.entry(b.clone()).or_insert(0) += m;
        }
        let mut r = RootRational { num: &self.num * &rhs.num, den };
        r.reduce();
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_identities() {
        let d = RootDatum::preset("A1").unwrap();
        let q = FieldSpec::Q;
        let a = RootRational::inv_binomial(&d, q, &[-2]).unwrap();
        let b = RootRational::inv_binomial(&d, q, &[2]).unwrap();
        assert_eq!(&a + &b, RootRational::one(q, 1));
        assert_eq!(a.act(&d, d.simple(0)), b);
        let d_poly = LaurentPoly::binomial(q, &[2]);
        let x = RootRational::new(&d, d_poly, BTreeMap::from([(Lattice::from_slice(&[2]), 1)])).unwrap();
        assert_eq!(x.as_poly(), Some(&LaurentPoly::one(q, 1)));
        assert!(matches!(RootRational::inv_binomial(&d, q, &[1]), Err(Error::DenominatorOverflow(_))));
        assert!(
            RootRational::new(&d, LaurentPoly::one(q, 1), BTreeMap::from([(Lattice::from_slice(&[4]), 1)])).is_err()
        );
    }

    #[test]
    fn arithmetic_is_a_field_on_samples() {
        let d = RootDatum::preset("A2").unwrap();
        let q = FieldSpec::Q;
        let x = RootRational::inv_binomial(&d, q, d.simple_coroot(0)).unwrap();
        let y = RootRational::inv_binomial(&d, q, &[-1, -1]).unwrap();
        let sum = &x + &y;
        assert_eq!(&(&sum - &y), &x);
        let prod = &x * &y;
        let back = prod.mul_poly(&LaurentPoly::binomial(q, d.simple_coroot(0)));
        assert_eq!(back, y);
        for w in d.elements() {
            assert_eq!((&x * &y).act(&d, w), &x.act(&d, w) * &y.act(&d, w));
            assert_eq!((&x + &y).act(&d, w), &x.act(&d, w) + &y.act(&d, w));
        }
    }
}
