use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::field::{FieldSpec, Scalar};

use super::LaurentPoly;

type Degree = SmallVec<[u32; 4]>;

/// Image of a Laurent polynomial in `R / m^N`, written in the coordinates
/// `x_i = y_i - 1`: a polynomial in the `x_i` truncated at total degree `N`.
#[derive(Clone, PartialEq, Eq)]
pub struct Jet {
    field: FieldSpec,
    rank: usize,
    order: u32,
    coeffs: BTreeMap<Degree, Scalar>,
}

impl Jet {
    pub fn zero(field: FieldSpec, rank: usize, order: u32) -> Self {
        assert!(order >= 1, "jet order must be positive");
        Jet { field, rank, order, coeffs: BTreeMap::new() }
    }

    pub fn one(field: FieldSpec, rank: usize, order: u32) -> Self {
        let mut j = Self::zero(field, rank, order);
        j.add_term(SmallVec::from_elem(0, rank), field.one());
        j
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^degree`.
    pub fn coefficient(&self, degree: &[u32]) -> Scalar {
        self.coeffs.get(degree).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn add_term(&mut self, d: Degree, c: Scalar) {
        if c.is_zero() || d.iter().sum::<u32>() >= self.order {
            return;
        }
        let vanished = {
            let entry = self.coeffs.entry(d.clone()).or_insert_with(|| self.field.zero());
            *entry += &c;
            entry.is_zero()
        };
        if vanished {
            self.coeffs.remove(&d);
        }
    }

    /// `(1 + x_var)^k` for any integer `k`, truncated.
    fn power_of_variable(field: FieldSpec, rank: usize, order: u32, var: usize, k: i32) -> Self {
        let mut out = Self::zero(field, rank, order);
        let mut binom = BigInt::from(1);
        for j in 0..order {
            let c = match field {
                FieldSpec::Rational => Scalar::Q(num_rational::BigRational::from_integer(binom.clone())),
                FieldSpec::Prime { p } => field.from_i64((&binom % BigInt::from(p)).to_i64().expect("reduced")),
            };
            let mut d: Degree = SmallVec::from_elem(0, rank);
            d[var] = j;
            out.add_term(d, c);
            binom = binom * BigInt::from(k as i64 - j as i64) / BigInt::from(j as i64 + 1);
            if binom.is_zero() {
                break;
            }
        }
        out
    }

    /// Truncation `R -> R / m^N`, `y_i -> 1 + x_i`.
    pub fn truncate(f: &LaurentPoly, order: u32) -> Self {
        let (field, rank) = (f.field(), f.rank());
        let mut out = Self::zero(field, rank, order);
        for (e, c) in f.terms() {
            let mut term = Self::one(field, rank, order);
            for (var, &k) in e.iter().enumerate() {
                if k != 0 {
                    term = &term * &Self::power_of_variable(field, rank, order, var, k);
                }
            }
            for (d, x) in term.coeffs {
                out.add_term(d, x * c);
            }
        }
        out
    }
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order, rhs.order, "jet order mismatch");
        let mut out = self.clone();
        for (d, c) in &rhs.coeffs {
            out.add_term(d.clone(), c.clone());
        }
        out
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order, rhs.order, "jet order mismatch");
        let mut out = Jet::zero(self.field, self.rank, self.order);
        for (da, ca) in &self.coeffs {
            for (db, cb) in &rhs.coeffs {
                let d: Degree = da.iter().zip(db).map(|(a, b)| a + b).collect();
                out.add_term(d, ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(d, c)| {
                let mono: Vec<String> = d
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "Jet[N={}]({})", self.order, if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Lattice;
    use proptest::prelude::*;

    fn poly(field: FieldSpec, rank: usize, text: &str) -> LaurentPoly {
        LaurentPoly::parse(field, rank, text).unwrap()
    }

    #[test]
    fn examples() {
        let q = FieldSpec::Q;
        let y = Jet::truncate(&poly(q, 1, "y1"), 2);
        assert_eq!(y.coefficient(&[0]), q.one());
        assert_eq!(y.coefficient(&[1]), q.one());
        let inv = Jet::truncate(&poly(q, 1, "y1^-1"), 3);
        assert_eq!(inv.coefficient(&[0]), q.one());
        assert_eq!(inv.coefficient(&[1]), q.from_i64(-1));
        assert_eq!(inv.coefficient(&[2]), q.one());
        let b = Jet::truncate(&poly(q, 1, "1 - y1^2"), 2);
        assert_eq!(b.coefficient(&[0]), q.zero());
        assert_eq!(b.coefficient(&[1]), q.from_i64(-2));
        let f2 = FieldSpec::Prime { p: 2 };
        assert!(Jet::truncate(&poly(f2, 1, "1 - y1^2"), 2).is_zero());
    }

    #[test]
    fn constant_term_is_augmentation() {
        let q = FieldSpec::Q;
        let f = poly(q, 2, "3*y1^2*y2^-1 - y2 + 5");
        assert_eq!(Jet::truncate(&f, 4).coefficient(&[0, 0]), f.augment());
    }

    fn arb(rank: usize) -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((prop::collection::vec(-3i32..=3, rank), -3i64..=3), 0..5).prop_map(move |ts| {
            LaurentPoly::from_terms(
                FieldSpec::Q,
                rank,
                ts.into_iter().map(|(e, c)| (Lattice::from_vec(e), FieldSpec::Q.from_i64(c))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn truncation_is_a_ring_map(f in arb(2), g in arb(2), n in 1u32..=6) {
            prop_assert_eq!(Jet::truncate(&(&f * &g), n), &Jet::truncate(&f, n) * &Jet::truncate(&g, n));
            prop_assert_eq!(Jet::truncate(&(&f + &g), n), &Jet::truncate(&f, n) + &Jet::truncate(&g, n));
        }
    }
}
