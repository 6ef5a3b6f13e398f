use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::rootdata::{Lattice, RootDatum, WeylElt};

/// Element of `k[X_*(T)]`: a finite map from exponents to nonzero scalars.
///
/// Exponent vectors are in fundamental-coweight coordinates; `y_i` denotes
/// `e^{varpi_i^vee}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: FieldSpec,
    rank: usize,
    terms: BTreeMap<Lattice, Scalar>,
}

/// Outcome of dividing by a binomial `1 - e^mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinomialQuotient {
    Quotient(LaurentPoly),
    /// The (nonzero) image of the dividend in `k[X / Z mu]`, written on the
    /// canonical coset representatives.
    NonDivisible {
        witness: LaurentPoly,
    },
}

impl LaurentPoly {
    pub fn zero(field: FieldSpec, rank: usize) -> Self {
        LaurentPoly { field, rank, terms: BTreeMap::new() }
    }

    pub fn one(field: FieldSpec, rank: usize) -> Self {
        Self::constant(field, rank, field.one())
    }

    pub fn constant(field: FieldSpec, rank: usize, c: Scalar) -> Self {
        let mut p = Self::zero(field, rank);
        p.add_term(SmallVec::from_elem(0, rank), c);
        p
    }

    /// `e^lambda`.
    pub fn monomial(field: FieldSpec, lambda: impl Into<Lattice>) -> Self {
        let lambda = lambda.into();
        let mut p = Self::zero(field, lambda.len());
        p.add_term(lambda, field.one());
        p
    }

    /// `1 - e^mu`.
    pub fn binomial(field: FieldSpec, mu: &[i32]) -> Self {
        &Self::one(field, mu.len()) - &Self::monomial(field, Lattice::from_slice(mu))
    }

    pub fn from_terms(field: FieldSpec, rank: usize, terms: impl IntoIterator<Item = (Lattice, Scalar)>) -> Self {
        let mut p = Self::zero(field, rank);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Lattice, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[i32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, e: Lattice, c: Scalar) {
        debug_assert_eq!(e.len(), self.rank);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                *old += &c;
                if old.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Is this `c * e^lambda` with `c != 0`?
    pub fn as_monomial(&self) -> Option<(&Lattice, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.field, self.rank, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    /// Multiplication by `e^lambda`.
    pub fn shift(&self, lambda: &[i32]) -> Self {
        LaurentPoly {
            field: self.field,
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(lambda).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.field, self.rank), |acc, _| &acc * self)
    }

    /// Augmentation: every `e^lambda` goes to 1.
    pub fn augment(&self) -> Scalar {
        self.terms.values().fold(self.field.zero(), |acc, c| acc + c)
    }

    /// `w(f)`, extending `e^lambda -> e^{w(lambda)}` linearly.
    pub fn act(&self, datum: &RootDatum, w: WeylElt) -> Self {
        if w == WeylElt::IDENTITY {
            return self.clone();
        }
        Self::from_terms(self.field, self.rank, self.terms.iter().map(|(e, c)| (datum.act(w, e), c.clone())))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * other)
    }

    /// Canonical representative of `lambda` modulo `Z mu`, with the
    /// multiple of `mu` that was removed.
    fn coset(lambda: &[i32], mu: &[i32]) -> (Lattice, i64) {
        let j = mu.iter().position(|&x| x != 0).expect("nonzero direction");
        let m = mu[j].abs();
        let q = lambda[j].div_euclid(m);
        let k = q * mu[j].signum();
        let base = lambda.iter().zip(mu).map(|(l, u)| l - k * u).collect();
        (base, k as i64)
    }

    /// Image in `k[X / Z mu]`, on canonical coset representatives.
    pub fn coset_image(&self, mu: &[i32]) -> Result<Self> {
        if mu.iter().all(|&x| x == 0) {
            return Err(Error::ZeroDirection);
        }
        let mut out = Self::zero(self.field, self.rank);
        for (e, c) in &self.terms {
            out.add_term(Self::coset(e, mu).0, c.clone());
        }
        Ok(out)
    }

    /// Exact division by `1 - e^mu`.
    ///
    /// On every line `lambda + Z mu` the restriction is a one-variable Laurent
    /// polynomial `g(t)`, `t = e^mu`; it is divisible by `1 - t` iff `g(1) = 0`
    /// and then the quotient coefficients are the prefix sums of `g`.
    pub fn binomial_divide(&self, mu: &[i32]) -> Result<BinomialQuotient> {
        if mu.iter().all(|&x| x == 0) {
            return Err(Error::ZeroDirection);
        }
        let mut lines: BTreeMap<Lattice, Vec<(i64, Scalar)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let (base, k) = Self::coset(e, mu);
            lines.entry(base).or_default().push((k, c.clone()));
        }
        let mut witness = Self::zero(self.field, self.rank);
        for (base, line) in &lines {
            let total = line.iter().fold(self.field.zero(), |acc, (_, c)| acc + c);
            witness.add_term(base.clone(), total);
        }
        if !witness.is_zero() {
            return Ok(BinomialQuotient::NonDivisible { witness });
        }
        let mut q = Self::zero(self.field, self.rank);
        for (base, mut line) in lines {
            line.sort_by_key(|(k, _)| *k);
            let mut acc = self.field.zero();
            for w in line.windows(2) {
                let (k0, c0) = &w[0];
                let (k1, _) = &w[1];
                acc += c0;
                for k in *k0..*k1 {
                    let e: Lattice = base.iter().zip(mu).map(|(b, u)| b + (k as i32) * u).collect();
                    q.add_term(e, acc.clone());
                }
            }
        }
        Ok(BinomialQuotient::Quotient(q))
    }

    /// Quotient by `1 - e^mu` if exact.
    pub fn div_binomial(&self, mu: &[i32]) -> Option<Self> {
        match self.binomial_divide(mu).ok()? {
            BinomialQuotient::Quotient(q) => Some(q),
            BinomialQuotient::NonDivisible { .. } => None,
        }
    }

    fn leading(&self) -> Option<(&Lattice, &Scalar)> {
        self.terms.iter().next_back()
    }

    fn trailing(&self) -> Option<(&Lattice, &Scalar)> {
        self.terms.iter().next()
    }

    /// Exact quotient `self / g` if `g` divides `self` in the Laurent ring.
    ///
    /// Long division in the lexicographic order; since the order is a group
    /// order on the exponent lattice the quotient's trailing exponent is
    /// known in advance, which bounds the loop.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.field, self.rank));
        }
        let (gl_e, gl_c) = g.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let gl_inv = gl_c.inv()?;
        let floor: Lattice = self.trailing()?.0.iter().zip(g.trailing()?.0).map(|(a, b)| a - b).collect();
        let mut rem = self.clone();
        let mut q = Self::zero(self.field, self.rank);
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Lattice = re.iter().zip(&gl_e).map(|(a, b)| a - b).collect();
            if qe.cmp(&floor) == Ordering::Less {
                return None;
            }
            let qc = &rc * &gl_inv;
            let term = Self::from_terms(self.field, self.rank, [(qe.clone(), qc.clone())]);
            rem = &rem - &(&term * g);
            q.add_term(qe, qc);
        }
        Some(q)
    }

    /// Parses the canonical text form (`1 - y1^2`, `3/2*y1*y2^-1`, ...).
    pub fn parse(field: FieldSpec, rank: usize, text: &str) -> Result<Self> {
        let err = |m: &str| Error::Parse(format!("polynomial `{text}`: {m}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty"));
        }
        // Split into signed terms; a '-' right after '^' belongs to an exponent.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') && prev.is_some() {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && prev.is_none() {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        terms.push((neg, cur));
        let mut out = Self::zero(field, rank);
        for (neg, body) in terms {
            if body.is_empty() {
                return Err(err("empty term"));
            }
            let mut coeff = field.one();
            let mut exp: Lattice = SmallVec::from_elem(0, rank);
            for factor in body.split('*') {
                if let Some(var) = factor.strip_prefix('y') {
                    let (idx, power) = match var.split_once('^') {
                        Some((i, p)) => (i, p.parse::<i32>().map_err(|_| err("bad exponent"))?),
                        None => (var, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| err("bad variable"))?;
                    if idx == 0 || idx > rank {
                        return Err(err("variable index out of range"));
                    }
                    exp[idx - 1] += power;
                } else {
                    coeff = coeff * parse_scalar(field, factor).ok_or_else(|| err("bad coefficient"))?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(exp, coeff);
        }
        Ok(out)
    }
}

fn parse_scalar(field: FieldSpec, text: &str) -> Option<Scalar> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (text.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    match field {
        FieldSpec::Rational => {
            if den == BigInt::from(0) {
                return None;
            }
            Some(Scalar::Q(BigRational::new(num, den)))
        }
        FieldSpec::Prime { p } => {
            let reduce = |x: &BigInt| -> i64 {
                let r = x % BigInt::from(p);
                i64::try_from(r).unwrap_or(0)
            };
            let n = field.from_i64(reduce(&num));
            let d = field.from_i64(reduce(&den)).inv()?;
            Some(n * d)
        }
    }
}

/// Display order: total absolute degree, then reverse lexicographic.
fn display_order(a: &Lattice, b: &Lattice) -> Ordering {
    let da: i64 = a.iter().map(|x| x.unsigned_abs() as i64).sum();
    let db: i64 = b.iter().map(|x| x.unsigned_abs() as i64).sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

fn monomial_text(e: &[i32]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| if x == 1 { format!("y{}", i + 1) } else { format!("y{}^{}", i + 1, x) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Lattice> = self.terms.keys().collect();
        keys.sort_by(|a, b| display_order(a, b));
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let mono = monomial_text(e);
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{abs}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({})", self.field, self)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        let mut out = LaurentPoly::zero(self.field, self.rank);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Lattice = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            field: self.field,
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    fn y(k: i32) -> LaurentPoly {
        LaurentPoly::monomial(q(), Lattice::from_slice(&[k]))
    }

    fn p(text: &str) -> LaurentPoly {
        LaurentPoly::parse(q(), 1, text).unwrap()
    }

    #[test]
    fn ring_basics() {
        let one = LaurentPoly::one(q(), 1);
        let f = p("3*y1^2 - y1^-1");
        assert_eq!(&LaurentPoly::monomial(q(), Lattice::from_slice(&[0])) * &f, f);
        assert_eq!((&one - &y(1)) * (&one + &y(1)), p("1 - y1^2"));
        let f2 = FieldSpec::Prime { p: 2 };
        let a = LaurentPoly::parse(f2, 1, "1 + y1").unwrap();
        assert_eq!((&a * &a).to_string(), "1 + y1^2");
        assert_eq!(f.augment(), q().from_i64(2));
        assert_eq!(y(5).augment(), q().one());
    }

    #[test]
    fn mismatches_are_errors() {
        let a = LaurentPoly::one(q(), 1);
        let b = LaurentPoly::one(FieldSpec::Prime { p: 3 }, 1);
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(..))));
        let c = LaurentPoly::one(q(), 2);
        assert!(matches!(a.checked_mul(&c), Err(Error::RankMismatch(1, 2))));
    }

    #[test]
    fn weyl_action_a1() {
        let d = RootDatum::preset("A1").unwrap();
        assert_eq!(y(1).act(&d, d.simple(0)), y(-1));
        let f = p("2 + y1^3");
        assert_eq!(f.act(&d, WeylElt::IDENTITY), f);
    }

    #[test]
    fn binomial_division_examples() {
        match p("1 - y1^2").binomial_divide(&[2]).unwrap() {
            BinomialQuotient::Quotient(q) => assert_eq!(q, LaurentPoly::one(FieldSpec::Q, 1)),
            other => panic!("{other:?}"),
        }
        match p("y1 - y1^-1").binomial_divide(&[2]).unwrap() {
            BinomialQuotient::Quotient(q) => assert_eq!(q, p("-y1^-1")),
            other => panic!("{other:?}"),
        }
        match p("1 - y1").binomial_divide(&[2]).unwrap() {
            BinomialQuotient::NonDivisible { witness } => assert_eq!(witness, p("1 - y1")),
            other => panic!("{other:?}"),
        }
        assert_eq!(p("1").binomial_divide(&[0]), Err(Error::ZeroDirection));
    }

    #[test]
    fn text_form() {
        assert_eq!(p("y1 - y1^-1").to_string(), "y1 - y1^-1");
        assert_eq!(p("-y1^-1 + y1").to_string(), "y1 - y1^-1");
        assert_eq!(LaurentPoly::parse(q(), 2, "y1*y2^-1").unwrap().to_string(), "y1*y2^-1");
        assert_eq!(p("1/2*y1 + 0").to_string(), "1/2*y1");
        let f3 = FieldSpec::Prime { p: 3 };
        assert_eq!(LaurentPoly::parse(f3, 1, "1 - y1^2").unwrap().to_string(), "1 + 2*y1^2");
        assert!(LaurentPoly::parse(q(), 1, "y2").is_err());
        assert!(LaurentPoly::parse(q(), 1, "").is_err());
    }

    #[test]
    fn exact_division() {
        let a = p("1 + y1 + y1^3");
        let b = p("y1^-2 - 7*y1");
        assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
        assert!(a.div_exact(&p("1 + y1")).is_none());
    }

    fn arb_poly(rank: usize) -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((prop::collection::vec(-3i32..=3, rank), -4i64..=4), 0..6).prop_map(move |ts| {
            LaurentPoly::from_terms(
                FieldSpec::Q,
                rank,
                ts.into_iter().map(|(e, c)| (Lattice::from_vec(e), FieldSpec::Q.from_i64(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn binomial_round_trip(f in arb_poly(2), mu in prop::collection::vec(-2i32..=2, 2)) {
            prop_assume!(mu.iter().any(|&x| x != 0));
            let prod = &f * &LaurentPoly::binomial(FieldSpec::Q, &mu);
            match prod.binomial_divide(&mu).unwrap() {
                BinomialQuotient::Quotient(q) => prop_assert_eq!(q, f.clone()),
                other => prop_assert!(false, "{:?}", other),
            }
            match f.binomial_divide(&mu).unwrap() {
                BinomialQuotient::Quotient(q) => {
                    prop_assert_eq!(&q * &LaurentPoly::binomial(FieldSpec::Q, &mu), f.clone())
                }
                BinomialQuotient::NonDivisible { witness } => {
                    prop_assert!(!witness.is_zero());
                    prop_assert_eq!(witness, f.coset_image(&mu).unwrap());
                }
            }
        }

        #[test]
        fn augmentation_is_a_ring_map(f in arb_poly(2), g in arb_poly(2)) {
            prop_assert_eq!((&f * &g).augment(), f.augment() * g.augment());
            prop_assert_eq!((&f + &g).augment(), f.augment() + g.augment());
        }

        #[test]
        fn text_round_trip(f in arb_poly(2)) {
            let back = LaurentPoly::parse(FieldSpec::Q, 2, &f.to_string()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
