//! The function space `Fun(W, R)`: the `Q_W`-action, the dual basis `psi_w`,
//! the map `tau`, its congruence characterization, Steinberg bases and the
//! `W x W` action `theta`.

mod evalgrid;
mod polymat;
mod psi;
mod steinberg;

use std::fmt;

use rand::Rng;

use crate::error::Result;
use crate::field::FieldSpec;
use crate::laurent::{BinomialQuotient, LaurentPoly};
use crate::linalg::random_scalar;
use crate::rootdata::{Lattice, RootDatum, WeylElt};

pub use polymat::det_bareiss;
pub use psi::{pair, psi_basis, psi_expand, qw_act, ys_act, ys_act_rational, ExpandFailure, PsiBasis, PsiExpansion};
pub use steinberg::{
    determinant_rhs, steinberg_basis, steinberg_expand, tau_span_coefficients, DeterminantCertificate, SteinbergBasis,
    SteinbergConvention,
};

/// A function `W -> R`, stored densely in canonical element order.
#[derive(Clone, PartialEq, Eq)]
pub struct WFunction {
    values: Vec<LaurentPoly>,
}

impl WFunction {
    pub fn new(values: Vec<LaurentPoly>) -> Self {
        assert!(!values.is_empty(), "a function on W has at least one value");
        WFunction { values }
    }

    pub fn from_fn(datum: &RootDatum, f: impl FnMut(WeylElt) -> LaurentPoly) -> Self {
        Self::new(datum.elements().map(f).collect())
    }

    pub fn constant(datum: &RootDatum, p: &LaurentPoly) -> Self {
        Self::from_fn(datum, |_| p.clone())
    }

    pub fn zero(datum: &RootDatum, field: FieldSpec) -> Self {
        Self::constant(datum, &LaurentPoly::zero(field, datum.rank()))
    }

    /// `p` at `w`, zero elsewhere.
    pub fn indicator(datum: &RootDatum, w: WeylElt, p: &LaurentPoly) -> Self {
        let zero = LaurentPoly::zero(p.field(), p.rank());
        Self::from_fn(datum, |x| if x == w { p.clone() } else { zero.clone() })
    }

    pub fn field(&self) -> FieldSpec {
        self.values[0].field()
    }

    pub fn rank(&self) -> usize {
        self.values[0].rank()
    }

    pub fn value(&self, w: WeylElt) -> &LaurentPoly {
        &self.values[w.index()]
    }

    pub fn values(&self) -> &[LaurentPoly] {
        &self.values
    }

    pub fn set(&mut self, w: WeylElt, p: LaurentPoly) {
        self.values[w.index()] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(LaurentPoly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect())
    }

    /// Multiplication by a constant function.
    pub fn scale(&self, p: &LaurentPoly) -> Self {
        Self::new(self.values.iter().map(|a| a * p).collect())
    }

    pub fn pointwise_mul(&self, other: &Self) -> Self {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect())
    }

    /// `(w, v) . f : x |-> w(f(v^{-1} x w))`.
    pub fn theta_action(&self, datum: &RootDatum, w: WeylElt, v: WeylElt) -> Self {
        let vinv = datum.inverse(v);
        Self::from_fn(datum, |x| self.value(datum.mul(datum.mul(vinv, x), w)).act(datum, w))
    }

    /// Values keyed by element name, for reports.
    pub fn named_values(&self, datum: &RootDatum) -> Vec<(String, String)> {
        datum.elements().map(|w| (datum.element_name(w), self.value(w).to_string())).collect()
    }
}

impl fmt::Display for WFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for WFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A formal sum `sum_i a_i (x) b_i` in `R (x)_{R^W} R`, compared only through `tau`.
#[derive(Clone, Debug)]
pub struct TensorElement {
    pub summands: Vec<(LaurentPoly, LaurentPoly)>,
}

impl TensorElement {
    pub fn pure(a: LaurentPoly, b: LaurentPoly) -> Self {
        TensorElement { summands: vec![(a, b)] }
    }

    pub fn random(field: FieldSpec, rank: usize, summands: usize, rng: &mut impl Rng) -> Self {
        TensorElement {
            summands: (0..summands)
                .map(|_| (random_poly(field, rank, 3, 2, rng), random_poly(field, rank, 3, 2, rng)))
                .collect(),
        }
    }

    /// `tau(t)(w) = sum_i a_i w^{-1}(b_i)`.
    pub fn tau(&self, datum: &RootDatum, field: FieldSpec) -> WFunction {
        WFunction::from_fn(datum, |w| {
            let winv = datum.inverse(w);
            self.summands
                .iter()
                .fold(LaurentPoly::zero(field, datum.rank()), |acc, (a, b)| &acc + &(a * &b.act(datum, winv)))
        })
    }

    /// `(w, v) . (a (x) b) = w(a) (x) v(b)`; intertwines `tau` with `theta_action`.
    pub fn twist(&self, datum: &RootDatum, w: WeylElt, v: WeylElt) -> Self {
        TensorElement { summands: self.summands.iter().map(|(a, b)| (a.act(datum, w), b.act(datum, v))).collect() }
    }
}

pub fn tau(datum: &RootDatum, t: &TensorElement, field: FieldSpec) -> WFunction {
    t.tau(datum, field)
}

/// A random polynomial with at most `terms` terms and exponents in `[-bound, bound]`.
pub fn random_poly(field: FieldSpec, rank: usize, terms: usize, bound: i32, rng: &mut impl Rng) -> LaurentPoly {
    let mut p = LaurentPoly::zero(field, rank);
    for _ in 0..rng.gen_range(1..=terms) {
        let e: Lattice = (0..rank).map(|_| rng.gen_range(-bound..=bound)).collect();
        p.add_term(e, random_scalar(field, rng));
    }
    p
}

/// One failed congruence `f(w) = f(w s_beta) mod (1 - e^beta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub w: WeylElt,
    pub coroot: Vec<i32>,
    pub witness: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmReport {
    pub violations: Vec<Violation>,
}

impl GkmReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every congruence `f(w) = f(w s_beta) mod (1 - e^beta)`.
pub fn gkm_check(datum: &RootDatum, f: &WFunction) -> Result<GkmReport> {
    let mut violations = Vec::new();
    let reflections: Vec<WeylElt> =
        datum.positive_coroots().iter().map(|b| datum.reflection(b)).collect::<Result<_>>()?;
    for w in datum.elements() {
        for (beta, &s_beta) in datum.positive_coroots().iter().zip(&reflections) {
            let diff = f.value(w) - f.value(datum.mul(w, s_beta));
            if let BinomialQuotient::NonDivisible { witness } = diff.binomial_divide(beta)? {
                violations.push(Violation { w, coroot: beta.to_vec(), witness });
            }
        }
    }
    Ok(GkmReport { violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::PRESETS;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn y(field: FieldSpec, e: i32) -> LaurentPoly {
        LaurentPoly::monomial(field, Lattice::from_slice(&[e]))
    }

    #[test]
    fn a1_tau_and_violation() {
        let d = RootDatum::preset("A1").unwrap();
        let q = FieldSpec::Q;
        let t = TensorElement::pure(y(q, 1), y(q, 1)).tau(&d, q);
        assert_eq!(t.values(), &[y(q, 2), y(q, 0)]);
        assert!(gkm_check(&d, &t).unwrap().pass());
        let bad = WFunction::new(vec![y(q, 0), y(q, 1)]);
        let report = gkm_check(&d, &bad).unwrap();
        assert!(!report.pass());
        let v = &report.violations[0];
        assert_eq!(v.w, WeylElt::IDENTITY);
        assert_eq!(v.coroot, vec![2]);
        assert_eq!(v.witness, (&y(q, 0) - &y(q, 1)).coset_image(&[2]).unwrap());
        assert!(gkm_check(&d, &WFunction::constant(&d, &y(q, 3))).unwrap().pass());
    }

    #[test]
    fn tau_is_multiplicative_and_theta_compatible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in ["A1", "A2", "B2"] {
            let d = RootDatum::preset(name).unwrap();
            for field in FieldSpec::standard() {
                let s = TensorElement::random(field, d.rank(), 1, &mut rng);
                let t = TensorElement::random(field, d.rank(), 1, &mut rng);
                let (a, b) = &s.summands[0];
                let (a2, b2) = &t.summands[0];
                let prod = TensorElement::pure(a * a2, b * b2).tau(&d, field);
                assert_eq!(prod, s.tau(&d, field).pointwise_mul(&t.tau(&d, field)));
                for w in d.elements().step_by(3) {
                    for v in d.elements().step_by(2) {
                        let lhs = s.tau(&d, field).theta_action(&d, w, v);
                        assert_eq!(lhs, s.twist(&d, w, v).tau(&d, field), "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn theta_is_an_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = RootDatum::preset("A2").unwrap();
        let q = FieldSpec::Q;
        let f = WFunction::from_fn(&d, |_| random_poly(q, 2, 3, 2, &mut rng));
        assert_eq!(f.theta_action(&d, WeylElt::IDENTITY, WeylElt::IDENTITY), f);
        for w in d.elements() {
            for v in d.elements() {
                let (w2, v2) = (d.simple(0), d.simple(1));
                let lhs = f.theta_action(&d, w2, v2).theta_action(&d, w, v);
                let rhs = f.theta_action(&d, d.mul(w, w2), d.mul(v, v2));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn tau_images_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for name in PRESETS {
            let d = RootDatum::preset(name).unwrap();
            let t = TensorElement::random(FieldSpec::Q, d.rank(), 2, &mut rng);
            assert!(gkm_check(&d, &t.tau(&d, FieldSpec::Q)).unwrap().pass(), "{name}");
        }
    }
}
