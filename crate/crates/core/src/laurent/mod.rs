//! The group algebra `R = k[X_*(T)]`: multivariate Laurent polynomials with
//! the Weyl group action, augmentation, exact division by coroot binomials,
//! fractions with coroot-binomial denominators, and truncated jets.

mod jet;
mod poly;
mod rational;

pub use jet::Jet;
pub use poly::{BinomialQuotient, LaurentPoly};
pub use rational::RootRational;

use crate::rootdata::{Lattice, RootDatum};

/// `sum_{mu in W.lambda} e^mu`.
pub fn orbit_sum(datum: &RootDatum, lambda: &[i32], field: crate::FieldSpec) -> LaurentPoly {
    let mut orbit: Vec<Lattice> = datum.elements().map(|w| datum.act(w, lambda)).collect();
    orbit.sort();
    orbit.dedup();
    let mut out = LaurentPoly::zero(field, datum.rank());
    for mu in orbit {
        out.add_term(mu, field.one());
    }
    out
}

/// `d = prod_{alpha in Phi_+^vee} (1 - e^alpha)`.
pub fn d_element(datum: &RootDatum, field: crate::FieldSpec) -> LaurentPoly {
    datum
        .positive_coroots()
        .iter()
        .fold(LaurentPoly::one(field, datum.rank()), |acc, c| &acc * &LaurentPoly::binomial(field, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FieldSpec;

    #[test]
    fn orbit_sums() {
        let q = FieldSpec::Q;
        let a1 = RootDatum::preset("A1").unwrap();
        assert_eq!(orbit_sum(&a1, &[0], q), LaurentPoly::one(q, 1));
        assert_eq!(orbit_sum(&a1, &[1], q).to_string(), "y1 + y1^-1");
        let a2 = RootDatum::preset("A2").unwrap();
        assert_eq!(orbit_sum(&a2, &[1, 0], q).len(), 3);
        for name in crate::rootdata::PRESETS {
            let d = RootDatum::preset(name).unwrap();
            for i in 0..d.rank() {
                let m = orbit_sum(&d, &d.fundamental_coweight(i), q);
                for w in d.elements() {
                    assert_eq!(m.act(&d, w), m);
                }
            }
        }
    }

    #[test]
    fn d_in_a1_and_a2() {
        let q = FieldSpec::Q;
        let a1 = RootDatum::preset("A1").unwrap();
        let d = d_element(&a1, q);
        assert_eq!(d.to_string(), "1 - y1^2");
        assert!(d.augment().is_zero());
        let a2 = RootDatum::preset("A2").unwrap();
        assert!(d_element(&a2, q).augment().is_zero());
        // s(d) = -e^{-alpha_s} d in adjoint type (the unit is a signed monomial).
        for name in crate::rootdata::PRESETS {
            let datum = RootDatum::preset(name).unwrap();
            let d = d_element(&datum, q);
            for i in 0..datum.rank() {
                let neg: Lattice = datum.simple_coroot(i).iter().map(|x| -x).collect();
                let expected = -&(&LaurentPoly::monomial(q, neg) * &d);
                assert_eq!(d.act(&datum, datum.simple(i)), expected, "{name}");
            }
        }
    }
}
