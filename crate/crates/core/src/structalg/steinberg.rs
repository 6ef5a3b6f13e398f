//! Steinberg bases of `R` over `R^W` and the determinant certificate
//! `det(v(e_w))_{v,w} = ((-1)^N e^{-rho} d)^{|W|/2}`, `N = |Phi_+|`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::evalgrid::{self, ExtField, GridField, GridProblem, Montgomery};
use super::polymat::det_bareiss;
use super::WFunction;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::laurent::{d_element, LaurentPoly};
use crate::rootdata::{Lattice, RootDatum, WeylElt};

/// How candidate exponents are attached to Weyl group elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SteinbergConvention {
    /// Sum fundamental coweights over left (rather than right) descents.
    pub left_descents: bool,
    /// Use `e_w = w(e^{lambda_w})` rather than `w^{-1}(e^{lambda_w})`.
    pub direct: bool,
}

impl SteinbergConvention {
    pub const STANDARD: Self = SteinbergConvention { left_descents: false, direct: false };

    pub fn all() -> [Self; 4] {
        [
            Self::STANDARD,
            SteinbergConvention { left_descents: true, direct: true },
            SteinbergConvention { left_descents: false, direct: true },
            SteinbergConvention { left_descents: true, direct: false },
        ]
    }
}

/// Evidence for the determinant identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminantCertificate {
    pub holds: bool,
    /// `det(M) = sign * rhs`.
    pub sign: i8,
    pub rhs: LaurentPoly,
    /// Points per variable of the evaluation grid.
    pub grid: Vec<usize>,
    /// Moduli (over `Q`) or the extension field (over `F_p`) used.
    pub moduli: Vec<String>,
}

impl DeterminantCertificate {
    pub fn det(&self) -> LaurentPoly {
        if self.sign < 0 {
            -self.rhs.clone()
        } else {
            self.rhs.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub struct SteinbergBasis {
    pub field: FieldSpec,
    pub convention: SteinbergConvention,
    pub exponents: Vec<Lattice>,
    pub elements: Vec<LaurentPoly>,
    pub certificate: DeterminantCertificate,
}

impl SteinbergBasis {
    pub fn element(&self, w: WeylElt) -> &LaurentPoly {
        &self.elements[w.index()]
    }

    /// `M_{v,w} = v(e_w)`.
    pub fn matrix(&self, datum: &RootDatum) -> Vec<Vec<LaurentPoly>> {
        value_matrix(datum, &self.elements)
    }
}

fn value_matrix(datum: &RootDatum, elements: &[LaurentPoly]) -> Vec<Vec<LaurentPoly>> {
    datum.elements().map(|v| elements.iter().map(|e| e.act(datum, v)).collect()).collect()
}

fn candidate(datum: &RootDatum, field: FieldSpec, conv: SteinbergConvention) -> (Vec<Lattice>, Vec<LaurentPoly>) {
    datum
        .elements()
        .map(|w| {
            let mut lambda: Lattice = Lattice::from_elem(0, datum.rank());
            for i in 0..datum.rank() {
                let descent =
                    if conv.left_descents { datum.is_left_descent(w, i) } else { datum.is_right_descent(w, i) };
                if descent {
                    lambda[i] += 1;
                }
            }
            let g = if conv.direct { w } else { datum.inverse(w) };
            let e = LaurentPoly::monomial(field, datum.act(g, &lambda));
            (lambda, e)
        })
        .unzip()
}

/// `((-1)^N e^{-rho} d)^{|W|/2}`.
pub fn determinant_rhs(datum: &RootDatum, field: FieldSpec) -> LaurentPoly {
    let (base, k) = rhs_root(datum, field);
    base.pow(k)
}

fn rhs_root(datum: &RootDatum, field: FieldSpec) -> (LaurentPoly, u32) {
    let neg_rho: Lattice = datum.rho_vee().iter().map(|x| -x).collect();
    let mut base = d_element(datum, field).shift(&neg_rho);
    if datum.positive_coroots().len() % 2 == 1 {
        base = -base;
    }
    (base, (datum.order() / 2) as u32)
}

/// Per-variable point counts: one more than the degree spread of
/// `det(M) - rhs` after clearing denominators.
fn grid_counts(matrix: &[Vec<LaurentPoly>], rhs: &LaurentPoly) -> Vec<usize> {
    let rank = rhs.rank();
    let spread = |p: &LaurentPoly, i: usize| {
        let mut it = p.terms().map(|(e, _)| e[i]);
        let first = it.next().unwrap_or(0);
        it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)))
    };
    (0..rank)
        .map(|i| {
            let n = matrix.len();
            let sum_over = |by_rows: bool| {
                (0..n).fold((0i64, 0i64), |(lo, hi), a| {
                    let (l, h) = (0..n)
                        .map(|b| if by_rows { spread(&matrix[a][b], i) } else { spread(&matrix[b][a], i) })
                        .fold((i32::MAX, i32::MIN), |(l, h), (x, y)| (l.min(x), h.max(y)));
                    (lo + l as i64, hi + h as i64)
                })
            };
            let (rl, rh) = sum_over(true);
            let (cl, ch) = sum_over(false);
            let (dl, dh) = (rl.max(cl), rh.min(ch));
            let (ql, qh) = if rhs.is_zero() {
                (dl, dh)
            } else {
                let (a, b) = spread(rhs, i);
                (a as i64, b as i64)
            };
            let lo = dl.min(ql);
            let hi = dh.max(qh);
            (hi - lo + 1) as usize
        })
        .collect()
}

/// Coefficient bound for `det(M) - sign * rhs` over `Z`.
fn coefficient_bound(matrix: &[Vec<LaurentPoly>], rhs: &LaurentPoly) -> Option<BigInt> {
    let n = matrix.len();
    let mut bound: BigInt = (1..=n as u64).map(BigInt::from).product();
    for w in 0..n {
        let col = matrix.iter().map(|row| evalgrid::l1_norm(&row[w])).collect::<Option<Vec<_>>>()?;
        bound *= col.into_iter().max()?;
    }
    Some(bound + evalgrid::l1_norm(rhs)?)
}

/// Certifies `det(matrix) = +-rhs` exactly.
pub(crate) fn certify_determinant(
    matrix: &[Vec<LaurentPoly>],
    rhs: &LaurentPoly,
    rhs_root: Option<(&LaurentPoly, u32)>,
    field: FieldSpec,
) -> DeterminantCertificate {
    let counts = grid_counts(matrix, rhs);
    let prob = GridProblem { entries: matrix, rhs, rhs_root, counts: counts.clone() };
    let fail =
        |moduli| DeterminantCertificate { holds: false, sign: 0, rhs: rhs.clone(), grid: counts.clone(), moduli };
    match field {
        FieldSpec::Rational => {
            let Some(bound) = coefficient_bound(matrix, rhs) else {
                return fail(Vec::new());
            };
            let primes = evalgrid::primes_exceeding(&(bound * 2));
            let fields: Vec<Montgomery> = primes.iter().map(|&p| Montgomery::new(p)).collect();
            let moduli = fields.iter().map(GridField::describe).collect();
            let Some(negate) = evalgrid::probe_sign(&fields[0], &prob) else {
                return fail(moduli);
            };
            let holds = fields.iter().all(|f| evalgrid::holds_on_grid(f, &prob, negate));
            DeterminantCertificate {
                holds,
                sign: if negate { -1 } else { 1 },
                rhs: rhs.clone(),
                grid: counts.clone(),
                moduli,
            }
        }
        FieldSpec::Prime { p } => {
            let ext = ExtField::with_capacity(p as u64, counts.iter().copied().max().unwrap_or(1));
            let moduli = vec![ext.describe()];
            let Some(negate) = evalgrid::probe_sign(&ext, &prob) else {
                return fail(moduli);
            };
            let holds = evalgrid::holds_on_grid(&ext, &prob, negate);
            let sign = if negate && p != 2 { -1 } else { 1 };
            DeterminantCertificate { holds, sign, rhs: rhs.clone(), grid: counts.clone(), moduli }
        }
    }
}

/// The candidate basis `e_w = w^{-1}(e^{lambda_w})`, `lambda_w` the sum of
/// fundamental coweights over right descents of `w`, with its certificate.
/// The other descent/side conventions are tried if it fails.
pub fn steinberg_basis(datum: &RootDatum, field: FieldSpec) -> Result<SteinbergBasis> {
    let (base, k) = rhs_root(datum, field);
    let rhs = base.pow(k);
    for convention in SteinbergConvention::all() {
        let (exponents, elements) = candidate(datum, field, convention);
        let certificate = certify_determinant(&value_matrix(datum, &elements), &rhs, Some((&base, k)), field);
        if certificate.holds {
            return Ok(SteinbergBasis { field, convention, exponents, elements, certificate });
        }
    }
    Err(Error::NoBasisFound)
}

/// `num / (sign * rhs)` if exact.
fn divide_by_det(datum: &RootDatum, basis: &SteinbergBasis, num: &LaurentPoly, sign: i8) -> Option<LaurentPoly> {
    let half = (datum.order() / 2) as i32;
    let rho: Lattice = datum.rho_vee().iter().map(|x| x * half).collect();
    let mut q = num.shift(&rho);
    let negate = (sign < 0) ^ (datum.positive_coroots().len() % 2 == 1 && half % 2 == 1);
    if negate {
        q = -q;
    }
    for beta in datum.positive_coroots() {
        for _ in 0..half {
            q = q.div_binomial(beta)?;
        }
    }
    debug_assert_eq!(basis.field, num.field());
    Some(q)
}

/// `a = sum_w p_w e_w` with `p_w` in `R^W`, by Cramer's rule.
pub fn steinberg_expand(
    datum: &RootDatum,
    basis: &SteinbergBasis,
    a: &LaurentPoly,
) -> Result<BTreeMap<WeylElt, LaurentPoly>> {
    let matrix = basis.matrix(datum);
    let column: Vec<LaurentPoly> = datum.elements().map(|v| a.act(datum, v)).collect();
    let mut out = BTreeMap::new();
    for w in datum.elements() {
        let replaced: Vec<Vec<LaurentPoly>> = matrix
            .iter()
            .zip(&column)
            .map(|(row, x)| {
                let mut row = row.clone();
                row[w.index()] = x.clone();
                row
            })
            .collect();
        let p = divide_by_det(datum, basis, &det_bareiss(replaced), basis.certificate.sign)
            .ok_or_else(|| Error::NonInvariantCoefficient(datum.element_name(w)))?;
        if (0..datum.rank()).any(|i| p.act(datum, datum.simple(i)) != p) {
            return Err(Error::NonInvariantCoefficient(datum.element_name(w)));
        }
        if !p.is_zero() {
            out.insert(w, p);
        }
    }
    Ok(out)
}

/// Coefficients `a_w` in `R` with `f = sum_w a_w tau(1 (x) e_w)`, if they exist.
pub fn tau_span_coefficients(
    datum: &RootDatum,
    basis: &SteinbergBasis,
    f: &WFunction,
) -> Result<Option<BTreeMap<WeylElt, LaurentPoly>>> {
    // Rows x of N are rows x^{-1} of M; the row permutation has sign
    // (-1)^{(|W| - #involutions) / 2}.
    let m = basis.matrix(datum);
    let n: Vec<Vec<LaurentPoly>> = datum.elements().map(|x| m[datum.inverse(x).index()].clone()).collect();
    let involutions = datum.elements().filter(|&x| datum.inverse(x) == x).count();
    let perm_negative = ((datum.order() - involutions) / 2) % 2 == 1;
    let sign = if perm_negative { -basis.certificate.sign } else { basis.certificate.sign };
    let mut out = BTreeMap::new();
    for w in datum.elements() {
        let replaced: Vec<Vec<LaurentPoly>> = n
            .iter()
            .zip(f.values())
            .map(|(row, x)| {
                let mut row = row.clone();
                row[w.index()] = x.clone();
                row
            })
            .collect();
        match divide_by_det(datum, basis, &det_bareiss(replaced), sign) {
            Some(a) => {
                if !a.is_zero() {
                    out.insert(w, a);
                }
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::orbit_sum;
    use crate::structalg::{gkm_check, psi_basis, psi_expand, PsiExpansion, TensorElement};

    fn y(field: FieldSpec, e: i32) -> LaurentPoly {
        LaurentPoly::monomial(field, Lattice::from_slice(&[e]))
    }

    #[test]
    fn a1_certificate() {
        let d = RootDatum::preset("A1").unwrap();
        let q = FieldSpec::Q;
        let b = steinberg_basis(&d, q).unwrap();
        assert_eq!(b.convention, SteinbergConvention::STANDARD);
        assert_eq!(b.elements, vec![y(q, 0), y(q, -1)]);
        assert_eq!(b.certificate.det(), &y(q, 1) - &y(q, -1));
        assert_eq!(b.certificate.det().to_string(), "y1 - y1^-1");
    }

    #[test]
    fn grid_agrees_with_exact_determinant() {
        for name in ["A1", "A1xA1", "A2", "B2"] {
            let d = RootDatum::preset(name).unwrap();
            for field in FieldSpec::standard() {
                let b = steinberg_basis(&d, field).unwrap();
                assert!(b.certificate.holds, "{name} {field}");
                if d.order() <= 6 {
                    assert_eq!(det_bareiss(b.matrix(&d)), b.certificate.det(), "{name} {field}");
                }
            }
        }
    }

    #[test]
    fn wrong_identity_is_rejected() {
        let d = RootDatum::preset("A2").unwrap();
        for field in [FieldSpec::Q, FieldSpec::prime(3).unwrap()] {
            let (_, elements) = candidate(&d, field, SteinbergConvention::STANDARD);
            let m = value_matrix(&d, &elements);
            let rhs = determinant_rhs(&d, field).shift(&[1, 0]);
            assert!(!certify_determinant(&m, &rhs, None, field).holds);
            let mut perturbed = determinant_rhs(&d, field);
            perturbed.add_term(Lattice::from_slice(&[0, 0]), field.one());
            assert!(!certify_determinant(&m, &perturbed, None, field).holds);
        }
    }

    #[test]
    fn expansions() {
        let d = RootDatum::preset("A1").unwrap();
        let q = FieldSpec::Q;
        let b = steinberg_basis(&d, q).unwrap();
        for w in d.elements() {
            let got = steinberg_expand(&d, &b, b.element(w)).unwrap();
            assert_eq!(got, BTreeMap::from([(w, LaurentPoly::one(q, 1))]));
        }
        let inv = orbit_sum(&d, &[1], q);
        assert_eq!(steinberg_expand(&d, &b, &inv).unwrap(), BTreeMap::from([(WeylElt::IDENTITY, inv.clone())]));
        let got = steinberg_expand(&d, &b, &y(q, 1)).unwrap();
        let back = got.iter().fold(LaurentPoly::zero(q, 1), |acc, (w, p)| &acc + &(p * b.element(*w)));
        assert_eq!(back, y(q, 1));
        let d2 = RootDatum::preset("A2").unwrap();
        let b2 = steinberg_basis(&d2, q).unwrap();
        let a = LaurentPoly::parse(q, 2, "y1^2*y2^-1 + 3*y2").unwrap();
        let got = steinberg_expand(&d2, &b2, &a).unwrap();
        let back = got.iter().fold(LaurentPoly::zero(q, 2), |acc, (w, p)| &acc + &(p * b2.element(*w)));
        assert_eq!(back, a);
    }

    #[test]
    fn span_membership_matches_congruences() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let d = RootDatum::preset("A2").unwrap();
        let q = FieldSpec::Q;
        let b = steinberg_basis(&d, q).unwrap();
        let psi = psi_basis(&d, q).unwrap();
        for k in 0..6 {
            let mut f = TensorElement::random(q, 2, 2, &mut rng).tau(&d, q);
            if k % 2 == 1 {
                let w = WeylElt(k as u32);
                f.set(w, f.value(w) + &LaurentPoly::monomial(q, Lattice::from_slice(&[1, 0])));
            }
            let gkm = gkm_check(&d, &f).unwrap().pass();
            let expands = matches!(psi_expand(&d, &psi, &f).unwrap(), PsiExpansion::Coefficients(_));
            let member = tau_span_coefficients(&d, &b, &f).unwrap();
            assert_eq!(gkm, k % 2 == 0);
            assert_eq!(gkm, expands);
            assert_eq!(gkm, member.is_some());
            if let Some(coeffs) = member {
                let rebuilt = coeffs.iter().fold(WFunction::zero(&d, q), |acc, (w, a)| {
                    acc.add(&TensorElement::pure(a.clone(), b.element(*w).clone()).tau(&d, q))
                });
                assert_eq!(rebuilt, f);
            }
        }
    }
}
