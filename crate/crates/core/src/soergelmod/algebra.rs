//! Hom spaces between modules, matrix algebra closures, and the locality
//! search shared by endomorphism algebras and decompositions.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bs::{Coordinates, FinModule};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{random_scalar, EchelonSpan, Matrix, ModMatrix};

/// Basis of `{X : X M(g) = N(g) X for all generators g}`.
///
/// The joint algebra generated by the pairs `(M(g), N(g))` is closed first;
/// then an intertwiner is determined by the images `n_i` of generators
/// `m_i` of `M`, subject to the relations among the `m_i`.
pub fn hom_space(m: &FinModule, n: &FinModule) -> Result<Vec<Matrix>> {
    if m.field() != n.field() {
        return Err(Error::FieldMismatch(m.field().to_string(), n.field().to_string()));
    }
    if m.generators() != n.generators() {
        return Err(Error::RankMismatch(m.rank(), n.rank()));
    }
    let field = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    let joint = joint_closure(m, n);
    let d = joint.len();

    let mut span = EchelonSpan::new(field, dm);
    let mut gens = Vec::new();
    for j in 0..dm {
        if span.dim() == dm {
            break;
        }
        let mut e = vec![field.zero(); dm];
        e[j] = field.one();
        if span.contains(&e) {
            continue;
        }
        gens.push(j);
        for (a, _) in &joint {
            span.insert(&a.column(j));
        }
    }
    let t = gens.len();

    // Column (i, k) of phi is a_k m_i.
    let phi_cols: Vec<Vec<Scalar>> =
        (0..t).flat_map(|i| joint.iter().map(move |(a, _)| (i, a))).map(|(i, a)| a.column(gens[i])).collect();
    let phi = Matrix::from_columns(field, dm, &phi_cols);
    let relations = phi.kernel();

    let mut constraint = Matrix::zeros(field, relations.len() * dn, t * dn);
    for (r, c) in relations.iter().enumerate() {
        for i in 0..t {
            for (k, (_, b)) in joint.iter().enumerate() {
                let coeff = &c[i * d + k];
                if coeff.is_zero() {
                    continue;
                }
                for row in 0..dn {
                    for col in 0..dn {
                        let x = &b[(row, col)];
                        if !x.is_zero() {
                            constraint[(r * dn + row, i * dn + col)] += &(coeff * x);
                        }
                    }
                }
            }
        }
    }
    let solutions = if relations.is_empty() {
        (0..t * dn)
            .map(|j| {
                let mut v = vec![field.zero(); t * dn];
                v[j] = field.one();
                v
            })
            .collect()
    } else {
        constraint.kernel()
    };

    // X = [b_k n_i]_S [a_k m_i]_S^{-1} over independent columns S of phi.
    let pivots = phi.clone().rref_in_place();
    let phi_s = Matrix::from_fn(field, dm, dm, |r, c| phi[(r, pivots[c])].clone());
    let phi_s_inv = phi_s.inverse().expect("generators span the module");
    let homs: Vec<Matrix> = solutions
        .iter()
        .map(|z| {
            let cols: Vec<Vec<Scalar>> = pivots
                .iter()
                .map(|&col| {
                    let (i, k) = (col / d, col % d);
                    joint[k].1.mul_vec(&z[i * dn..(i + 1) * dn])
                })
                .collect();
            Matrix::from_columns(field, dn, &cols).mul(&phi_s_inv)
        })
        .collect();
    debug_assert!(homs.iter().all(|x| { m.action().iter().zip(n.action()).all(|(a, b)| x.mul(a) == b.mul(x)) }));
    Ok(homs)
}

/// Basis of the unital algebra generated by the pairs `(M(g), N(g))`.
fn joint_closure(m: &FinModule, n: &FinModule) -> Vec<(Matrix, Matrix)> {
    let field = m.field();
    let key = |a: &Matrix, b: &Matrix| {
        let mut v = a.to_vec();
        v.extend(b.to_vec());
        v
    };
    let start = (Matrix::identity(field, m.dim()), Matrix::identity(field, n.dim()));
    let mut span = EchelonSpan::new(field, m.dim() * m.dim() + n.dim() * n.dim());
    span.insert(&key(&start.0, &start.1));
    let mut basis = vec![start];
    let mut next = 0;
    while next < basis.len() {
        for (a, b) in m.action().iter().zip(n.action()) {
            let pa = a.mul(&basis[next].0);
            let pb = b.mul(&basis[next].1);
            if span.insert(&key(&pa, &pb)) {
                basis.push((pa, pb));
            }
        }
        next += 1;
    }
    basis
}

/// Basis of the unital algebra generated by square matrices `gens`, by
/// breadth-first left multiplication until the span stabilizes.
pub fn algebra_closure(field: FieldSpec, n: usize, gens: &[Matrix]) -> Vec<Matrix> {
    let mut span = EchelonSpan::new(field, n * n);
    let id = Matrix::identity(field, n);
    span.insert(&id.to_vec());
    let mut basis = vec![id];
    let mut next = 0;
    while next < basis.len() {
        for g in gens {
            let p = g.mul(&basis[next]);
            if span.insert(&p.to_vec()) {
                basis.push(p);
            }
        }
        next += 1;
    }
    basis
}

/// A finite-dimensional algebra of matrices.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    pub dim: usize,
    pub basis: Vec<Matrix>,
    pub is_local: bool,
    pub is_commutative: bool,
}

impl AlgebraPresentation {
    /// Structure constants: `basis[i] * basis[j] = sum_k c[i][j][k] basis[k]`.
    pub fn multiplication_table(&self) -> Vec<Vec<Vec<Scalar>>> {
        let Some(first) = self.basis.first() else { return Vec::new() };
        let (field, n) = (first.field(), first.rows());
        let cols: Vec<Vec<Scalar>> = self.basis.iter().map(Matrix::to_vec).collect();
        let coords = Coordinates::new(&Matrix::from_columns(field, n * n, &cols));
        self.basis
            .iter()
            .map(|a| {
                self.basis.iter().map(|b| coords.solve(&a.mul(b).to_vec()).expect("basis spans an algebra")).collect()
            })
            .collect()
    }

    /// Coordinates of the identity, if it lies in the span.
    pub fn identity_coordinates(&self) -> Option<Vec<Scalar>> {
        let first = self.basis.first()?;
        let (field, n) = (first.field(), first.rows());
        let cols: Vec<Vec<Scalar>> = self.basis.iter().map(Matrix::to_vec).collect();
        Coordinates::new(&Matrix::from_columns(field, n * n, &cols)).solve(&Matrix::identity(field, n).to_vec())
    }
}

/// `End(M)` with locality decided by [`search_split`] from `seed`.
pub fn end_algebra(m: &FinModule, seed: u64) -> Result<AlgebraPresentation> {
    let basis = hom_space(m, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let is_local = matches!(search_split(m.field(), &basis, &mut rng), Locality::Local);
    let is_commutative = basis.iter().enumerate().all(|(i, a)| basis[i + 1..].iter().all(|b| a.mul(b) == b.mul(a)));
    Ok(AlgebraPresentation { dim: basis.len(), basis, is_local, is_commutative })
}

/// Random samples drawn by [`search_split`] beyond the spanning set.
pub(crate) const RANDOM_SAMPLES: usize = 1000;

#[derive(Clone, Debug)]
pub(crate) enum Locality {
    /// Every sampled element was a unit or nilpotent.
    Local,
    /// A singular element that is not nilpotent.
    Split(Matrix),
    /// Provably non-local, yet no splitting element was sampled.
    Exhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Unit,
    Nilpotent,
    Neither,
}

/// Exact classification with a modular fast path.
fn classify(field: FieldSpec, exact: impl Fn() -> Matrix, modular: Option<&ModMatrix>) -> Kind {
    let Some(mm) = modular else {
        let x = exact();
        return if x.is_invertible() {
            Kind::Unit
        } else if x.is_nilpotent() {
            Kind::Nilpotent
        } else {
            Kind::Neither
        };
    };
    if mm.is_invertible() {
        return Kind::Unit;
    }
    if ModMatrix::exact(field) {
        return if mm.is_nilpotent() { Kind::Nilpotent } else { Kind::Neither };
    }
    let x = exact();
    if x.is_invertible() {
        Kind::Unit
    } else if !mm.is_nilpotent() || !x.is_nilpotent() {
        Kind::Neither
    } else {
        Kind::Nilpotent
    }
}

/// Nilpotent samples kept for the non-locality probes.
const NILPOTENT_PROBES: usize = 24;

/// Whether the trace form `(x, y) -> tr(xy)` on the span of `basis`, a
/// basis over `Q`, has rank 1.
///
/// In characteristic 0 the kernel of this form on a matrix algebra is its
/// radical, so the rank is `dim A / rad A`.
fn trace_form_has_rank_one(basis: &[Matrix]) -> bool {
    let n = basis[0].rows();
    let ints: Vec<Vec<BigInt>> = basis.iter().map(Matrix::cleared_entries).collect();
    let k = basis.len();
    let mut gram = vec![BigInt::zero(); k * k];
    for i in 0..k {
        for j in i..k {
            let mut t = BigInt::zero();
            for (x, y) in ints[i].iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let z = &ints[j][(x % n) * n + x / n];
                if !z.is_zero() {
                    t += y * z;
                }
            }
            gram[j * k + i] = t.clone();
            gram[i * k + j] = t;
        }
    }
    let Some(pivot) = gram.iter().position(|g| !g.is_zero()) else { return false };
    let (a, b) = (pivot / k, pivot % k);
    (0..k).all(|i| (0..k).all(|j| &gram[i * k + j] * &gram[a * k + b] == &gram[i * k + b] * &gram[a * k + j]))
}

/// Decides whether the unital algebra spanned by `basis` is local.
///
/// Over `Q` a trace form of rank 1 certifies locality at once. Otherwise
/// the search looks for a singular non-nilpotent element among the basis,
/// the basis shifted by its trace, and random combinations. If none turns
/// up, sums of nilpotent samples and their products with the basis decide
/// between `Local` and `Exhausted`.
pub(crate) fn search_split(field: FieldSpec, basis: &[Matrix], rng: &mut impl Rng) -> Locality {
    if basis.len() <= 1 {
        return Locality::Local;
    }
    if field.characteristic() == 0 && trace_form_has_rank_one(basis) {
        return Locality::Local;
    }
    let n = basis[0].rows();
    let p = ModMatrix::modulus(field);
    let mods: Option<Vec<ModMatrix>> = basis.iter().map(ModMatrix::reduce).collect();
    let id = Matrix::identity(field, n);
    let mut nilpotents: Vec<(Matrix, Option<ModMatrix>)> = Vec::new();
    fn note(
        kind: Kind,
        x: &dyn Fn() -> Matrix,
        mm: Option<ModMatrix>,
        nil: &mut Vec<(Matrix, Option<ModMatrix>)>,
    ) -> Option<Matrix> {
        match kind {
            Kind::Neither => Some(x()),
            Kind::Nilpotent => {
                if nil.len() < NILPOTENT_PROBES {
                    nil.push((x(), mm));
                }
                None
            }
            Kind::Unit => None,
        }
    }

    let n_inv = field.from_i64(n as i64).inv();
    for (i, b) in basis.iter().enumerate() {
        let mm = mods.as_ref().map(|v| v[i].clone());
        let kind = classify(field, || b.clone(), mm.as_ref());
        if let Some(x) = note(kind, &|| b.clone(), mm, &mut nilpotents) {
            return Locality::Split(x);
        }
        if kind == Kind::Unit {
            if let Some(n_inv) = &n_inv {
                let tr = (0..n).fold(field.zero(), |acc, k| &acc + &b[(k, k)]);
                let c = &tr * n_inv;
                let shifted = || b.sub(&id.scale(&c));
                let mm = ModMatrix::reduce(&shifted());
                let kind = classify(field, shifted, mm.as_ref());
                if let Some(x) = note(kind, &shifted, mm, &mut nilpotents) {
                    return Locality::Split(x);
                }
            }
        }
    }

    for _ in 0..RANDOM_SAMPLES {
        let coeffs: Vec<Scalar> = basis.iter().map(|_| random_scalar(field, rng)).collect();
        let exact = || {
            basis.iter().zip(&coeffs).fold(Matrix::zeros(field, n, n), |acc, (b, c)| {
                if c.is_zero() {
                    acc
                } else {
                    acc.add(&b.scale(c))
                }
            })
        };
        let mm = match (&mods, coeffs.iter().map(|c| ModMatrix::reduce_scalar(c, p)).collect::<Option<Vec<_>>>()) {
            (Some(mods), Some(cs)) => {
                Some(mods.iter().zip(cs).fold(ModMatrix::zeros(p, n), |acc, (m, c)| acc.add_scaled(m, c)))
            }
            _ => None,
        };
        let kind = classify(field, exact, mm.as_ref());
        if let Some(x) = note(kind, &exact, mm, &mut nilpotents) {
            return Locality::Split(x);
        }
    }

    let mut nonlocal = false;
    for i in 0..nilpotents.len() {
        let candidates = nilpotents[i + 1..]
            .iter()
            .map(|(x, xm)| (true, x, xm.as_ref()))
            .chain(basis.iter().enumerate().map(|(k, b)| (false, b, mods.as_ref().map(|v| &v[k]))));
        for (is_sum, other, other_mod) in candidates {
            let (a, am) = (&nilpotents[i].0, nilpotents[i].1.as_ref());
            let exact = || if is_sum { a.add(other) } else { a.mul(other) };
            let mm = match (am, other_mod) {
                (Some(x), Some(y)) => Some(if is_sum { x.add_scaled(y, 1) } else { x.mul(y) }),
                _ => None,
            };
            match classify(field, exact, mm.as_ref()) {
                Kind::Neither => return Locality::Split(exact()),
                Kind::Unit => nonlocal = true,
                Kind::Nilpotent => {}
            }
        }
    }
    if nonlocal {
        Locality::Exhausted
    } else {
        Locality::Local
    }
}
