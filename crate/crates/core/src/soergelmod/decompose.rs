//! Krull–Schmidt decomposition by Fitting splitting, and isomorphism tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::algebra::{hom_space, search_split, Locality, RANDOM_SAMPLES};
use super::bs::FinModule;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{random_scalar, EchelonSpan, Matrix, ModMatrix};

/// One isotypic component: an indecomposable summand and its multiplicity.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: FinModule,
    pub mult: usize,
    /// Dimension of the (local) endomorphism algebra of `module`.
    pub end_dim: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
}

impl Decomposition {
    /// `(dim, end_dim, mult)` per summand, sorted.
    pub fn shape(&self) -> Vec<(usize, usize, usize)> {
        let mut out: Vec<_> = self.summands.iter().map(|s| (s.module.dim(), s.end_dim, s.mult)).collect();
        out.sort();
        out
    }

    /// Whether both decompositions have isomorphic summands with equal
    /// multiplicities.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        if self.shape() != other.shape() {
            return Ok(false);
        }
        let mut used = vec![false; other.summands.len()];
        for s in &self.summands {
            let mut found = false;
            for (j, t) in other.summands.iter().enumerate() {
                if used[j] || t.mult != s.mult || t.module.dim() != s.module.dim() || t.end_dim != s.end_dim {
                    continue;
                }
                if local_iso(&s.module, &t.module)?.is_some() {
                    used[j] = true;
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Splits `m` into indecomposables over its field and groups isomorphic
/// ones. Summands appear in order of discovery.
///
/// Non-local endomorphism algebras are split along `ker(phi^n) + im(phi^n)`
/// for a sampled `phi` that is neither a unit nor nilpotent; endomorphisms
/// of the pieces are the diagonal blocks of those of `m`.
pub fn decompose(m: &FinModule, seed: u64) -> Result<Decomposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let end = hom_space(m, m)?;
    let mut pieces = Vec::new();
    split(m.clone(), end, &mut rng, &mut pieces)?;
    let mut summands: Vec<Summand> = Vec::new();
    'pieces: for (module, end_basis) in pieces {
        for s in summands.iter_mut() {
            if s.module.dim() == module.dim()
                && s.end_dim == end_basis.len()
                && local_iso(&s.module, &module)?.is_some()
            {
                s.mult += 1;
                continue 'pieces;
            }
        }
        summands.push(Summand { end_dim: end_basis.len(), module, mult: 1 });
    }
    Ok(Decomposition { summands })
}

fn split(m: FinModule, end: Vec<Matrix>, rng: &mut impl Rng, out: &mut Vec<(FinModule, Vec<Matrix>)>) -> Result<()> {
    let phi = match search_split(m.field(), &end, rng) {
        Locality::Local => {
            out.push((m, end));
            return Ok(());
        }
        Locality::Exhausted => return Err(Error::SplitSearchExhausted(end.len())),
        Locality::Split(phi) => phi,
    };
    let (field, n) = (m.field(), m.dim());
    // Stop at the Fitting index and take echelon bases to keep entries small.
    let (mut power, mut rank) = (phi.clone(), phi.rank());
    loop {
        let next = power.mul(&phi);
        let r = next.rank();
        if r == rank {
            break;
        }
        (power, rank) = (next, r);
    }
    let mut cols: Vec<Vec<Scalar>> = power.kernel();
    let a = cols.len();
    let mut image = power.transpose();
    let r = image.rref_in_place().len();
    cols.extend((0..r).map(|i| image.row(i).to_vec()));
    let t = Matrix::from_columns(field, n, &cols);
    let t_inv = t.inverse().expect("Fitting decomposition is direct");
    let conj = m.conjugate(&t).expect("invertible");
    let blocks =
        |x: &Matrix, lo: usize, hi: usize| Matrix::from_fn(field, hi - lo, hi - lo, |i, j| x[(lo + i, lo + j)].clone());
    let restrict = |lo: usize, hi: usize| {
        let action = conj.action().iter().map(|x| blocks(x, lo, hi)).collect();
        FinModule::new_unchecked(field, m.generators().to_vec(), action, m.provenance().to_string())
    };
    let end_blocks = |lo: usize, hi: usize| {
        let mut span = EchelonSpan::new(field, (hi - lo) * (hi - lo));
        end.iter()
            .map(|x| blocks(&t_inv.mul(x).mul(&t), lo, hi))
            .filter(|b| span.insert(&b.to_vec()))
            .collect::<Vec<_>>()
    };
    split(restrict(0, a), end_blocks(0, a), rng, out)?;
    split(restrict(a, n), end_blocks(a, n), rng, out)
}

/// Isomorphism test for `m` with local endomorphism algebra. `m` is a
/// summand of `n` iff some `g h` with `h: m -> n`, `g: n -> m` is a unit of
/// `End(m)`; in a local algebra this shows up on basis pairs.
pub(crate) fn local_iso(m: &FinModule, n: &FinModule) -> Result<Option<Matrix>> {
    if m.dim() != n.dim() {
        return Ok(None);
    }
    let there = hom_space(m, n)?;
    if there.is_empty() {
        return Ok(None);
    }
    if let Some(h) = there.iter().find(|h| is_unit(h)) {
        return Ok(Some(h.clone()));
    }
    let back = hom_space(n, m)?;
    for h in &there {
        for g in &back {
            if is_unit(&g.mul(h)) {
                return Ok(Some(h.clone()));
            }
        }
    }
    Ok(None)
}

fn is_unit(x: &Matrix) -> bool {
    match ModMatrix::reduce(x) {
        Some(mm) if mm.is_invertible() => true,
        Some(_) if ModMatrix::exact(x.field()) => false,
        _ => x.is_invertible(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// An invertible intertwiner `X` with `X M(g) = N(g) X`.
    Isomorphic(Matrix),
    NotIsomorphic,
}

/// Searches the Hom space for an invertible element: every basis element,
/// then every combination over a small `F_p` Hom space or random ones
/// otherwise. A negative answer is certified through locality of `End(m)`
/// or, failing that, by comparing Krull–Schmidt decompositions.
pub fn module_iso(m: &FinModule, n: &FinModule, seed: u64) -> Result<IsoOutcome> {
    if m.field() != n.field() {
        return Err(Error::FieldMismatch(m.field().to_string(), n.field().to_string()));
    }
    if m.dim() != n.dim() || m.generators() != n.generators() {
        return Ok(IsoOutcome::NotIsomorphic);
    }
    let field = m.field();
    let homs = hom_space(m, n)?;
    if homs.is_empty() {
        return Ok(IsoOutcome::NotIsomorphic);
    }
    if let Some(h) = homs.iter().find(|h| is_unit(h)) {
        return Ok(IsoOutcome::Isomorphic(h.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let combine = |coeffs: &[Scalar]| {
        homs.iter().zip(coeffs).fold(Matrix::zeros(field, n.dim(), m.dim()), |acc, (h, c)| acc.add(&h.scale(c)))
    };
    let exhaustive = match field {
        FieldSpec::Prime { p } => (p as f64).powi(homs.len() as i32) <= 4096.0,
        FieldSpec::Rational => false,
    };
    if exhaustive {
        let p = field.characteristic() as u64;
        let total = p.pow(homs.len() as u32);
        for index in 0..total {
            let coeffs: Vec<Scalar> =
                (0..homs.len()).map(|k| field.from_i64((index / p.pow(k as u32) % p) as i64)).collect();
            let x = combine(&coeffs);
            if is_unit(&x) {
                return Ok(IsoOutcome::Isomorphic(x));
            }
        }
        return Ok(IsoOutcome::NotIsomorphic);
    }
    for _ in 0..RANDOM_SAMPLES / 5 {
        let coeffs: Vec<Scalar> = homs.iter().map(|_| random_scalar(field, &mut rng)).collect();
        let x = combine(&coeffs);
        if is_unit(&x) {
            return Ok(IsoOutcome::Isomorphic(x));
        }
    }
    let end = hom_space(m, m)?;
    if let Locality::Local = search_split(field, &end, &mut rng) {
        return Ok(match local_iso(m, n)? {
            Some(x) => IsoOutcome::Isomorphic(x),
            None => IsoOutcome::NotIsomorphic,
        });
    }
    let (dm, dn) = (decompose(m, seed)?, decompose(n, seed)?);
    if !dm.equivalent(&dn)? {
        return Ok(IsoOutcome::NotIsomorphic);
    }
    Err(Error::Inconclusive(format!(
        "{} and {} have matching decompositions but no invertible intertwiner was sampled",
        m.provenance(),
        n.provenance()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::RootDatum;
    use crate::soergelmod::bs::bs_module;

    #[test]
    fn a1_decompositions() {
        let d = RootDatum::preset("A1").unwrap();
        for field in FieldSpec::standard() {
            let k = bs_module(&d, &[], field).unwrap();
            let b = bs_module(&d, &[0], field).unwrap();
            let dec = decompose(&k.direct_sum(&k), 0).unwrap();
            assert_eq!(dec.shape(), vec![(1, 1, 2)]);
            let dec = decompose(&b, 0).unwrap();
            assert_eq!(dec.shape(), vec![(2, 2, 1)]);
            let dec = decompose(&k.direct_sum(&b), 0).unwrap();
            assert_eq!(dec.shape(), vec![(1, 1, 1), (2, 2, 1)]);
            // B(ss) = B(s) + B(s).
            let bb = bs_module(&d, &[0, 0], field).unwrap();
            assert_eq!(decompose(&bb, 3).unwrap().shape(), vec![(2, 2, 2)], "{field}");
        }
    }

    #[test]
    fn isomorphism_tests() {
        let d = RootDatum::preset("A1").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for field in FieldSpec::standard() {
            let k = bs_module(&d, &[], field).unwrap();
            let b = bs_module(&d, &[0], field).unwrap();
            assert_eq!(module_iso(&b, &b, 0).unwrap(), IsoOutcome::Isomorphic(Matrix::identity(field, 2)));
            assert_eq!(module_iso(&k, &b, 0).unwrap(), IsoOutcome::NotIsomorphic);
            let p = loop {
                let p = Matrix::random(field, 2, 2, &mut rng);
                if p.is_invertible() {
                    break p;
                }
            };
            let c = b.conjugate(&p).unwrap();
            let IsoOutcome::Isomorphic(x) = module_iso(&b, &c, 1).unwrap() else { panic!("{field}") };
            for (a, bb) in b.action().iter().zip(c.action()) {
                assert_eq!(x.mul(a), bb.mul(&x));
            }
            let kk = k.direct_sum(&k);
            assert_eq!(module_iso(&kk, &b, 0).unwrap(), IsoOutcome::NotIsomorphic);
        }
    }

    #[test]
    fn doubling_and_conjugation_in_a2() {
        let d = RootDatum::preset("A2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for field in FieldSpec::standard() {
            let m = bs_module(&d, &[0, 1, 0], field).unwrap();
            let dec = decompose(&m, 0).unwrap();
            let doubled = decompose(&m.direct_sum(&m), 0).unwrap();
            let twice: Vec<_> = dec.shape().into_iter().map(|(a, b, c)| (a, b, 2 * c)).collect();
            assert_eq!(doubled.shape(), twice);
            let p = Matrix::random(field, 8, 8, &mut rng);
            if let Some(c) = m.conjugate(&p) {
                assert!(decompose(&c, 5).unwrap().equivalent(&dec).unwrap());
            }
        }
    }
}
