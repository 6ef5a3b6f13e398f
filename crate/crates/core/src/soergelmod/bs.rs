//! Bott–Samelson modules `B(w) = R (x)_{R^{s_1}} ... (x)_{R^{s_r}} k` and
//! bimodules, built from the Demazure splitting `f = A + B e^{varpi_s}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::laurent::LaurentPoly;
use crate::linalg::Matrix;
use crate::rootdata::{word_name, Lattice, RootDatum};

/// `f = A + B e^{varpi_s}` with `A`, `B` fixed by `s`.
pub fn demazure_split(datum: &RootDatum, f: &LaurentPoly, s: usize) -> Result<(LaurentPoly, LaurentPoly)> {
    let delta = datum.fundamental_coweight(s);
    let neg_alpha: Lattice = datum.simple_coroot(s).iter().map(|x| -x).collect();
    let neg_delta: Lattice = delta.iter().map(|x| -x).collect();
    let diff = f - &f.act(datum, datum.simple(s));
    let b = diff
        .div_binomial(&neg_alpha)
        .ok_or_else(|| Error::NonExactDivision { w: datum.element_name(datum.simple(s)), witness: diff.to_string() })?;
    let b = b.shift(&neg_delta);
    let a = f - &b.shift(&delta);
    Ok((a, b))
}

/// Left multiplication by `f` on the basis vector `mask` of the tensor
/// product; returns right coefficients in the last factor, keyed by mask.
///
/// Bit `j` of a mask selects `e^{varpi_{s_j}}` (set) or `1` in factor `j`.
fn sweep(datum: &RootDatum, word: &[usize], f: &LaurentPoly, mask: usize) -> Result<BTreeMap<usize, LaurentPoly>> {
    let mut state: BTreeMap<usize, LaurentPoly> = BTreeMap::from([(0, f.clone())]);
    for (j, &s) in word.iter().enumerate() {
        let delta = datum.fundamental_coweight(s);
        let mut next: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
        for (prefix, g) in state {
            let content = if mask >> j & 1 == 1 { g.shift(&delta) } else { g };
            let (a, b) = demazure_split(datum, &content, s)?;
            for (bit, part) in [(0, a), (1, b)] {
                if part.is_zero() {
                    continue;
                }
                let key = prefix | bit << j;
                let merged = match next.remove(&key) {
                    Some(old) => &old + &part,
                    None => part,
                };
                if !merged.is_zero() {
                    next.insert(key, merged);
                }
            }
        }
        state = next;
    }
    Ok(state)
}

/// `e^{varpi_1}, e^{-varpi_1}, e^{varpi_2}, ...`
pub fn default_generators(rank: usize) -> Vec<Lattice> {
    (0..rank)
        .flat_map(|i| {
            let mut plus = Lattice::from_elem(0, rank);
            plus[i] = 1;
            let minus: Lattice = plus.iter().map(|x| -x).collect();
            [plus, minus]
        })
        .collect()
}

/// A finite-dimensional `R`-module given by the action of generators.
#[derive(Clone, PartialEq, Eq)]
pub struct FinModule {
    field: FieldSpec,
    generators: Vec<Lattice>,
    action: Vec<Matrix>,
    provenance: String,
}

impl FinModule {
    /// Checks that the matrices are square of one size and commute.
    pub fn new(field: FieldSpec, generators: Vec<Lattice>, action: Vec<Matrix>, provenance: String) -> Result<Self> {
        if generators.len() != action.len() || action.is_empty() {
            return Err(Error::Parse("one action matrix per generator".into()));
        }
        let dim = action[0].rows();
        if action.iter().any(|a| a.rows() != dim || a.cols() != dim || a.field() != field) {
            return Err(Error::Parse("action matrices must be square of equal size over one field".into()));
        }
        for (i, a) in action.iter().enumerate() {
            for b in &action[i + 1..] {
                if a.mul(b) != b.mul(a) {
                    return Err(Error::Parse("action matrices do not commute".into()));
                }
            }
        }
        Ok(FinModule { field, generators, action, provenance })
    }

    pub(crate) fn new_unchecked(
        field: FieldSpec,
        generators: Vec<Lattice>,
        action: Vec<Matrix>,
        provenance: String,
    ) -> Self {
        FinModule { field, generators, action, provenance }
    }

    /// `k` with every monomial acting by `1`.
    pub fn trivial(field: FieldSpec, rank: usize) -> Self {
        let generators = default_generators(rank);
        let action = vec![Matrix::identity(field, 1); generators.len()];
        FinModule { field, generators, action, provenance: "k".into() }
    }

    pub fn dim(&self) -> usize {
        self.action[0].rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.generators[0].len()
    }

    pub fn generators(&self) -> &[Lattice] {
        &self.generators
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Matrix of `e^mu`; `mu` must be an integer combination of generators
    /// of the default shape `+-varpi_i`.
    pub fn act_monomial(&self, mu: &[i32]) -> Matrix {
        let mut out = Matrix::identity(self.field, self.dim());
        for (i, &m) in mu.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let target: Lattice = (0..mu.len()).map(|j| if j == i { m.signum() } else { 0 }).collect();
            let g = self.generators.iter().position(|g| *g == target).expect("generators contain +-varpi_i");
            out = out.mul(&self.action[g].pow(m.unsigned_abs() as u64));
        }
        out
    }

    pub fn act_poly(&self, f: &LaurentPoly) -> Matrix {
        f.terms().fold(Matrix::zeros(self.field, self.dim(), self.dim()), |acc, (mu, c)| {
            acc.add(&self.act_monomial(mu).scale(c))
        })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.direct_sum(b)).collect();
        FinModule {
            field: self.field,
            generators: self.generators.clone(),
            action,
            provenance: format!("{} + {}", self.provenance, other.provenance),
        }
    }

    /// The same module in the basis given by the columns of `p`.
    pub fn conjugate(&self, p: &Matrix) -> Option<Self> {
        let inv = p.inverse()?;
        let action = self.action.iter().map(|a| inv.mul(a).mul(p)).collect();
        Some(FinModule { action, ..self.clone() })
    }

    /// The submodule spanned by the columns of `basis` (assumed invariant
    /// and independent), in that basis.
    pub fn restrict(&self, basis: &Matrix) -> Self {
        let coords = Coordinates::new(basis);
        let action = self
            .action
            .iter()
            .map(|a| {
                let image = a.mul(basis);
                let cols: Vec<Vec<_>> =
                    (0..image.cols()).map(|j| coords.solve(&image.column(j)).expect("subspace is invariant")).collect();
                Matrix::from_columns(self.field, basis.cols(), &cols)
            })
            .collect();
        FinModule { action, ..self.clone() }
    }
}

impl fmt::Debug for FinModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinModule({}, dim {}, {})", self.provenance, self.dim(), self.field)
    }
}

/// Coordinates with respect to the independent columns of a matrix, via an
/// invertible square block on pivot rows.
pub(crate) struct Coordinates {
    pivots: Vec<usize>,
    inverse: Matrix,
    basis: Matrix,
}

impl Coordinates {
    pub(crate) fn new(basis: &Matrix) -> Self {
        let pivots = basis.transpose().rref_in_place();
        assert_eq!(pivots.len(), basis.cols(), "columns must be independent");
        let block = Matrix::from_fn(basis.field(), pivots.len(), basis.cols(), |i, j| basis[(pivots[i], j)].clone());
        Coordinates { inverse: block.inverse().expect("pivot block is invertible"), pivots, basis: basis.clone() }
    }

    /// Coordinates of `v` if it lies in the column span.
    pub(crate) fn solve(&self, v: &[crate::field::Scalar]) -> Option<Vec<crate::field::Scalar>> {
        let restricted: Vec<_> = self.pivots.iter().map(|&i| v[i].clone()).collect();
        let c = self.inverse.mul_vec(&restricted);
        (self.basis.mul_vec(&c) == v).then_some(c)
    }
}

/// `B(word)` over `field`; `dim = 2^{|word|}`.
pub fn bs_module(datum: &RootDatum, word: &[usize], field: FieldSpec) -> Result<FinModule> {
    let generators = default_generators(datum.rank());
    let dim = 1usize << word.len();
    let mut action = Vec::with_capacity(generators.len());
    for g in &generators {
        let f = LaurentPoly::monomial(field, g.clone());
        let mut m = Matrix::zeros(field, dim, dim);
        for mask in 0..dim {
            for (row, coeff) in sweep(datum, word, &f, mask)? {
                m[(row, mask)] = coeff.augment();
            }
        }
        action.push(m);
    }
    Ok(FinModule::new_unchecked(field, generators, action, format!("B({})", word_name(word))))
}

/// `R (x)_{R^{s_1}} ... (x)_{R^{s_r}} R`, free as a right module on the
/// tensor basis; left actions are matrices over `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSBimodule {
    pub word: Vec<usize>,
    pub field: FieldSpec,
    pub generators: Vec<Lattice>,
    pub left: Vec<Vec<Vec<LaurentPoly>>>,
}

pub fn bs_bimodule(datum: &RootDatum, word: &[usize], field: FieldSpec) -> Result<BSBimodule> {
    let generators = default_generators(datum.rank());
    let left = generators
        .iter()
        .map(|g| left_action_matrix(datum, word, &LaurentPoly::monomial(field, g.clone())))
        .collect::<Result<_>>()?;
    Ok(BSBimodule { word: word.to_vec(), field, generators, left })
}

fn left_action_matrix(datum: &RootDatum, word: &[usize], f: &LaurentPoly) -> Result<Vec<Vec<LaurentPoly>>> {
    let dim = 1usize << word.len();
    let zero = LaurentPoly::zero(f.field(), f.rank());
    let columns = (0..dim).map(|mask| sweep(datum, word, f, mask)).collect::<Result<Vec<_>>>()?;
    Ok((0..dim)
        .map(|row| columns.iter().map(|c| c.get(&row).cloned().unwrap_or_else(|| zero.clone())).collect())
        .collect())
}

impl BSBimodule {
    pub fn rank(&self) -> usize {
        1 << self.word.len()
    }

    /// Left multiplication by an arbitrary `f`.
    pub fn left_action(&self, datum: &RootDatum, f: &LaurentPoly) -> Result<Vec<Vec<LaurentPoly>>> {
        left_action_matrix(datum, &self.word, f)
    }

    /// Whether left and right multiplication by `f` agree.
    pub fn acts_centrally(&self, datum: &RootDatum, f: &LaurentPoly) -> Result<bool> {
        let m = self.left_action(datum, f)?;
        Ok(m.iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, x)| if i == j { x == f } else { x.is_zero() })))
    }

    /// `- (x)_R k`: apply the augmentation entrywise.
    pub fn specialize(&self) -> FinModule {
        let action = self
            .left
            .iter()
            .map(|m| Matrix::from_fn(self.field, self.rank(), self.rank(), |i, j| m[i][j].augment()))
            .collect();
        FinModule::new_unchecked(self.field, self.generators.clone(), action, format!("B({})", word_name(&self.word)))
    }
}
