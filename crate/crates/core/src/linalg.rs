//! Dense linear algebra over a [`FieldSpec`]: echelon forms, kernels,
//! inverses, and an incremental span used for algebra closures.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::field::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn scalar(field: FieldSpec, n: usize, c: &Scalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldSpec, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        Self::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn random(field: FieldSpec, rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        Self::from_fn(field, rows, cols, |_, _| random_scalar(field, rng))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        if self.field == FieldSpec::Rational {
            return self.mul_rational(other);
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// A primitive integer multiple of the entries of a matrix over `Q`.
    pub(crate) fn cleared_entries(&self) -> Vec<BigInt> {
        let v: Vec<BigRational> = self.data.iter().map(rational).collect();
        let den = v.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        let mut v: Vec<BigInt> = v.iter().map(|r| r.numer() * (&den / r.denom())).collect();
        make_primitive(&mut v);
        v
    }

    /// Product over `Q` with denominators cleared per row of `self` and per
    /// column of `other`, so inner sums run over integers.
    fn mul_rational(&self, other: &Self) -> Self {
        let q = rational;
        let (n, m) = (self.cols, other.cols);
        let clear = |entries: Vec<BigRational>| {
            let den = entries.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
            let ints: Vec<BigInt> = entries.iter().map(|r| r.numer() * (&den / r.denom())).collect();
            (den, ints)
        };
        let rows: Vec<(BigInt, Vec<BigInt>)> =
            (0..self.rows).map(|i| clear(self.row(i).iter().map(q).collect())).collect();
        let cols: Vec<(BigInt, Vec<BigInt>)> =
            (0..m).map(|j| clear((0..n).map(|k| q(&other.data[k * m + j])).collect())).collect();
        // Transposed so each inner loop walks row k of `other`.
        let b: Vec<BigInt> = (0..n * m).map(|x| cols[x % m].1[x / m].clone()).collect();
        let mut out = Self::zeros(self.field, self.rows, m);
        let mut acc = vec![BigInt::zero(); m];
        for (i, (row_den, a)) in rows.iter().enumerate() {
            acc.iter_mut().for_each(Zero::set_zero);
            for (k, a) in a.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                for (x, b) in acc.iter_mut().zip(&b[k * m..(k + 1) * m]) {
                    if !b.is_zero() {
                        *x += a * b;
                    }
                }
            }
            for (j, x) in acc.iter_mut().enumerate() {
                if !x.is_zero() {
                    let num = std::mem::take(x);
                    out.data[i * m + j] = Scalar::Q(BigRational::new(num, row_den * &cols[j].0));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(self.field.zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc + a * b
                    }
                })
            })
            .collect()
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.rows);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else { continue };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv().expect("pivot is nonzero");
            for j in c..self.cols {
                let x = &self.data[r * self.cols + j] * &inv;
                self.data[r * self.cols + j] = x;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let factor = self[(i, c)].clone();
                    for j in c..self.cols {
                        let sub = &factor * &self.data[r * self.cols + j];
                        if !sub.is_zero() {
                            self.data[i * self.cols + j] -= &sub;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&m[(r, f)];
                }
                v
            })
            .collect()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.field.one();
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(self.field, n, n, |i, j| aug[(i, n + j)].clone()))
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else { return self.field.zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = &det * &pivot;
            let inv = pivot.inv().unwrap();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let factor = &m[(i, c)] * &inv;
                    for j in c..n {
                        let sub = &factor * &m[(c, j)];
                        m[(i, j)] -= &sub;
                    }
                }
            }
        }
        det
    }

    /// A solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// `self^n = 0` for `n = rows`.
    pub fn is_nilpotent(&self) -> bool {
        let mut p = self.clone();
        let mut k = 1;
        while k < self.rows {
            p = p.mul(&p);
            k *= 2;
            if p.is_zero() {
                return true;
            }
        }
        p.is_zero()
    }

    /// Flattened row-major entries, as a vector.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_vec(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { field, rows, cols, data }
    }

    /// Rows as small integers (the `[0, p)` representative over `F_p`).
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_i64()).collect()).collect()
    }

    /// Rows as canonical text.
    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Uniform element of `F_p`; over `Q` a small integer in `[-3, 3]`.
pub fn random_scalar(field: FieldSpec, rng: &mut impl Rng) -> Scalar {
    match field {
        FieldSpec::Rational => field.from_i64(rng.gen_range(-3..=3)),
        FieldSpec::Prime { p } => field.from_i64(rng.gen_range(0..p as i64)),
    }
}

/// Incrementally built row-echelon basis of a subspace of `k^len`.
///
/// Over `Q` rows are kept as primitive integer vectors and eliminated
/// fraction-free.
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    len: usize,
    rows: Rows,
}

#[derive(Clone, Debug)]
enum Rows {
    Prime(Vec<(usize, Vec<Scalar>)>),
    Integer(Vec<(usize, Vec<BigInt>)>),
}

impl EchelonSpan {
    pub fn new(field: FieldSpec, len: usize) -> Self {
        let rows = match field {
            FieldSpec::Rational => Rows::Integer(Vec::new()),
            FieldSpec::Prime { .. } => Rows::Prime(Vec::new()),
        };
        EchelonSpan { len, rows }
    }

    pub fn dim(&self) -> usize {
        match &self.rows {
            Rows::Prime(rows) => rows.len(),
            Rows::Integer(rows) => rows.len(),
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.len);
        match &self.rows {
            Rows::Prime(rows) => reduce_prime(rows, v).iter().all(Scalar::is_zero),
            Rows::Integer(rows) => reduce_integer(rows, v).iter().all(Zero::is_zero),
        }
    }

    /// Adds `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.len);
        match &mut self.rows {
            Rows::Prime(rows) => {
                let mut r = reduce_prime(rows, v);
                let Some(p) = r.iter().position(|x| !x.is_zero()) else { return false };
                let inv = r[p].inv().unwrap();
                for x in r.iter_mut() {
                    *x = &*x * &inv;
                }
                rows.push((p, r));
            }
            Rows::Integer(rows) => {
                let r = reduce_integer(rows, v);
                let Some(p) = r.iter().position(|x| !x.is_zero()) else { return false };
                rows.push((p, r));
            }
        }
        true
    }
}

/// Residual of `v` against rows whose pivots are zero in all later rows.
fn reduce_prime(rows: &[(usize, Vec<Scalar>)], v: &[Scalar]) -> Vec<Scalar> {
    let mut v = v.to_vec();
    for (p, row) in rows {
        if !v[*p].is_zero() {
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&c * r);
                }
            }
        }
    }
    v
}

/// Primitive integer vector proportional to the residual of `v`.
fn reduce_integer(rows: &[(usize, Vec<BigInt>)], v: &[Scalar]) -> Vec<BigInt> {
    let v: Vec<BigRational> = v.iter().map(rational).collect();
    let den = v.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let mut v: Vec<BigInt> = v.iter().map(|r| r.numer() * (&den / r.denom())).collect();
    make_primitive(&mut v);
    for (p, row) in rows {
        if v[*p].is_zero() {
            continue;
        }
        let g = v[*p].gcd(&row[*p]);
        let (a, b) = (&row[*p] / &g, &v[*p] / &g);
        for (x, r) in v.iter_mut().zip(row) {
            if !x.is_zero() {
                *x *= &a;
            }
            if !r.is_zero() {
                *x -= &b * r;
            }
        }
        make_primitive(&mut v);
    }
    v
}

fn rational(s: &Scalar) -> BigRational {
    match s {
        Scalar::Q(r) => r.clone(),
        Scalar::Fp { .. } => unreachable!("F_p entry in rational arithmetic"),
    }
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        v.iter_mut().filter(|x| !x.is_zero()).for_each(|x| *x /= &g);
    }
}

/// A square matrix reduced modulo a word-sized prime. Over `F_p` the
/// reduction is exact; over `Q` it gives one-sided evidence (a unit
/// determinant or a nonzero power mod `P` lifts to `Q`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModMatrix {
    p: u64,
    n: usize,
    data: Vec<u64>,
}

/// `2^61 - 1`.
const MERSENNE_61: u64 = (1 << 61) - 1;

impl ModMatrix {
    /// The modulus used for `field`.
    pub(crate) fn modulus(field: FieldSpec) -> u64 {
        match field {
            FieldSpec::Rational => MERSENNE_61,
            FieldSpec::Prime { p } => p as u64,
        }
    }

    /// Whether reduction is exact (the field is `F_p` itself).
    pub(crate) fn exact(field: FieldSpec) -> bool {
        matches!(field, FieldSpec::Prime { .. })
    }

    pub(crate) fn reduce_scalar(x: &Scalar, p: u64) -> Option<u64> {
        match x {
            Scalar::Fp { value, .. } => Some(*value as u64),
            Scalar::Q(r) => {
                let m = num_bigint::BigInt::from(p);
                let red = |n: &num_bigint::BigInt| {
                    use num_traits::ToPrimitive;
                    (((n % &m) + &m) % &m).to_u64().expect("residue fits")
                };
                let den = red(r.denom());
                (den != 0).then(|| mul_mod(red(r.numer()), crate::field::pow_mod(den, p - 2, p), p))
            }
        }
    }

    /// `None` if some denominator vanishes modulo the prime.
    pub(crate) fn reduce(m: &Matrix) -> Option<Self> {
        assert!(m.is_square());
        let p = Self::modulus(m.field());
        let data = m.entries().iter().map(|x| Self::reduce_scalar(x, p)).collect::<Option<Vec<_>>>()?;
        Some(ModMatrix { p, n: m.rows(), data })
    }

    pub(crate) fn zeros(p: u64, n: usize) -> Self {
        ModMatrix { p, n, data: vec![0; n * n] }
    }

    /// `self + c * other`.
    pub(crate) fn add_scaled(&self, other: &Self, c: u64) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (a + mul_mod(b, c, self.p)) % self.p).collect();
        ModMatrix { data, ..*self }
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut data = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.data[k * n + j];
                    if b != 0 {
                        data[i * n + j] = (data[i * n + j] + mul_mod(a, b, self.p)) % self.p;
                    }
                }
            }
        }
        ModMatrix { data, ..*self }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub(crate) fn rank(&self) -> usize {
        let (n, p) = (self.n, self.p);
        let mut m = self.data.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| m[r * n + col] != 0) else { continue };
            for j in 0..n {
                m.swap(rank * n + j, piv * n + j);
            }
            let inv = crate::field::pow_mod(m[rank * n + col], p - 2, p);
            for r in rank + 1..n {
                let f = mul_mod(m[r * n + col], inv, p);
                if f == 0 {
                    continue;
                }
                for j in col..n {
                    let t = mul_mod(f, m[rank * n + j], p);
                    m[r * n + j] = (m[r * n + j] + p - t) % p;
                }
            }
            rank += 1;
        }
        rank
    }

    pub(crate) fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// `self^n = 0`.
    pub(crate) fn is_nilpotent(&self) -> bool {
        let mut q = self.clone();
        let mut k = 1;
        while k < self.n {
            q = q.mul(&q);
            k *= 2;
            if q.is_zero() {
                return true;
            }
        }
        q.is_zero()
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_and_det() {
        let q = FieldSpec::Q;
        let m = Matrix::from_i64_rows(q, &[vec![0, -1], vec![1, 2]]);
        assert_eq!(m.det(), q.one());
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let sing = Matrix::from_i64_rows(q, &[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
        assert_eq!(sing.kernel().len(), 1);
        let f2 = FieldSpec::Prime { p: 2 };
        let n = Matrix::from_i64_rows(f2, &[vec![1, 1], vec![1, 1]]);
        assert!(n.is_nilpotent());
    }

    #[test]
    fn random_solves() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in FieldSpec::standard() {
            for _ in 0..20 {
                let a = Matrix::random(field, 4, 5, &mut rng);
                for v in a.kernel() {
                    assert!(a.mul_vec(&v).iter().all(Scalar::is_zero));
                }
                assert_eq!(a.kernel().len() + a.rank(), 5);
                let x: Vec<Scalar> = (0..5).map(|_| random_scalar(field, &mut rng)).collect();
                let b = a.mul_vec(&x);
                let sol = a.solve(&b).unwrap();
                assert_eq!(a.mul_vec(&sol), b);
            }
        }
    }

    #[test]
    fn echelon_span() {
        let q = FieldSpec::Q;
        let mut s = EchelonSpan::new(q, 3);
        let v = |a: i64, b: i64, c: i64| vec![q.from_i64(a), q.from_i64(b), q.from_i64(c)];
        assert!(s.insert(&v(1, 2, 3)));
        assert!(s.insert(&v(0, 1, 1)));
        assert!(!s.insert(&v(2, 5, 7)));
        assert!(s.contains(&v(1, 3, 4)));
        assert!(!s.contains(&v(0, 0, 1)));
        assert_eq!(s.dim(), 2);
    }

    fn fraction(a: i64, b: i64) -> Scalar {
        Scalar::Q(BigRational::new(a.into(), b.into()))
    }

    #[test]
    fn rational_products_match_entrywise_sums() {
        let q = FieldSpec::Q;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut entry = || fraction(rng.gen_range(-4..=4), rng.gen_range(1..=6));
        let a = Matrix::from_fn(q, 3, 4, |_, _| entry());
        let b = Matrix::from_fn(q, 4, 2, |_, _| entry());
        let product = a.mul(&b);
        for i in 0..3 {
            for j in 0..2 {
                let sum = (0..4).fold(q.zero(), |acc, k| &acc + &(&a[(i, k)] * &b[(k, j)]));
                assert_eq!(product[(i, j)], sum);
            }
        }
        assert_eq!(Matrix::zeros(q, 2, 3).mul(&Matrix::zeros(q, 3, 2)), Matrix::zeros(q, 2, 2));
    }

    #[test]
    fn echelon_span_with_fractions() {
        let q = FieldSpec::Q;
        let mut s = EchelonSpan::new(q, 3);
        assert!(s.insert(&[fraction(1, 2), fraction(1, 3), q.zero()]));
        assert!(s.insert(&[q.zero(), fraction(2, 7), fraction(-1, 5)]));
        assert!(s.contains(&[fraction(3, 2), fraction(5, 3), fraction(-7, 15)]));
        assert!(!s.contains(&[q.one(), q.zero(), q.zero()]));
        assert!(!s.insert(&[fraction(-1, 4), fraction(5, 42), fraction(-1, 5)]));
        assert_eq!(s.dim(), 2);
    }
}
