//! Exact identity testing for determinants of matrices over `R`.
//!
//! After multiplying by a monomial, `det(M) - c * rhs` becomes a polynomial
//! whose degree in `y_i` is at most `width_i`. It vanishes identically iff it
//! vanishes on a grid of `width_i + 1` distinct nonzero values per variable.
//! Over `Q` the check runs modulo several 62-bit primes whose product exceeds
//! twice a bound on the integer coefficients; over `F_p` it runs in a finite
//! extension `F_{p^k}` large enough to hold the grid.

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::field::Scalar;
use crate::laurent::LaurentPoly;

pub(super) trait GridField: Sync {
    fn one(&self) -> u64;
    fn add(&self, a: u64, b: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    fn inv(&self, a: u64) -> u64;
    fn embed(&self, c: &Scalar) -> u64;
    /// The `k`-th of `capacity()` distinct nonzero elements.
    fn point(&self, k: usize) -> u64;
    fn capacity(&self) -> usize;
    fn describe(&self) -> String;

    fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }
}

/// `Z / p` in Montgomery form, for odd `p < 2^63`.
pub(super) struct Montgomery {
    p: u64,
    pinv_neg: u64,
    r2: u64,
}

impl Montgomery {
    pub(super) fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < 1 << 63);
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Montgomery { p, pinv_neg: inv.wrapping_neg(), r2 }
    }

    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv_neg);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    fn to_mont(&self, x: u64) -> u64 {
        self.mul(x % self.p, self.r2)
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl GridField for Montgomery {
    fn one(&self) -> u64 {
        self.to_mont(1)
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }
    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
    fn embed(&self, c: &Scalar) -> u64 {
        let reduce = |n: &BigInt| {
            let m = BigInt::from(self.p);
            self.to_mont((((n % &m) + &m) % &m).to_u64().expect("reduced residue"))
        };
        match c {
            Scalar::Q(r) => self.mul(reduce(r.numer()), self.inv(reduce(r.denom()))),
            Scalar::Fp { value, .. } => self.to_mont(*value as u64),
        }
    }
    fn point(&self, k: usize) -> u64 {
        self.to_mont(k as u64 + 1)
    }
    fn capacity(&self) -> usize {
        usize::MAX
    }
    fn describe(&self) -> String {
        self.p.to_string()
    }
}

/// `F_{p^k}` via log tables; elements are base-`p` digit encodings of
/// polynomials modulo a primitive polynomial.
pub(super) struct ExtField {
    p: u64,
    k: u32,
    q: usize,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl ExtField {
    /// The smallest `F_{p^k}` with at least `needed` nonzero elements.
    pub(super) fn with_capacity(p: u64, needed: usize) -> Self {
        let mut k = 1u32;
        while (p.pow(k) as usize) - 1 < needed {
            k += 1;
        }
        Self::new(p, k)
    }

    fn new(p: u64, k: u32) -> Self {
        let q = p.pow(k) as usize;
        let digits = |mut x: usize| -> Vec<u64> {
            (0..k)
                .map(|_| {
                    let d = x as u64 % p;
                    x /= p as usize;
                    d
                })
                .collect()
        };
        let encode = |ds: &[u64]| ds.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize);
        let mut add = vec![0u32; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let s: Vec<u64> = da.iter().zip(digits(b)).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s) as u32;
            }
        }
        let neg: Vec<u32> =
            (0..q).map(|a| encode(&digits(a).iter().map(|d| (p - d) % p).collect::<Vec<_>>()) as u32).collect();
        // Find a monic f of degree k for which x has order q - 1.
        for tail in 0..q {
            let f = digits(tail);
            let times_x = |v: &[u64]| -> Vec<u64> {
                let top = v[k as usize - 1];
                let mut out = vec![0u64; k as usize];
                for j in (1..k as usize).rev() {
                    out[j] = v[j - 1];
                }
                for j in 0..k as usize {
                    out[j] = (out[j] + (p - f[j]) * top) % p;
                }
                out
            };
            let mut exp = Vec::with_capacity(q - 1);
            let mut cur = vec![0u64; k as usize];
            cur[0] = 1;
            let mut ok = true;
            for i in 0..q - 1 {
                let code = encode(&cur);
                if code == 0 || (i > 0 && code == 1) {
                    ok = false;
                    break;
                }
                exp.push(code as u32);
                cur = times_x(&cur);
            }
            if !ok || encode(&cur) != 1 {
                continue;
            }
            let mut log = vec![0u32; q];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            return ExtField { p, k, q, exp, log, add, neg };
        }
        unreachable!("a primitive polynomial exists in every degree")
    }
}

impl GridField for ExtField {
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        self.add[a as usize * self.q + b as usize] as u64
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg[b as usize] as u64)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (self.log[a as usize] + self.log[b as usize]) as usize % (self.q - 1);
        self.exp[s] as u64
    }
    fn inv(&self, a: u64) -> u64 {
        let l = self.log[a as usize] as usize;
        self.exp[(self.q - 1 - l) % (self.q - 1)] as u64
    }
    fn embed(&self, c: &Scalar) -> u64 {
        match c {
            Scalar::Fp { value, .. } => *value as u64 % self.p,
            Scalar::Q(_) => panic!("rational scalar in a finite-field grid"),
        }
    }
    fn point(&self, k: usize) -> u64 {
        self.exp[k] as u64
    }
    fn capacity(&self) -> usize {
        self.q - 1
    }
    fn describe(&self) -> String {
        format!("GF({}^{})", self.p, self.k)
    }
}

/// Deterministic Miller-Rabin, valid for all `u64`.
pub(super) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62`, in decreasing order, whose product exceeds `bound`.
pub(super) fn primes_exceeding(bound: &BigInt) -> Vec<u64> {
    let mut out = Vec::new();
    let mut product = BigInt::from(1);
    let mut candidate = (1u64 << 62) - 1;
    while &product <= bound {
        while !is_prime_u64(candidate) {
            candidate -= 2;
        }
        out.push(candidate);
        product *= candidate;
        candidate -= 2;
    }
    out
}

/// The identity `det(entries) = sign * rhs`, to be checked on a grid.
pub(super) struct GridProblem<'a> {
    pub entries: &'a [Vec<LaurentPoly>],
    pub rhs: &'a LaurentPoly,
    /// `(base, k)` with `base^k = rhs`, evaluated instead of `rhs` when given.
    pub rhs_root: Option<(&'a LaurentPoly, u32)>,
    /// Points per variable.
    pub counts: Vec<usize>,
}

struct Embedded {
    n: usize,
    rank: usize,
    emin: Vec<i32>,
    emax: Vec<i32>,
    entries: Vec<Vec<(Vec<i32>, u64)>>,
    rhs: Vec<(Vec<i32>, u64)>,
    rhs_root: Option<(Terms, u32)>,
}

/// Exponent vectors with coefficients embedded in the evaluation field.
type Terms = Vec<(Vec<i32>, u64)>;

fn embed_problem<F: GridField>(field: &F, prob: &GridProblem) -> Embedded {
    let n = prob.entries.len();
    let rank = prob.rhs.rank();
    let mut emin = vec![i32::MAX; rank];
    let mut emax = vec![i32::MIN; rank];
    let mut embed = |p: &LaurentPoly| -> Vec<(Vec<i32>, u64)> {
        p.terms()
            .map(|(e, c)| {
                for i in 0..rank {
                    emin[i] = emin[i].min(e[i]);
                    emax[i] = emax[i].max(e[i]);
                }
                (e.to_vec(), field.embed(c))
            })
            .collect()
    };
    let entries: Vec<Vec<(Vec<i32>, u64)>> = prob.entries.iter().flatten().map(&mut embed).collect();
    let rhs_root = prob.rhs_root.map(|(base, k)| (embed(base), k));
    let rhs = if rhs_root.is_some() { Vec::new() } else { embed(prob.rhs) };
    for i in 0..rank {
        if emin[i] > emax[i] {
            emin[i] = 0;
            emax[i] = 0;
        }
    }
    Embedded { n, rank, emin, emax, entries, rhs, rhs_root }
}

fn det_mod<F: GridField>(field: &F, m: &mut [u64], n: usize) -> u64 {
    let mut det = field.one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| m[i * n + k] != 0) else {
            return 0;
        };
        if piv != k {
            for j in 0..n {
                m.swap(k * n + j, piv * n + j);
            }
            det = field.neg(det);
        }
        let pk = m[k * n + k];
        det = field.mul(det, pk);
        let pinv = field.inv(pk);
        for i in k + 1..n {
            let factor = field.mul(m[i * n + k], pinv);
            if factor == 0 {
                continue;
            }
            for j in k + 1..n {
                let t = field.mul(factor, m[k * n + j]);
                m[i * n + j] = field.sub(m[i * n + j], t);
            }
        }
    }
    det
}

/// `(det, rhs)` at the grid point with per-variable indices `ks`.
fn evaluate<F: GridField>(field: &F, emb: &Embedded, ks: &[usize], scratch: &mut Vec<u64>) -> (u64, u64) {
    let powers: Vec<Vec<u64>> = (0..emb.rank)
        .map(|i| {
            let t = field.point(ks[i]);
            let start = if emb.emin[i] < 0 {
                let ti = field.inv(t);
                (0..-emb.emin[i]).fold(field.one(), |acc, _| field.mul(acc, ti))
            } else {
                (0..emb.emin[i]).fold(field.one(), |acc, _| field.mul(acc, t))
            };
            let mut row = Vec::with_capacity((emb.emax[i] - emb.emin[i] + 1) as usize);
            let mut cur = start;
            for _ in emb.emin[i]..=emb.emax[i] {
                row.push(cur);
                cur = field.mul(cur, t);
            }
            row
        })
        .collect();
    let eval = |terms: &[(Vec<i32>, u64)]| {
        terms.iter().fold(0u64, |acc, (e, c)| {
            let v = (0..emb.rank).fold(*c, |v, i| field.mul(v, powers[i][(e[i] - emb.emin[i]) as usize]));
            field.add(acc, v)
        })
    };
    scratch.clear();
    scratch.extend(emb.entries.iter().map(|t| eval(t)));
    let rhs = match &emb.rhs_root {
        Some((base, k)) => {
            let b = eval(base);
            (0..*k).fold(field.one(), |acc, _| field.mul(acc, b))
        }
        None => eval(&emb.rhs),
    };
    (det_mod(field, scratch, emb.n), rhs)
}

fn decode(mut index: u64, counts: &[usize], ks: &mut [usize]) {
    for (k, &c) in ks.iter_mut().zip(counts) {
        *k = (index % c as u64) as usize;
        index /= c as u64;
    }
}

/// The sign `c` in `det = c * rhs` seen at the first grid point where `rhs`
/// does not vanish; `None` if neither sign matches there.
pub(super) fn probe_sign<F: GridField>(field: &F, prob: &GridProblem) -> Option<bool> {
    let emb = embed_problem(field, prob);
    let total: u64 = prob.counts.iter().map(|&c| c as u64).product();
    let mut ks = vec![0; emb.rank];
    let mut scratch = Vec::new();
    for index in 0..total {
        decode(index, &prob.counts, &mut ks);
        let (det, rhs) = evaluate(field, &emb, &ks, &mut scratch);
        if rhs != 0 {
            return if det == rhs {
                Some(false)
            } else if det == field.neg(rhs) {
                Some(true)
            } else {
                None
            };
        }
    }
    None
}

/// Whether `det = (negate ? -1 : 1) * rhs` at every grid point.
pub(super) fn holds_on_grid<F: GridField>(field: &F, prob: &GridProblem, negate: bool) -> bool {
    assert!(prob.counts.iter().all(|&c| c <= field.capacity()), "grid larger than the field");
    let emb = embed_problem(field, prob);
    let total: u64 = prob.counts.iter().map(|&c| c as u64).product();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(total.max(1) as usize);
    let failed = AtomicBool::new(false);
    let chunk = total.div_ceil(threads as u64);
    std::thread::scope(|scope| {
        for t in 0..threads as u64 {
            let (emb, failed, counts) = (&emb, &failed, &prob.counts);
            scope.spawn(move || {
                let mut ks = vec![0; emb.rank];
                let mut scratch = Vec::with_capacity(emb.n * emb.n);
                for index in t * chunk..((t + 1) * chunk).min(total) {
                    if index % 256 == 0 && failed.load(Ordering::Relaxed) {
                        return;
                    }
                    decode(index, counts, &mut ks);
                    let (det, rhs) = evaluate(field, emb, &ks, &mut scratch);
                    let target = if negate { field.neg(rhs) } else { rhs };
                    if det != target {
                        failed.store(true, Ordering::Relaxed);
                        return;
                    }
                }
            });
        }
    });
    !failed.load(Ordering::Relaxed)
}

/// Sum of absolute values of the (integer) coefficients, if all are integers.
pub(super) fn l1_norm(p: &LaurentPoly) -> Option<BigInt> {
    let mut acc = BigInt::zero();
    for (_, c) in p.terms() {
        match c {
            Scalar::Q(r) if r.is_integer() => acc += r.numer().abs(),
            Scalar::Q(_) => return None,
            Scalar::Fp { .. } => return None,
        }
    }
    Some(acc)
}
