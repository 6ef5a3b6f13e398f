//! Adjoint-type root data and their Weyl groups.
//!
//! Lattice vectors are written in the basis of fundamental coweights, so the
//! cocharacter lattice is `Z^rank` and the pairing with the simple root
//! `alpha_i` is the `i`-th coordinate. The simple coroot `alpha_i^vee` is the
//! `i`-th column of the Cartan matrix.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// A cocharacter, in fundamental-coweight coordinates.
pub type Lattice = SmallVec<[i32; 4]>;

/// Element of the Weyl group, as an index into [`RootDatum::elements`].
///
/// Indices follow the canonical total order (length, then canonical word),
/// which refines the Bruhat order; the identity is index 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt(pub u32);

impl WeylElt {
    pub const IDENTITY: WeylElt = WeylElt(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
struct ElementData {
    matrix: Vec<i32>,
    length: usize,
    word: Vec<usize>,
    inverse: WeylElt,
}

/// Named presets accepted on the command line.
pub const PRESETS: [&str; 6] = ["A1", "A1xA1", "A2", "B2", "A3", "G2"];

#[derive(Clone, Debug)]
pub struct RootDatum {
    name: Option<String>,
    rank: usize,
    cartan: Vec<Vec<i32>>,
    simple_coroots: Vec<Lattice>,
    positive_coroots: Vec<Lattice>,
    positive_heights: Vec<Vec<i32>>,
    coroot_lookup: HashMap<Lattice, (usize, bool)>,
    elements: Vec<ElementData>,
    mul: Vec<u32>,
    bruhat: Vec<bool>,
}

#[derive(Deserialize)]
struct DatumFile {
    cartan: Vec<Vec<i32>>,
    #[serde(default)]
    field: Option<FieldSpec>,
}

impl RootDatum {
    /// Builds the adjoint root datum of a Cartan matrix of finite type.
    pub fn from_cartan(cartan: Vec<Vec<i32>>) -> Result<Self> {
        let rank = cartan.len();
        if rank == 0 {
            return Err(Error::NotFiniteType("empty Cartan matrix".into()));
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::NotFiniteType("Cartan matrix is not square".into()));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return Err(Error::NotFiniteType(format!("diagonal entry ({i},{j}) is {a}")));
                }
                if i != j && (a > 0 || (a == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::NotFiniteType(format!("invalid off-diagonal entry ({i},{j})")));
                }
            }
        }
        let bound = 10usize.saturating_mul(4usize.saturating_pow(rank as u32));

        let simple_coroots: Vec<Lattice> = (0..rank).map(|i| (0..rank).map(|j| cartan[j][i]).collect()).collect();

        // Coroots in simple-coroot coordinates: reflection orbit of the simple ones.
        let pair = |c: &[i32], i: usize| -> i32 { (0..rank).map(|j| c[j] * cartan[i][j]).sum() };
        let mut seen: HashMap<Vec<i32>, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..rank {
            let mut c = vec![0; rank];
            c[i] = 1;
            seen.insert(c.clone(), ());
            queue.push_back(c);
        }
        while let Some(c) = queue.pop_front() {
            for i in 0..rank {
                let mut next = c.clone();
                next[i] -= pair(&c, i);
                if !seen.contains_key(&next) {
                    if seen.len() >= bound {
                        return Err(Error::NotFiniteType(format!("more than {bound} coroots")));
                    }
                    seen.insert(next.clone(), ());
                    queue.push_back(next);
                }
            }
        }
        let mut positive_heights: Vec<Vec<i32>> = seen.into_keys().filter(|c| c.iter().all(|&x| x >= 0)).collect();
        positive_heights.sort_by(|a, b| {
            let ha: i32 = a.iter().sum();
            let hb: i32 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let positive_coroots: Vec<Lattice> = positive_heights
            .iter()
            .map(|c| (0..rank).map(|k| (0..rank).map(|j| c[j] * simple_coroots[j][k]).sum()).collect())
            .collect();
        let mut coroot_lookup = HashMap::new();
        for (idx, v) in positive_coroots.iter().enumerate() {
            coroot_lookup.insert(v.clone(), (idx, true));
            coroot_lookup.insert(v.iter().map(|x| -x).collect(), (idx, false));
        }

        // Weyl group by breadth-first closure of the simple reflection matrices.
        let simple_mats: Vec<Vec<i32>> = (0..rank)
            .map(|i| {
                let mut m = identity(rank);
                for j in 0..rank {
                    m[j * rank + i] -= simple_coroots[i][j];
                }
                m
            })
            .collect();
        let mut found: HashMap<Vec<i32>, ()> = HashMap::new();
        let mut order = vec![identity(rank)];
        found.insert(identity(rank), ());
        let mut head = 0;
        while head < order.len() {
            let m = order[head].clone();
            head += 1;
            for s in &simple_mats {
                let next = matmul(s, &m, rank);
                if !found.contains_key(&next) {
                    if found.len() >= bound {
                        return Err(Error::NotFiniteType(format!("Weyl group has more than {bound} elements")));
                    }
                    found.insert(next.clone(), ());
                    order.push(next);
                }
            }
        }

        let mut datum = RootDatum {
            name: None,
            rank,
            cartan,
            simple_coroots,
            positive_coroots,
            positive_heights,
            coroot_lookup,
            elements: Vec::new(),
            mul: Vec::new(),
            bruhat: Vec::new(),
        };

        // Lengths, then canonical words by increasing length.
        let mut raw: Vec<(Vec<i32>, usize)> = order
            .into_iter()
            .map(|m| {
                let len =
                    datum.positive_coroots.iter().filter(|c| !datum.is_positive_coroot(&apply(&m, c, rank))).count();
                (m, len)
            })
            .collect();
        raw.sort_by_key(|(_, l)| *l);
        let mut words: HashMap<Vec<i32>, Vec<usize>> = HashMap::new();
        for (m, len) in &raw {
            if *len == 0 {
                words.insert(m.clone(), vec![]);
                continue;
            }
            // Lexicographically least reduced word: smallest left descent first.
            let (i, rest) = (0..rank)
                .find_map(|i| {
                    let sm = matmul(&simple_mats[i], m, rank);
                    words.get(&sm).filter(|w| w.len() + 1 == *len).map(|w| (i, w.clone()))
                })
                .expect("every nonidentity element has a left descent");
            let mut word = vec![i];
            word.extend(rest);
            words.insert(m.clone(), word);
        }
        let mut elems: Vec<ElementData> = raw
            .into_iter()
            .map(|(m, length)| {
                let word = words[&m].clone();
                ElementData { matrix: m, length, word, inverse: WeylElt(0) }
            })
            .collect();
        elems.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.word.cmp(&b.word)));
        let index: HashMap<Vec<i32>, u32> =
            elems.iter().enumerate().map(|(k, e)| (e.matrix.clone(), k as u32)).collect();
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = index[&matmul(&elems[a].matrix, &elems[b].matrix, rank)];
            }
        }
        for a in 0..n {
            let inv = (0..n).find(|&b| mul[a * n + b] == 0).expect("group element has an inverse");
            elems[a].inverse = WeylElt(inv as u32);
        }
        datum.elements = elems;
        datum.mul = mul;
        datum.bruhat = datum.compute_bruhat();
        Ok(datum)
    }

    /// One of the named presets in [`PRESETS`].
    pub fn preset(name: &str) -> Result<Self> {
        let cartan = match name {
            "A1" => vec![vec![2]],
            "A1xA1" => vec![vec![2, 0], vec![0, 2]],
            "A2" => vec![vec![2, -1], vec![-1, 2]],
            "B2" => vec![vec![2, -2], vec![-1, 2]],
            "A3" => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            "G2" => vec![vec![2, -1], vec![-3, 2]],
            other => return Err(Error::Parse(format!("unknown preset `{other}`"))),
        };
        let mut datum = Self::from_cartan(cartan)?;
        datum.name = Some(name.to_string());
        Ok(datum)
    }

    /// Parses the `{"cartan": [[...]]}` datum schema (other keys are ignored).
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with_field(text).map(|(d, _)| d)
    }

    /// Like [`RootDatum::from_json`], also returning the optional
    /// `"field": {"kind": "Q"} | {"kind": "Fp", "p": P}` entry.
    pub fn from_json_with_field(text: &str) -> Result<(Self, Option<FieldSpec>)> {
        let file: DatumFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("datum JSON: {e}")))?;
        let field = match file.field {
            Some(FieldSpec::Prime { p }) => Some(FieldSpec::prime(p)?),
            other => other,
        };
        Ok((Self::from_cartan(file.cartan)?, field))
    }

    fn compute_bruhat(&self) -> Vec<bool> {
        let n = self.order();
        let mut table = vec![false; n * n];
        for w in 0..n {
            let we = WeylElt(w as u32);
            if self.length(we) == 0 {
                table[w * n] = true;
                continue;
            }
            // Lifting property: if sw < w then u <= w iff min(u, su) <= sw.
            let s = self.word(we)[0];
            let sw = self.simple_left(s, we).index();
            for u in 0..n {
                let ue = WeylElt(u as u32);
                let su = self.simple_left(s, ue);
                let low = if self.length(su) < self.length(ue) { su.index() } else { u };
                table[u * n + w] = table[low * n + sw];
            }
        }
        table
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn simple_coroot(&self, i: usize) -> &Lattice {
        &self.simple_coroots[i]
    }

    /// Positive coroots ordered by height, then lexicographically in
    /// simple-coroot coordinates, descending (simple coroots come in index order).
    pub fn positive_coroots(&self) -> &[Lattice] {
        &self.positive_coroots
    }

    /// Coordinates of the `k`-th positive coroot in the simple-coroot basis.
    pub fn coroot_height_vector(&self, k: usize) -> &[i32] {
        &self.positive_heights[k]
    }

    /// Position of `v` in [`positive_coroots`](Self::positive_coroots) and
    /// whether `v` itself is positive, if `v` is a coroot.
    pub fn coroot_position(&self, v: &[i32]) -> Option<(usize, bool)> {
        self.coroot_lookup.get(v).copied()
    }

    pub fn is_positive_coroot(&self, v: &[i32]) -> bool {
        matches!(self.coroot_position(v), Some((_, true)))
    }

    /// The fundamental coweight `varpi_i^vee`.
    pub fn fundamental_coweight(&self, i: usize) -> Lattice {
        let mut v: Lattice = SmallVec::from_elem(0, self.rank);
        v[i] = 1;
        v
    }

    /// Half the sum of the positive coroots.
    pub fn rho_vee(&self) -> Lattice {
        let mut sum: Lattice = SmallVec::from_elem(0, self.rank);
        for c in &self.positive_coroots {
            for (s, x) in sum.iter_mut().zip(c) {
                *s += x;
            }
        }
        sum.iter()
            .map(|x| {
                debug_assert!(x % 2 == 0);
                x / 2
            })
            .collect()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// All elements in canonical order: identity first, longest last.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = WeylElt> + DoubleEndedIterator + Clone {
        (0..self.elements.len() as u32).map(WeylElt)
    }

    pub fn longest(&self) -> WeylElt {
        WeylElt(self.elements.len() as u32 - 1)
    }

    pub fn length(&self, w: WeylElt) -> usize {
        self.elements[w.index()].length
    }

    /// Lexicographically least reduced word (0-based letters).
    pub fn word(&self, w: WeylElt) -> &[usize] {
        &self.elements[w.index()].word
    }

    /// Row-major `rank x rank` matrix acting on fundamental-coweight coordinates.
    pub fn matrix(&self, w: WeylElt) -> &[i32] {
        &self.elements[w.index()].matrix
    }

    pub fn inverse(&self, w: WeylElt) -> WeylElt {
        self.elements[w.index()].inverse
    }

    pub fn mul(&self, a: WeylElt, b: WeylElt) -> WeylElt {
        WeylElt(self.mul[a.index() * self.order() + b.index()])
    }

    pub fn simple(&self, i: usize) -> WeylElt {
        self.element_of_word(&[i])
    }

    pub fn simple_left(&self, i: usize, w: WeylElt) -> WeylElt {
        self.mul(WeylElt(1 + i as u32), w)
    }

    /// Product of the simple reflections along `word` (any word, not
    /// necessarily reduced).
    pub fn element_of_word(&self, word: &[usize]) -> WeylElt {
        word.iter().rev().fold(WeylElt::IDENTITY, |acc, &i| self.mul(WeylElt(1 + i as u32), acc))
    }

    /// `w(lambda)`.
    pub fn act(&self, w: WeylElt, lambda: &[i32]) -> Lattice {
        apply(self.matrix(w), lambda, self.rank)
    }

    pub fn bruhat_leq(&self, u: WeylElt, w: WeylElt) -> bool {
        self.bruhat[u.index() * self.order() + w.index()]
    }

    /// Indices of positive coroots sent to negative coroots by `w`.
    pub fn inversions(&self, w: WeylElt) -> Vec<usize> {
        (0..self.positive_coroots.len())
            .filter(|&k| !self.is_positive_coroot(&self.act(w, &self.positive_coroots[k])))
            .collect()
    }

    /// Is `w s_i < w`?
    pub fn is_right_descent(&self, w: WeylElt, i: usize) -> bool {
        self.length(self.mul(w, self.simple(i))) < self.length(w)
    }

    /// Is `s_i w < w`?
    pub fn is_left_descent(&self, w: WeylElt, i: usize) -> bool {
        self.length(self.simple_left(i, w)) < self.length(w)
    }

    /// The reflection `s_beta` for a coroot `beta` (of either sign).
    pub fn reflection(&self, coroot: &[i32]) -> Result<WeylElt> {
        let (k, _) = self.coroot_position(coroot).ok_or_else(|| Error::NotACoroot(coroot.to_vec()))?;
        let target = &self.positive_coroots[k];
        let neg: Lattice = target.iter().map(|x| -x).collect();
        for u in self.elements() {
            for i in 0..self.rank {
                let image = self.act(u, &self.simple_coroots[i]);
                if image == *target || image == neg {
                    return Ok(self.mul(self.mul(u, self.simple(i)), self.inverse(u)));
                }
            }
        }
        unreachable!("every coroot is W-conjugate to a simple coroot")
    }

    /// Every reduced word of `w`, in lexicographic order.
    pub fn reduced_words(&self, w: WeylElt) -> Vec<Vec<usize>> {
        if self.length(w) == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..self.rank {
            if self.is_left_descent(w, i) {
                for mut tail in self.reduced_words(self.simple_left(i, w)) {
                    tail.insert(0, i);
                    out.push(tail);
                }
            }
        }
        out
    }

    /// Parses `e` or a word like `s1s2s1`, `1,2,1` or `s1,s2,s1` (1-based letters).
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(vec![]);
        }
        let parts: Vec<&str> = if text.contains(',') {
            text.split(',').collect()
        } else if text.starts_with('s') {
            text.split('s').filter(|p| !p.is_empty()).collect()
        } else {
            vec![text]
        };
        parts
            .into_iter()
            .map(|p| {
                let k: usize = p
                    .trim()
                    .trim_start_matches('s')
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad word letter `{p}`")))?;
                if k == 0 || k > self.rank {
                    return Err(Error::Parse(format!("word letter {k} outside 1..={}", self.rank)));
                }
                Ok(k - 1)
            })
            .collect()
    }

    /// Human-readable name of an element: `e` or `s1s2...`.
    pub fn element_name(&self, w: WeylElt) -> String {
        word_name(self.word(w))
    }

    /// Short identifying string: the Cartan matrix.
    pub fn fingerprint(&self) -> DatumFingerprint {
        DatumFingerprint { preset: self.name.clone(), cartan: self.cartan.clone() }
    }
}

/// `e` for the empty word, else `s1s2...` with 1-based letters.
pub fn word_name(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|i| format!("s{}", i + 1)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumFingerprint {
    pub preset: Option<String>,
    pub cartan: Vec<Vec<i32>>,
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "cartan {:?}", self.cartan),
        }
    }
}

fn identity(n: usize) -> Vec<i32> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn matmul(a: &[i32], b: &[i32], n: usize) -> Vec<i32> {
    let mut c = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    c[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    c
}

fn apply(m: &[i32], v: &[i32], n: usize) -> Lattice {
    (0..n).map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i32]) -> Lattice {
        v.iter().copied().collect()
    }

    #[test]
    fn a1_datum() {
        let d = RootDatum::preset("A1").unwrap();
        assert_eq!(d.positive_coroots(), &[lv(&[2])]);
        assert_eq!(d.order(), 2);
        let s = d.simple(0);
        assert_eq!(d.act(s, &[1]), lv(&[-1]));
        assert_eq!(d.reflection(&[2]).unwrap(), s);
        assert_eq!(d.reflection(&[-2]).unwrap(), s);
        assert!(matches!(d.reflection(&[1]), Err(Error::NotACoroot(_))));
    }

    #[test]
    fn type_sizes() {
        for (name, roots, order, top) in
            [("A1", 1, 2, 1), ("A1xA1", 2, 4, 2), ("A2", 3, 6, 3), ("B2", 4, 8, 4), ("G2", 6, 12, 6), ("A3", 6, 24, 6)]
        {
            let d = RootDatum::preset(name).unwrap();
            assert_eq!(d.positive_coroots().len(), roots, "{name}");
            assert_eq!(d.order(), order, "{name}");
            assert_eq!(d.length(d.longest()), top, "{name}");
            assert_eq!(d.inversions(d.longest()).len(), roots);
            assert!(d.rho_vee().iter().all(|&x| x == 1), "{name}: rho is the sum of varpi");
        }
        let g2t = RootDatum::from_cartan(vec![vec![2, -3], vec![-1, 2]]).unwrap();
        assert_eq!(g2t.order(), 12);
    }

    #[test]
    fn a2_lengths_and_bruhat() {
        let d = RootDatum::preset("A2").unwrap();
        let lens: Vec<usize> = d.elements().map(|w| d.length(w)).collect();
        assert_eq!(lens, vec![0, 1, 1, 2, 2, 3]);
        let st = d.element_of_word(&[0, 1]);
        let ts = d.element_of_word(&[1, 0]);
        assert!(!d.bruhat_leq(st, ts));
        assert!(d.bruhat_leq(st, st));
        assert_eq!(d.word(d.longest()), &[0, 1, 0]);
        assert_eq!(d.reduced_words(d.longest()), vec![vec![0, 1, 0], vec![1, 0, 1]]);
        // s_1(alpha_2) = alpha_1 + alpha_2
        let a1 = d.simple_coroot(0).clone();
        let a2 = d.simple_coroot(1).clone();
        let sum: Lattice = a1.iter().zip(&a2).map(|(x, y)| x + y).collect();
        assert_eq!(d.act(d.simple(0), &a2), sum);
        assert_eq!(d.reflection(&sum).unwrap(), d.longest());
        assert_eq!(d.inversions(d.simple(0)), vec![0]);
    }

    #[test]
    fn rejects_bad_cartan() {
        assert!(RootDatum::from_cartan(vec![vec![2, -1], vec![-1, 1]]).is_err());
        // affine A1
        assert!(matches!(RootDatum::from_cartan(vec![vec![2, -2], vec![-2, 2]]), Err(Error::NotFiniteType(_))));
        assert!(RootDatum::from_cartan(vec![vec![2, -1]]).is_err());
    }

    #[test]
    fn parse_words() {
        let d = RootDatum::preset("A2").unwrap();
        assert_eq!(d.parse_word("1,2").unwrap(), vec![0, 1]);
        assert_eq!(d.parse_word("s2s1").unwrap(), vec![1, 0]);
        assert_eq!(d.parse_word("e").unwrap(), Vec::<usize>::new());
        assert_eq!(d.parse_word("s1,s2,s1").unwrap(), vec![0, 1, 0]);
        assert!(d.parse_word("3").is_err());
    }

    #[test]
    fn datum_json() {
        let (d, f) =
            RootDatum::from_json_with_field(r#"{"cartan": [[2, -1], [-3, 2]], "field": {"kind": "Fp", "p": 2}}"#)
                .unwrap();
        assert_eq!(d.order(), 12);
        assert_eq!(f, Some(FieldSpec::Prime { p: 2 }));
        let (_, f) = RootDatum::from_json_with_field(r#"{"cartan": [[2]]}"#).unwrap();
        assert_eq!(f, None);
        assert_eq!(
            RootDatum::from_json_with_field(r#"{"cartan": [[2]], "field": {"kind": "Fp", "p": 4}}"#).unwrap_err(),
            Error::NotPrime(4)
        );
        assert!(matches!(RootDatum::from_json("{\"cartan\": 3}"), Err(Error::Parse(_))));
    }
}
