//! The end-to-end acceptance suite: eleven exact property checks over the
//! presets and the fields `Q`, `F_2`, `F_3`, `F_5`.
//!
//! Each criterion returns a pass flag and a one-line summary; errors raised
//! along the way count as failures and are reported in the summary.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::FieldSpec;
use crate::kkring::KKRing;
use crate::laurent::{orbit_sum, LaurentPoly};
use crate::linalg::{EchelonSpan, Matrix};
use crate::rootdata::{Lattice, RootDatum, WeylElt, PRESETS};
use crate::soergelmod::local_iso;
use crate::soergelmod::{
    bs_bimodule, bs_module, catalog, char_of_word, coinvariant_image, decompose, end_algebra, subword_character,
    Catalog, Character, Decomposition, SummandLabel,
};
use crate::structalg::{gkm_check, psi_basis, psi_expand, steinberg_basis, PsiExpansion, TensorElement, WFunction};

/// Word-length bound for catalogs of the two presets with `|W| > 8`.
pub const LARGE_CATALOG_BOUND: usize = 4;

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "braid relations for y_w"),
    (2, "psi-basis certification"),
    (3, "tau image characterization"),
    (4, "Steinberg determinant"),
    (5, "coinvariant dimension"),
    (6, "endomorphism shadow of B(w_0)"),
    (7, "theta stability"),
    (8, "bimodule laws"),
    (9, "character bookkeeping"),
    (10, "Krull-Schmidt stability"),
    (11, "A1 fixtures"),
];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    /// `PASS [3] tau image characterization: ...`
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {} ({:.1}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

/// Runs one criterion; unknown ids fail.
pub fn run(id: u8, seed: u64) -> Outcome {
    let start = Instant::now();
    let title = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown criterion", |c| c.1);
    let result = match id {
        1 => braid(),
        2 => psi_certification(),
        3 => tau_image(seed),
        4 => steinberg(),
        5 => coinvariants(),
        6 => endomorphism_shadow(),
        7 => theta_stability(seed),
        8 => bimodule_laws(),
        9 => bookkeeping(seed),
        10 => krull_schmidt(seed),
        11 => fixtures(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (pass, detail) = result.unwrap_or_else(|e| (false, format!("error {}: {e}", e.kind())));
    Outcome { id, title, pass, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    CRITERIA.iter().map(|&(id, _)| run(id, seed)).collect()
}

type Check = Result<(bool, String)>;

fn presets() -> Vec<RootDatum> {
    PRESETS.iter().map(|n| RootDatum::preset(n).expect("preset")).collect()
}

fn name(d: &RootDatum) -> &str {
    d.name().unwrap_or("?")
}

/// Collects failing cases; the detail lists the first few.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, unit: &str) -> Check {
        if self.failures.is_empty() {
            Ok((true, format!("{} {unit} checked", self.checked)))
        } else {
            let shown: Vec<_> = self.failures.iter().take(3).cloned().collect();
            Ok((false, format!("{}/{} {unit} failed: {}", self.failures.len(), self.checked, shown.join("; "))))
        }
    }
}

fn braid() -> Check {
    let mut tally = Tally::default();
    for d in presets().iter().filter(|d| d.order() <= 12) {
        for field in FieldSpec::standard() {
            let kk = KKRing::new(d, field);
            for w in d.elements() {
                let words = d.reduced_words(w);
                let first = kk.y_word(&words[0]);
                for other in &words[1..] {
                    tally.check(kk.y_word(other) == first, || format!("{} {field} {}", name(d), d.element_name(w)));
                }
            }
        }
    }
    tally.finish("reduced-word pairs")
}

fn psi_certification() -> Check {
    let mut tally = Tally::default();
    for d in presets() {
        for field in FieldSpec::standard() {
            let cert = psi_basis(&d, field)?.certify(&d, field)?;
            tally.check(cert.pass(), || format!("{} {field}: {cert:?}", name(&d)));
        }
    }
    tally.finish("preset x field certificates")
}

fn random_monomial(field: FieldSpec, rank: usize, rng: &mut impl Rng) -> LaurentPoly {
    let e: Lattice = (0..rank).map(|_| rng.gen_range(-2..=2)).collect();
    let c = loop {
        let c = crate::linalg::random_scalar(field, rng);
        if !c.is_zero() {
            break c;
        }
    };
    LaurentPoly::monomial(field, e).scale(&c)
}

fn tau_image(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
    let mut tally = Tally::default();
    for d in presets() {
        for field in FieldSpec::standard() {
            let basis = psi_basis(&d, field)?;
            for _ in 0..200 {
                let f = TensorElement::random(field, d.rank(), 2, &mut rng).tau(&d, field);
                let gkm = gkm_check(&d, &f)?.pass();
                let round_trip = match psi_expand(&d, &basis, &f)? {
                    PsiExpansion::Coefficients(c) => {
                        let sum =
                            c.iter().fold(WFunction::zero(&d, field), |acc, (w, a)| acc.add(&basis.get(*w).scale(a)));
                        sum == f
                    }
                    PsiExpansion::Fail(_) => false,
                };
                tally.check(gkm && round_trip, || format!("{} {field} tau image", name(&d)));
            }
            for _ in 0..200 {
                let mut f = TensorElement::random(field, d.rank(), 2, &mut rng).tau(&d, field);
                let w = WeylElt(rng.gen_range(0..d.order()) as u32);
                f.set(w, f.value(w) + &random_monomial(field, d.rank(), &mut rng));
                let report = gkm_check(&d, &f)?;
                let mut ok = !report.pass();
                for v in &report.violations {
                    let other = d.mul(v.w, d.reflection(&v.coroot)?);
                    let oracle = (f.value(v.w) - f.value(other)).coset_image(&v.coroot)?;
                    ok &= (v.w == w || other == w) && !oracle.is_zero() && oracle == v.witness;
                }
                ok &= matches!(psi_expand(&d, &basis, &f)?, PsiExpansion::Fail(_));
                tally.check(ok, || format!("{} {field} perturbed at {}", name(&d), d.element_name(w)));
            }
        }
    }
    tally.finish("functions")
}

fn steinberg() -> Check {
    let mut tally = Tally::default();
    let mut conventions = Vec::new();
    for d in presets() {
        let fields: Vec<FieldSpec> =
            if d.order() <= 12 { FieldSpec::standard().to_vec() } else { vec![FieldSpec::Q, FieldSpec::prime(2)?] };
        for field in fields {
            let b = steinberg_basis(&d, field)?;
            tally.check(b.certificate.holds, || format!("{} {field}", name(&d)));
            if field == FieldSpec::Q {
                let c = b.convention;
                conventions.push(format!(
                    "{}:{}/{}",
                    name(&d),
                    if c.left_descents { "left" } else { "right" },
                    if c.direct { "direct" } else { "inverse" }
                ));
            }
        }
    }
    let (pass, detail) = tally.finish("determinant identities")?;
    Ok((pass, format!("{detail}; conventions {}", conventions.join(" "))))
}

fn coinvariants() -> Check {
    let mut tally = Tally::default();
    for d in presets() {
        for field in FieldSpec::standard() {
            let a = coinvariant_image(&d, field)?;
            tally.check(a.dim == d.order() && a.is_commutative && a.is_local, || {
                format!("{} {field}: dim {} local {} commutative {}", name(&d), a.dim, a.is_local, a.is_commutative)
            });
        }
    }
    tally.finish("preset x field algebras")
}

/// `tau(e_u (x) e_w)` reduced by the augmentation on the right factor is
/// `e_u`; its image in `End(B(w_0))` must span exactly the coinvariant image.
fn endomorphism_shadow() -> Check {
    let mut tally = Tally::default();
    for preset in ["A1", "A2"] {
        let d = RootDatum::preset(preset)?;
        for field in FieldSpec::standard() {
            let st = steinberg_basis(&d, field)?;
            let m = bs_module(&d, d.word(d.longest()), field)?;
            let n = m.dim();
            let mut span = EchelonSpan::new(field, n * n);
            for u in d.elements() {
                for w in d.elements() {
                    let t = TensorElement::pure(st.element(u).clone(), st.element(w).clone());
                    let reduced: LaurentPoly = t
                        .summands
                        .iter()
                        .fold(LaurentPoly::zero(field, d.rank()), |acc, (a, b)| &acc + &a.scale(&b.augment()));
                    span.insert(&m.act_poly(&reduced).to_vec());
                }
            }
            let coinv = coinvariant_image(&d, field)?;
            let mut joint = span.clone();
            let inside = coinv.basis.iter().all(|b| !joint.insert(&b.to_vec()));
            tally.check(span.dim() == d.order() && inside && coinv.dim == d.order(), || {
                format!("{preset} {field}: span {} coinvariants {}", span.dim(), coinv.dim)
            });
        }
    }
    tally.finish("preset x field spans")
}

fn theta_stability(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
    let mut tally = Tally::default();
    for preset in ["A1", "A2", "B2", "G2"] {
        let d = RootDatum::preset(preset)?;
        let exhaustive = d.order() <= 6;
        for field in FieldSpec::standard() {
            let tensors: Vec<TensorElement> =
                (0..3).map(|_| TensorElement::random(field, d.rank(), 2, &mut rng)).collect();
            let pairs: Vec<(WeylElt, WeylElt)> = if exhaustive {
                d.elements().flat_map(|w| d.elements().map(move |v| (w, v))).collect()
            } else {
                (0..50)
                    .map(|_| {
                        let mut pick = || WeylElt(rng.gen_range(0..d.order()) as u32);
                        (pick(), pick())
                    })
                    .collect()
            };
            for (w, v) in pairs {
                for t in &tensors {
                    let f = t.tau(&d, field);
                    let g = f.theta_action(&d, w, v);
                    let ok = gkm_check(&d, &g)?.pass() && g == t.twist(&d, w, v).tau(&d, field);
                    tally.check(ok, || format!("{preset} {field} ({}, {})", d.element_name(w), d.element_name(v)));
                }
            }
        }
    }
    tally.finish("theta images")
}

fn words_up_to(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..rank).map(move |s| {
                    let mut x = w.clone();
                    x.push(s);
                    x
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn bimodule_laws() -> Check {
    let mut tally = Tally::default();
    for d in presets() {
        for field in FieldSpec::standard() {
            let invariants: Vec<LaurentPoly> =
                (0..d.rank()).map(|i| orbit_sum(&d, &d.fundamental_coweight(i), field)).collect();
            for word in words_up_to(d.rank(), 4) {
                let bm = bs_bimodule(&d, &word, field)?;
                let mut ok = bm.specialize() == bs_module(&d, &word, field)?;
                for m in &invariants {
                    ok &= bm.acts_centrally(&d, m)?;
                }
                tally.check(ok, || format!("{} {field} {word:?}", name(&d)));
            }
        }
    }
    tally.finish("bimodules")
}

/// Catalog of `d` over `field`, bounded for the two larger presets.
pub fn acceptance_catalog(d: &RootDatum, field: FieldSpec, seed: u64) -> Result<Catalog> {
    let bound = (d.order() > 8).then_some(LARGE_CATALOG_BOUND);
    catalog(d, field, bound, seed)
}

/// Labels of the summands of `dec` against `cat`, in order.
fn identify(dec: &Decomposition, cat: &Catalog) -> Result<Vec<Option<WeylElt>>> {
    dec.summands
        .iter()
        .map(|s| {
            for e in &cat.entries {
                if e.module.dim() == s.module.dim() && local_iso(&s.module, &e.module)?.is_some() {
                    return Ok(Some(e.w));
                }
            }
            Ok(None)
        })
        .collect()
}

fn bookkeeping(seed: u64) -> Check {
    let mut tally = Tally::default();
    for d in presets() {
        for word in words_up_to(d.rank(), 6) {
            tally.check(char_of_word(&d, &word) == subword_character(&d, &word), || format!("{} {word:?}", name(&d)));
        }
    }
    let mut bounds = Vec::new();
    for d in presets() {
        for field in FieldSpec::standard() {
            let cat = acceptance_catalog(&d, field, seed)?;
            if let (Some(b), FieldSpec::Rational) = (cat.length_bound, field) {
                bounds.push(format!("{}<={b}", name(&d)));
            }
            for e in &cat.entries {
                let mut total = Character::zero();
                let mut labelled = true;
                for (label, _, mult) in &e.decomposition {
                    match label {
                        SummandLabel::D(v) => {
                            total = total.add(&cat.get(*v).expect("catalogued").character.scale(*mult as u64))
                        }
                        SummandLabel::Unidentified => labelled = false,
                    }
                }
                tally.check(labelled && total == char_of_word(&d, &e.word), || {
                    format!("{} {field} B({})", name(&d), d.element_name(e.w))
                });
            }
            if d.order() <= 8 {
                for word in words_up_to(d.rank(), 3).into_iter().filter(|w| d.length(d.element_of_word(w)) < w.len()) {
                    let dec = decompose(&bs_module(&d, &word, field)?, seed)?;
                    let labels = identify(&dec, &cat)?;
                    let mut total = Character::zero();
                    let mut labelled = true;
                    for (s, l) in dec.summands.iter().zip(&labels) {
                        match l {
                            Some(v) => {
                                total = total.add(&cat.get(*v).expect("catalogued").character.scale(s.mult as u64))
                            }
                            None => labelled = false,
                        }
                    }
                    tally.check(labelled && total == char_of_word(&d, &word), || {
                        format!("{} {field} non-reduced {word:?}", name(&d))
                    });
                }
            }
        }
    }
    let (pass, detail) = tally.finish("characters")?;
    Ok((pass, format!("{detail}; catalog length bounds {}", bounds.join(" "))))
}

/// `P L U` with `P` a random permutation and `L`, `U` unitriangular with
/// sparse random entries: invertible, integral with integral inverse over
/// `Q`, and without the coefficient growth of dense base changes.
fn random_base_change(field: FieldSpec, n: usize, rng: &mut impl Rng) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let p = Matrix::from_fn(field, n, n, |i, j| if perm[i] == j { field.one() } else { field.zero() });
    let mut tri = |lower: bool| {
        Matrix::from_fn(field, n, n, |i, j| match (i == j, (i > j) == lower) {
            (true, _) => field.one(),
            (false, true) if rng.gen_range(0..n) < 2 => crate::linalg::random_scalar(field, rng),
            (false, true) => field.zero(),
            (false, false) => field.zero(),
        })
    };
    let (l, u) = (tri(true), tri(false));
    p.mul(&l).mul(&u)
}

/// Decompositions agree under random base changes. For an involution `w`
/// whose reversed canonical word differs, both words have the same
/// decomposition shape, isomorphic top summands `D_w`, and lower labels
/// that correspond under `v -> v^{-1}`.
fn krull_schmidt(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 10);
    let mut tally = Tally::default();
    for d in presets() {
        let preset = name(&d).to_string();
        for field in FieldSpec::standard() {
            let cat = acceptance_catalog(&d, field, seed)?;
            let bound = cat.length_bound.unwrap_or(usize::MAX);
            for w in d.elements().filter(|&w| d.length(w) <= bound) {
                let word = d.word(w).to_vec();
                let m = bs_module(&d, &word, field)?;
                let dec = decompose(&m, seed)?;
                for k in 0..5 {
                    let p = random_base_change(field, m.dim(), &mut rng);
                    let conj = decompose(&m.conjugate(&p).expect("invertible"), seed + k)?;
                    tally.check(conj.equivalent(&dec)?, || {
                        format!("{preset} {field} B({}) conjugation {k}", d.element_name(w))
                    });
                }
                let rev: Vec<usize> = word.iter().rev().copied().collect();
                if rev != word && d.element_of_word(&rev) == w {
                    let other = decompose(&bs_module(&d, &rev, field)?, seed)?;
                    let (a, b) = (identify(&dec, &cat)?, identify(&other, &cat)?);
                    let count = |labels: &[Option<WeylElt>], dec: &Decomposition, invert: bool| {
                        let mut out = BTreeMap::new();
                        for (l, s) in labels.iter().zip(&dec.summands) {
                            let key = l.map(|v| if invert { d.inverse(v) } else { v });
                            *out.entry(key).or_insert(0) += s.mult;
                        }
                        out
                    };
                    let ok = dec.shape() == other.shape()
                        && a.iter().all(Option::is_some)
                        && count(&a, &dec, true) == count(&b, &other, false)
                        && count(&a, &dec, false).get(&Some(w)) == Some(&1);
                    tally.check(ok, || format!("{preset} {field} reversal of {}", d.element_name(w)));
                }
            }
        }
    }
    tally.finish("decompositions")
}

fn fixtures() -> Check {
    let d = RootDatum::preset("A1")?;
    let q = FieldSpec::Q;
    let f2 = FieldSpec::prime(2)?;
    let y = |e: i32| LaurentPoly::monomial(q, Lattice::from_slice(&[e]));
    let s = d.simple(0);
    let e = WeylElt::IDENTITY;
    let mut tally = Tally::default();

    let psi = psi_basis(&d, q)?;
    tally.check(psi.get(e).values() == [y(0), y(2)], || "psi_e".into());
    tally.check(psi.get(s).values() == [LaurentPoly::zero(q, 1), &y(0) - &y(2)], || "psi_s".into());

    let t = TensorElement::pure(y(1), y(1)).tau(&d, q);
    tally.check(t.values() == [y(2), y(0)], || "tau(y (x) y)".into());
    let expected = BTreeMap::from([(e, y(2)), (s, &y(0) + &y(2))]);
    tally.check(psi_expand(&d, &psi, &t)? == PsiExpansion::Coefficients(expected), || {
        "expansion of tau(y (x) y)".into()
    });

    let st = steinberg_basis(&d, q)?;
    tally.check(st.certificate.holds && st.certificate.det() == &y(1) - &y(-1), || "Steinberg det".into());

    let b = bs_module(&d, &[0], q)?;
    tally.check(b.action()[0] == Matrix::from_i64_rows(q, &[vec![0, -1], vec![1, 2]]), || "B(s) over Q".into());
    let b2 = bs_module(&d, &[0], f2)?;
    tally.check(b2.action()[0] == Matrix::from_i64_rows(f2, &[vec![0, 1], vec![1, 0]]), || "B(s) over F2".into());

    for field in [q, f2] {
        let end = end_algebra(&bs_module(&d, &[0], field)?, 0)?;
        tally.check(end.dim == 2 && end.is_local, || format!("End(B(s)) over {field}"));
        let m = bs_module(&d, &[0], field)?;
        let g = m.action()[0].sub(&Matrix::identity(field, 2));
        tally.check(g.mul(&g).is_zero(), || format!("(g - 1)^2 over {field}"));
    }
    tally.finish("fixtures")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_pass() {
        let o = run(11, 0);
        assert!(o.pass, "{}", o.line());
        assert!(o.line().starts_with("PASS [11] A1 fixtures"));
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run(12, 0).pass);
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(words_up_to(2, 2).len(), 7);
        assert_eq!(words_up_to(3, 0), vec![Vec::<usize>::new()]);
    }
}
