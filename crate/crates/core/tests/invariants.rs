//! Randomized structural invariants across presets and fields.

use kksoergel::kkring::KKRing;
use kksoergel::soergelmod::{bs_module, char_of_word, decompose, demazure_split, hom_space, subword_character};
use kksoergel::structalg::{
    gkm_check, psi_basis, psi_expand, random_poly, steinberg_basis, steinberg_expand, PsiExpansion, TensorElement,
    WFunction,
};
use kksoergel::{FieldSpec, LaurentPoly, RootDatum};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SMALL: [&str; 4] = ["A1", "A1xA1", "A2", "B2"];
const ALL: [&str; 6] = ["A1", "A1xA1", "A2", "B2", "A3", "G2"];

fn field(k: usize) -> FieldSpec {
    FieldSpec::standard()[k % 4]
}

fn word(d: &RootDatum, letters: &[usize]) -> Vec<usize> {
    letters.iter().map(|&s| s % d.rank()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weyl_group_is_a_group(p in 0..ALL.len(), a in 0usize..48, b in 0usize..48, c in 0usize..48) {
        let d = RootDatum::preset(ALL[p]).unwrap();
        let n = d.order();
        let (a, b, c) = (d.elements().nth(a % n).unwrap(), d.elements().nth(b % n).unwrap(), d.elements().nth(c % n).unwrap());
        prop_assert_eq!(d.mul(d.mul(a, b), c), d.mul(a, d.mul(b, c)));
        prop_assert_eq!(d.length(d.inverse(a)), d.length(a));
        prop_assert!(d.length(d.mul(a, b)) <= d.length(a) + d.length(b));
        prop_assert!(d.bruhat_leq(a, d.longest()));
        prop_assert_eq!(d.element_of_word(d.word(a)), a);
        prop_assert_eq!(d.length(d.mul(a, d.longest())), d.length(d.longest()) - d.length(a));
    }

    #[test]
    fn characters_count_subwords(p in 0..ALL.len(), letters in prop::collection::vec(0usize..3, 0..7)) {
        let d = RootDatum::preset(ALL[p]).unwrap();
        let w = word(&d, &letters);
        let ch = char_of_word(&d, &w);
        prop_assert_eq!(&ch, &subword_character(&d, &w));
        prop_assert_eq!(ch.total(), 1u64 << w.len());
    }

    #[test]
    fn demazure_splitting_recombines(p in 0..SMALL.len(), k in 0usize..4, seed in any::<u64>()) {
        let d = RootDatum::preset(SMALL[p]).unwrap();
        let f = field(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_poly(f, d.rank(), 4, 3, &mut rng);
        for s in 0..d.rank() {
            let (a, b) = demazure_split(&d, &g, s).unwrap();
            let sim = d.simple(s);
            prop_assert_eq!(a.act(&d, sim), a.clone());
            prop_assert_eq!(b.act(&d, sim), b.clone());
            prop_assert_eq!(&a + &b.shift(&d.fundamental_coweight(s)), g.clone());
        }
    }

    #[test]
    fn tau_lands_in_the_congruence_image(p in 0..SMALL.len(), k in 0usize..4, seed in any::<u64>()) {
        let d = RootDatum::preset(SMALL[p]).unwrap();
        let f = field(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = TensorElement::random(f, d.rank(), 2, &mut rng);
        let image = t.tau(&d, f);
        prop_assert!(gkm_check(&d, &image).unwrap().pass());
        let basis = psi_basis(&d, f).unwrap();
        let PsiExpansion::Coefficients(coeffs) = psi_expand(&d, &basis, &image).unwrap() else {
            return Err(TestCaseError::fail("tau image failed to expand"));
        };
        let rebuilt = coeffs
            .iter()
            .fold(WFunction::zero(&d, f), |acc, (w, a)| acc.add(&basis.get(*w).scale(a)));
        prop_assert_eq!(rebuilt, image);
    }

    #[test]
    fn theta_intertwines_tau(p in 0..SMALL.len(), k in 0usize..4, seed in any::<u64>(), w in 0usize..8, v in 0usize..8) {
        let d = RootDatum::preset(SMALL[p]).unwrap();
        let f = field(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = TensorElement::random(f, d.rank(), 2, &mut rng);
        let (w, v) = (d.elements().nth(w % d.order()).unwrap(), d.elements().nth(v % d.order()).unwrap());
        prop_assert_eq!(t.tau(&d, f).theta_action(&d, w, v), t.twist(&d, w, v).tau(&d, f));
    }

    #[test]
    fn y_words_satisfy_braid_relations(p in 0..SMALL.len(), k in 0usize..4, w in 0usize..8) {
        let d = RootDatum::preset(SMALL[p]).unwrap();
        let kk = KKRing::new(&d, field(k));
        let w = d.elements().nth(w % d.order()).unwrap();
        let words = d.reduced_words(w);
        for other in &words[1..] {
            prop_assert_eq!(kk.y_word(other), kk.y_word(&words[0]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn homs_intertwine(p in 0..SMALL.len(), k in 0usize..4, x in prop::collection::vec(0usize..2, 0..4), y in prop::collection::vec(0usize..2, 0..4)) {
        let d = RootDatum::preset(SMALL[p]).unwrap();
        let f = field(k);
        let (m, n) = (bs_module(&d, &word(&d, &x), f).unwrap(), bs_module(&d, &word(&d, &y), f).unwrap());
        for h in hom_space(&m, &n).unwrap() {
            for (a, b) in m.action().iter().zip(n.action()) {
                prop_assert_eq!(h.mul(a), b.mul(&h));
            }
        }
    }

    #[test]
    fn krull_schmidt_doubles(p in 0..SMALL.len(), k in 0usize..4, letters in prop::collection::vec(0usize..2, 1..4), seed in any::<u64>()) {
        let d = RootDatum::preset(SMALL[p]).unwrap();
        let m = bs_module(&d, &word(&d, &letters), field(k)).unwrap();
        let single = decompose(&m, seed).unwrap();
        let double = decompose(&m.direct_sum(&m), seed).unwrap();
        let twice: Vec<_> = single.shape().into_iter().map(|(a, b, c)| (a, b, 2 * c)).collect();
        prop_assert_eq!(double.shape(), twice);
        let total: usize = single.summands.iter().map(|s| s.module.dim() * s.mult).sum();
        prop_assert_eq!(total, m.dim());
    }
}

#[test]
fn steinberg_expansions_reconstruct() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["A1", "A2", "B2"] {
        let d = RootDatum::preset(name).unwrap();
        for f in FieldSpec::standard() {
            let basis = steinberg_basis(&d, f).unwrap();
            for _ in 0..3 {
                let a = random_poly(f, d.rank(), 3, 2, &mut rng);
                let coeffs = steinberg_expand(&d, &basis, &a).unwrap();
                let rebuilt =
                    coeffs.iter().fold(LaurentPoly::zero(f, d.rank()), |acc, (w, p)| &acc + &(p * basis.element(*w)));
                assert_eq!(rebuilt, a, "{name} {f}");
            }
        }
    }
}
