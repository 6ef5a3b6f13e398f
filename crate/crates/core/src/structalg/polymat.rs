//! Determinants of matrices over `R`, by fraction-free elimination.

use crate::laurent::LaurentPoly;

/// Bareiss elimination; every intermediate division is exact in `R`.
pub fn det_bareiss(mut m: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square nonempty matrix");
    let (field, rank) = (m[0][0].field(), m[0][0].rank());
    let mut prev = LaurentPoly::one(field, rank);
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return LaurentPoly::zero(field, rank),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss quotients are exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::Lattice;

    #[test]
    fn two_by_two() {
        let q = FieldSpec::Q;
        let y = |e: i32| LaurentPoly::monomial(q, Lattice::from_slice(&[e]));
        let det = det_bareiss(vec![vec![y(0), y(-1)], vec![y(0), y(1)]]);
        assert_eq!(det, &y(1) - &y(-1));
        let swapped = det_bareiss(vec![vec![LaurentPoly::zero(q, 1), y(2)], vec![y(1), y(0)]]);
        assert_eq!(swapped, -y(3));
    }
}
