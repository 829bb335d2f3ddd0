//! Determinants over Laurent polynomials.

use alloc::vec::Vec;

use crate::error::AlgebraError;
use crate::laurent::LaurentPoly;

/// Fraction-free Gaussian elimination with exact division.
pub fn determinant(m: &[Vec<LaurentPoly>]) -> Result<LaurentPoly, AlgebraError> {
    let n = m.len();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mut a: Vec<Vec<LaurentPoly>> = m.to_vec();
    let mut prev = LaurentPoly::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(LaurentPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Signed sum over permutations.
pub fn leibniz(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = LaurentPoly::zero();
    permute(m, 0, &mut perm, false, &mut out);
    out
}

fn permute(
    m: &[Vec<LaurentPoly>],
    at: usize,
    perm: &mut Vec<usize>,
    odd: bool,
    out: &mut LaurentPoly,
) {
    if at == perm.len() {
        let mut t = LaurentPoly::one();
        for (r, &c) in perm.iter().enumerate() {
            t = &t * &m[r][c];
        }
        *out = if odd { &*out - &t } else { &*out + &t };
        return;
    }
    for s in at..perm.len() {
        perm.swap(at, s);
        permute(m, at + 1, perm, odd ^ (s != at), out);
        perm.swap(at, s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::VarTable;
    use alloc::vec;

    #[test]
    fn bareiss_matches_leibniz() {
        let mut t = VarTable::new();
        let mut p = |s: &str| LaurentPoly::parse(s, &mut t).unwrap();
        let m = vec![
            vec![p("a + b"), p("c"), p("d^-1")],
            vec![p("0"), p("e"), p("f + 1")],
            vec![p("g"), p("h*a"), p("2")],
        ];
        assert_eq!(determinant(&m).unwrap(), leibniz(&m));
        let z = vec![vec![p("0"), p("x")], vec![p("y"), p("z")]];
        assert_eq!(determinant(&z).unwrap(), p("-x*y"));
        assert!(determinant(&[]).unwrap().is_one());
    }
}
