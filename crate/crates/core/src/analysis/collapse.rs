use num_complex::Complex64;

use super::multinomial_f64;
use crate::cpoly::CPolynomial;
use crate::error::{Error, Result};
use crate::ncpoly::NCPolynomial;
use crate::word::{next_permutation, Word};

/// Commutative collapse: sums the coefficients of all words sharing a
/// multidegree.
pub fn collapse(p: &NCPolynomial) -> CPolynomial {
    let mut out = CPolynomial::zero(p.g());
    for (w, &c) in p.terms() {
        out.add_term(w.multidegree(p.g()), c);
    }
    out
}

/// The unique 1-compatible polynomial whose collapse is `pc`: every word of
/// multidegree `m` receives `pc[m] / eta(m)`.
pub fn lift(pc: &CPolynomial, d: usize) -> Result<NCPolynomial> {
    if !pc.is_homogeneous(d) {
        return Err(Error::NotHomogeneous);
    }
    let mut out = NCPolynomial::zero(pc.g());
    for (m, &c) in pc.terms() {
        let eta = multinomial_f64(m.exponents().iter().map(|&e| e as usize));
        let share = c / Complex64::new(eta, 0.0);
        let mut letters = m.representative().into_indices();
        loop {
            out.add_term(Word::new(letters.clone()), share);
            if !next_permutation(&mut letters) {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{check_compatibility, permute, Permutation};
    use crate::parse_ncpoly;
    use crate::word::Multidegree;

    const CUBIC: &str = "x1^3 - 4*x2^3 - 4*x3^3 + 5*x1*x1*x2 + 5*x1*x2*x1 + 5*x2*x1*x1 \
        - 3*x1*x1*x3 - 3*x1*x3*x1 - 3*x3*x1*x1 + 7*x2*x2*x1 + 7*x2*x1*x2 + 7*x1*x2*x2 \
        - 11*x2*x2*x3 - 11*x2*x3*x2 - 11*x3*x2*x2 + 6*x3*x3*x1 + 6*x3*x1*x3 + 6*x1*x3*x3 \
        - 6*x3*x3*x2 - 6*x3*x2*x3 - 6*x2*x3*x3 + x1*x2*x3 + x1*x3*x2 + x2*x1*x3 \
        + x2*x3*x1 + x3*x1*x2 + x3*x2*x1";

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn md(v: &[u32]) -> Multidegree {
        Multidegree::new(v.to_vec())
    }

    #[test]
    fn commutator_collapses_to_zero() {
        assert!(collapse(&parse_ncpoly("x1*x2 - x2*x1", 2).unwrap()).is_zero());
    }

    #[test]
    fn counterexample_collapse() {
        let p = parse_ncpoly("x1^4 + x1*x2*x2*x1 + x2*x1*x1*x2 + x2^4", 2).unwrap();
        let pc = collapse(&p);
        assert_eq!(pc.len(), 3);
        assert_eq!(pc.coeff(&md(&[4, 0])), c(1.0));
        assert_eq!(pc.coeff(&md(&[2, 2])), c(2.0));
        assert_eq!(pc.coeff(&md(&[0, 4])), c(1.0));
    }

    #[test]
    fn cubic_fixture_collapse() {
        // class sums: coefficient times class size
        let p = parse_ncpoly(CUBIC, 3).unwrap();
        let pc = collapse(&p);
        let expected = [
            (&[3, 0, 0][..], 1.0),
            (&[0, 3, 0], -4.0),
            (&[0, 0, 3], -4.0),
            (&[2, 1, 0], 15.0),
            (&[2, 0, 1], -9.0),
            (&[1, 2, 0], 21.0),
            (&[0, 2, 1], -33.0),
            (&[1, 0, 2], 18.0),
            (&[0, 1, 2], -18.0),
            (&[1, 1, 1], 6.0),
        ];
        assert_eq!(pc.len(), expected.len());
        for (m, v) in expected {
            assert_eq!(pc.coeff(&md(m)), c(v), "{m:?}");
        }
    }

    #[test]
    fn lift_spreads_over_class() {
        let pc = CPolynomial::from_terms(2, [(md(&[2, 2]), c(1.0))]).unwrap();
        let p = lift(&pc, 4).unwrap();
        assert_eq!(p.len(), 6);
        for (_, &v) in p.terms() {
            assert_eq!(v, c(1.0 / 6.0));
        }
        let back = collapse(&p).coeff(&md(&[2, 2]));
        assert!((back - c(1.0)).norm() < 1e-15);

        let x1d = CPolynomial::from_terms(2, [(md(&[5, 0]), c(2.0))]).unwrap();
        assert_eq!(lift(&x1d, 5).unwrap(), parse_ncpoly("2*x1^5", 2).unwrap());
        assert!(lift(&x1d, 4).is_err());
    }

    #[test]
    fn lift_inverts_collapse_on_compatible_input() {
        let p = parse_ncpoly(CUBIC, 3).unwrap();
        assert!(check_compatibility(&p, 1).unwrap().compatible);
        let back = lift(&collapse(&p), 3).unwrap();
        assert_eq!(back, p);
        assert!(check_compatibility(&back, 1).unwrap().compatible);
    }

    #[test]
    fn collapse_is_multiplicative_and_permutation_invariant() {
        let p = parse_ncpoly("x1*x2 + 2*x2*x2 - x2*x1", 2).unwrap();
        let q = parse_ncpoly("x1 - (0+1i)*x2", 2).unwrap();
        let pq = p.nc_mul(&q).unwrap();
        assert_eq!(collapse(&pq), collapse(&p).mul(&collapse(&q)).unwrap());
        let pi = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(collapse(&permute(&pq, &pi).unwrap()), collapse(&pq));
    }
}
