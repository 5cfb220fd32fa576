//! Text parser for noncommutative polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := coeff '*' mono | mono | coeff
//! coeff  := real | '(' real ')' | '(' real ('+'|'-') real 'i' ')'
//! mono   := factor ('*' factor)*
//! factor := 'x' uint ('^' uint)?
//! ```
//!
//! Whitespace between tokens is ignored.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ncpoly::NCPolynomial;
use crate::word::Word;
use crate::Mode;

/// Parses `text` as a polynomial in `x1..xg`, combining like monomials.
pub fn parse_ncpoly(text: &str, g: usize) -> Result<NCPolynomial> {
    parse_ncpoly_with(text, g, Mode::Complex)
}

/// Like [`parse_ncpoly`], but in [`Mode::Real`] any coefficient with a
/// nonzero imaginary part is rejected.
pub fn parse_ncpoly_with(text: &str, g: usize, mode: Mode) -> Result<NCPolynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        g,
    };
    let mut out = NCPolynomial::zero(g);
    p.ws();
    let mut sign = 1.0;
    if let Some(b @ (b'+' | b'-')) = p.peek() {
        p.pos += 1;
        if b == b'-' {
            sign = -1.0;
        }
    }
    loop {
        let start = p.pos;
        let (c, w) = p.term()?;
        if mode == Mode::Real && c.im != 0.0 {
            return Err(Error::ComplexInRealMode(
                String::from_utf8_lossy(&p.src[start..p.pos])
                    .trim()
                    .to_string(),
            ));
        }
        // adding zero clears the sign of a negated zero part
        out.add_term(w, c * sign + Complex64::new(0.0, 0.0));
        p.ws();
        match p.peek() {
            None => break,
            Some(b'+') => sign = 1.0,
            Some(b'-') => sign = -1.0,
            Some(b) => return Err(p.err(format!("expected '+' or '-', found {:?}", b as char))),
        }
        p.pos += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    g: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(format!("expected {:?}", b as char)))
        }
    }

    fn term(&mut self) -> Result<(Complex64, Word)> {
        self.ws();
        match self.peek() {
            Some(b'x') => Ok((Complex64::new(1.0, 0.0), self.mono()?)),
            Some(b'(' | b'0'..=b'9' | b'.') => {
                let c = self.coeff()?;
                if self.eat(b'*') {
                    Ok((c, self.mono()?))
                } else {
                    Ok((c, Word::empty()))
                }
            }
            Some(b) => Err(self.err(format!("unexpected {:?}", b as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn coeff(&mut self) -> Result<Complex64> {
        self.ws();
        if !self.eat(b'(') {
            return Ok(Complex64::new(self.real()?, 0.0));
        }
        let re = self.real()?;
        self.ws();
        let c = match self.peek() {
            Some(b @ (b'+' | b'-')) => {
                self.pos += 1;
                self.ws();
                let im = self.unsigned_real()?;
                self.expect(b'i')?;
                Complex64::new(re, if b == b'-' { -im } else { im })
            }
            _ => Complex64::new(re, 0.0),
        };
        self.expect(b')')?;
        Ok(c)
    }

    fn real(&mut self) -> Result<f64> {
        self.ws();
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.ws();
        let v = self.unsigned_real()?;
        Ok(if neg { -v } else { v })
    }

    fn unsigned_real(&mut self) -> Result<f64> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while matches!(p.peek(), Some(b'0'..=b'9')) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.err("expected a number"));
        }
        if let Some(b'e' | b'E') = self.peek() {
            let save = self.pos;
            self.pos += 1;
            if let Some(b'+' | b'-') = self.peek() {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse::<f64>().map_err(|e| Error::Syntax {
            pos: start,
            msg: format!("bad number {s:?}: {e}"),
        })
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse::<u32>().map_err(|_| Error::Syntax {
            pos: start,
            msg: format!("integer {s} too large"),
        })
    }

    fn mono(&mut self) -> Result<Word> {
        let mut idx = Vec::new();
        loop {
            self.factor(&mut idx)?;
            let save = self.pos;
            if self.eat(b'*') {
                self.ws();
                if self.peek() == Some(b'x') {
                    continue;
                }
                self.pos = save;
                return Err(self.err("expected a variable after '*'"));
            }
            break;
        }
        Ok(Word::new(idx))
    }

    fn factor(&mut self, out: &mut Vec<u32>) -> Result<()> {
        self.ws();
        if self.peek() != Some(b'x') {
            return Err(self.err("expected a variable"));
        }
        self.pos += 1;
        let v = self.uint()?;
        if v == 0 || v as usize > self.g {
            return Err(Error::IndexOutOfRange {
                var: format!("x{v}"),
                g: self.g,
            });
        }
        let mut e = 1;
        if self.eat(b'^') {
            self.ws();
            e = self.uint()?;
        }
        out.extend(std::iter::repeat_n(v, e as usize));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn commutator() {
        let p = parse_ncpoly("x1*x2 - x2*x1", 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Word::new(vec![1, 2])), c(1.0));
        assert_eq!(p.coeff(&Word::new(vec![2, 1])), c(-1.0));
    }

    #[test]
    fn powers_expand_in_place() {
        let p = parse_ncpoly("x1^3 + 5*x1*x1*x2", 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Word::new(vec![1, 1, 1])), c(1.0));
        assert_eq!(p.coeff(&Word::new(vec![1, 1, 2])), c(5.0));
        let q = parse_ncpoly("x2*x1^2*x3", 3).unwrap();
        assert_eq!(q.coeff(&Word::new(vec![2, 1, 1, 3])), c(1.0));
    }

    #[test]
    fn cancellation_gives_zero() {
        assert!(parse_ncpoly("x1*x2 + (-1)*x1*x2", 2).unwrap().is_zero());
        assert!(parse_ncpoly("0", 2).unwrap().is_zero());
    }

    #[test]
    fn complex_and_constant_terms() {
        let p = parse_ncpoly("(1.5-2i)*x1 + 3 - (0+1i)*x2*x2", 2).unwrap();
        assert_eq!(p.coeff(&Word::new(vec![1])), Complex64::new(1.5, -2.0));
        assert_eq!(p.coeff(&Word::empty()), c(3.0));
        assert_eq!(p.coeff(&Word::new(vec![2, 2])), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn whitespace_and_leading_sign() {
        let p = parse_ncpoly("  - 2 * x1 ^ 2+x2  ", 2).unwrap();
        assert_eq!(p.coeff(&Word::new(vec![1, 1])), c(-2.0));
        assert_eq!(p.coeff(&Word::new(vec![2])), c(1.0));
        let q = parse_ncpoly("1e-3*x1 + 2.5E2*x2", 2).unwrap();
        assert_eq!(q.coeff(&Word::new(vec![1])), c(1e-3));
        assert_eq!(q.coeff(&Word::new(vec![2])), c(250.0));
    }

    #[test]
    fn index_out_of_range_names_variable() {
        match parse_ncpoly("x1*x3", 2) {
            Err(Error::IndexOutOfRange { var, g }) => {
                assert_eq!(var, "x3");
                assert_eq!(g, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_ncpoly("x0", 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_ncpoly("x1 + * x2", 2) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_ncpoly("x1 x2", 2),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse_ncpoly("", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ncpoly("2*", 2), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_ncpoly("(1+2)*x1", 2),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn real_mode_rejects_complex() {
        assert!(parse_ncpoly_with("(1+1i)*x1", 1, Mode::Real).is_err());
        assert!(parse_ncpoly_with("(1+0i)*x1 - 2*x1", 1, Mode::Real).is_ok());
    }
}
