//! Expression grammar for system specs:
//! integers, rationals, the imaginary unit `i`, identifiers with optional
//! primes for jets, `+ - * / ^` and parentheses. Division is only accepted
//! when the divisor evaluates to a nonzero number.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::MPoly;
use super::rat::Rat;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rat),
    Imag,
    Ident { name: String, order: u32, col: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

/// Target rings an expression can be evaluated into.
pub trait ExprRing: Sized + Clone {
    fn from_rat(r: Rat) -> Self;
    fn imag() -> Option<Self>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// The value as a nonzero rational, if it is one.
    fn as_nonzero_rat(&self) -> Option<Rat>;
    /// Multiplication by a rational scalar.
    fn scale(&self, r: &Rat) -> Self;

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_rat(Rat::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl ExprRing for MPoly {
    fn from_rat(r: Rat) -> Self {
        MPoly::constant(r)
    }
    fn imag() -> Option<Self> {
        None
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn as_nonzero_rat(&self) -> Option<Rat> {
        self.constant_value().filter(|c| !c.is_zero())
    }
    fn scale(&self, r: &Rat) -> Self {
        MPoly::scale(self, r)
    }
    fn pow(&self, e: u32) -> Self {
        MPoly::pow(self, e)
    }
}

impl Expr {
    /// Evaluates with `leaf` resolving identifiers.
    pub fn eval<R: ExprRing>(
        &self,
        line: usize,
        leaf: &mut dyn FnMut(&str, u32, usize) -> Result<R, AlgebraError>,
    ) -> Result<R, AlgebraError> {
        Ok(match self {
            Expr::Num(r) => R::from_rat(r.clone()),
            Expr::Imag => R::imag().ok_or_else(|| AlgebraError::Parse {
                line,
                col: 0,
                msg: "imaginary unit not allowed here".into(),
            })?,
            Expr::Ident { name, order, col } => leaf(name, *order, *col)?,
            Expr::Neg(a) => a.eval(line, leaf)?.neg(),
            Expr::Add(a, b) => a.eval(line, leaf)?.add(&b.eval(line, leaf)?),
            Expr::Sub(a, b) => a.eval(line, leaf)?.sub(&b.eval(line, leaf)?),
            Expr::Mul(a, b) => a.eval(line, leaf)?.mul(&b.eval(line, leaf)?),
            Expr::Div(a, b, col) => {
                let d = b.numeric().filter(|d| !d.is_zero()).ok_or_else(|| AlgebraError::Parse {
                    line,
                    col: *col,
                    msg: "division is only allowed by a nonzero numeric constant".into(),
                })?;
                a.eval(line, leaf)?.scale(&d.recip())
            }
            Expr::Pow(a, e) => a.eval(line, leaf)?.pow(*e),
        })
    }

    /// Value of a purely numeric (real rational) subexpression.
    pub fn numeric(&self) -> Option<Rat> {
        match self {
            Expr::Num(r) => Some(r.clone()),
            Expr::Imag | Expr::Ident { .. } => None,
            Expr::Neg(a) => a.numeric().map(|x| -x),
            Expr::Add(a, b) => Some(a.numeric()? + b.numeric()?),
            Expr::Sub(a, b) => Some(a.numeric()? - b.numeric()?),
            Expr::Mul(a, b) => Some(a.numeric()? * b.numeric()?),
            Expr::Div(a, b, _) => {
                let d = b.numeric()?;
                (!d.is_zero()).then(|| a.numeric().map(|n| n / d))?
            }
            Expr::Pow(a, e) => {
                let base = a.numeric()?;
                let mut acc = Rat::one();
                for _ in 0..*e {
                    acc *= &base;
                }
                Some(acc)
            }
        }
    }

    /// Identifiers in order of appearance, with jet orders.
    pub fn idents(&self) -> Vec<(String, u32, usize)> {
        let mut out = Vec::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents(&self, out: &mut Vec<(String, u32, usize)>) {
        match self {
            Expr::Ident { name, order, col } => out.push((name.clone(), *order, *col)),
            Expr::Num(_) | Expr::Imag => {}
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_idents(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
                a.collect_idents(out);
                b.collect_idents(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String, u32),
    Imag,
    Op(char),
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Lexed>, AlgebraError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Lexed { tok: Tok::Int(s.parse().expect("digits")), col });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let mut order = 0;
            while i < chars.len() && chars[i] == '\'' {
                order += 1;
                i += 1;
            }
            if name == "i" && order == 0 {
                out.push(Lexed { tok: Tok::Imag, col });
            } else {
                out.push(Lexed { tok: Tok::Ident(name, order), col });
            }
        } else if "+-*/^()".contains(c) {
            out.push(Lexed { tok: Tok::Op(c), col });
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Lexed { tok: Tok::Op('-'), col });
            i += 1;
        } else {
            return Err(AlgebraError::Parse { line, col, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|l| l.col).unwrap_or(self.end_col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse { line: self.line, col: self.col(), msg: msg.into() })
    }

    fn sum(&mut self) -> Result<Expr, AlgebraError> {
        let mut lhs = self.product()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.product()?;
            lhs = if op == '+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, AlgebraError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            let col = self.col();
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' { Expr::Mul(lhs.into(), rhs.into()) } else { Expr::Div(lhs.into(), rhs.into(), col) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, AlgebraError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(self.unary()?.into()))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, AlgebraError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let Some(e) = e.to_u32() else { return self.err("exponent too large") };
                    Ok(Expr::Pow(base.into(), e))
                }
                _ => self.err("exponent must be a nonnegative integer literal"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, AlgebraError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            Some(Tok::Imag) => {
                self.pos += 1;
                Ok(Expr::Imag)
            }
            Some(Tok::Ident(name, order)) => {
                self.pos += 1;
                Ok(Expr::Ident { name, order, col })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses `src`; `line` and `col0` locate it in the enclosing file for errors.
pub fn parse_expr_at(src: &str, line: usize, col0: usize) -> Result<Expr, AlgebraError> {
    let toks = lex(src, line, col0)?;
    let end_col = col0 + src.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, line, end_col };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_expr(src: &str) -> Result<Expr, AlgebraError> {
    parse_expr_at(src, 1, 0)
}

/// Parses into a polynomial, with identifiers resolved to jets of themselves.
pub fn parse_poly(src: &str) -> Result<MPoly, AlgebraError> {
    use super::var::Var;
    parse_expr(src)?.eval(1, &mut |name, order, _| Ok(MPoly::var(Var::jet(name, order))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_jets_and_powers() {
        let p = parse_poly("b'' - 3*b^2 + a*b").unwrap();
        assert_eq!(p.to_string(), "b''-3*b^2+a*b");
    }

    #[test]
    fn numeric_division_allowed() {
        let p = parse_poly("y/2 + 1/3").unwrap();
        let q = parse_poly("3*y + 2").unwrap().scale(&Rat::new(1.into(), 6.into()));
        assert_eq!(p, q);
    }

    #[test]
    fn symbolic_division_rejected() {
        let e = parse_poly("y*z + a/b").unwrap_err();
        assert!(matches!(e, AlgebraError::Parse { col: 8, .. }), "{e:?}");
    }

    #[test]
    fn imaginary_unit_rejected_in_polynomials() {
        assert!(parse_poly("2*i").is_err());
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_poly("y + (z").unwrap_err() {
            AlgebraError::Parse { col, .. } => assert_eq!(col, 7),
            e => panic!("{e:?}"),
        }
        assert!(parse_poly("y $ z").is_err());
        assert!(parse_poly("y^z").is_err());
    }
}
