//! Expression syntax for symbols, e.g. `3/2*x1^2*k2 - i*x2` or `y1^2*eta1`.
//!
//! Variables: `x1..`, `k1..` (or `xi1..`) in the real frame; `y1..`, `eta1..`
//! in the oscillator frame. Constants: integers, decimals (become floats),
//! `i`, `sqrt2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::coeff::Coeff;
use super::poly::{Frame, PolySymbol};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Float(f64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            if i < cs.len() && (cs[i] == 'e' || cs[i] == 'E') {
                let save = i;
                i += 1;
                if i < cs.len() && (cs[i] == '+' || cs[i] == '-') {
                    i += 1;
                }
                if i < cs.len() && cs[i].is_ascii_digit() {
                    while i < cs.len() && cs[i].is_ascii_digit() {
                        i += 1;
                    }
                } else {
                    i = save;
                }
            }
            let txt: String = cs[st..i].iter().collect();
            if txt.contains(['.', 'e', 'E']) {
                let v: f64 = txt.parse().map_err(|_| Error::Parse(format!("bad number '{}'", txt)))?;
                out.push(Tok::Float(v));
            } else {
                out.push(Tok::Int(txt.parse().map_err(|_| Error::Parse(format!("bad integer '{}'", txt)))?));
            }
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{}'", c)));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Num(Coeff),
    Var { momentum: bool, osc: bool, idx: usize },
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
    Pow(Box<Ast>, u32),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' { Ast::Add(lhs.into(), rhs.into()) } else { Ast::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op(c @ ('*' | '/'))) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = if c == '*' { Ast::Mul(lhs.into(), rhs.into()) } else { Ast::Div(lhs.into(), rhs.into()) };
                }
                // Implicit multiplication: "2x1", "3 k2".
                Some(Tok::Ident(_)) | Some(Tok::Op('(')) | Some(Tok::Int(_)) | Some(Tok::Float(_)) => {
                    let rhs = self.unary()?;
                    lhs = Ast::Mul(lhs.into(), rhs.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Ast::Neg(self.unary()?.into()))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(e)) => {
                    let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(Ast::Pow(base.into(), e));
                }
                t => return Err(Error::Parse(format!("expected integer exponent, found {:?}", t))),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(Ast::Num(Coeff::from_rational(BigRational::from_integer(v), BigRational::zero()))),
            Some(Tok::Float(v)) => Ok(Ast::Num(Coeff::real(v))),
            Some(Tok::Op('(')) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::Op(')')) => Ok(e),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(Tok::Ident(name)) => ident(&name),
            t => Err(Error::Parse(format!("unexpected token {:?}", t))),
        }
    }
}

fn ident(name: &str) -> Result<Ast> {
    match name {
        "i" => return Ok(Ast::Num(Coeff::i())),
        "sqrt2" => return Ok(Ast::Num(Coeff::sqrt2())),
        _ => {}
    }
    let split = name.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::Parse(format!("unknown identifier '{}'", name)))?;
    let (head, digits) = name.split_at(split);
    let idx: usize = digits.parse().map_err(|_| Error::Parse(format!("bad variable index in '{}'", name)))?;
    if idx == 0 {
        return Err(Error::Parse(format!("variable indices start at 1: '{}'", name)));
    }
    let (momentum, osc) = match head {
        "x" => (false, false),
        "k" | "xi" => (true, false),
        "y" => (false, true),
        "eta" | "e" => (true, true),
        _ => return Err(Error::Parse(format!("unknown variable '{}'", name))),
    };
    Ok(Ast::Var { momentum, osc, idx: idx - 1 })
}

fn scan(a: &Ast, maxidx: &mut usize, frames: &mut (bool, bool)) {
    match a {
        Ast::Num(_) => {}
        Ast::Var { osc, idx, .. } => {
            *maxidx = (*maxidx).max(idx + 1);
            if *osc {
                frames.1 = true
            } else {
                frames.0 = true
            }
        }
        Ast::Add(l, r) | Ast::Sub(l, r) | Ast::Mul(l, r) | Ast::Div(l, r) => {
            scan(l, maxidx, frames);
            scan(r, maxidx, frames);
        }
        Ast::Neg(l) | Ast::Pow(l, _) => scan(l, maxidx, frames),
    }
}

fn build(a: &Ast, n: usize, frame: Frame) -> Result<PolySymbol> {
    Ok(match a {
        Ast::Num(c) => PolySymbol::constant(n, frame, c.clone()),
        Ast::Var { momentum, idx, .. } => {
            if *momentum {
                PolySymbol::var_k(n, frame, *idx)
            } else {
                PolySymbol::var_x(n, frame, *idx)
            }
        }
        Ast::Add(l, r) => &build(l, n, frame)? + &build(r, n, frame)?,
        Ast::Sub(l, r) => &build(l, n, frame)? - &build(r, n, frame)?,
        Ast::Mul(l, r) => &build(l, n, frame)? * &build(r, n, frame)?,
        Ast::Div(l, r) => {
            let den = build(r, n, frame)?;
            if den.terms().keys().any(|m| !m.is_one()) {
                return Err(Error::Parse("division by a non-constant expression".into()));
            }
            let c = den.coeff(&super::monomial::Monomial::one(n));
            let inv = c.inv().ok_or_else(|| Error::Parse("division by zero".into()))?;
            build(l, n, frame)?.scale(&inv)
        }
        Ast::Neg(l) => -&build(l, n, frame)?,
        Ast::Pow(l, e) => build(l, n, frame)?.pow(*e),
    })
}

/// Parse an expression. `n` and `frame` are inferred from the variables used
/// when not given; a constant expression defaults to `n = 1`, real frame.
pub fn parse_poly(s: &str, n: Option<usize>, frame: Option<Frame>) -> Result<PolySymbol> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    let mut maxidx = 0;
    let mut frames = (false, false);
    scan(&ast, &mut maxidx, &mut frames);
    if frames.0 && frames.1 {
        return Err(Error::FrameMismatch("expression mixes x/k and y/eta variables".into()));
    }
    let inferred = if frames.1 { Frame::Yeta } else { Frame::Xk };
    let frame = match frame {
        Some(f) if (frames.0 || frames.1) && f != inferred => {
            return Err(Error::FrameMismatch(format!("expression is in frame {}, expected {}", inferred.as_str(), f.as_str())))
        }
        Some(f) => f,
        None => inferred,
    };
    let n = match n {
        Some(n) if n < maxidx => return Err(Error::DimensionMismatch { expected: n, found: maxidx }),
        Some(n) => n,
        None => maxidx.max(1),
    };
    build(&ast, n, frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolalg::monomial::Monomial;

    #[test]
    fn parses_mixed_expression() {
        let p = parse_poly("3/2*x1^2*k2 - i*x2", None, None).unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.coeff(&Monomial::new(vec![2, 0], vec![0, 1])), Coeff::ratio(3, 2));
        assert_eq!(p.coeff(&Monomial::new(vec![0, 1], vec![0, 0])), Coeff::gaussian(0, -1));
    }

    #[test]
    fn oscillator_variables() {
        let p = parse_poly("y1*eta1", Some(2), None).unwrap();
        assert_eq!(p.frame(), Frame::Yeta);
        assert_eq!(p.n(), 2);
    }

    #[test]
    fn rejects_mixed_frames() {
        assert!(parse_poly("x1*eta1", None, None).is_err());
        assert!(parse_poly("x1/x2", None, None).is_err());
        assert!(parse_poly("x3", Some(2), None).is_err());
    }
}
