//! Text syntax for terms.
//!
//! ```text
//! term    := "0" | sum
//! sum     := atom ("+" atom)*
//! atom    := numeral | "t" NAT "(" term ")" | "w" | "W" NAT | "e0"
//! ```
//!
//! Whitespace is ignored. Sums are normalized through [`add`] unless strict
//! parsing is requested, in which case a non-canonical sum is an error.

use crate::error::{OrdinalError, Result};
use crate::term::{add, compare_principal, Principal, Term};

pub fn parse(text: &str) -> Result<Term> {
    Parser::new(text, false).parse_all()
}

/// Parses without normalizing: sums must already be in additive normal form.
pub fn parse_strict(text: &str) -> Result<Term> {
    Parser::new(text, true).parse_all()
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
    strict: bool,
}

impl Parser {
    fn new(text: &str, strict: bool) -> Self {
        let chars: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Parser {
            chars,
            pos: 0,
            len: text.len(),
            strict,
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(OrdinalError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn parse_all(mut self) -> Result<Term> {
        let t = self.term()?;
        if self.pos != self.chars.len() {
            return self.err("trailing input");
        }
        Ok(t)
    }

    fn nat(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut n: u64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            n = match n.checked_mul(10).and_then(|n| n.checked_add(d as u64)) {
                Some(n) => n,
                None => return self.err("number too large"),
            };
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        Ok(n)
    }

    fn index(&mut self) -> Result<u32> {
        let n = self.nat()?;
        u32::try_from(n).or_else(|_| self.err("index too large"))
    }

    fn term(&mut self) -> Result<Term> {
        if self.peek() == Some('0') {
            let save = self.pos;
            self.pos += 1;
            if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                return Ok(Term::zero());
            }
            self.pos = save;
            return self.err("numerals must not have leading zeros");
        }
        let mut acc = self.atom()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            let at = self.offset();
            let next = self.atom()?;
            if self.strict {
                let (Some(last), Some(lead)) = (acc.last(), next.leading()) else {
                    unreachable!("atoms are nonzero")
                };
                if compare_principal(last, lead).is_lt() {
                    return Err(OrdinalError::NonCanonical(format!(
                        "summand at byte {at} exceeds its predecessor"
                    )));
                }
            }
            acc = add(&acc, &next);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                if c == '0' {
                    return self.err("zero is not a summand");
                }
                Ok(Term::nat(self.nat()?))
            }
            Some('t') => {
                self.pos += 1;
                let i = self.index()?;
                self.expect('(')?;
                let arg = self.term()?;
                self.expect(')')?;
                Ok(Principal::new(i, arg)?.to_term())
            }
            Some('w') => {
                self.pos += 1;
                Ok(Term::omega())
            }
            Some('W') => {
                self.pos += 1;
                let i = self.index()?;
                if i == 0 {
                    return self.err("W0 is not available; write 1");
                }
                Ok(Term::big_omega(i))
            }
            Some('e') => {
                self.pos += 1;
                self.expect('0')?;
                Ok(Term::epsilon0())
            }
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Renders a term. Numerals are always printed in decimal; `sugar` also
/// abbreviates `ω`, `Ωᵢ` and `ε₀`.
pub fn format_term(a: &Term, sugar: bool) -> String {
    let mut out = String::new();
    write_term(a, sugar, &mut out);
    out
}

fn write_term(a: &Term, sugar: bool, out: &mut String) {
    if a.is_zero() {
        out.push('0');
        return;
    }
    let mut first = true;
    for s in a.blocks() {
        if s.head.is_one() {
            if !first {
                out.push('+');
            }
            out.push_str(&s.count.to_string());
            first = false;
            continue;
        }
        for _ in 0..s.count {
            if !first {
                out.push('+');
            }
            first = false;
            write_principal(&s.head, sugar, out);
        }
    }
}

fn write_principal(p: &Principal, sugar: bool, out: &mut String) {
    if sugar {
        let arg = p.arg();
        if p.index() == 0 && arg.as_nat() == Some(1) {
            out.push('w');
            return;
        }
        if p.index() > 0 && arg.is_zero() {
            out.push_str(&format!("W{}", p.index()));
            return;
        }
        if p.index() == 0 && *arg == Term::big_omega(1) {
            out.push_str("e0");
            return;
        }
    }
    out.push_str(&format!("t{}(", p.index()));
    write_term(p.arg(), sugar, out);
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse("t0(1)+1").unwrap(), crate::term::add(&Term::omega(), &Term::one()));
        assert_eq!(parse(" t0 ( t1(0) ) ").unwrap(), Term::epsilon0());
        assert_eq!(parse("0").unwrap(), Term::zero());
        assert_eq!(parse("3").unwrap(), Term::nat(3));
        assert_eq!(parse("1+w").unwrap(), Term::omega());
    }

    #[test]
    fn argument_bound_is_enforced() {
        assert!(matches!(
            parse("t0(t2(0))"),
            Err(OrdinalError::ArgumentOutOfRange(_))
        ));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "t(0)", "t0(", "w+", "x", "W0", "01", "1+0", "e1", "t0(0))"] {
            assert!(
                matches!(parse(bad), Err(OrdinalError::Syntax { .. })),
                "{bad:?} should fail"
            );
        }
    }

    #[test]
    fn strict_mode() {
        assert!(matches!(
            parse_strict("1+w"),
            Err(OrdinalError::NonCanonical(_))
        ));
        assert_eq!(parse_strict("w+w+1").unwrap(), parse("w+w+1").unwrap());
    }

    #[test]
    fn formatting() {
        assert_eq!(format_term(&Term::epsilon0(), true), "e0");
        assert_eq!(format_term(&Term::epsilon0(), false), "t0(t1(0))");
        assert_eq!(format_term(&parse("w+w+2").unwrap(), false), "t0(1)+t0(1)+2");
        assert_eq!(format_term(&parse("w+w+2").unwrap(), true), "w+w+2");
        assert_eq!(format_term(&Term::big_omega(3), true), "W3");
        assert_eq!(format_term(&Term::zero(), true), "0");
    }
}
