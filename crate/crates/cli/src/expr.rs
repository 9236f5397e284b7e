//! Real-number arguments such as `0.5`, `1/√2`, `sqrt(3)/3` or `2*pi/8`.

use std::iter::Peekable;
use std::str::Chars;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("cannot parse number `{input}`: {reason}")]
pub struct ExprError {
    pub input: String,
    pub reason: String,
}

pub fn parse_real(input: &str) -> Result<f64, ExprError> {
    let fail = |reason: &str| ExprError {
        input: input.to_owned(),
        reason: reason.to_owned(),
    };
    let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(fail("empty"));
    }
    let mut p = Parser {
        chars: cleaned.chars().peekable(),
    };
    let v = p.expr().map_err(|r| fail(&r))?;
    if let Some(c) = p.chars.next() {
        return Err(fail(&format!("unexpected `{c}`")));
    }
    if !v.is_finite() {
        return Err(fail("not finite"));
    }
    Ok(v)
}

struct Parser<'a> {
    chars: Peekable<Chars<'a>>,
}

type Parsed = Result<f64, String>;

impl Parser<'_> {
    fn eat(&mut self, c: char) -> bool {
        if self.chars.peek() == Some(&c) {
            self.chars.next();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, word: &str) -> bool {
        let ahead: String = self.chars.clone().take(word.len()).collect();
        if ahead.eq_ignore_ascii_case(word) {
            for _ in 0..word.len() {
                self.chars.next();
            }
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Parsed {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v += self.term()?;
            } else if self.eat('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Parsed {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v *= self.unary()?;
            } else if self.eat('/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Parsed {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(base.powf(self.unary()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Parsed {
        if self.eat('(') {
            let v = self.expr()?;
            return if self.eat(')') {
                Ok(v)
            } else {
                Err("missing `)`".into())
            };
        }
        if self.eat('√') || self.eat_word("sqrt") {
            let v = self.atom()?;
            if v < 0.0 {
                return Err("square root of a negative number".into());
            }
            return Ok(v.sqrt());
        }
        if self.eat('π') || self.eat_word("pi") {
            return Ok(std::f64::consts::PI);
        }
        self.number()
    }

    fn number(&mut self) -> Parsed {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            let exponent_sign = (c == '-' || c == '+') && s.ends_with(['e', 'E']);
            if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exponent_sign {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        if s.is_empty() {
            return Err(match self.chars.peek() {
                Some(c) => format!("unexpected `{c}`"),
                None => "unexpected end".into(),
            });
        }
        s.parse().map_err(|_| format!("bad literal `{s}`"))
    }
}
