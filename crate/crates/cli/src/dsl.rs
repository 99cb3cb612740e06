//! Parser for the symbol language printed by `AnalyticMap`'s `Display`.
//!
//! ```text
//! expr    = atom | compose(expr, expr) | sum(expr, expr) | diff(expr, expr) | prod(expr, expr)
//! atom    = const(c) | monomial(n) | affine(c, c) | scale(c) | mobius(c)
//!         | blaschke([c, ...] [, c]) | testfn(c, x) | taylor([c, ...] [, x]) | pole(c, c, n)
//! c       = x | x+yi | x-yi | yi
//! ```

use campanato_core::campanato::test_function;
use campanato_core::{AnalyticMap, Complex64, DiskPoint};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("parse error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("{name} takes {expected} argument(s), got {found} (at byte {pos})")]
    Arity {
        pos: usize,
        name: String,
        expected: &'static str,
        found: usize,
    },
    #[error("invalid {name} at byte {pos}: {message}")]
    Invalid { pos: usize, name: String, message: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Arg {
    Expr(AnalyticMap),
    Number(Complex64),
    List(Vec<Complex64>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

pub fn parse_symbol(src: &str) -> Result<AnalyticMap, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let map = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(map)
}

/// A lone complex literal such as `0.3-0.2i`.
pub fn parse_complex(src: &str) -> Result<Complex64, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let c = p.complex()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(c)
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), ParseError> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{ch}'")))
        }
    }

    fn ident(&mut self) -> Result<(usize, &'a str), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a function name"));
        }
        self.pos += len;
        Ok((start, &self.src[start..start + len]))
    }

    /// Longest prefix that parses as a real literal.
    fn real(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let s = self.rest().as_bytes();
        let mut i = 0;
        if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
            i += 1;
        }
        let digits_start = i;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i == digits_start {
            return Err(self.error("expected a number"));
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            let exp_digits = j;
            while j < s.len() && s[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_digits {
                i = j;
            }
        }
        let text = &self.rest()[..i];
        let v = text.parse::<f64>().map_err(|_| self.error(&format!("bad number '{text}'")))?;
        self.pos += i;
        Ok(v)
    }

    fn complex(&mut self) -> Result<Complex64, ParseError> {
        let first = self.real()?;
        if self.rest().starts_with('i') {
            self.pos += 1;
            return Ok(Complex64::new(0.0, first));
        }
        let r = self.rest();
        if r.starts_with('+') || r.starts_with('-') {
            let save = self.pos;
            if let Ok(im) = self.real() {
                if self.rest().starts_with('i') {
                    self.pos += 1;
                    return Ok(Complex64::new(first, im));
                }
            }
            self.pos = save;
        }
        Ok(Complex64::new(first, 0.0))
    }

    fn list(&mut self) -> Result<Vec<Complex64>, ParseError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(self.complex()?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        self.skip_ws();
        let c = self.rest().chars().next().ok_or_else(|| self.error("unexpected end of input"))?;
        if c == '[' {
            Ok(Arg::List(self.list()?))
        } else if c.is_ascii_alphabetic() && c != 'i' {
            Ok(Arg::Expr(self.expr()?))
        } else {
            Ok(Arg::Number(self.complex()?))
        }
    }

    fn expr(&mut self) -> Result<AnalyticMap, ParseError> {
        let (pos, name) = self.ident()?;
        self.expect('(')?;
        let mut args = Vec::new();
        if !self.eat(')') {
            loop {
                args.push(self.arg()?);
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        build(pos, name, args)
    }
}

fn build(pos: usize, name: &str, args: Vec<Arg>) -> Result<AnalyticMap, ParseError> {
    let arity = |expected: &'static str| ParseError::Arity {
        pos,
        name: name.to_string(),
        expected,
        found: args.len(),
    };
    let invalid = |message: String| ParseError::Invalid {
        pos,
        name: name.to_string(),
        message,
    };
    let kind = |message: &str| invalid(message.to_string());
    let number = |a: &Arg| match a {
        Arg::Number(c) => Ok(*c),
        _ => Err(kind("expected a number")),
    };
    let real = |a: &Arg| match a {
        Arg::Number(c) if c.im == 0.0 => Ok(c.re),
        _ => Err(kind("expected a real number")),
    };
    let expr = |a: Arg| match a {
        Arg::Expr(e) => Ok(e),
        _ => Err(kind("expected an expression")),
    };
    let natural = |a: &Arg| {
        let x = real(a)?;
        if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
            Ok(x as u32)
        } else {
            Err(kind("expected a non-negative integer"))
        }
    };
    let disk = |c: Complex64| DiskPoint::new(c).map_err(|e| invalid(e.to_string()));

    match name {
        "const" | "monomial" | "scale" | "mobius" => {
            if args.len() != 1 {
                return Err(arity("1"));
            }
            Ok(match name {
                "const" => AnalyticMap::Const(number(&args[0])?),
                "monomial" => AnalyticMap::Monomial(natural(&args[0])?),
                "scale" => AnalyticMap::Scale(number(&args[0])?),
                _ => AnalyticMap::mobius(disk(number(&args[0])?)?),
            })
        }
        "affine" => {
            if args.len() != 2 {
                return Err(arity("2"));
            }
            Ok(AnalyticMap::affine(number(&args[0])?, number(&args[1])?))
        }
        "testfn" => {
            if args.len() != 2 {
                return Err(arity("2"));
            }
            let b = disk(number(&args[0])?)?;
            test_function(b, real(&args[1])?).map_err(|e| invalid(e.to_string()))
        }
        "pole" => {
            if args.len() != 3 {
                return Err(arity("3"));
            }
            let b = number(&args[1])?;
            if b.norm() >= 1.0 {
                return Err(kind("pole parameter must lie in the disk"));
            }
            Ok(AnalyticMap::Pole {
                coef: number(&args[0])?,
                b,
                power: natural(&args[2])?,
            })
        }
        "blaschke" | "taylor" => {
            if args.is_empty() || args.len() > 2 {
                return Err(arity("1 or 2"));
            }
            let mut it = args.into_iter();
            let Some(Arg::List(items)) = it.next() else {
                return Err(kind("expected a bracketed list"));
            };
            let extra = it.next();
            if name == "blaschke" {
                let u = extra.as_ref().map(number).transpose()?.unwrap_or(Complex64::new(1.0, 0.0));
                let zeros = items.into_iter().map(disk).collect::<Result<Vec<_>, _>>()?;
                AnalyticMap::blaschke(&zeros, u).map_err(|e| invalid(e.to_string()))
            } else {
                let tail = extra.as_ref().map(real).transpose()?.unwrap_or(0.0);
                AnalyticMap::taylor_with_tail(items, tail).map_err(|e| invalid(e.to_string()))
            }
        }
        "compose" | "sum" | "diff" | "prod" => {
            if args.len() != 2 {
                return Err(arity("2"));
            }
            let mut it = args.into_iter();
            let a = expr(it.next().expect("two arguments"))?;
            let b = expr(it.next().expect("two arguments"))?;
            Ok(match name {
                "compose" => AnalyticMap::Compose(Box::new(a), Box::new(b)),
                "sum" => AnalyticMap::sum(a, b),
                "diff" => AnalyticMap::difference(a, b),
                _ => AnalyticMap::product(a, b),
            })
        }
        other => Err(ParseError::Syntax {
            pos,
            message: format!("unknown function '{other}'"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn examples() {
        assert_eq!(parse_symbol("monomial(2)").unwrap(), AnalyticMap::Monomial(2));
        let m = parse_symbol("compose(mobius(0.5+0i), monomial(2))").unwrap();
        assert_eq!(
            m,
            AnalyticMap::Compose(Box::new(AnalyticMap::Mobius(c(0.5, 0.0))), Box::new(AnalyticMap::Monomial(2)))
        );
        let b = parse_symbol("blaschke([0.3, 0-0.5i])").unwrap();
        match b {
            AnalyticMap::Blaschke { zeros, unimodular } => {
                assert_eq!(zeros, vec![c(0.3, 0.0), c(0.0, -0.5)]);
                assert_eq!(unimodular, c(1.0, 0.0));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_symbol(" scale( 1.5 ) ").unwrap(), AnalyticMap::Scale(c(1.5, 0.0)));
        assert_eq!(parse_symbol("const(0.25i)").unwrap(), AnalyticMap::Const(c(0.0, 0.25)));
        assert_eq!(parse_symbol("const(1e-3-2E+1i)").unwrap(), AnalyticMap::Const(c(1e-3, -20.0)));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_symbol("monomial(2"), Err(ParseError::Syntax { pos: 10, .. })));
        assert!(matches!(parse_symbol("affine(1)"), Err(ParseError::Arity { pos: 0, .. })));
        assert!(matches!(
            parse_symbol("sum(monomial(1), wobble(2))"),
            Err(ParseError::Syntax { pos: 17, .. })
        ));
        assert!(matches!(parse_symbol("mobius(1.5)"), Err(ParseError::Invalid { .. })));
        assert!(matches!(parse_symbol("monomial(2.5)"), Err(ParseError::Invalid { .. })));
        assert!(matches!(parse_symbol("monomial(2) x"), Err(ParseError::Syntax { .. })));
    }

    fn number() -> impl Strategy<Value = f64> {
        prop_oneof![-10.0f64..10.0, Just(0.0), Just(-0.0), 1e-9f64..1e-6]
    }

    fn disk_number() -> impl Strategy<Value = Complex64> {
        (0.0f64..0.95, 0.0f64..6.3).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn leaf() -> impl Strategy<Value = AnalyticMap> {
        let num = || (number(), number()).prop_map(|(a, b)| c(a, b));
        prop_oneof![
            num().prop_map(AnalyticMap::Const),
            (0u32..9).prop_map(AnalyticMap::Monomial),
            (num(), num()).prop_map(|(a, b)| AnalyticMap::affine(a, b)),
            num().prop_map(AnalyticMap::Scale),
            disk_number().prop_map(AnalyticMap::Mobius),
            (proptest::collection::vec(disk_number(), 1..4), 0.0f64..6.3).prop_map(|(z, t)| {
                AnalyticMap::Blaschke {
                    zeros: z,
                    unimodular: Complex64::from_polar(1.0, t),
                }
            }),
            (disk_number(), 0.0f64..2.0).prop_map(|(b, p)| AnalyticMap::TestFn { b: b * 0.97 / 0.95 * 0.99, p }),
            (proptest::collection::vec(num(), 1..6), prop_oneof![Just(0.0), 0.0f64..1.0])
                .prop_map(|(coeffs, tail_bound)| AnalyticMap::Taylor { coeffs, tail_bound }),
            (num(), disk_number(), 1u32..4).prop_map(|(coef, b, power)| AnalyticMap::Pole { coef, b, power }),
        ]
    }

    fn tree() -> impl Strategy<Value = AnalyticMap> {
        leaf().prop_recursive(4, 24, 2, |inner| {
            (0u8..4, inner.clone(), inner).prop_map(|(k, a, b)| match k {
                0 => AnalyticMap::Compose(Box::new(a), Box::new(b)),
                1 => AnalyticMap::Sum(Box::new(a), Box::new(b)),
                2 => AnalyticMap::Difference(Box::new(a), Box::new(b)),
                _ => AnalyticMap::Product(Box::new(a), Box::new(b)),
            })
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(map in tree()) {
            let text = map.to_string();
            let parsed = parse_symbol(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
            prop_assert_eq!(&parsed, &map);
            prop_assert_eq!(parsed.to_string(), text);
        }
    }
}
