//! Polynomial expressions and the line-oriented germ file format.
//!
//! ```text
//! # comment lines start with a hash
//! name: sabbah
//! vars: x y z
//! poly: x^2 - y^2*z
//! poly: y
//! ```
//!
//! Expression grammar:
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary ('*' unary)*
//! unary    := '-' unary | power
//! power    := base ('^' natural)?
//! base     := rational | identifier | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`. Implicit
//! multiplication (`2x`) is rejected.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::germ::{AlgebraError, MapGerm, Poly, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown variable `{name}` at offset {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("malformed exponent at offset {pos}: exponents must be natural literals")]
    MalformedExponent { pos: usize },
    #[error("division by a non-literal at offset {pos}: only integer literals may carry '/'")]
    DivisionByVariable { pos: usize },
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl ParseError {
    /// 0-based character offset of the offending token, when there is one.
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::UnknownVariable { pos, .. }
            | ParseError::MalformedExponent { pos }
            | ParseError::DivisionByVariable { pos }
            | ParseError::Syntax { pos, .. } => Some(*pos),
            ParseError::Algebra(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermFileError {
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ParseError },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("missing `vars:` line")]
    MissingVars,
    #[error("no `poly:` lines")]
    NoComponents,
    #[error("{0}")]
    Germ(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Decimal,
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                if i + 1 < chars.len() && chars[i + 1] == '.' {
                    i += 1;
                    while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                        i += 1;
                    }
                    Tok::Decimal
                } else {
                    Tok::Int(digits.parse().expect("ascii digits"))
                }
            }
            a if a.is_alphabetic() || a == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        i += 1;
        out.push(Token {
            tok,
            pos: start,
        });
    }
    out.push(Token {
        tok: Tok::End,
        pos: chars.len(),
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    at: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn dim(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.checked_add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.checked_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    acc = acc.checked_mul(&self.unary()?)?;
                }
                Tok::Slash => {
                    return Err(ParseError::DivisionByVariable {
                        pos: self.peek().pos,
                    })
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        let exp = match &t.tok {
            Tok::Int(n) => n.to_u32(),
            _ => None,
        };
        match exp {
            Some(e) => Ok(base.pow(e)?),
            None => Err(ParseError::MalformedExponent { pos: t.pos }),
        }
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(num) => {
                if self.peek().tok != Tok::Slash {
                    return Ok(Poly::constant(self.dim(), Rat::from_integer(num)));
                }
                let slash = self.bump();
                let d = self.bump();
                match d.tok {
                    Tok::Int(den) if den.is_zero() => Err(ParseError::Syntax {
                        pos: d.pos,
                        message: "zero denominator".into(),
                    }),
                    Tok::Int(den) => Ok(Poly::constant(self.dim(), Rat::new(num, den))),
                    _ => Err(ParseError::DivisionByVariable { pos: slash.pos }),
                }
            }
            Tok::Decimal => Err(ParseError::Syntax {
                pos: t.pos,
                message: "decimal literals are not supported; write a fraction".into(),
            }),
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(Poly::var(self.dim(), i)?),
                None => Err(ParseError::UnknownVariable { name, pos: t.pos }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(ParseError::Syntax {
                        pos: close.pos,
                        message: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            Tok::End => Err(ParseError::Syntax {
                pos: t.pos,
                message: "unexpected end of input".into(),
            }),
            _ => Err(ParseError::Syntax {
                pos: t.pos,
                message: "expected a number, variable or `(`".into(),
            }),
        }
    }
}

/// Parses `text` as a polynomial in the ordered variables `vars`.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<Poly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, vars };
    let poly = p.expr()?;
    let rest = p.peek();
    if rest.tok != Tok::End {
        let message = match rest.tok {
            Tok::Ident(_) | Tok::Int(_) | Tok::LParen => "missing operator (implicit multiplication is not allowed)",
            Tok::Decimal => "decimal literals are not supported; write a fraction",
            _ => "unexpected token",
        };
        return Err(ParseError::Syntax {
            pos: rest.pos,
            message: message.into(),
        });
    }
    Ok(poly)
}

/// Raw contents of a germ file before validation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GermFile {
    pub name: Option<String>,
    pub comments: Vec<String>,
    pub vars: Vec<String>,
    pub polys: Vec<(usize, String)>,
}

impl GermFile {
    pub fn parse(text: &str) -> Result<GermFile, GermFileError> {
        let mut file = GermFile::default();
        let mut have_vars = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(c) = trimmed.strip_prefix('#') {
                file.comments.push(c.trim().to_string());
                continue;
            }
            let (key, value) = trimmed.split_once(':').ok_or_else(|| GermFileError::Format {
                line,
                message: format!("expected `key: value`, found `{trimmed}`"),
            })?;
            let value = value.trim();
            match key.trim() {
                "name" => file.name = Some(value.to_string()),
                "vars" => {
                    if have_vars {
                        return Err(GermFileError::Format {
                            line,
                            message: "duplicate `vars:` line".into(),
                        });
                    }
                    have_vars = true;
                    for v in value.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
                        if !is_identifier(v) {
                            return Err(GermFileError::Format {
                                line,
                                message: format!("`{v}` is not a valid variable name"),
                            });
                        }
                        file.vars.push(v.to_string());
                    }
                }
                "poly" => {
                    if !have_vars {
                        return Err(GermFileError::Format {
                            line,
                            message: "`poly:` before `vars:`".into(),
                        });
                    }
                    file.polys.push((line, value.to_string()));
                }
                other => {
                    return Err(GermFileError::Format {
                        line,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        if !have_vars {
            return Err(GermFileError::MissingVars);
        }
        if file.polys.is_empty() {
            return Err(GermFileError::NoComponents);
        }
        Ok(file)
    }

    pub fn to_germ(&self) -> Result<MapGerm, GermFileError> {
        let comps = self
            .polys
            .iter()
            .map(|(line, text)| {
                parse_poly(text, &self.vars).map_err(|source| GermFileError::Expr { line: *line, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let g = MapGerm::new(self.vars.clone(), comps)?;
        Ok(match &self.name {
            Some(n) => g.with_name(n.clone()),
            None => g,
        })
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

pub fn parse_germ_file(text: &str) -> Result<MapGerm, GermFileError> {
    GermFile::parse(text)?.to_germ()
}

/// Canonical file form of a germ; `parse_germ_file` inverts it exactly.
pub fn format_germ(g: &MapGerm) -> String {
    let mut out = String::new();
    if let Some(n) = g.name() {
        out.push_str(&format!("name: {n}\n"));
    }
    out.push_str(&format!("vars: {}\n", g.var_names().join(" ")));
    for c in g.component_strings() {
        out.push_str(&format!("poly: {c}\n"));
    }
    out
}

/// Renders generator lists in the same `poly:` syntax, for inspection.
pub fn format_polys(comment: &str, vars: &[String], polys: &[Poly]) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        out.push_str(&format!("# {line}\n"));
    }
    out.push_str(&format!("vars: {}\n", vars.join(" ")));
    for p in polys {
        out.push_str(&format!("poly: {}\n", p.to_string_with(vars)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_act_component() {
        let v = vars(&["x", "y", "z"]);
        let p = parse_poly("y^4 - z^2*x^2 - x^4", &v).unwrap();
        let x = Poly::var(3, 0).unwrap();
        let y = Poly::var(3, 1).unwrap();
        let z = Poly::var(3, 2).unwrap();
        let expected = &(&y.pow(4).unwrap() - &(&z.pow(2).unwrap() * &x.pow(2).unwrap())) - &x.pow(4).unwrap();
        assert_eq!(p, expected);
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn zero_and_expansion() {
        let v = vars(&["u", "v"]);
        assert!(parse_poly("0", &v).unwrap().is_zero());
        let u = Poly::var(2, 0).unwrap();
        let w = Poly::var(2, 1).unwrap();
        assert_eq!(
            parse_poly("(u+v)^2 - 2*u*v", &v).unwrap(),
            &(&u * &u) + &(&w * &w)
        );
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let v = vars(&["x"]);
        let x = Poly::var(1, 0).unwrap();
        assert_eq!(parse_poly("-x^2", &v).unwrap(), (&x * &x).neg());
        assert_eq!(parse_poly("(-x)^2", &v).unwrap(), &x * &x);
        assert_eq!(parse_poly("--x", &v).unwrap(), x);
    }

    #[test]
    fn rational_literals() {
        let v = vars(&["x"]);
        let x = Poly::var(1, 0).unwrap();
        let p = parse_poly("3/4*x - 1/2*x", &v).unwrap();
        assert_eq!(p, x.scale(&Rat::new(BigInt::from(1), BigInt::from(4))));
        assert_eq!(parse_poly("6/4", &v).unwrap(), Poly::constant(1, Rat::new(BigInt::from(3), BigInt::from(2))));
    }

    #[test]
    fn error_kinds_and_positions() {
        let v = vars(&["x", "y"]);
        assert_eq!(
            parse_poly("x + w", &v),
            Err(ParseError::UnknownVariable { name: "w".into(), pos: 4 })
        );
        assert_eq!(parse_poly("x^-1", &v), Err(ParseError::MalformedExponent { pos: 2 }));
        assert_eq!(parse_poly("x^y", &v), Err(ParseError::MalformedExponent { pos: 2 }));
        assert_eq!(parse_poly("x^1.5", &v), Err(ParseError::MalformedExponent { pos: 2 }));
        assert_eq!(parse_poly("x/2", &v), Err(ParseError::DivisionByVariable { pos: 1 }));
        assert_eq!(parse_poly("1/x", &v), Err(ParseError::DivisionByVariable { pos: 1 }));
        assert_eq!(parse_poly("(x+1)/2", &v), Err(ParseError::DivisionByVariable { pos: 5 }));

        let e = parse_poly("2x", &v).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { pos: 1, .. }), "{e:?}");
        let e = parse_poly("x + ", &v).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { pos: 4, .. }), "{e:?}");
        let e = parse_poly("(x + y", &v).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { pos: 6, .. }), "{e:?}");
        let e = parse_poly("x $ y", &v).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { pos: 2, .. }), "{e:?}");
        let e = parse_poly("1/0", &v).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { pos: 2, .. }), "{e:?}");
        let e = parse_poly("0.5*x", &v).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { pos: 0, .. }), "{e:?}");
        let e = parse_poly("x^2^3", &v).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { pos: 3, .. }), "{e:?}");
    }

    #[test]
    fn positions_count_characters_not_bytes() {
        let v = vars(&["α", "y"]);
        assert_eq!(
            parse_poly("α*β", &v),
            Err(ParseError::UnknownVariable { name: "β".into(), pos: 2 })
        );
    }

    #[test]
    fn germ_file_for_the_xy_example() {
        let g = parse_germ_file("# the (x, xy) germ\nname: xy\nvars: x y\npoly: x\npoly: x*y\n").unwrap();
        assert_eq!(g.source_dim(), 2);
        assert_eq!(g.target_dim(), 2);
        assert_eq!(g.name(), Some("xy"));
        let x = Poly::var(2, 0).unwrap();
        let y = Poly::var(2, 1).unwrap();
        assert_eq!(g.components(), &[x.clone(), &x * &y]);
    }

    #[test]
    fn germ_file_errors() {
        assert!(matches!(
            parse_germ_file("vars: x y\npoly: x + 1\n"),
            Err(GermFileError::Germ(AlgebraError::NonzeroConstantTerm { component: 0 }))
        ));
        assert!(matches!(
            parse_germ_file("vars: x\npoly: x\npoly: x^2\n"),
            Err(GermFileError::Germ(AlgebraError::TargetExceedsSource { .. }))
        ));
        assert!(matches!(
            parse_germ_file("vars: x y\npoly: x\npoly: 2x\n"),
            Err(GermFileError::Expr { line: 3, .. })
        ));
        assert_eq!(parse_germ_file("poly: x\n"), Err(GermFileError::Format {
            line: 1,
            message: "`poly:` before `vars:`".into()
        }));
        assert_eq!(parse_germ_file("vars: x\n"), Err(GermFileError::NoComponents));
        assert_eq!(parse_germ_file("# nothing\n"), Err(GermFileError::MissingVars));
        assert!(matches!(parse_germ_file("vars: x\nfoo: 1\n"), Err(GermFileError::Format { line: 2, .. })));
        assert!(matches!(parse_germ_file("vars: x 1y\npoly: x\n"), Err(GermFileError::Format { line: 1, .. })));
        assert!(matches!(
            parse_germ_file("vars: x x\npoly: x\n"),
            Err(GermFileError::Germ(AlgebraError::DuplicateVariable(_)))
        ));
    }

    #[test]
    fn format_round_trip() {
        let text = "name: act\nvars: x y z\npoly: -x^4 - x^2*z^2 + y^4\npoly: x*y\n";
        let g = parse_germ_file(text).unwrap();
        assert_eq!(format_germ(&g), text);
        assert_eq!(parse_germ_file(&format_germ(&g)).unwrap(), g);
    }
}
