//! Source expressions: where a moment sequence comes from.
//!
//! ```text
//! source  := name | name '(' args ')' | '{' json spec '}'
//! jcf     := 'jcf' '(' side ';' side ')'
//! side    := [r {',' r}] ['|' r]       // head values, then the tail
//! ```
//!
//! `gab(a,b)`, `spidernet(a,b,c)`, `meixner(p,q,a)` and the fixture names are
//! the other forms. Without a `|`, the last value of a `jcf` side is its tail,
//! so `jcf(0,1; 2,1)` and `jcf(0|1; 2|1)` agree.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use spidermoment_core::fixtures::{Fixture, UnknownFixture};
use spidermoment_core::{
    gab_spec, JFraction, MeixnerParams, ModelError, Rational, Series, SpidernetParams,
};

#[derive(Debug, thiserror::Error)]
pub enum SourceError {
    #[error("position {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },
    #[error(transparent)]
    Fixture(#[from] UnknownFixture),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid J-fraction JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SourceExpr {
    Fixture(Fixture),
    Gab(Rational, Rational),
    Spidernet(SpidernetParams),
    Meixner(MeixnerParams<Rational>),
    Jcf(JFraction),
}

impl SourceExpr {
    /// The defining J-fraction, if the source has one.
    pub fn spec(&self) -> Option<JFraction> {
        match self {
            SourceExpr::Fixture(_) => None,
            SourceExpr::Gab(a, b) => Some(gab_spec(a.clone(), b.clone())),
            SourceExpr::Spidernet(p) => Some(p.spec()),
            SourceExpr::Meixner(m) => Some(m.spec()),
            SourceExpr::Jcf(s) => Some(s.clone()),
        }
    }

    /// `μ_0..=μ_order`.
    pub fn expand(&self, order: usize) -> Series {
        match self {
            SourceExpr::Fixture(f) => f.series(order),
            other => other
                .spec()
                .expect("non-fixture sources have a spec")
                .expand(order),
        }
    }
}

impl fmt::Display for SourceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceExpr::Fixture(x) => write!(f, "{x}"),
            SourceExpr::Gab(a, b) => write!(f, "gab({a},{b})"),
            SourceExpr::Spidernet(p) => write!(f, "spidernet({},{},{})", p.a(), p.b(), p.c()),
            SourceExpr::Meixner(m) => write!(f, "meixner({},{},{})", m.p, m.q, m.a),
            SourceExpr::Jcf(s) => write!(f, "{s}"),
        }
    }
}

pub fn parse_source(text: &str) -> Result<SourceExpr, SourceError> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str::<JFraction>(text)
            .map(|s| SourceExpr::Jcf(s.normalized()))
            .map_err(|e| SourceError::Json(e.to_string()));
    }
    let mut p = Cursor::new(text);
    let start = p.position();
    let name = p.ident();
    if name.is_empty() {
        return Err(p.error("a source name"));
    }
    let lower = name.to_ascii_lowercase();
    let expr = match lower.as_str() {
        "gab" => {
            let args = p.args(2)?;
            SourceExpr::Gab(args[0].clone(), args[1].clone())
        }
        "meixner" => {
            let args = p.args(3)?;
            let [p_, q, a] = [args[0].clone(), args[1].clone(), args[2].clone()];
            SourceExpr::Meixner(MeixnerParams::new(p_, q, a)?)
        }
        "spidernet" => {
            let arg_pos = p.position();
            let args = p.args(3)?;
            let ints = args
                .iter()
                .map(|v| v.is_integer().then(|| v.to_integer().to_i64()).flatten())
                .collect::<Option<Vec<i64>>>()
                .ok_or_else(|| SourceError::Parse {
                    position: arg_pos,
                    expected: "integer spidernet parameters".into(),
                    found: format!("({},{},{})", args[0], args[1], args[2]),
                })?;
            SourceExpr::Spidernet(SpidernetParams::new(ints[0], ints[1], ints[2])?)
        }
        "jcf" => {
            p.expect('(')?;
            let (alpha_head, alpha_tail) = p.side(';')?;
            p.expect(';')?;
            let (beta_head, beta_tail) = p.side(')')?;
            p.expect(')')?;
            SourceExpr::Jcf(
                JFraction::new(alpha_head, alpha_tail, beta_head, beta_tail).normalized(),
            )
        }
        _ => match lower.parse::<Fixture>() {
            Ok(f) => SourceExpr::Fixture(f),
            Err(_) => {
                return Err(SourceError::Parse {
                    position: start,
                    expected: "gab, spidernet, meixner, jcf, a JSON spec or a fixture name".into(),
                    found: format!("'{name}'"),
                })
            }
        },
    };
    if p.peek().is_some() {
        return Err(p.error("end of input"));
    }
    Ok(expr)
}

/// Parses `"1,3,13,63"` into rationals (used by `jcf extract`).
pub fn parse_sequence(text: &str) -> Result<Vec<Rational>, SourceError> {
    let mut p = Cursor::new(text);
    let mut out = vec![p.rational()?];
    while p.peek() == Some(',') {
        p.pos += 1;
        out.push(p.rational()?);
    }
    if p.peek().is_some() {
        return Err(p.error("',' or end of input"));
    }
    Ok(out)
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn peek(&mut self) -> Option<char> {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn position(&mut self) -> usize {
        self.peek();
        self.pos + 1
    }

    fn error(&mut self, expected: &str) -> SourceError {
        let found = match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        };
        SourceError::Parse {
            position: self.pos + 1,
            expected: expected.into(),
            found,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SourceError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn ident(&mut self) -> String {
        self.peek();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    /// `[-]p[/q]`, whitespace allowed around the sign and slash.
    fn rational(&mut self) -> Result<Rational, SourceError> {
        let negative = self.peek() == Some('-');
        if negative {
            self.pos += 1;
        }
        self.peek();
        let num = self.digits().ok_or_else(|| self.error("a number"))?;
        let mut value = Rational::from_integer(num);
        if self.peek() == Some('/') {
            self.pos += 1;
            self.peek();
            let den_pos = self.pos + 1;
            let den = self.digits().ok_or_else(|| self.error("a denominator"))?;
            if den.is_zero() {
                return Err(SourceError::Parse {
                    position: den_pos,
                    expected: "a nonzero denominator".into(),
                    found: "'0'".into(),
                });
            }
            value /= Rational::from_integer(den);
        }
        Ok(if negative { -value } else { value })
    }

    fn args(&mut self, count: usize) -> Result<Vec<Rational>, SourceError> {
        self.expect('(')?;
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            if i > 0 {
                self.expect(',')?;
            }
            out.push(self.rational()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn side(&mut self, end: char) -> Result<(Vec<Rational>, Rational), SourceError> {
        let mut values = Vec::new();
        if !matches!(self.peek(), Some('|')) {
            values.push(self.rational()?);
            while self.peek() == Some(',') {
                self.pos += 1;
                values.push(self.rational()?);
            }
        }
        if self.peek() == Some('|') {
            self.pos += 1;
            let tail = self.rational()?;
            return Ok((values, tail));
        }
        match values.pop() {
            Some(tail) => Ok((values, tail)),
            None => Err(self.error(&format!("a coefficient before '{end}'"))),
        }
    }
}
