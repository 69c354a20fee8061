//! Transform pipelines such as `invert(-2) . minvert(1)`.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! pipeline := step ('.' step)*
//! step     := name ( '(' rational? ')' )?
//! rational := '-'? digits ('/' digits)?
//! name     := binomial | invert | minvert | rev | hankel
//! ```
//!
//! Steps compose like functions: the rightmost step is applied first, so
//! `hankel` may only appear as the leftmost step.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::scalar::Scalar;
use crate::series::{SeriesError, TruncatedSeries};
use crate::transforms;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Binomial,
    Invert,
    Minvert,
    Rev,
    Hankel,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Binomial => "binomial",
            TransformKind::Invert => "invert",
            TransformKind::Minvert => "minvert",
            TransformKind::Rev => "rev",
            TransformKind::Hankel => "hankel",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "binomial" => TransformKind::Binomial,
            "invert" => TransformKind::Invert,
            "minvert" => TransformKind::Minvert,
            "rev" => TransformKind::Rev,
            "hankel" => TransformKind::Hankel,
            _ => return None,
        })
    }

    pub fn takes_parameter(self) -> bool {
        matches!(
            self,
            TransformKind::Binomial | TransformKind::Invert | TransformKind::Minvert
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformStep<T> {
    pub kind: TransformKind,
    pub parameter: Option<T>,
}

/// Steps in written (left-to-right) order; application runs right to left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformPipeline<T> {
    steps: Vec<TransformStep<T>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("parse error at position {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("arity error at position {position}: {message}")]
    Arity { position: usize, message: String },
    #[error(
        "placement error at position {position}: hankel must be the last-applied (leftmost) step"
    )]
    Placement { position: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Either a transformed series or, when the pipeline ends in `hankel`, the
/// list of Hankel determinants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineOutput<T: Scalar> {
    Series(TruncatedSeries<T>),
    Determinants(Vec<T>),
}

impl<T: Scalar> PipelineOutput<T> {
    pub fn values(&self) -> &[T] {
        match self {
            PipelineOutput::Series(s) => s.coeffs(),
            PipelineOutput::Determinants(d) => d,
        }
    }
}

impl<T: Scalar> TransformPipeline<T> {
    pub fn empty() -> Self {
        Self { steps: Vec::new() }
    }

    /// Validates arity and `hankel` placement.
    pub fn new(steps: Vec<TransformStep<T>>) -> Result<Self, PipelineError> {
        for (i, step) in steps.iter().enumerate() {
            let position = i + 1;
            if step.kind.takes_parameter() != step.parameter.is_some() {
                return Err(PipelineError::Arity {
                    position,
                    message: arity_message(step.kind),
                });
            }
            if step.kind == TransformKind::Hankel && i != 0 {
                return Err(PipelineError::Placement { position });
            }
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[TransformStep<T>] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the steps right to left.
    pub fn run(&self, g: &TruncatedSeries<T>) -> Result<PipelineOutput<T>, PipelineError> {
        let mut current = g.clone();
        for step in self.steps.iter().rev() {
            let param = || {
                step.parameter
                    .clone()
                    .expect("arity validated on construction")
            };
            current = match step.kind {
                TransformKind::Binomial => transforms::binomial(&current, &param()),
                TransformKind::Invert => transforms::invert(&current, &param()),
                TransformKind::Minvert => transforms::minvert(&current, &param()),
                TransformKind::Rev => transforms::rev(&current)?,
                TransformKind::Hankel => {
                    return Ok(PipelineOutput::Determinants(transforms::hankel(
                        current.coeffs(),
                    )))
                }
            };
        }
        Ok(PipelineOutput::Series(current))
    }
}

fn arity_message(kind: TransformKind) -> String {
    if kind.takes_parameter() {
        format!("{} takes exactly one rational parameter", kind.name())
    } else {
        format!("{} takes no parameter", kind.name())
    }
}

impl<T: Scalar> fmt::Display for TransformPipeline<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            match &step.parameter {
                Some(p) => write!(f, "{}({p})", step.kind.name())?,
                None => f.write_str(step.kind.name())?,
            }
        }
        Ok(())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    /// 1-based position of the next significant character.
    fn position(&mut self) -> usize {
        self.skip_ws();
        self.pos + 1
    }

    fn error(&mut self, expected: &str) -> PipelineError {
        let position = self.position();
        let found = match self.chars.get(self.pos) {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        PipelineError::Parse {
            position,
            expected: expected.to_string(),
            found,
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn rational(&mut self) -> Result<BigRational, PipelineError> {
        self.skip_ws();
        let negative = self.chars.get(self.pos) == Some(&'-');
        if negative {
            self.pos += 1;
        }
        self.skip_ws();
        let num = self.digits().ok_or_else(|| self.error("an integer"))?;
        let mut value = BigRational::from_integer(num.parse::<BigInt>().expect("digits"));
        if self.peek() == Some('/') {
            self.pos += 1;
            self.skip_ws();
            let den_pos = self.position();
            let den = self
                .digits()
                .ok_or_else(|| self.error("a positive integer denominator"))?;
            let den = den.parse::<BigInt>().expect("digits");
            if den == BigInt::from(0) {
                return Err(PipelineError::Parse {
                    position: den_pos,
                    expected: "a positive integer denominator".into(),
                    found: "'0'".into(),
                });
            }
            value /= BigRational::from_integer(den);
        }
        Ok(if negative { -value } else { value })
    }

    fn step(&mut self) -> Result<(usize, TransformStep<BigRational>), PipelineError> {
        let start = self.position();
        let mut name = String::new();
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphabetic())
        {
            name.push(self.chars[self.pos]);
            self.pos += 1;
        }
        if name.is_empty() {
            return Err(self.error("a transform name (binomial, invert, minvert, rev, hankel)"));
        }
        let kind = TransformKind::from_name(&name).ok_or_else(|| PipelineError::Parse {
            position: start,
            expected: "a transform name (binomial, invert, minvert, rev, hankel)".into(),
            found: format!("'{name}'"),
        })?;
        let mut parameter = None;
        if self.peek() == Some('(') {
            self.pos += 1;
            if self.peek() != Some(')') {
                parameter = Some(self.rational()?);
            }
            if self.peek() != Some(')') {
                return Err(self.error("')'"));
            }
            self.pos += 1;
        }
        if kind.takes_parameter() != parameter.is_some() {
            return Err(PipelineError::Arity {
                position: start,
                message: arity_message(kind),
            });
        }
        Ok((start, TransformStep { kind, parameter }))
    }
}

/// Parses a pipeline expression; the empty string is the empty pipeline.
pub fn parse_pipeline(text: &str) -> Result<TransformPipeline<BigRational>, PipelineError> {
    let mut parser = Parser::new(text);
    let mut steps = Vec::new();
    if parser.peek().is_none() {
        return Ok(TransformPipeline::empty());
    }
    loop {
        let (position, step) = parser.step()?;
        if step.kind == TransformKind::Hankel && !steps.is_empty() {
            return Err(PipelineError::Placement { position });
        }
        steps.push(step);
        match parser.peek() {
            None => break,
            Some('.') => parser.pos += 1,
            Some(_) => return Err(parser.error("'.' or end of input")),
        }
    }
    TransformPipeline::new(steps)
}
