use crate::morph::{n_dominates, QualityVector};
use crate::{Error, Result};

/// Expected relation between two quality vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `>`: left dominates right.
    Dominates,
    /// `<`: right dominates left.
    Dominated,
    /// `||`: neither dominates.
    Incomparable,
}

impl Relation {
    fn parse(token: &str) -> Option<Self> {
        match token {
            ">" => Some(Relation::Dominates),
            "<" => Some(Relation::Dominated),
            "||" => Some(Relation::Incomparable),
            _ => None,
        }
    }

    /// Observed relation between `a` and `b`.
    pub fn between(a: &QualityVector, b: &QualityVector) -> Result<Self> {
        Ok(match (n_dominates(a, b)?, n_dominates(b, a)?) {
            (true, _) => Relation::Dominates,
            (_, true) => Relation::Dominated,
            _ => Relation::Incomparable,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualityCase {
    pub line: usize,
    pub left: QualityVector,
    pub relation: Relation,
    pub right: QualityVector,
}

/// Parses lines of the form `(w; n1, ...) REL (w; n1, ...)` with `REL` one
/// of `>`, `<`, `||`. Blank lines and `#` comments are skipped.
pub fn parse_quality_cases(text: &str) -> Result<Vec<QualityCase>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: format!("line {}", i + 1),
            line: i + 1,
            column: 1,
            message,
        };
        let close = line.find(')').ok_or_else(|| err("missing `)`".into()))?;
        let (left, rest) = line.split_at(close + 1);
        let rest = rest.trim_start();
        let split = rest.find('(').ok_or_else(|| err("missing right-hand vector".into()))?;
        let (rel, right) = rest.split_at(split);
        let relation = Relation::parse(rel.trim()).ok_or_else(|| err(format!("unknown relation `{}`", rel.trim())))?;
        let parse = |s: &str| s.parse::<QualityVector>().map_err(|e| err(e.to_string()));
        out.push(QualityCase {
            line: i + 1,
            left: parse(left)?,
            relation,
            right: parse(right)?,
        });
    }
    Ok(out)
}
