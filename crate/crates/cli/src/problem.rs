//! Problem files: a TOML document with the keys `variables`, `equations`,
//! `partition` and one of `collection` or `maps`.

use std::fmt;

use localchern::germs::{collection_from_maps, FormCollection, GermError, Partition, VarietyGerm};
use localchern::polyring::{parse_one_form, parse_polynomial, ParseError};
use serde::{Deserialize, Serialize};
use toml::Spanned;

/// Canonical form of a problem, as echoed into reports. Every string is the
/// rendering of the parsed object, so an echo re-parses to the same problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub equations: Vec<String>,
    pub partition: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collection: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub germ: VarietyGerm,
    pub collection: FormCollection,
}

/// A validation failure, located in the source when possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ProblemError {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    variables: Spanned<Vec<Spanned<String>>>,
    #[serde(default)]
    equations: Vec<Spanned<String>>,
    partition: Spanned<Vec<Spanned<i64>>>,
    collection: Option<Blocks>,
    maps: Option<Blocks>,
}

type Blocks = Spanned<Vec<Spanned<Vec<Spanned<String>>>>>;

struct Locator<'a> {
    source: &'a str,
}

impl Locator<'_> {
    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.source[..offset.min(self.source.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    fn at(&self, offset: usize, message: impl Into<String>) -> ProblemError {
        let (line, column) = self.position(offset);
        ProblemError {
            line: Some(line),
            column: Some(column),
            message: message.into(),
        }
    }

    fn spanned<T>(&self, s: &Spanned<T>, message: impl Into<String>) -> ProblemError {
        self.at(s.span().start, message)
    }

    /// Points into a string literal: one past the opening quote plus the
    /// parser's offset.
    fn in_string(&self, s: &Spanned<String>, what: &str, e: &ParseError) -> ProblemError {
        self.at(s.span().start + 1 + e.position, format!("{what}: {}", e.kind))
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(source: &str) -> Result<Problem, ProblemError> {
    let raw: Raw = toml::from_str(source).map_err(|e| {
        let loc = Locator { source };
        match e.span() {
            Some(span) => loc.at(span.start, e.message().trim_end()),
            None => ProblemError {
                line: None,
                column: None,
                message: e.message().trim_end().to_string(),
            },
        }
    })?;
    let loc = Locator { source };

    let variables: Vec<String> = raw.variables.get_ref().iter().map(|v| v.get_ref().clone()).collect();
    // Validates the variable list even for smooth problems.
    parse_polynomial("0", &variables).map_err(|e| loc.spanned(&raw.variables, e.kind.to_string()))?;

    let mut equations = Vec::new();
    for (i, s) in raw.equations.iter().enumerate() {
        let p = parse_polynomial(s.get_ref(), &variables)
            .map_err(|e| loc.in_string(s, &format!("equation {i}"), &e))?;
        if !p.vanishes_at_origin() {
            return Err(loc.spanned(s, GermError::EquationAtOrigin { index: i }.to_string()));
        }
        equations.push(p);
    }
    let germ = VarietyGerm::new(variables.len(), equations)
        .map_err(|e| loc.spanned(&raw.variables, e.to_string()))?;

    let mut parts = Vec::new();
    for (i, k) in raw.partition.get_ref().iter().enumerate() {
        match usize::try_from(*k.get_ref()) {
            Ok(v) if v > 0 => parts.push(v),
            _ => return Err(loc.spanned(k, format!("partition part {i} must be a positive integer"))),
        }
    }
    let partition = Partition::new(parts.clone()).map_err(|e| loc.spanned(&raw.partition, e.to_string()))?;
    if partition.total() != germ.dimension() {
        return Err(loc.spanned(
            &raw.partition,
            GermError::PartitionSum {
                sum: partition.total(),
                expected: germ.dimension(),
            }
            .to_string(),
        ));
    }

    let (collection, forms_echo, maps_echo) = match (&raw.collection, &raw.maps) {
        (Some(_), Some(m)) => return Err(loc.spanned(m, "give exactly one of `collection` and `maps`")),
        (None, None) => {
            return Err(ProblemError {
                line: None,
                column: None,
                message: "missing `collection` (or `maps`)".into(),
            })
        }
        (Some(c), None) => {
            check_blocks(&loc, c, &partition, "form")?;
            let blocks = c
                .get_ref()
                .iter()
                .enumerate()
                .map(|(b, block)| {
                    block
                        .get_ref()
                        .iter()
                        .map(|s| {
                            parse_one_form(s.get_ref(), &variables)
                                .map_err(|e| loc.in_string(s, &format!("block {b}"), &e))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let echo = blocks.iter().map(|b| b.iter().map(|w| w.render(&variables)).collect()).collect();
            let collection =
                FormCollection::new(partition, blocks).map_err(|e| loc.spanned(c, e.to_string()))?;
            (collection, Some(echo), None)
        }
        (None, Some(m)) => {
            check_blocks(&loc, m, &partition, "component")?;
            let mut maps = Vec::new();
            for (b, block) in m.get_ref().iter().enumerate() {
                let mut comps = Vec::new();
                for (j, s) in block.get_ref().iter().enumerate() {
                    let p = parse_polynomial(s.get_ref(), &variables)
                        .map_err(|e| loc.in_string(s, &format!("map {b}"), &e))?;
                    if !p.vanishes_at_origin() {
                        return Err(loc.spanned(s, GermError::MapAtOrigin { block: b, component: j }.to_string()));
                    }
                    comps.push(p);
                }
                maps.push(comps);
            }
            let echo = maps.iter().map(|b| b.iter().map(|p| p.render(&variables)).collect()).collect();
            let collection = collection_from_maps(&maps, &partition).map_err(|e| loc.spanned(m, e.to_string()))?;
            (collection, None, Some(echo))
        }
    };

    let file = ProblemFile {
        equations: germ.equations().iter().map(|p| p.render(&variables)).collect(),
        variables,
        partition: parts,
        collection: forms_echo,
        maps: maps_echo,
    };
    Ok(Problem { file, germ, collection })
}

fn check_blocks(loc: &Locator, blocks: &Blocks, partition: &Partition, item: &str) -> Result<(), ProblemError> {
    if blocks.get_ref().len() != partition.len() {
        return Err(loc.spanned(
            blocks,
            format!("expected {} blocks, found {}", partition.len(), blocks.get_ref().len()),
        ));
    }
    for (i, b) in blocks.get_ref().iter().enumerate() {
        let expected = partition.block_size(i);
        if b.get_ref().len() != expected {
            return Err(loc.spanned(
                b,
                format!("block {i} has {} {item}s, expected {expected}", b.get_ref().len()),
            ));
        }
    }
    Ok(())
}

impl ProblemFile {
    /// Renders the problem back to TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem files serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONE: &str = "variables = [\"x\", \"y\", \"z\"]\nequations = [\"x^2+y^2+z^2\"]\npartition = [2]\ncollection = [[\"dx\"]]\n";

    #[test]
    fn parses_the_cone() {
        let p = parse_problem(CONE).unwrap();
        assert_eq!(p.germ.dimension(), 2);
        assert_eq!(p.file.equations, vec!["x^2 + y^2 + z^2"]);
        assert_eq!(p.file.collection, Some(vec![vec!["dx".to_string()]]));
    }

    #[test]
    fn partition_sum_is_located() {
        let src = "variables = [\"x\", \"y\", \"z\"]\nequations = []\npartition = [2]\ncollection = [[\"dx\", \"dy\"]]\n";
        let e = parse_problem(src).unwrap_err();
        assert_eq!(e.message, "partition sums to 2, expected 3");
        assert_eq!((e.line, e.column), (Some(3), Some(13)));
    }

    #[test]
    fn bad_expression_points_into_the_string() {
        let src = "variables = [\"x\", \"y\"]\npartition = [2]\ncollection = [[\"x*dx + q*dy\"]]\n";
        let e = parse_problem(src).unwrap_err();
        assert_eq!(e.line, Some(3));
        // The quote is at column 16 and `q` is seven characters past it.
        assert_eq!(e.column, Some(24));
        assert!(e.message.contains("unknown identifier `q`"), "{}", e.message);
    }

    #[test]
    fn rejects_both_or_neither_collection_kind() {
        let both = "variables = [\"x\", \"y\"]\npartition = [2]\ncollection = [[\"dx\"]]\nmaps = [[\"x\"]]\n";
        assert!(parse_problem(both).unwrap_err().message.contains("exactly one"));
        let neither = "variables = [\"x\", \"y\"]\npartition = [2]\n";
        assert!(parse_problem(neither).unwrap_err().message.contains("missing"));
    }

    #[test]
    fn block_sizes_and_origin_are_checked() {
        let src = "variables = [\"x\", \"y\"]\npartition = [1, 1]\ncollection = [[\"dx\"], [\"dy\", \"dx\"]]\n";
        assert_eq!(parse_problem(src).unwrap_err().message, "block 0 has 1 forms, expected 2");
        let src = "variables = [\"x\", \"y\", \"z\"]\nequations = [\"x + 1\"]\npartition = [2]\ncollection = [[\"dx\"]]\n";
        let e = parse_problem(src).unwrap_err();
        assert_eq!(e.message, "equation 0 does not vanish at the origin");
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn toml_syntax_errors_carry_a_line() {
        let e = parse_problem("variables = [\"x\"\npartition = [1]\n").unwrap_err();
        assert!(e.line.is_some());
        let e = parse_problem("variables = [\"x\"]\npartition = [1]\ncollection = [[\"dx\"]]\nextra = 1\n").unwrap_err();
        assert_eq!(e.line, Some(4));
    }

    #[test]
    fn maps_become_differentials() {
        let src = "variables = [\"x\", \"y\"]\npartition = [2]\nmaps = [[\"x^3 + y^3\"]]\n";
        let p = parse_problem(src).unwrap();
        assert_eq!(p.collection.blocks()[0][0].render(&p.file.variables), "3*x^2*dx + 3*y^2*dy");
        assert_eq!(p.file.maps, Some(vec![vec!["x^3 + y^3".to_string()]]));
    }

    #[test]
    fn echo_round_trips() {
        for src in [CONE, "variables = [\"x\", \"y\"]\npartition = [2]\nmaps = [[\"x^3 - 1/2*x*y\"]]\n"] {
            let p = parse_problem(src).unwrap();
            let again = parse_problem(&p.file.to_toml()).unwrap();
            assert_eq!(again.file, p.file);
        }
    }
}
