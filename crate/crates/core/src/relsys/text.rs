//! Relation text format:
//!
//! ```text
//! # comment
//! elements: a b c
//! a b
//! b c   # means Rbc
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::relsys::RelationalSystem;

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_relation(text: &str) -> Result<RelationalSystem> {
    let mut labels: Option<Vec<String>> = None;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        match &labels {
            None => {
                let rest = line.strip_prefix("elements:").ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "expected `elements:` header".into(),
                })?;
                labels = Some(rest.split_whitespace().map(str::to_string).collect());
            }
            Some(_) => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected `x y`, found `{line}`"),
                    });
                }
                pairs.push((parts[0].to_string(), parts[1].to_string()));
            }
        }
    }
    let labels = labels.ok_or_else(|| Error::Parse {
        line: 0,
        message: "missing `elements:` header".into(),
    })?;
    RelationalSystem::build(&labels, &pairs)
}

pub fn to_relation_text(sys: &RelationalSystem) -> String {
    let mut out = format!("elements: {}\n", sys.labels().join(" "));
    for (a, b) in sys.pairs() {
        let _ = writeln!(out, "{} {}", sys.label(a), sys.label(b));
    }
    out
}

/// Graphviz digraph with one edge per related pair.
pub fn to_dot(sys: &RelationalSystem) -> String {
    let mut out = String::from("digraph R {\n");
    for x in sys.elements() {
        let _ = writeln!(out, "  \"{}\";", sys.label(x));
    }
    for (a, b) in sys.pairs() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", sys.label(a), sys.label(b));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let sys = parse_relation("# demo\nelements: x y  # two\nx y\n\ny y\n").unwrap();
        assert_eq!(sys.len(), 2);
        assert!(sys.related(0, 1) && sys.related(1, 1) && !sys.related(0, 0));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_relation("x y\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_relation("elements: x\nx\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert_eq!(
            parse_relation("elements: x\nx z\n"),
            Err(Error::UnknownLabel("z".into()))
        );
    }

    #[test]
    fn text_round_trip() {
        let sys = crate::fixture::relation();
        assert_eq!(parse_relation(&to_relation_text(&sys)).unwrap(), sys);
        assert!(to_dot(&sys).contains("\"e\" -> \"f\";"));
    }
}
