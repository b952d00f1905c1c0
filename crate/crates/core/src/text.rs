//! The `.grid` text format (UTF-8, LF, 1-based coordinates):
//!
//! ```text
//! grid 5
//! + 3 4 5 1 2
//! - 1 2 3 4 5
//! comp 1 1 1 1 1
//! ```
//!
//! The `comp` line is optional.

use thiserror::Error;

use crate::grid::{Diagram, GridError, RawDiagram, MAX_GRID_SIZE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] GridError),
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

pub fn encode(d: &Diagram) -> String {
    let join = |v: &[usize]| {
        v.iter()
            .map(|x| (x + 1).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = format!(
        "grid {}\n+ {}\n- {}\n",
        d.n(),
        join(d.plus_row()),
        join(d.minus_row())
    );
    if d.num_components() > 1 {
        s.push_str(&format!("comp {}\n", join(d.component_of())));
    }
    s
}

/// Splits a line into whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch == ' ' || ch == '\t' {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn numbers(
    line_no: usize,
    toks: &[(usize, &str)],
    expected: usize,
    bound: usize,
) -> Result<Vec<usize>, ParseError> {
    if toks.len() != expected {
        let column = toks.last().map_or(1, |(c, t)| c + t.len());
        return Err(ParseError::at(
            line_no,
            column,
            format!("expected {expected} entries, found {}", toks.len()),
        ));
    }
    toks.iter()
        .map(|&(col, t)| match t.parse::<usize>() {
            Ok(v) if (1..=bound).contains(&v) => Ok(v - 1),
            Ok(v) => Err(ParseError::at(
                line_no,
                col,
                format!("value {v} out of range 1..={bound}"),
            )),
            Err(_) => Err(ParseError::at(line_no, col, format!("not a number: {t:?}"))),
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Diagram, ParseError> {
    let lines: Vec<&str> = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    let mut content: Vec<(usize, &str)> = Vec::new();
    for (i, l) in lines.iter().enumerate() {
        if l.trim().is_empty() {
            // Only trailing blank lines are tolerated.
            if lines[i..].iter().any(|r| !r.trim().is_empty()) {
                return Err(ParseError::at(i + 1, 1, "unexpected blank line"));
            }
            break;
        }
        content.push((i + 1, l));
    }
    let Some(&(l1, header)) = content.first() else {
        return Err(ParseError::at(1, 1, "empty input"));
    };
    let head = tokens(header);
    if head.len() != 2 || head[0].1 != "grid" {
        return Err(ParseError::at(l1, 1, "expected `grid <n>`"));
    }
    let n: usize = head[1]
        .1
        .parse()
        .map_err(|_| ParseError::at(l1, head[1].0, "grid size is not a number"))?;
    if n < 2 {
        return Err(GridError::SizeTooSmall(n).into());
    }
    if n > MAX_GRID_SIZE {
        return Err(GridError::SizeTooLarge(n).into());
    }
    let row_line = |idx: usize, tag: &str| -> Result<Vec<usize>, ParseError> {
        let Some(&(ln, line)) = content.get(idx) else {
            let last = content.last().map_or(1, |c| c.0);
            return Err(ParseError::at(last + 1, 1, format!("missing `{tag}` line")));
        };
        let toks = tokens(line);
        if toks.first().map(|t| t.1) != Some(tag) {
            return Err(ParseError::at(ln, 1, format!("expected line starting with `{tag}`")));
        }
        numbers(ln, &toks[1..], n, n)
    };
    let plus_row = row_line(1, "+")?;
    let minus_row = row_line(2, "-")?;
    let component_of = match content.get(3) {
        None => None,
        Some(&(ln, line)) => {
            let toks = tokens(line);
            if toks.first().map(|t| t.1) != Some("comp") {
                return Err(ParseError::at(ln, 1, "expected `comp` line or end of input"));
            }
            Some(numbers(ln, &toks[1..], n, n)?)
        }
    };
    if let Some(&(ln, _)) = content.get(4) {
        return Err(ParseError::at(ln, 1, "trailing content"));
    }
    Ok(Diagram::validate(RawDiagram {
        plus_row,
        minus_row,
        component_of,
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_encoding() {
        assert_eq!(encode(&Diagram::unknot()), "grid 2\n+ 1 2\n- 2 1\n");
    }

    #[test]
    fn trefoil_round_trip() {
        let d = Diagram::new(vec![2, 3, 4, 0, 1], vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(parse(&encode(&d)).unwrap(), d);
    }

    #[test]
    fn repeated_row_is_not_a_permutation() {
        assert!(matches!(
            parse("grid 2\n+ 1 1\n- 2 2\n"),
            Err(ParseError::Invalid(GridError::NotAPermutation { .. }))
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(
            parse("grid 2\n+ 1 x\n- 2 1\n"),
            Err(ParseError::Syntax {
                line: 2,
                column: 5,
                message: "not a number: \"x\"".into()
            })
        );
        assert!(matches!(
            parse("grid 3\n+ 1 2 3\n"),
            Err(ParseError::Syntax { line: 3, .. })
        ));
        assert!(matches!(parse(""), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse("grid 2\n+ 1 2\n- 2 3\n"),
            Err(ParseError::Syntax { line: 3, column: 5, .. })
        ));
    }

    #[test]
    fn components_line_round_trips() {
        let d = Diagram::with_components(vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![1, 1, 0, 0]).unwrap();
        let text = encode(&d);
        assert!(text.ends_with("comp 2 2 1 1\n"));
        assert_eq!(parse(&text).unwrap(), d);
    }
}
