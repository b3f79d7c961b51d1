//! Plain-text point-set format.
//!
//! Lines starting with `#` are comments and blank lines are skipped. The first
//! remaining line holds N, followed by N lines `x y` of integers separated by
//! whitespace. LF and CRLF line endings are both accepted.

use thiserror::Error;

use super::{GeometryError, Point, PointSet};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn parse_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_point_set(text: &str) -> Result<PointSet, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (count_line, count_text) = lines
        .next()
        .ok_or_else(|| parse_error(1, "missing point count"))?;
    let n: usize = count_text.parse().map_err(|_| {
        parse_error(
            count_line,
            format!("expected a point count, found {count_text:?}"),
        )
    })?;

    let mut points = Vec::with_capacity(n);
    let mut last_line = count_line;
    for (line, content) in lines {
        last_line = line;
        if points.len() == n {
            return Err(parse_error(
                line,
                "more coordinate lines than the declared count",
            ));
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_error(
                line,
                format!(
                    "expected two integers \"x y\", found {} fields",
                    fields.len()
                ),
            ));
        }
        let coord = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| parse_error(line, format!("invalid integer coordinate {s:?}")))
        };
        points.push(Point::new(coord(fields[0])?, coord(fields[1])?));
    }
    if points.len() < n {
        return Err(parse_error(
            last_line,
            format!("declared {n} points but found {}", points.len()),
        ));
    }
    Ok(PointSet::new(points)?)
}

pub fn write_point_set(set: &PointSet) -> String {
    let mut out = format!("{}\n", set.n());
    for p in set.points() {
        out.push_str(&format!("{} {}\n", p.x, p.y));
    }
    out
}
