//! Dense vector snapshot files.
//!
//! Header line `D=<dim>`, then one `id<TAB>v1 v2 ... vD` line per vector.
//! Values are written with 17 significant digits, which round-trips every
//! finite `f64` exactly.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Formats a value with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub dim: usize,
    pub rows: Vec<(String, Vec<f64>)>,
}

impl Snapshot {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let l = l.strip_suffix('\r').unwrap_or(l);
            !l.trim().is_empty() && !l.starts_with('#')
        });
        let (header_no, header) = lines
            .next()
            .ok_or_else(|| Error::Format("missing D=<dim> header".into()))?;
        let header = header.strip_suffix('\r').unwrap_or(header);
        let dim: usize = header
            .strip_prefix("D=")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| Error::parse(header_no + 1, format!("bad header {header:?}")))?;
        if dim == 0 {
            return Err(Error::parse(header_no + 1, "dimension must be at least 1"));
        }
        let mut rows = Vec::new();
        for (lineno, line) in lines {
            let lineno = lineno + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            let (id, values) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(lineno, "expected id<TAB>values"))?;
            let vector = values
                .split_ascii_whitespace()
                .map(|v| {
                    v.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| Error::parse(lineno, format!("bad value {v:?}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if vector.len() != dim {
                return Err(Error::Format(format!(
                    "line {lineno}: {id} has {} values, header says {dim}",
                    vector.len()
                )));
            }
            rows.push((id.to_string(), vector));
        }
        Ok(Snapshot { dim, rows })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("D={}\n", self.dim);
        for (id, v) in &self.rows {
            write_row(&mut out, id, v);
        }
        out
    }
}

pub(crate) fn write_row(out: &mut String, id: &str, v: &[f64]) {
    out.push_str(id);
    out.push('\t');
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.16e}");
    }
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_only() {
        let s = Snapshot::parse("D=300\n").unwrap();
        assert_eq!(s.dim, 300);
        assert!(s.rows.is_empty());
    }

    #[test]
    fn errors() {
        assert!(Snapshot::parse("").is_err());
        assert!(Snapshot::parse("D=0\n").is_err());
        assert!(Snapshot::parse("dim=3\n").is_err());
        assert!(matches!(
            Snapshot::parse("D=2\nsyn:a\t1 2 3\n").unwrap_err(),
            Error::Format(_)
        ));
        assert!(matches!(
            Snapshot::parse("D=2\nsyn:a\t1 nan\n").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
    }

    proptest! {
        #[test]
        fn values_round_trip_exactly(v in proptest::collection::vec(-1e300f64..1e300, 1..8)) {
            let snap = Snapshot { dim: v.len(), rows: vec![("syn:x".into(), v)] };
            prop_assert_eq!(Snapshot::parse(&snap.to_text()).unwrap(), snap);
        }
    }
}
