//! The `seq-v1` text format: one decimal value per line, `#` comments.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::Sequence;

pub fn parse_sequence(text: &str) -> Result<Sequence> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("not a decimal number: {line:?}"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse { line: i + 1, msg: format!("non-finite value {line:?}") });
        }
        values.push(v);
    }
    Sequence::new(values)
}

/// Renders with shortest round-trip formatting so reading back is exact.
pub fn format_sequence(f: &Sequence, header: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        for line in h.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    for v in f.values() {
        out.push_str(&format!("{v:?}\n"));
    }
    out
}

pub fn read_sequence(path: impl AsRef<Path>) -> Result<Sequence> {
    parse_sequence(&fs::read_to_string(path)?)
}

pub fn write_sequence(path: impl AsRef<Path>, f: &Sequence, header: Option<&str>) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(format_sequence(f, header).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let f = parse_sequence("# seq-v1\n1\n\n  2.5 \n# note\n-3e2\n").unwrap();
        assert_eq!(f.values(), &[1.0, 2.5, -300.0]);
    }

    #[test]
    fn rejects_non_finite_and_garbage() {
        assert!(matches!(parse_sequence("1\nNaN\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_sequence("inf\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_sequence("-infinity\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_sequence("1,2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn roundtrip_is_exact() {
        let f = Sequence::new(vec![0.1, 1.0 / 3.0, -2.0, 1e-300, 12345.678]).unwrap();
        let g = parse_sequence(&format_sequence(&f, Some("hdr\nsecond"))).unwrap();
        assert_eq!(f, g);
    }
}
