//! Plain-text curve format: one vertex per line, whitespace-separated decimal
//! coordinates, constant dimension across lines. Lines starting with '#' and
//! blank lines are ignored.

use crate::curves::Curve;
use crate::error::{Error, Result};

pub fn parse_curve(text: &str) -> Result<Curve> {
    let mut dim = 0usize;
    let mut coords: Vec<f64> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row: Vec<f64> = Vec::new();
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad number {tok:?}", lineno + 1)))?;
            row.push(v);
        }
        if dim == 0 {
            dim = row.len();
        } else if row.len() != dim {
            return Err(Error::Parse(format!(
                "line {}: expected {dim} coordinates, got {}",
                lineno + 1,
                row.len()
            )));
        }
        coords.extend_from_slice(&row);
    }
    if dim == 0 {
        return Err(Error::Parse("no vertices found".into()));
    }
    Curve::new(dim, coords)
}

pub fn write_curve(c: &Curve) -> String {
    let mut out = String::new();
    for v in c.vertices() {
        let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let c = Curve::new(2, vec![0.0, 1.5, -2.25, 3.0]).unwrap();
        let text = write_curve(&c);
        assert_eq!(parse_curve(&text).unwrap(), c);
    }

    #[test]
    fn comments_and_blanks() {
        let c = parse_curve("# header\n\n0 1\n 2 3 \n# tail\n").unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(parse_curve("0 1\n2\n").is_err());
        assert!(parse_curve("").is_err());
        assert!(parse_curve("0 x\n1 2\n").is_err());
    }
}
