use crate::complex::{consts, BigComplex};
use crate::error::{Error, Result};
use crate::matrix::LinearSubstitution;

/// The shipped generator data.
pub const GENERATOR_DATA: &str = include_str!("../../data/valentiner_generators.txt");

/// A parsed generator: its name and 3×3 matrix.
#[derive(Clone, Debug)]
pub struct NamedGenerator {
    pub name: String,
    pub matrix: LinearSubstitution,
}

fn parse_entry(tok: &str, prec: u32) -> Result<BigComplex> {
    let parts: Vec<&str> = tok.split(':').collect();
    let nums: Vec<i64> = parts
        .iter()
        .map(|p| p.parse::<i64>().map_err(|_| Error::Parse(format!("bad entry `{tok}`"))))
        .collect::<Result<_>>()?;
    let [p, q, r, k] = nums[..] else {
        return Err(Error::Parse(format!("entry `{tok}` needs four fields p:q:r:k")));
    };
    if r == 0 {
        return Err(Error::Parse(format!("zero denominator in `{tok}`")));
    }
    let real = (BigComplex::from_i64(prec, p) + consts::sqrt5(prec).scale_i64(q)).div_i64(r);
    Ok(&real * &BigComplex::root_of_unity(prec, k, 3))
}

/// Parses the `generator NAME` / three-row format.
pub fn parse_generators(text: &str, prec: u32) -> Result<Vec<NamedGenerator>> {
    let mut out = Vec::new();
    let mut name: Option<String> = None;
    let mut rows: Vec<Vec<BigComplex>> = Vec::new();
    let mut flush = |name: &mut Option<String>, rows: &mut Vec<Vec<BigComplex>>| -> Result<()> {
        if let Some(n) = name.take() {
            if rows.len() != 3 {
                return Err(Error::Parse(format!("generator {n} has {} rows", rows.len())));
            }
            out.push(NamedGenerator {
                name: n,
                matrix: LinearSubstitution::from_rows(std::mem::take(rows))?,
            });
        }
        Ok(())
    };
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(n) = line.strip_prefix("generator") {
            flush(&mut name, &mut rows)?;
            name = Some(n.trim().to_string());
            continue;
        }
        if name.is_none() {
            return Err(Error::Parse(format!("matrix row before any generator header: `{line}`")));
        }
        let row = line
            .split_whitespace()
            .map(|t| parse_entry(t, prec))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != 3 {
            return Err(Error::Parse(format!("row `{line}` does not have 3 entries")));
        }
        rows.push(row);
    }
    flush(&mut name, &mut rows)?;
    drop(flush);
    if out.is_empty() {
        return Err(Error::Parse("no generators found".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_generators_are_unimodular() {
        let g = parse_generators(GENERATOR_DATA, 256).unwrap();
        assert_eq!(g.len(), 2);
        for x in &g {
            assert!(x.matrix.determinant().dist_f64(&BigComplex::one(256)) < 1e-60);
        }
    }

    #[test]
    fn malformed_data_is_rejected() {
        assert!(parse_generators("generator a\n1:0:1:0 0:0:1:0\n", 64).is_err());
        assert!(parse_generators("1:0:1:0 0:0:1:0 0:0:1:0\n", 64).is_err());
        assert!(parse_generators("generator a\n1:0:0:0 0:0:1:0 0:0:1:0\n", 64).is_err());
        assert!(parse_generators("# nothing\n", 64).is_err());
    }
}
