//! Turning command-line text into library values.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use bolzano_core::poly::Polynomial;
use bolzano_core::{parse, presets, Expression, MeasurableNumber, Rational};

/// Input that could not be read or understood; exits with the parse code.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

/// Accepts `1000000`, `1e6` or `10^6`.
pub fn count(text: &str) -> Result<u64, String> {
    let t = text.trim().replace('_', "");
    let (base, exp) = if let Some((m, e)) = t.split_once(['e', 'E']) {
        (m.parse::<u64>().map_err(|e| e.to_string())?, e)
    } else if let Some((b, e)) = t.split_once('^') {
        let b = b.parse::<u64>().map_err(|e| e.to_string())?;
        let e = e.parse::<u32>().map_err(|e| e.to_string())?;
        return b.checked_pow(e).filter(|&v| v >= 1).ok_or_else(|| format!("`{text}` is out of range"));
    } else {
        return t.parse::<u64>().ok().filter(|&v| v >= 1).ok_or_else(|| format!("`{text}` is not a positive integer"));
    };
    let e = exp.parse::<u32>().map_err(|e| e.to_string())?;
    10u64
        .checked_pow(e)
        .and_then(|p| p.checked_mul(base))
        .filter(|&v| v >= 1)
        .ok_or_else(|| format!("`{text}` is out of range"))
}

pub fn rational(text: &str) -> Result<Rational> {
    text.parse::<Rational>().map_err(|e| InputError(e.to_string()).into())
}

/// A preset name (`A` to `D`) or expression text.
pub fn expression(text: &str) -> Result<Expression> {
    let source = presets::expression(text.trim()).unwrap_or(text);
    parse(source).map_err(|e| InputError(format!("{e} in `{}`", source.trim())).into())
}

pub fn number(text: &str) -> Result<MeasurableNumber> {
    Ok(MeasurableNumber::from_expression(&expression(text)?)?)
}

/// Expression texts from the arguments followed by the non-blank,
/// non-comment lines of each file.
pub fn expression_texts(args: &[String], files: &[impl AsRef<Path>]) -> Result<Vec<String>> {
    let mut out = args.to_vec();
    for path in files {
        let path = path.as_ref();
        let body = fs::read_to_string(path)
            .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
            .context("reading expressions")?;
        out.extend(
            body.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from),
        );
    }
    Ok(out)
}

/// Polynomial text in `x` such as `x^2 - 2`, or coefficients from the
/// leading one down, such as `1,0,-2` or `[1, 0, -2]`.
pub fn polynomial(text: &str) -> Result<Polynomial> {
    let t = text.trim();
    let listed = t.trim_start_matches('[').trim_end_matches(']');
    if t.starts_with('[') || (listed.contains(',') && !listed.contains('x')) {
        let coeffs = listed
            .split(',')
            .map(|c| rational(c.trim()))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Polynomial::from_descending(&coeffs));
    }
    Polynomial::parse(t, "x").map_err(|e| InputError(format!("{e} in `{t}`")).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(count("1e6"), Ok(1_000_000));
        assert_eq!(count("10^4"), Ok(10_000));
        assert_eq!(count("250"), Ok(250));
        assert!(count("0").is_err());
        assert!(count("-3").is_err());
        assert!(count("1e40").is_err());
    }

    #[test]
    fn polynomials_both_ways() {
        let a = polynomial("x^2 - 2").unwrap();
        assert_eq!(a, polynomial("1,0,-2").unwrap());
        assert_eq!(a, polynomial("[1, 0, -2]").unwrap());
        assert_eq!(polynomial("[5]").unwrap(), polynomial("5").unwrap());
        assert!(polynomial("x^^2").is_err());
    }

    #[test]
    fn presets_resolve() {
        assert_eq!(expression("b").unwrap(), parse(presets::B).unwrap());
        assert!(expression("sum(n,").unwrap_err().downcast_ref::<InputError>().is_some());
    }
}
