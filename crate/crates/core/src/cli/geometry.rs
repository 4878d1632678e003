//! Flat `key = value` geometry files:
//!
//! ```text
//! # ball quotient surface
//! n = 2
//! kd_n = 9/1
//! neg_dn = -1
//! components = 1
//! ```

use std::collections::BTreeMap;

use crate::Rational;
use crate::error::{Error, Result};

pub const KEYS: [&str; 4] = ["n", "kd_n", "neg_dn", "components"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeometryFile {
    pub n: Option<usize>,
    pub kd_n: Option<Rational>,
    pub neg_dn: Option<Rational>,
    pub components: Option<u64>,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim().parse::<Rational>().map_err(|_| Error::Parse(format!("'{s}' is not a rational P/Q")))
}

fn parse_int<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("{key}: '{s}' is not a non-negative integer")))
}

impl GeometryFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Parse(format!("line {}: unknown key '{key}'", lineno + 1)));
            }
            if seen.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
        }
        let mut g = GeometryFile::default();
        for (key, value) in &seen {
            match key.as_str() {
                "n" => g.n = Some(parse_int(key, value)?),
                "kd_n" => g.kd_n = Some(parse_rational(value)?),
                "neg_dn" => g.neg_dn = Some(parse_rational(value)?),
                "components" => g.components = Some(parse_int(key, value)?),
                _ => unreachable!("keys are validated above"),
            }
        }
        Ok(g)
    }
}
