//! The per-turn removal bound `f` of turn-bounded Maximum Nim.
//!
//! Three shapes are supported, each with a compact text form:
//!
//! | form                  | meaning                               |
//! |-----------------------|---------------------------------------|
//! | `const:<c>`           | `f(k) = c`                            |
//! | `affine:<a>,<b>`      | `f(k) = a*k + b`                      |
//! | `table:<v1>,...,<vm>` | `f(k) = v_k` for `k <= m`, else `v_m` |
//!
//! Every accepted bound is positive and non-decreasing in `k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, VALUE_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BoundFn {
    kind: Kind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Kind {
    Constant(u64),
    Affine { slope: u64, offset: i64 },
    Table(Vec<u64>),
}

impl BoundFn {
    pub fn constant(c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidBound(
                "constant bound must be positive".into(),
            ));
        }
        if c > VALUE_CAP {
            return Err(Error::InvalidBound(format!(
                "constant {c} exceeds the 62-bit cap"
            )));
        }
        Ok(BoundFn {
            kind: Kind::Constant(c),
        })
    }

    /// `f(k) = slope * k + offset`. Requires `f(1) >= 1`; a non-negative slope
    /// makes the function non-decreasing.
    pub fn affine(slope: u64, offset: i64) -> Result<Self> {
        let first = slope as i128 + offset as i128;
        if first < 1 {
            return Err(Error::InvalidBound(format!(
                "affine bound {slope}*k{offset:+} is not positive at k = 1"
            )));
        }
        if first > VALUE_CAP as i128 {
            return Err(Error::InvalidBound(format!(
                "affine bound {slope}*k{offset:+} exceeds the 62-bit cap at k = 1"
            )));
        }
        Ok(BoundFn {
            kind: Kind::Affine { slope, offset },
        })
    }

    /// Table of values for `k = 1..=m`; turns past the end repeat the last value.
    pub fn table(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidBound(
                "table bound needs at least one value".into(),
            ));
        }
        if let Some(pos) = values.iter().position(|&v| v == 0) {
            return Err(Error::InvalidBound(format!(
                "table entry {} is zero; values must be positive",
                pos + 1
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v > VALUE_CAP) {
            return Err(Error::InvalidBound(format!(
                "table entry {v} exceeds the 62-bit cap"
            )));
        }
        if let Some(w) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidBound(format!(
                "table decreases at entry {} ({} -> {})",
                w + 2,
                values[w],
                values[w + 1]
            )));
        }
        Ok(BoundFn {
            kind: Kind::Table(values),
        })
    }

    /// `f(k)`, the maximum number of stones removable on turn `k`.
    pub fn eval(&self, k: u64) -> Result<u64> {
        if k == 0 {
            return Err(Error::ZeroTurn);
        }
        match &self.kind {
            Kind::Constant(c) => Ok(*c),
            Kind::Affine { slope, offset } => {
                let v = *slope as i128 * k as i128 + *offset as i128;
                if v > VALUE_CAP as i128 {
                    Err(Error::Overflow("f(k)"))
                } else {
                    Ok(v as u64)
                }
            }
            Kind::Table(values) => {
                let idx = usize::try_from(k - 1).unwrap_or(usize::MAX);
                Ok(*values.get(idx).unwrap_or_else(|| values.last().unwrap()))
            }
        }
    }

    /// If `f` is eventually constant, returns `(k0, c)` with `f(k) = c` for all `k >= k0`.
    pub fn constant_tail(&self) -> Option<(u64, u64)> {
        match &self.kind {
            Kind::Constant(c) => Some((1, *c)),
            Kind::Affine { slope: 0, offset } => Some((1, *offset as u64)),
            Kind::Affine { .. } => None,
            Kind::Table(values) => Some((values.len() as u64, *values.last().unwrap())),
        }
    }
}

impl fmt::Display for BoundFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Constant(c) => write!(f, "const:{c}"),
            Kind::Affine { slope, offset } => write!(f, "affine:{slope},{offset}"),
            Kind::Table(values) => {
                write!(f, "table:")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_num<T: FromStr>(s: &str, spec: &str) -> Result<T> {
    s.trim().parse().map_err(|_| {
        Error::InvalidBound(format!("`{}` is not a valid number in `{spec}`", s.trim()))
    })
}

impl FromStr for BoundFn {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (kind, args) = spec
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::InvalidBound(format!("`{spec}` is missing a `kind:` prefix")))?;
        match kind.trim() {
            "const" => {
                let c: i128 = parse_num(args, spec)?;
                if c < 1 {
                    return Err(Error::InvalidBound(
                        "constant bound must be positive".into(),
                    ));
                }
                BoundFn::constant(u64::try_from(c).map_err(|_| Error::Overflow("f(k)"))?)
            }
            "affine" => {
                let (a, b) = args.split_once(',').ok_or_else(|| {
                    Error::InvalidBound(format!("affine bound `{spec}` needs two values `a,b`"))
                })?;
                let a: i128 = parse_num(a, spec)?;
                if a < 0 {
                    return Err(Error::InvalidBound(
                        "affine slope must be non-negative".into(),
                    ));
                }
                let a = u64::try_from(a).map_err(|_| Error::Overflow("affine slope"))?;
                BoundFn::affine(a, parse_num(b, spec)?)
            }
            "table" => {
                let values = args
                    .split(',')
                    .map(|v| {
                        let v: i128 = parse_num(v, spec)?;
                        if v < 1 {
                            return Err(Error::InvalidBound(format!(
                                "table entry {v} is not positive"
                            )));
                        }
                        u64::try_from(v).map_err(|_| Error::Overflow("table entry"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                BoundFn::table(values)
            }
            other => Err(Error::InvalidBound(format!(
                "unknown bound kind `{other}` (expected const, affine or table)"
            ))),
        }
    }
}

impl TryFrom<String> for BoundFn {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BoundFn> for String {
    fn from(f: BoundFn) -> String {
        f.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_each_shape() {
        assert_eq!(BoundFn::constant(3).unwrap().eval(7).unwrap(), 3);
        assert_eq!(BoundFn::affine(1, 0).unwrap().eval(5).unwrap(), 5);
        let t = BoundFn::table(vec![1, 2, 2, 3, 7]).unwrap();
        assert_eq!(t.eval(9).unwrap(), 7);
        assert_eq!(t.eval(3).unwrap(), 2);
        assert_eq!(BoundFn::affine(2, -1).unwrap().eval(3).unwrap(), 5);
    }

    #[test]
    fn rejects_turn_zero() {
        assert_eq!(BoundFn::constant(1).unwrap().eval(0), Err(Error::ZeroTurn));
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            "const:0",
            "const:-2",
            "affine:0,0",
            "affine:1,-1",
            "affine:-1,5",
            "table:1,2,1",
            "table:0,1",
            "table:",
            "linear:1",
            "3",
        ] {
            assert!(bad.parse::<BoundFn>().is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn text_form_round_trips() {
        for spec in ["const:3", "affine:2,1", "affine:2,-1", "table:1,2,2,3,7"] {
            let f: BoundFn = spec.parse().unwrap();
            assert_eq!(f.to_string(), spec);
        }
        let f: BoundFn = " table: 1, 2 ,3 ".parse().unwrap();
        assert_eq!(f.to_string(), "table:1,2,3");
    }

    #[test]
    fn affine_overflow_is_an_error() {
        let f = BoundFn::affine(1 << 40, 0).unwrap();
        assert_eq!(f.eval(1 << 30), Err(Error::Overflow("f(k)")));
    }

    #[test]
    fn constant_tail() {
        assert_eq!(BoundFn::constant(4).unwrap().constant_tail(), Some((1, 4)));
        assert_eq!(BoundFn::affine(0, 3).unwrap().constant_tail(), Some((1, 3)));
        assert_eq!(BoundFn::affine(1, 0).unwrap().constant_tail(), None);
        let t = BoundFn::table(vec![1, 2, 2, 3, 7]).unwrap();
        assert_eq!(t.constant_tail(), Some((5, 7)));
    }

    #[test]
    fn serde_uses_text_form() {
        let f: BoundFn = serde_json::from_str("\"affine:1,0\"").unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), "\"affine:1,0\"");
        assert!(serde_json::from_str::<BoundFn>("\"const:0\"").is_err());
    }
}
