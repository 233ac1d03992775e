use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A non-negative extended real in `[0, ∞]`.
///
/// NaN and negative values are unrepresentable, so the type is totally ordered.
#[derive(Clone, Copy, PartialEq)]
pub struct Cost(f64);

impl std::ops::Add for Cost {
    type Output = Cost;

    /// Saturating at `∞`.
    fn add(self, other: Cost) -> Cost {
        Cost(self.0 + other.0)
    }
}

impl Cost {
    pub const ZERO: Cost = Cost(0.0);
    pub const INFINITY: Cost = Cost(f64::INFINITY);

    /// Returns `None` for NaN or negative input. `-0.0` is normalised to `0.0`.
    pub fn new(value: f64) -> Option<Cost> {
        if value.is_nan() || value < 0.0 {
            None
        } else {
            Some(Cost(value + 0.0))
        }
    }

    /// Panics on NaN or negative input.
    pub fn of(value: f64) -> Cost {
        Cost::new(value).unwrap_or_else(|| panic!("invalid cost value {value}"))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    pub fn max(self, other: Cost) -> Cost {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Cost) -> Cost {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for Cost {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        inf_f64::serialize(&self.0, serializer)
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = inf_f64::deserialize(deserializer)?;
        Cost::new(raw).ok_or_else(|| serde::de::Error::custom(format!("invalid cost {raw}")))
    }
}

/// Parses a textual cost: a decimal number or `inf`.
pub fn parse_cost(text: &str) -> Option<Cost> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("inf") {
        return Some(Cost::INFINITY);
    }
    text.parse::<f64>().ok().filter(|v| v.is_finite()).and_then(Cost::new)
}

/// Serde helpers for `f64` values where `∞` travels as the string `"inf"`.
pub mod inf_f64 {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
        if *value == f64::INFINITY {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(*value)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
        struct RawVisitor;

        impl Visitor<'_> for RawVisitor {
            type Value = f64;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
                if v == "inf" {
                    Ok(f64::INFINITY)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(RawVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nan_and_negative() {
        assert!(Cost::new(f64::NAN).is_none());
        assert!(Cost::new(-1e-12).is_none());
        assert_eq!(Cost::new(-0.0), Some(Cost::ZERO));
        assert!(Cost::new(-0.0).unwrap().value().is_sign_positive());
    }

    #[test]
    fn infinity_is_maximal() {
        assert!(Cost::INFINITY > Cost::of(1e300));
        assert_eq!(Cost::INFINITY + Cost::of(3.0), Cost::INFINITY);
        assert_eq!(Cost::of(2.0).max(Cost::of(1.0)), Cost::of(2.0));
    }

    #[test]
    fn json_uses_inf_string() {
        let json = serde_json::to_string(&vec![Cost::of(1.5), Cost::INFINITY]).unwrap();
        assert_eq!(json, r#"[1.5,"inf"]"#);
        let back: Vec<Cost> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Cost::of(1.5), Cost::INFINITY]);
        assert!(serde_json::from_str::<Cost>("-2").is_err());
    }

    #[test]
    fn parses_text() {
        assert_eq!(parse_cost(" inf "), Some(Cost::INFINITY));
        assert_eq!(parse_cost("0.25"), Some(Cost::of(0.25)));
        assert_eq!(parse_cost("-1"), None);
        assert_eq!(parse_cost("nan"), None);
    }
}
