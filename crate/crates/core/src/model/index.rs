use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cost::{parse_cost, Cost};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Neg => "neg",
            Sign::Pos => "pos",
        }
    }
}

/// An element of the ordered index set `(−∞, −0] ⊔ [0, ∞]`.
///
/// `−0` and `0` are distinct elements with `−0 < 0`; the sign is a tag, never an
/// IEEE negative zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EpsIndex {
    pub sign: Sign,
    pub magnitude: Cost,
}

impl EpsIndex {
    pub fn pos(magnitude: Cost) -> Self {
        EpsIndex { sign: Sign::Pos, magnitude }
    }

    pub fn neg(magnitude: Cost) -> Self {
        EpsIndex { sign: Sign::Neg, magnitude }
    }

    /// The value as a signed real, identifying `−0` with `0`.
    pub fn signed(self) -> f64 {
        match self.sign {
            Sign::Pos => self.magnitude.value(),
            Sign::Neg => -self.magnitude.value() + 0.0,
        }
    }

    /// Parses `0.5`, `-0.5`, `-0`, `inf`, `-inf`.
    pub fn parse(text: &str) -> Option<EpsIndex> {
        let text = text.trim();
        match text.strip_prefix('-') {
            Some(rest) => parse_cost(rest).map(EpsIndex::neg),
            None => parse_cost(text.strip_prefix('+').unwrap_or(text)).map(EpsIndex::pos),
        }
    }
}

pub fn compare_index(a: EpsIndex, b: EpsIndex) -> Ordering {
    match (a.sign, b.sign) {
        (Sign::Neg, Sign::Pos) => Ordering::Less,
        (Sign::Pos, Sign::Neg) => Ordering::Greater,
        (Sign::Pos, Sign::Pos) => a.magnitude.cmp(&b.magnitude),
        (Sign::Neg, Sign::Neg) => b.magnitude.cmp(&a.magnitude),
    }
}

impl PartialOrd for EpsIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EpsIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_index(*self, *other)
    }
}

impl fmt::Display for EpsIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Pos => write!(f, "{}", self.magnitude),
            Sign::Neg => write!(f, "-{}", self.magnitude),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn idx(sign: Sign, m: f64) -> EpsIndex {
        EpsIndex { sign, magnitude: Cost::of(m) }
    }

    #[test]
    fn documented_orderings() {
        assert_eq!(compare_index(idx(Sign::Neg, 1.0), idx(Sign::Neg, 0.5)), Ordering::Less);
        assert_eq!(compare_index(idx(Sign::Neg, 0.0), idx(Sign::Pos, 0.0)), Ordering::Less);
        assert_eq!(
            compare_index(EpsIndex::pos(Cost::INFINITY), idx(Sign::Pos, 3.0)),
            Ordering::Greater
        );
        assert_ne!(idx(Sign::Neg, 0.0), idx(Sign::Pos, 0.0));
        assert_eq!(idx(Sign::Neg, 0.0).signed(), 0.0);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(EpsIndex::parse("-0"), Some(idx(Sign::Neg, 0.0)));
        assert_eq!(EpsIndex::parse("0"), Some(idx(Sign::Pos, 0.0)));
        assert_eq!(EpsIndex::parse("-inf"), Some(EpsIndex::neg(Cost::INFINITY)));
        assert_eq!(EpsIndex::parse("x"), None);
        assert_eq!(idx(Sign::Neg, 0.5).to_string(), "-0.5");
    }

    fn any_index() -> impl Strategy<Value = EpsIndex> {
        (
            prop_oneof![Just(Sign::Neg), Just(Sign::Pos)],
            prop_oneof![Just(0.0), Just(f64::INFINITY), 0.0..10.0f64, (0u8..4).prop_map(f64::from)],
        )
            .prop_map(|(s, m)| idx(s, m))
    }

    proptest! {
        #[test]
        fn total_order(a in any_index(), b in any_index(), c in any_index()) {
            // antisymmetry
            if compare_index(a, b) != Ordering::Greater && compare_index(b, a) != Ordering::Greater {
                prop_assert_eq!(a, b);
            }
            // totality and consistency with reversal
            prop_assert_eq!(compare_index(a, b), compare_index(b, a).reverse());
            // transitivity
            if compare_index(a, b) != Ordering::Greater && compare_index(b, c) != Ordering::Greater {
                prop_assert!(compare_index(a, c) != Ordering::Greater);
            }
        }

        #[test]
        fn order_refines_signed_reals(a in any_index(), b in any_index()) {
            if a.signed() < b.signed() {
                prop_assert_eq!(compare_index(a, b), Ordering::Less);
            }
        }
    }
}
