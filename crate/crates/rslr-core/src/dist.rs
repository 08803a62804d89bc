//! Finite distributions with exact rational masses.
//!
//! Entries are strictly positive and total mass is exactly one; merging of
//! duplicate keys happens on insertion. `Dist<Term>` keys merge up to
//! alpha-equivalence because `Term`'s ordering is alpha-aware.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// 2^-n as an exact rational.
pub fn two_pow_neg(n: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(2u8).pow(n))
}

/// JSON form of a rational: exact integer pair plus a decimal approximation
/// for human readers. Components that do not fit in an `i64` are rendered
/// as decimal strings to stay exact.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RatJson {
    pub num: serde_json::Value,
    pub den: serde_json::Value,
    pub approx: f64,
}

pub fn rat_json(r: &Rat) -> RatJson {
    fn int_value(i: &BigInt) -> serde_json::Value {
        match i.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(i.to_string()),
        }
    }
    RatJson {
        num: int_value(r.numer()),
        den: int_value(r.denom()),
        approx: r.to_f64().unwrap_or(f64::NAN),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Dist<K: Ord + Clone> {
    entries: BTreeMap<K, Rat>,
}

impl<K: Ord + Clone> Dist<K> {
    /// The point distribution.
    pub fn point(k: K) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(k, rat_one());
        Dist { entries }
    }

    /// Build from weighted entries; zero-mass entries are dropped and the
    /// total must come to exactly one.
    pub fn from_entries(pairs: impl IntoIterator<Item = (K, Rat)>) -> Self {
        let d = Self::sub_distribution(pairs);
        assert!(d.total().is_one(), "distribution mass must be exactly 1");
        d
    }

    /// Like `from_entries` but without the mass-1 requirement (used for
    /// intermediate accumulation).
    pub fn sub_distribution(pairs: impl IntoIterator<Item = (K, Rat)>) -> Self {
        let mut entries: BTreeMap<K, Rat> = BTreeMap::new();
        for (k, p) in pairs {
            assert!(!p.is_negative(), "negative probability");
            if p.is_zero() {
                continue;
            }
            *entries.entry(k).or_insert_with(rat_zero) += p;
        }
        Dist { entries }
    }

    /// Mix component distributions with the given weights. Weights must sum
    /// to one and each component must be a distribution.
    pub fn mix(parts: impl IntoIterator<Item = (Rat, Dist<K>)>) -> Self {
        let mut entries: BTreeMap<K, Rat> = BTreeMap::new();
        let mut total = rat_zero();
        for (w, part) in parts {
            assert!(!w.is_negative(), "negative mixture weight");
            if w.is_zero() {
                continue;
            }
            total += &w;
            for (k, p) in part.entries {
                *entries.entry(k).or_insert_with(rat_zero) += &w * p;
            }
        }
        assert!(total.is_one(), "mixture weights must sum to exactly 1");
        Dist { entries }
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mass(&self, k: &K) -> Rat {
        self.entries.get(k).cloned().unwrap_or_else(rat_zero)
    }

    pub fn total(&self) -> Rat {
        self.entries.values().fold(rat_zero(), |a, b| a + b)
    }

    pub fn mass_where(&self, mut pred: impl FnMut(&K) -> bool) -> Rat {
        self.entries
            .iter()
            .filter(|(k, _)| pred(k))
            .fold(rat_zero(), |a, (_, p)| a + p)
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> Dist<L> {
        Dist::from_entries(self.entries.iter().map(|(k, p)| (f(k), p.clone())))
    }

    pub fn into_entries(self) -> BTreeMap<K, Rat> {
        self.entries
    }
}

/// Total variation distance between two string distributions: half the L1
/// distance, which equals the largest advantage any finite string set can
/// observe between the two.
pub fn tv_distance(d: &Dist<String>, e: &Dist<String>) -> Rat {
    let mut keys: std::collections::BTreeSet<&String> = d.support().collect();
    keys.extend(e.support());
    let l1 = keys
        .into_iter()
        .fold(rat_zero(), |acc, k| acc + (d.mass(k) - e.mass(k)).abs());
    l1 / rat(2, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin() -> Dist<String> {
        Dist::from_entries(vec![("0".to_string(), rat(1, 2)), ("1".to_string(), rat(1, 2))])
    }

    #[test]
    fn point_mass() {
        let d = Dist::point("x");
        assert_eq!(d.mass(&"x"), rat_one());
        assert_eq!(d.total(), rat_one());
    }

    #[test]
    fn merging_duplicate_keys() {
        let d = Dist::from_entries(vec![("a", rat(1, 2)), ("a", rat(1, 4)), ("b", rat(1, 4))]);
        assert_eq!(d.mass(&"a"), rat(3, 4));
        assert_eq!(d.len(), 2);
    }

    #[test]
    #[should_panic(expected = "exactly 1")]
    fn mass_deficit_is_rejected() {
        let _ = Dist::from_entries(vec![("a", rat(1, 2))]);
    }

    #[test]
    fn tv_examples() {
        assert_eq!(tv_distance(&coin(), &coin()), rat_zero());
        let zero = Dist::point("0".to_string());
        let one = Dist::point("1".to_string());
        assert_eq!(tv_distance(&zero, &one), rat_one());
        assert_eq!(tv_distance(&coin(), &zero), rat(1, 2));
    }
}
