use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Names with a fixed position in the canonical variable order. Any other
/// declared parameter sorts after these, alphabetically.
pub const FIXED_ORDER: [&str; 6] = ["alpha", "beta", "gamma", "delta", "eta", "c"];

/// A named scalar parameter of a model, or the soliton constant `c`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Param(Arc<str>);

impl Param {
    /// Builds a parameter, rejecting names outside `[a-z][a-z0-9_]*`.
    pub fn new(name: &str) -> Option<Param> {
        if is_identifier(name) {
            Some(Param(Arc::from(name)))
        } else {
            None
        }
    }

    pub fn alpha() -> Param {
        Param(Arc::from("alpha"))
    }

    pub fn beta() -> Param {
        Param(Arc::from("beta"))
    }

    pub fn gamma() -> Param {
        Param(Arc::from("gamma"))
    }

    pub fn delta() -> Param {
        Param(Arc::from("delta"))
    }

    pub fn eta() -> Param {
        Param(Arc::from("eta"))
    }

    /// The soliton constant.
    pub fn c() -> Param {
        Param(Arc::from("c"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    fn rank(&self) -> usize {
        FIXED_ORDER
            .iter()
            .position(|n| *n == &*self.0)
            .unwrap_or(FIXED_ORDER.len())
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(ch) if ch.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|ch| ch.is_ascii_lowercase() || ch.is_ascii_digit() || ch == '_')
}

impl Ord for Param {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Param {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for Param {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_names_come_first() {
        let mut names: Vec<Param> = ["aa", "c", "zeta", "alpha", "eta", "beta", "delta", "gamma"]
            .iter()
            .map(|n| Param::new(n).unwrap())
            .collect();
        names.sort();
        let sorted: Vec<&str> = names.iter().map(Param::name).collect();
        assert_eq!(
            sorted,
            ["alpha", "beta", "gamma", "delta", "eta", "c", "aa", "zeta"]
        );
    }

    #[test]
    fn rejects_bad_identifiers() {
        assert!(Param::new("Alpha").is_none());
        assert!(Param::new("1x").is_none());
        assert!(Param::new("").is_none());
        assert!(Param::new("a_1").is_some());
    }
}
