//! Point sets with small crossing families found by our own search and
//! verified with the exact solver.

use crate::crossing::max_crossing_family;
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::io::parse_pointset;
use crate::known::known_value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BundledSet {
    pub name: &'static str,
    pub n: usize,
    /// Size of the largest crossing family.
    pub cf: usize,
    pub text: &'static str,
}

impl BundledSet {
    pub fn points(&self) -> PointSet {
        parse_pointset(self.text).expect("bundled sets parse")
    }
}

pub const BUNDLED: &[BundledSet] = &[
    BundledSet {
        name: "nine_cf2",
        n: 9,
        cf: 2,
        text: include_str!("../data/nine_cf2.txt"),
    },
    BundledSet {
        name: "fourteen_cf3",
        n: 14,
        cf: 3,
        text: include_str!("../data/fourteen_cf3.txt"),
    },
];

pub fn find(name: &str) -> Option<&'static BundledSet> {
    BUNDLED.iter().find(|b| b.name == name)
}

/// Recomputes `cf` of a bundled set and checks it against its label and
/// against the proven value of `cf(n)`.
pub fn verify(b: &BundledSet) -> Result<()> {
    let s = b.points();
    let corrupt = |msg: String| Err(Error::Parameter(format!("bundled set {}: {msg}", b.name)));
    if s.len() != b.n {
        return corrupt(format!("has {} points, labelled {}", s.len(), b.n));
    }
    let (cf, _) = max_crossing_family(&s)?;
    if cf != b.cf {
        return corrupt(format!("cf = {cf}, labelled {}", b.cf));
    }
    let known = known_value(b.n);
    if cf < known.lower() {
        return corrupt(format!(
            "cf = {cf} is below the proven lower bound {}",
            known.lower()
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_sets_verify() {
        for b in BUNDLED {
            verify(b).unwrap();
            assert_eq!(
                known_value(b.n).upper(),
                b.cf,
                "{} attains the known value",
                b.name
            );
        }
        assert!(find("nine_cf2").is_some());
        assert!(find("missing").is_none());
    }

    #[test]
    fn mislabelled_set_is_flagged() {
        let bad = BundledSet {
            cf: 2,
            ..*find("fourteen_cf3").unwrap()
        };
        assert!(verify(&bad).is_err());
    }
}
