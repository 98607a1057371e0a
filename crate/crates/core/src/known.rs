//! Proven values of `cf(n)`, the minimum of `cf(S)` over all `n`-point sets
//! in general position, and bounds where no exact value is known.

use std::ops::RangeInclusive;

use crate::replication::{best_known_upper_bound, BoundEntry, LARGEST_KNOWN_SETS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfValue {
    Exact(usize),
    Bounds { lower: usize, upper: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownValue {
    pub n_range: RangeInclusive<usize>,
    pub cf: CfValue,
    pub provenance: &'static str,
}

/// Exact values, in increasing `n`. Beyond the last range only bounds are
/// known.
pub fn exact_table() -> Vec<KnownValue> {
    vec![
        KnownValue { n_range: 0..=1, cf: CfValue::Exact(0), provenance: "fewer than two points span no segment" },
        KnownValue {
            n_range: 2..=4,
            cf: CfValue::Exact(1),
            provenance: "any segment is a 1-family; a triangle with an interior point has no crossing pair",
        },
        KnownValue {
            n_range: 5..=9,
            cf: CfValue::Exact(2),
            provenance: "K5 is not planar, so five points span a crossing pair; 9-point sets without a 3-crossing family exist",
        },
        KnownValue {
            n_range: 10..=14,
            cf: CfValue::Exact(3),
            provenance: "every set of 10 points has a 3-crossing family; a 14-point set without a 4-crossing family exists",
        },
        KnownValue {
            n_range: 15..=20,
            cf: CfValue::Exact(4),
            provenance: "every set of 15 points has a 4-crossing family; a 20-point set without a 5-crossing family exists",
        },
    ]
}

/// What is known about `cf(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownResult {
    pub n: usize,
    pub cf: CfValue,
    pub provenance: Vec<String>,
    /// Library entry behind the upper bound, for bound-only answers.
    pub bound_entry: Option<BoundEntry>,
}

impl KnownResult {
    pub fn lower(&self) -> usize {
        match self.cf {
            CfValue::Exact(v) => v,
            CfValue::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> usize {
        match self.cf {
            CfValue::Exact(v) => v,
            CfValue::Bounds { upper, .. } => upper,
        }
    }

    pub fn summary(&self) -> String {
        match self.cf {
            CfValue::Exact(v) => format!("cf({}) = {v}", self.n),
            CfValue::Bounds { lower, upper } => format!("{lower} <= cf({}) <= {upper}", self.n),
        }
    }
}

pub fn known_value(n: usize) -> KnownResult {
    let table = exact_table();
    if let Some(kv) = table.iter().find(|kv| kv.n_range.contains(&n)) {
        return KnownResult {
            n,
            cf: kv.cf,
            provenance: vec![kv.provenance.to_string()],
            bound_entry: None,
        };
    }
    let last = table.last().expect("non-empty table");
    let lower = match last.cf {
        CfValue::Exact(v) => v,
        CfValue::Bounds { lower, .. } => lower,
    };
    let ub = best_known_upper_bound(n, &LARGEST_KNOWN_SETS).expect("default library is non-empty");
    let mut provenance = vec![format!(
        "lower bound: cf is monotone and cf({}) = {lower}",
        last.n_range.end()
    )];
    provenance.push(match ub.entry {
        Some(e) if n <= e.n => format!(
            "upper bound: subsets of a {}-point set with cf = {}",
            e.n, e.k
        ),
        Some(e) => format!(
            "upper bound: replication of a {}-point set with cf = {}: {} * ceil({n}/{})",
            e.n, e.k, e.k, e.n
        ),
        None => "upper bound: floor(n/2)".to_string(),
    });
    KnownResult {
        n,
        cf: CfValue::Bounds {
            lower,
            upper: ub.value,
        },
        provenance,
        bound_entry: ub.entry,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(known_value(12).summary(), "cf(12) = 3");
        assert_eq!(known_value(15).summary(), "cf(15) = 4");
        assert_eq!(known_value(7).summary(), "cf(7) = 2");
        assert_eq!(known_value(21).summary(), "4 <= cf(21) <= 5");
        assert_eq!(known_value(41).summary(), "4 <= cf(41) <= 8");
    }

    #[test]
    fn table_is_consistent() {
        let t = exact_table();
        for w in t.windows(2) {
            assert_eq!(*w[0].n_range.end() + 1, *w[1].n_range.start());
        }
        for n in 0..400 {
            let r = known_value(n);
            assert!(r.lower() <= r.upper(), "n = {n}");
            let ub = best_known_upper_bound(n, &LARGEST_KNOWN_SETS)
                .unwrap()
                .value;
            assert!(ub >= r.lower(), "n = {n}");
            if let CfValue::Exact(v) = r.cf {
                assert!(v <= ub, "n = {n}");
            }
        }
    }
}
