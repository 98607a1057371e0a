use super::{all_segments, Segment};
use crate::error::{Error, Result};
use crate::geometry::{segments_cross, PointSet};

/// Largest point set accepted by [`brute_force_cf`].
pub const BRUTE_FORCE_LIMIT: usize = 10;

/// `cf(S)` by enumerating every crossing family, straight from the
/// crossing predicate. Shares no code with the clique solver.
pub fn brute_force_cf(s: &PointSet) -> Result<usize> {
    if s.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit {
            n: s.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    s.ensure_general_position()?;
    let segs = all_segments(s.len());
    let mut best = 0;
    let mut family = Vec::new();
    extend(s, &segs, 0, &mut family, &mut best)?;
    Ok(best)
}

fn extend(
    s: &PointSet,
    segs: &[Segment],
    from: usize,
    family: &mut Vec<Segment>,
    best: &mut usize,
) -> Result<()> {
    *best = (*best).max(family.len());
    for i in from..segs.len() {
        let mut ok = true;
        for &f in family.iter() {
            if !segments_cross(s, f, segs[i])? {
                ok = false;
                break;
            }
        }
        if ok {
            family.push(segs[i]);
            extend(s, segs, i + 1, family, best)?;
            family.pop();
        }
    }
    Ok(())
}
