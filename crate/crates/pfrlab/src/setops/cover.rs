use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::pointset::{DenseSet, PointSet, DENSE_AMBIENT_MAX};
use super::{sumset, SetError};
use crate::gf2core::{check_dim, BitVec, Subspace};

/// Greedy Ruzsa covering: scans `T` in lexicographic order and keeps `t`
/// iff the translate `t + S` is disjoint from every translate already kept.
///
/// The selection `X` satisfies `|X| <= |T+S| / |S|` (the kept translates are
/// pairwise disjoint inside `T + S`) and `T` is contained in `X + 2S`; the
/// returned flag is the result of checking that containment explicitly.
pub fn ruzsa_cover(s: &PointSet, t: &PointSet) -> Result<(PointSet, bool), SetError> {
    check_dim(s.ambient(), t.ambient()).map_err(SetError::Gf2)?;
    if s.is_empty() {
        return Err(SetError::EmptyInput);
    }
    let n = s.ambient();
    let mut x = PointSet::new(n);

    if n <= DENSE_AMBIENT_MAX {
        let ds = DenseSet::from_points(s);
        let mut covered = DenseSet::new(n);
        for tp in t.sorted_elements() {
            let translate = ds.translate_xor(tp.as_index());
            if !covered.intersects(&translate) {
                covered.or_with(&translate);
                x.insert(tp);
            }
        }
    } else {
        let mut covered: HashSet<BitVec> = HashSet::new();
        for tp in t.sorted_elements() {
            let disjoint = s.iter().all(|sp| !covered.contains(&tp.xor(sp)));
            if disjoint {
                for sp in s.iter() {
                    covered.insert(tp.xor(sp));
                }
                x.insert(tp);
            }
        }
    }

    // explicit containment check: T subset of X + 2S
    let two_s = sumset(s, s)?;
    let verified = t
        .iter()
        .all(|tp| x.iter().any(|xp| two_s.contains(&tp.xor(xp))));
    Ok((x, verified))
}

/// Auditable output of the covering pipeline: a subspace, translate
/// representatives, and the result of the enumeration-level coverage check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub subspace: Subspace,
    pub reps: Vec<BitVec>,
    pub covered: bool,
    pub cover_size: usize,
}

/// Checks by enumeration whether every point of `A` lies in some
/// `reps[i] + V`.
pub fn verify_cover(a: &PointSet, v: &Subspace, reps: &[BitVec]) -> CoverCertificate {
    let covered = a
        .iter()
        .all(|p| reps.iter().any(|r| v.contains(&p.xor(r))));
    CoverCertificate {
        subspace: v.clone(),
        reps: reps.to_vec(),
        covered,
        cover_size: reps.len(),
    }
}
