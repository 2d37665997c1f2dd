use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use super::MCCoords;

/// Which boundary divisors D⁺_k, D⁻_k contain a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitSignature {
    pub iplus: BTreeSet<usize>,
    pub iminus: BTreeSet<usize>,
}

/// On chart τ ∈ 𝕁_l, D⁺_k is cut out by the upper pivot of layer k (k > r−l)
/// and D⁻_k by the lower pivot of layer k−l (k > l).
pub fn orbit_signature(c: &MCCoords) -> OrbitSignature {
    let tau = c.tau();
    let (l, r) = (tau.l(), tau.rows().len());
    let iplus = (r - l + 1..=r).filter(|&k| c.pivot(k).is_zero()).collect();
    let iminus = (1..=r - l).filter(|&k| c.pivot(k).is_zero()).map(|k| k + l).collect();
    OrbitSignature { iplus, iminus }
}

pub fn signature_admissible(sig: &OrbitSignature, r: usize) -> bool {
    let min = |s: &BTreeSet<usize>| s.first().copied().unwrap_or(usize::MAX / 4);
    min(&sig.iplus) + min(&sig.iminus) >= r + 2
}

/// Every admissible pair of subsets of [1, r].
pub fn admissible_signatures(r: usize) -> BTreeSet<OrbitSignature> {
    let subsets: Vec<BTreeSet<usize>> =
        (0u32..1 << r).map(|mask| (1..=r).filter(|k| mask >> (k - 1) & 1 == 1).collect()).collect();
    let mut out = BTreeSet::new();
    for a in &subsets {
        for b in &subsets {
            let sig = OrbitSignature { iplus: a.clone(), iminus: b.clone() };
            if signature_admissible(&sig, r) {
                out.insert(sig);
            }
        }
    }
    out
}
