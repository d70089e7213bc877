use std::collections::BTreeMap;

use super::{HubTree, HubTreeBuilder};
use crate::demand_oracle::sparsity;
use crate::traffic::CappedHoseModel;
use crate::{Error, Result};

/// Values within this relative distance count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

fn tied(a: f64, b: f64) -> bool {
    a == b || (a.is_finite() && b.is_finite() && (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()))
}

struct Group {
    node: usize,
    leaves: Vec<usize>,
}

/// Binary tree by sparsest merging.
///
/// Starting from singleton groups, repeatedly joins the two active groups
/// whose leaf sets have the smallest sparsity under a new internal node.
/// Ties go to the pair whose smallest leaf ids are lexicographically least.
/// The last internal node is the root. Edge capacities are not populated.
pub fn btsm(m: &CappedHoseModel) -> Result<HubTree> {
    let n = m.node_count();
    if n < 2 {
        return Err(Error::InvalidModel("hub trees need at least two nodes".into()));
    }
    let mut builder = HubTreeBuilder::new(n);
    // keyed by smallest leaf, which is unique across disjoint groups
    let mut active: BTreeMap<usize, Group> = (0..n).map(|v| (v, Group { node: v, leaves: vec![v] })).collect();
    // sparsity of a pair of groups, keyed by their smallest leaves
    let mut score: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (&a, ga) in &active {
        for (&b, gb) in active.range(a + 1..) {
            score.insert((a, b), sparsity(m, &ga.leaves, &gb.leaves)?);
        }
    }
    while active.len() > 1 {
        let mut best: Option<((usize, usize), f64)> = None;
        for (&key, &value) in &score {
            match best {
                Some((_, b)) if tied(value, b) || value > b => {}
                _ => best = Some((key, value)),
            }
        }
        let ((a, b), _) = best.expect("at least one active pair");
        let ga = active.remove(&a).unwrap();
        let gb = active.remove(&b).unwrap();
        score.retain(|&(x, y), _| x != a && x != b && y != a && y != b);
        let node = builder.add_internal(&[ga.node, gb.node])?;
        let mut leaves = ga.leaves;
        leaves.extend(gb.leaves);
        leaves.sort_unstable();
        let merged = Group { node, leaves };
        for (&c, gc) in &active {
            let key = (a.min(c), a.max(c));
            score.insert(key, sparsity(m, &merged.leaves, &gc.leaves)?);
        }
        active.insert(a, merged);
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand_oracle::u_star;
    use crate::traffic::Peaks;

    #[test]
    fn two_nodes() {
        let m = CappedHoseModel::new(vec![1.0, 1.0], Peaks::from_values(2, vec![1.0]).unwrap()).unwrap();
        let t = btsm(&m).unwrap();
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.children(t.root()), &[0, 1]);
        assert!(btsm(&CappedHoseModel::new(vec![1.0], Peaks::zeros(1)).unwrap()).is_err());
    }

    #[test]
    fn heavy_pairs_merge_first() {
        let heavy = [(0, 1), (2, 3)];
        let peaks = Peaks::from_fn(4, |i, j| if heavy.contains(&(i, j)) { 10.0 } else { 1.0 }).unwrap();
        let m = CappedHoseModel::new(vec![12.0; 4], peaks).unwrap();
        // step 1 scores: heavy pairs 4/10, light pairs 22/1
        let sc = |a: &[usize], b: &[usize]| sparsity(&m, a, b).unwrap();
        assert_eq!(u_star(&m, &[0, 1], &[2, 3]).unwrap(), 4.0);
        assert_eq!(sc(&[0], &[1]), 0.4);
        assert!(sc(&[0], &[2]) > 1.0);

        let t = btsm(&m).unwrap();
        assert_eq!(t.children(4), &[0, 1]);
        assert_eq!(t.children(5), &[2, 3]);
        assert_eq!(t.children(6), &[4, 5]);
        assert_eq!(t.root(), 6);
    }

    #[test]
    fn uniform_model_gives_left_comb() {
        let n = 6;
        let peaks = Peaks::from_fn(n, |_, _| 1.0).unwrap();
        let m = CappedHoseModel::new(vec![(n - 1) as f64; n], peaks).unwrap();
        let t = btsm(&m).unwrap();
        assert!(t.is_binary());
        assert_eq!(t.node_count(), 2 * n - 1);
        assert_eq!(t.children(n), &[0, 1]);
        for k in 1..n - 1 {
            assert_eq!(t.children(n + k), &[n + k - 1, k + 1]);
        }
    }

    #[test]
    fn zero_traffic_pairs_merge_last() {
        // {0,1} and {2,3} never talk to each other
        let peaks = Peaks::from_fn(4, |i, j| if (i < 2) == (j < 2) { 1.0 } else { 0.0 }).unwrap();
        let m = CappedHoseModel::new(vec![1.0; 4], peaks).unwrap();
        let t = btsm(&m).unwrap();
        assert_eq!(t.children(4), &[0, 1]);
        assert_eq!(t.children(5), &[2, 3]);
    }
}
