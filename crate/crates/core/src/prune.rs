//! The iterative cleaning procedure: repeatedly remove every r-clique
//! containing a facet whose co-degree has fallen to the threshold or below,
//! until all surviving co-degrees strictly exceed it.

use std::collections::{BTreeSet, HashMap};

use num_traits::Signed;

use crate::cliques::{sub_cliques, CliqueList};
use crate::error::{Error, Result};
use crate::rational::{rat_int, Rat};

/// Outcome of a pruning run. `rounds` logs each trigger facet with the
/// number of members its wave removed, in processing order.
#[derive(Debug, Clone)]
pub struct PruneResult {
    pub kept: CliqueList,
    pub rounds: Vec<(Vec<u32>, usize)>,
    pub threshold: Rat,
}

impl PruneResult {
    pub fn removed_total(&self) -> usize {
        self.rounds.iter().map(|(_, k)| k).sum()
    }
}

/// Runs the removal procedure to its fixed point.
///
/// Dirty facets are processed lexicographically smallest first, with the
/// dirty set re-derived after every removal wave, so identical inputs yield
/// identical results including the round log. Co-degrees are maintained
/// incrementally; a facet whose count reaches zero leaves `K_{r-1}(L)`.
pub fn prune(m: &CliqueList, n: usize, threshold: &Rat) -> Result<PruneResult> {
    if m.arity() < 2 {
        return Err(Error::invalid("pruning requires arity >= 2"));
    }
    if n < m.host_n() {
        return Err(Error::invalid(format!(
            "clique list addresses {} vertices, n = {n} given",
            m.host_n()
        )));
    }
    if threshold.is_negative() {
        return Err(Error::invalid("threshold must be >= 0"));
    }

    // facet -> ids of members containing it
    let mut members_of: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for (id, tuple) in m.iter().enumerate() {
        for skip in 0..tuple.len() {
            let mut facet = Vec::with_capacity(tuple.len() - 1);
            facet.extend_from_slice(&tuple[..skip]);
            facet.extend_from_slice(&tuple[skip + 1..]);
            members_of.entry(facet).or_default().push(id);
        }
    }
    let mut count: HashMap<Vec<u32>, usize> =
        members_of.iter().map(|(f, ids)| (f.clone(), ids.len())).collect();

    let at_most_threshold = |c: usize| rat_int(c as i64) <= *threshold;

    let mut dirty: BTreeSet<Vec<u32>> = count
        .iter()
        .filter(|(_, &c)| at_most_threshold(c))
        .map(|(f, _)| f.clone())
        .collect();

    let mut alive = vec![true; m.len()];
    let mut rounds = Vec::new();
    let tuples = m.tuples();

    while let Some(trigger) = dirty.pop_first() {
        let current = *count.get(&trigger).unwrap_or(&0);
        if current == 0 {
            count.remove(&trigger);
            continue; // an earlier wave already emptied this facet
        }
        let mut removed = 0usize;
        for &id in &members_of[&trigger] {
            if !alive[id] {
                continue;
            }
            alive[id] = false;
            removed += 1;
            let tuple = &tuples[id];
            for skip in 0..tuple.len() {
                let mut facet = Vec::with_capacity(tuple.len() - 1);
                facet.extend_from_slice(&tuple[..skip]);
                facet.extend_from_slice(&tuple[skip + 1..]);
                if facet == trigger {
                    continue;
                }
                let c = count.get_mut(&facet).expect("facet bookkeeping");
                *c -= 1;
                if *c == 0 {
                    count.remove(&facet);
                    dirty.remove(&facet);
                } else if at_most_threshold(*c) {
                    dirty.insert(facet);
                }
            }
        }
        count.remove(&trigger);
        debug_assert!(removed >= 1);
        rounds.push((trigger, removed));
    }

    let kept_tuples: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .filter(|(id, _)| alive[*id])
        .map(|(_, t)| t.to_vec())
        .collect();
    let kept = CliqueList::new(m.arity(), m.host_n(), kept_tuples)?;
    Ok(PruneResult {
        kept,
        rounds,
        threshold: threshold.clone(),
    })
}

/// Guarantee report for a pruning run against hypothesis constant `c`:
/// all surviving co-degrees exceed `cn`, the removal total is at most
/// `cn·|K_{r-1}(M)|`, and (when `|M| >= cn^r` applies) `|L| > (c/2)n^r`.
/// Every check recomputes its quantities from scratch in exact rationals.
#[derive(Debug, Clone)]
pub struct GuaranteeReport {
    pub codegree_ok: bool,
    pub removal_bound_ok: bool,
    pub size_applicable: bool,
    pub size_ok: bool,
    pub kept: usize,
    pub removed: usize,
    pub facets_of_input: usize,
}

impl GuaranteeReport {
    pub fn all_ok(&self) -> bool {
        self.codegree_ok && self.removal_bound_ok && self.size_ok
    }
}

pub fn prune_guarantee_check(
    m: &CliqueList,
    result: &PruneResult,
    c: &Rat,
    n: usize,
    r: usize,
) -> Result<GuaranteeReport> {
    if r != m.arity() || r < 2 {
        return Err(Error::invalid("arity mismatch in guarantee check"));
    }
    let cn = c * rat_int(n as i64);
    if result.threshold != cn {
        return Err(Error::invalid(
            "result was not produced with threshold = c*n",
        ));
    }
    let kept = &result.kept;
    if kept.iter().any(|t| !m.contains(t)) {
        return Err(Error::invalid("kept list is not a subset of the input"));
    }

    // (a) fresh co-degree scan over K_{r-1}(L), independent of the
    // incremental bookkeeping
    let mut codegree_ok = true;
    if !kept.is_empty() {
        let facets = sub_cliques(kept, r - 1)?;
        for f in facets.iter() {
            let d = crate::cliques::codegree(kept, f)?;
            if rat_int(d as i64) <= cn {
                codegree_ok = false;
                break;
            }
        }
    }

    // (b) |M| - |L| <= cn * |K_{r-1}(M)|
    let facets_of_input = if m.is_empty() {
        0
    } else {
        sub_cliques(m, r - 1)?.len()
    };
    let removed = m.len() - kept.len();
    let removal_bound_ok = rat_int(removed as i64) <= &cn * rat_int(facets_of_input as i64);

    // (c) if |M| >= c n^r then |L| > (c/2) n^r
    let n_pow_r = {
        let mut p = rat_int(1);
        for _ in 0..r {
            p *= rat_int(n as i64);
        }
        p
    };
    let size_applicable = rat_int(m.len() as i64) >= c * &n_pow_r;
    let size_ok = !size_applicable || rat_int(kept.len() as i64) > c / rat_int(2) * &n_pow_r;

    Ok(GuaranteeReport {
        codegree_ok,
        removal_bound_ok,
        size_applicable,
        size_ok,
        kept: kept.len(),
        removed,
        facets_of_input,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::enumerate_r_cliques;
    use crate::graph::gen_complete_multipartite;
    use crate::rational::rat;
    use num_traits::Zero;

    fn k4_triangles() -> CliqueList {
        let g = gen_complete_multipartite(&[1, 1, 1, 1]).unwrap();
        enumerate_r_cliques(&g, 3).unwrap()
    }

    #[test]
    fn k4_survives_threshold_one() {
        // every edge of K_4 lies in exactly 2 triangles: 2 > 1
        let m = k4_triangles();
        let res = prune(&m, 4, &rat(1, 1)).unwrap();
        assert_eq!(res.kept.len(), 4);
        assert!(res.rounds.is_empty());
    }

    #[test]
    fn single_triangle_cascades_away() {
        let m = CliqueList::new(3, 4, vec![vec![0, 1, 2]]).unwrap();
        let res = prune(&m, 4, &rat(1, 1)).unwrap();
        assert!(res.kept.is_empty());
        assert_eq!(res.rounds.len(), 1);
        assert_eq!(res.rounds[0], (vec![0, 1], 1));
    }

    #[test]
    fn threshold_zero_keeps_everything() {
        let m = k4_triangles();
        let res = prune(&m, 4, &Rat::zero()).unwrap();
        assert_eq!(res.kept.len(), m.len());
        assert!(res.rounds.is_empty());
    }

    #[test]
    fn removal_log_accounts_for_every_member() {
        // path-ish triangle set where pruning bites
        let m = CliqueList::new(
            3,
            6,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5]],
        )
        .unwrap();
        let res = prune(&m, 6, &rat(1, 1)).unwrap();
        assert_eq!(res.removed_total(), m.len() - res.kept.len());
        // threshold 1 kills everything here by cascade
        assert!(res.kept.is_empty());
    }

    #[test]
    fn deterministic_round_log() {
        let m = CliqueList::new(
            3,
            6,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5]],
        )
        .unwrap();
        let a = prune(&m, 6, &rat(1, 1)).unwrap();
        let b = prune(&m, 6, &rat(1, 1)).unwrap();
        assert_eq!(a.rounds, b.rounds);
        assert_eq!(a.kept.tuples(), b.kept.tuples());
        // lexicographically smallest dirty facet goes first
        assert_eq!(a.rounds[0].0, vec![0, 1]);
    }

    #[test]
    fn guarantee_check_k4() {
        let m = k4_triangles();
        let c = rat(1, 4); // threshold cn = 1
        let res = prune(&m, 4, &rat(1, 1)).unwrap();
        let rep = prune_guarantee_check(&m, &res, &c, 4, 3).unwrap();
        assert!(rep.codegree_ok);
        assert!(rep.removal_bound_ok);
        assert!(!rep.size_applicable); // 4 < (1/4) * 64
        assert!(rep.size_ok);
        assert!(rep.all_ok());
    }

    #[test]
    fn guarantee_check_balanced_tripartite() {
        // K_3(4,4,4): 64 triangles, n = 12, c = 1/27 gives |M| = c n^3 exactly
        let g = gen_complete_multipartite(&[4, 4, 4]).unwrap();
        let m = enumerate_r_cliques(&g, 3).unwrap();
        assert_eq!(m.len(), 64);
        let c = rat(1, 27);
        let threshold = &c * rat_int(12);
        let res = prune(&m, 12, &threshold).unwrap();
        assert_eq!(res.kept.len(), 64); // cross-part edges have co-degree 4 > 12/27
        let rep = prune_guarantee_check(&m, &res, &c, 12, 3).unwrap();
        assert!(rep.size_applicable);
        assert!(rep.all_ok());
        assert!(res.kept.len() > 32);
    }

    #[test]
    fn guarantee_check_empty_input() {
        let m = CliqueList::new(3, 5, vec![]).unwrap();
        let c = rat(1, 5);
        let res = prune(&m, 5, &rat(1, 1)).unwrap();
        let rep = prune_guarantee_check(&m, &res, &c, 5, 3).unwrap();
        assert!(rep.all_ok());
    }

    #[test]
    fn guarantee_check_rejects_wrong_threshold() {
        let m = k4_triangles();
        let res = prune(&m, 4, &rat(1, 1)).unwrap();
        assert!(prune_guarantee_check(&m, &res, &rat(1, 3), 4, 3).is_err());
        assert!(prune_guarantee_check(&m, &res, &rat(1, 4), 4, 2).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let edges = CliqueList::new(2, 3, vec![vec![0, 1]]).unwrap();
        assert!(prune(&edges, 3, &rat(-1, 2)).is_err());
        assert!(prune(&edges, 2, &Rat::zero()).is_err()); // n smaller than host
        let singles = CliqueList::new(1, 3, vec![vec![0]]).unwrap();
        assert!(prune(&singles, 3, &Rat::zero()).is_err());
    }
}
