//! Exact r-clique enumeration, clique-set combinatorics (`K_s(M)`,
//! co-degrees), and the exact-rational clique-count reports.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bits::BitRow;
use crate::certified;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{rat_int, Rat};

/// A uniform-arity set of vertex tuples: every tuple strictly increasing,
/// the list lexicographically sorted, no duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueList {
    arity: usize,
    host_n: usize,
    cliques: Vec<Vec<u32>>,
}

impl CliqueList {
    /// Validates tuples, sorts the list, and rejects duplicates.
    pub fn new(arity: usize, host_n: usize, mut cliques: Vec<Vec<u32>>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::invalid("clique arity must be >= 1"));
        }
        for t in &cliques {
            if t.len() != arity {
                return Err(Error::invalid(format!(
                    "tuple {t:?} has arity {}, expected {arity}",
                    t.len()
                )));
            }
            if t.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!(
                    "tuple {t:?} is not strictly increasing"
                )));
            }
            if let Some(&max) = t.last() {
                if max as usize >= host_n {
                    return Err(Error::invalid(format!(
                        "tuple {t:?} out of range for n = {host_n}"
                    )));
                }
            }
        }
        cliques.sort_unstable();
        if cliques.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate clique tuple"));
        }
        Ok(CliqueList {
            arity,
            host_n,
            cliques,
        })
    }

    fn from_sorted(arity: usize, host_n: usize, cliques: Vec<Vec<u32>>) -> Self {
        debug_assert!(cliques.windows(2).all(|w| w[0] < w[1]));
        CliqueList {
            arity,
            host_n,
            cliques,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn host_n(&self) -> usize {
        self.host_n
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.cliques.iter().map(Vec::as_slice)
    }

    pub fn tuples(&self) -> &[Vec<u32>] {
        &self.cliques
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        self.cliques
            .binary_search_by(|probe| probe.as_slice().cmp(tuple))
            .is_ok()
    }

    /// Checks that every tuple induces a complete subgraph of `g`.
    pub fn validate_in(&self, g: &Graph) -> Result<()> {
        if self.host_n > g.n() {
            return Err(Error::invalid(format!(
                "clique list addresses {} vertices, graph has {}",
                self.host_n,
                g.n()
            )));
        }
        for t in &self.cliques {
            for (i, &u) in t.iter().enumerate() {
                for &v in &t[i + 1..] {
                    if !g.has_edge(u, v) {
                        return Err(Error::invalid(format!(
                            "tuple {t:?} is not a clique: missing edge {u}-{v}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn extend_cliques(
    g: &Graph,
    r: usize,
    prefix: &mut Vec<u32>,
    cand: &BitRow,
    out: &mut Vec<Vec<u32>>,
) {
    if prefix.len() + cand.count() < r {
        return;
    }
    for u in cand.iter_ones() {
        prefix.push(u as u32);
        if prefix.len() == r {
            out.push(prefix.clone());
        } else {
            let mut next = cand.and(g.neighbors(u as u32));
            next.clear_upto(u);
            extend_cliques(g, r, prefix, &next, out);
        }
        prefix.pop();
    }
}

/// All r-cliques of `g`, canonically ordered. Ordered extension: a clique is
/// only extended by vertices greater than its maximum, intersecting
/// adjacency rows, so the output is duplicate-free by construction.
pub fn enumerate_r_cliques(g: &Graph, r: usize) -> Result<CliqueList> {
    if r == 0 {
        return Err(Error::invalid("clique arity must be >= 1"));
    }
    let n = g.n();
    let mut out = Vec::new();
    if r == 1 {
        out.extend((0..n as u32).map(|v| vec![v]));
    } else {
        let mut prefix = Vec::with_capacity(r);
        for v in 0..n {
            prefix.push(v as u32);
            let mut cand = g.neighbors(v as u32).clone();
            cand.clear_upto(v);
            extend_cliques(g, r, &mut prefix, &cand, &mut out);
            prefix.pop();
        }
    }
    Ok(CliqueList::from_sorted(r, n, out))
}

/// `K_s(M)`: the set of s-cliques contained in members of `M`.
pub fn sub_cliques(m: &CliqueList, s: usize) -> Result<CliqueList> {
    if s == 0 || s > m.arity() {
        return Err(Error::invalid(format!(
            "sub-clique arity {s} out of range for arity {}",
            m.arity()
        )));
    }
    let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
    for t in m.iter() {
        for combo in t.iter().copied().combinations(s) {
            set.insert(combo);
        }
    }
    Ok(CliqueList::from_sorted(
        s,
        m.host_n(),
        set.into_iter().collect(),
    ))
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    'outer: for &x in small {
        for &y in it.by_ref() {
            match y.cmp(&x) {
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Less => {}
            }
        }
        return false;
    }
    true
}

/// Co-degree `d_M(R)`: the number of members of `M` containing the
/// (arity−1)-tuple `R`.
pub fn codegree(m: &CliqueList, r_tuple: &[u32]) -> Result<usize> {
    if r_tuple.len() + 1 != m.arity() {
        return Err(Error::invalid(format!(
            "co-degree tuple has arity {}, expected {}",
            r_tuple.len(),
            m.arity() - 1
        )));
    }
    if r_tuple.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("co-degree tuple must be strictly increasing"));
    }
    Ok(m.iter().filter(|t| is_subset(r_tuple, t)).count())
}

/// Memoizing clique counter: `k_r(G)` computed once per `(graph, r)` within
/// a session. Counts without materializing the clique lists.
pub struct CliqueCounter<'a> {
    g: &'a Graph,
    memo: HashMap<usize, u64>,
}

impl<'a> CliqueCounter<'a> {
    pub fn new(g: &'a Graph) -> Self {
        CliqueCounter {
            g,
            memo: HashMap::new(),
        }
    }

    pub fn count(&mut self, r: usize) -> u64 {
        if let Some(&k) = self.memo.get(&r) {
            return k;
        }
        let g = self.g;
        let k = match r {
            0 => 1,
            1 => g.n() as u64,
            _ => {
                fn count_ext(g: &Graph, depth: usize, r: usize, cand: &BitRow) -> u64 {
                    if depth + cand.count() < r {
                        return 0;
                    }
                    if depth + 1 == r {
                        return cand.count() as u64;
                    }
                    let mut total = 0;
                    for u in cand.iter_ones() {
                        let mut next = cand.and(g.neighbors(u as u32));
                        next.clear_upto(u);
                        total += count_ext(g, depth + 1, r, &next);
                    }
                    total
                }
                let mut total = 0;
                for v in 0..g.n() {
                    let mut cand = g.neighbors(v as u32).clone();
                    cand.clear_upto(v);
                    total += count_ext(g, 1, r, &cand);
                }
                total
            }
        };
        self.memo.insert(r, k);
        k
    }
}

/// Report for the consecutive clique-count chain inequality
/// `(s+1)k_{s+1}/(s k_s) − n/s  >=  s k_s/((s−1)k_{s−1}) − n/(s−1)`,
/// evaluated in exact rationals.
#[derive(Debug, Clone)]
pub struct ChainReport {
    pub s: usize,
    pub n: usize,
    pub k_prev: u64,
    pub k_s: u64,
    pub k_next: u64,
    pub lhs: Rat,
    pub rhs: Rat,
    pub holds: bool,
}

pub fn chain_inequality_report(g: &Graph, s: usize) -> Result<ChainReport> {
    if s < 2 {
        return Err(Error::invalid("chain inequality requires s >= 2"));
    }
    let mut counter = CliqueCounter::new(g);
    let k_s = counter.count(s);
    if k_s == 0 {
        return Err(Error::Infeasible(format!(
            "k_{s}(G) = 0: chain inequality precondition fails"
        )));
    }
    let k_prev = counter.count(s - 1);
    let k_next = counter.count(s + 1);
    let n = g.n();
    let s_r = rat_int(s as i64);
    let n_r = rat_int(n as i64);
    let lhs = rat_int(s as i64 + 1) * rat_int(k_next as i64) / (&s_r * rat_int(k_s as i64))
        - &n_r / &s_r;
    let rhs = &s_r * rat_int(k_s as i64) / (rat_int(s as i64 - 1) * rat_int(k_prev as i64))
        - &n_r / rat_int(s as i64 - 1);
    let holds = lhs >= rhs;
    Ok(ChainReport {
        s,
        n,
        k_prev,
        k_s,
        k_next,
        lhs,
        rhs,
        holds,
    })
}

fn rat_pow(base: &Rat, exp: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// Diagnostic supersaturation report: from `e(G) = (1 − 1/r + c)n²/2`,
/// compares `k_{r+1}(G)` against the claimed `(c/r^r)·n^{r+1}` and reports
/// the implied balanced-part parameters. Margins are reported, never
/// asserted: small boundary instances sit exactly on equality.
#[derive(Debug, Clone)]
pub struct SupersatReport {
    pub r: usize,
    pub n: usize,
    pub edges: u64,
    pub c: Rat,
    pub applicable: bool,
    pub claimed_bound: Rat,
    pub k_next: u64,
    pub margin: Rat,
    pub claim_holds: bool,
    pub implied_s: Option<u64>,
    pub implied_t_min: Option<BigInt>,
}

pub fn supersaturation_report(g: &Graph, r: usize) -> Result<SupersatReport> {
    if r < 2 {
        return Err(Error::invalid("supersaturation report requires r >= 2"));
    }
    let n = g.n();
    if n == 0 {
        return Err(Error::invalid("graph must have at least one vertex"));
    }
    let edges = g.edge_count() as u64;
    let n_r = rat_int(n as i64);
    // e = (1 - 1/r + c) n^2 / 2  =>  c = 2e/n^2 - 1 + 1/r
    let c = rat_int(2 * edges as i64) / (&n_r * &n_r) - Rat::one() + rat_int(1) / rat_int(r as i64);
    if !c.is_positive() {
        return Ok(SupersatReport {
            r,
            n,
            edges,
            c,
            applicable: false,
            claimed_bound: Rat::zero(),
            k_next: 0,
            margin: Rat::zero(),
            claim_holds: false,
            implied_s: None,
            implied_t_min: None,
        });
    }
    let r_pow_r = rat_pow(&rat_int(r as i64), r as u32);
    let ratio = &c / &r_pow_r; // c / r^r
    let claimed_bound = &ratio * rat_pow(&n_r, r as u32 + 1);
    let mut counter = CliqueCounter::new(g);
    let k_next = counter.count(r + 1);
    let margin = rat_int(k_next as i64) - &claimed_bound;
    let claim_holds = margin.is_positive();
    let implied_s = {
        let q = rat_pow(&ratio, r as u32 + 1);
        let s = certified::floor_times_ln(&q, n as u64)?;
        use num_traits::ToPrimitive;
        s.to_u64()
    };
    let implied_t_min = {
        let e = Rat::one() - rat_pow(&ratio, r as u32);
        Some(certified::strictly_greater_pow(n as u64, &e)?)
    };
    Ok(SupersatReport {
        r,
        n,
        edges,
        c,
        applicable: true,
        claimed_bound,
        k_next,
        margin,
        claim_holds,
        implied_s,
        implied_t_min,
    })
}

/// Emits the clique-list format: header `"r k"`, then `k` lines of sorted
/// vertex indices, lexicographically ordered. Bit-exact.
pub fn emit_clique_list(m: &CliqueList) -> String {
    let mut out = format!("{} {}\n", m.arity(), m.len());
    for t in m.iter() {
        let line = t.iter().map(v_str).join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn v_str(v: &u32) -> String {
    v.to_string()
}

/// Parses the clique-list format. The host vertex count is inferred as one
/// past the largest index (callers pairing the list with a graph validate
/// compatibility there).
pub fn parse_clique_list(text: &str) -> Result<CliqueList> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    let mut it = header.split_whitespace();
    let arity: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(1, "header must be `r k`"))?;
    let count: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(1, "header must be `r k`"))?;
    if it.next().is_some() {
        return Err(Error::parse(1, "trailing tokens in header"));
    }
    if arity == 0 {
        return Err(Error::parse(1, "arity must be >= 1"));
    }
    let mut cliques: Vec<Vec<u32>> = Vec::with_capacity(count);
    let mut host_n = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let tuple: Vec<u32> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::parse(lineno, format!("bad vertex `{t}`")))
            })
            .collect::<Result<_>>()?;
        if tuple.len() != arity {
            return Err(Error::parse(
                lineno,
                format!("expected {arity} vertices, found {}", tuple.len()),
            ));
        }
        if tuple.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(lineno, "tuple must be strictly increasing"));
        }
        if let Some(prev) = cliques.last() {
            if *prev >= tuple {
                return Err(Error::parse(
                    lineno,
                    "tuples must be in strictly increasing lexicographic order",
                ));
            }
        }
        host_n = host_n.max(tuple[arity - 1] as usize + 1);
        cliques.push(tuple);
    }
    if cliques.len() != count {
        return Err(Error::invalid(format!(
            "header promised {count} cliques, found {}",
            cliques.len()
        )));
    }
    Ok(CliqueList::from_sorted(arity, host_n, cliques))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, gen_complete_multipartite, gen_gnp};
    use crate::rational::rat;

    fn complete(n: usize) -> Graph {
        gen_complete_multipartite(&vec![1; n]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32)
            .map(|v| (v.min((v + 1) % n as u32), v.max((v + 1) % n as u32)))
            .collect();
        build_graph(n, &edges).unwrap()
    }

    /// Independent oracle: scan every r-subset and keep the cliques.
    fn brute_force_cliques(g: &Graph, r: usize) -> Vec<Vec<u32>> {
        (0..g.n() as u32)
            .combinations(r)
            .filter(|t| {
                t.iter()
                    .enumerate()
                    .all(|(i, &u)| t[i + 1..].iter().all(|&v| g.has_edge(u, v)))
            })
            .collect()
    }

    #[test]
    fn k5_has_ten_triangles() {
        let list = enumerate_r_cliques(&complete(5), 3).unwrap();
        assert_eq!(list.len(), 10);
    }

    #[test]
    fn cycle_is_triangle_free() {
        assert_eq!(enumerate_r_cliques(&cycle(5), 3).unwrap().len(), 0);
    }

    #[test]
    fn enumeration_matches_brute_force_on_seeded_graph() {
        let g = gen_gnp(12, &rat(1, 2), 7).unwrap();
        for r in 1..=5 {
            let fast = enumerate_r_cliques(&g, r).unwrap();
            let slow = brute_force_cliques(&g, r);
            assert_eq!(fast.tuples(), slow.as_slice(), "arity {r}");
        }
    }

    #[test]
    fn arity_zero_rejected() {
        assert!(enumerate_r_cliques(&complete(3), 0).is_err());
    }

    #[test]
    fn multipartite_triangle_count() {
        let g = gen_complete_multipartite(&[2, 2, 2]).unwrap();
        assert_eq!(enumerate_r_cliques(&g, 3).unwrap().len(), 8);
    }

    #[test]
    fn sub_clique_examples() {
        let m = CliqueList::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let edges = sub_cliques(&m, 2).unwrap();
        assert_eq!(edges.tuples(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);

        let m = CliqueList::new(3, 4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        assert_eq!(sub_cliques(&m, 2).unwrap().len(), 5);

        let empty = CliqueList::new(3, 0, vec![]).unwrap();
        assert_eq!(sub_cliques(&empty, 2).unwrap().len(), 0);

        assert!(sub_cliques(&m, 0).is_err());
        assert!(sub_cliques(&m, 4).is_err());
    }

    #[test]
    fn codegree_examples() {
        let k4_triangles = enumerate_r_cliques(&complete(4), 3).unwrap();
        assert_eq!(codegree(&k4_triangles, &[0, 1]).unwrap(), 2);

        let single = CliqueList::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(codegree(&single, &[0, 1]).unwrap(), 1);
        assert_eq!(codegree(&single, &[0]).unwrap_err().to_string().is_empty(), false);

        // K_4 minus edge 0-3: triangles avoiding the pair {0,3}
        let g = build_graph(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let t = enumerate_r_cliques(&g, 3).unwrap();
        assert_eq!(codegree(&t, &[0, 3]).unwrap(), 0);
    }

    #[test]
    fn facet_count_identity() {
        // sum over (r-1)-tuples of codegree = r * |M|
        let g = gen_gnp(10, &rat(3, 5), 11).unwrap();
        let m = enumerate_r_cliques(&g, 3).unwrap();
        let facets = sub_cliques(&m, 2).unwrap();
        let total: usize = facets
            .iter()
            .map(|f| codegree(&m, f).unwrap())
            .sum();
        assert_eq!(total, 3 * m.len());
    }

    #[test]
    fn sub_clique_lower_bound() {
        // |K_{r-1}(M)| >= r|M|/n
        for seed in 0..5 {
            let g = gen_gnp(11, &rat(1, 2), seed).unwrap();
            let m = enumerate_r_cliques(&g, 3).unwrap();
            if m.is_empty() {
                continue;
            }
            let facets = sub_cliques(&m, 2).unwrap();
            assert!(facets.len() * g.n() >= 3 * m.len());
        }
    }

    #[test]
    fn counter_memoizes() {
        let g = complete(6);
        let mut counter = CliqueCounter::new(&g);
        assert_eq!(counter.count(3), 20);
        assert_eq!(counter.count(3), 20);
        assert_eq!(counter.count(1), 6);
        assert_eq!(counter.count(6), 1);
        assert_eq!(counter.count(7), 0);
    }

    #[test]
    fn chain_on_cycle_five() {
        // k_1 = 5, k_2 = 5, k_3 = 0: lhs = -5/2, rhs = -3
        let rep = chain_inequality_report(&cycle(5), 2).unwrap();
        assert_eq!(rep.lhs, rat(-5, 2));
        assert_eq!(rep.rhs, rat(-3, 1));
        assert!(rep.holds);
    }

    #[test]
    fn chain_on_k4_is_tight() {
        let rep = chain_inequality_report(&complete(4), 2).unwrap();
        assert_eq!(rep.lhs, rat(-1, 1));
        assert_eq!(rep.rhs, rat(-1, 1));
        assert!(rep.holds);
    }

    #[test]
    fn chain_precondition_reported() {
        match chain_inequality_report(&cycle(5), 3) {
            Err(Error::Infeasible(_)) => {}
            other => panic!("expected precondition error, got {other:?}"),
        }
        assert!(chain_inequality_report(&cycle(5), 1).is_err());
    }

    #[test]
    fn supersat_k10() {
        let rep = supersaturation_report(&complete(10), 2).unwrap();
        assert_eq!(rep.c, rat(2, 5));
        assert_eq!(rep.claimed_bound, rat(100, 1));
        assert_eq!(rep.k_next, 120);
        assert_eq!(rep.margin, rat(20, 1));
        assert!(rep.claim_holds);
    }

    #[test]
    fn supersat_k4_boundary_equality() {
        let rep = supersaturation_report(&complete(4), 2).unwrap();
        assert_eq!(rep.c, rat(1, 4));
        assert_eq!(rep.claimed_bound, rat(4, 1));
        assert_eq!(rep.k_next, 4);
        assert_eq!(rep.margin, rat(0, 1));
        assert!(!rep.claim_holds);
    }

    #[test]
    fn supersat_sparse_not_applicable() {
        let rep = supersaturation_report(&Graph::empty(6), 2).unwrap();
        assert!(!rep.applicable);
        assert!(rep.c.is_negative());
    }

    #[test]
    fn clique_file_round_trip() {
        let g = gen_gnp(9, &rat(1, 2), 5).unwrap();
        let m = enumerate_r_cliques(&g, 3).unwrap();
        let text = emit_clique_list(&m);
        let back = parse_clique_list(&text).unwrap();
        assert_eq!(back.arity(), 3);
        assert_eq!(back.tuples(), m.tuples());
        assert_eq!(emit_clique_list(&back), text);
    }

    #[test]
    fn clique_file_errors() {
        assert!(parse_clique_list("").is_err());
        assert!(parse_clique_list("3 1\n0 2 1\n").is_err());
        assert!(parse_clique_list("3 2\n0 1 2\n0 1 2\n").is_err());
        assert!(parse_clique_list("3 2\n0 1 3\n0 1 2\n").is_err());
        assert!(parse_clique_list("2 1\n0 1 2\n").is_err());
        assert!(parse_clique_list("2 2\n0 1\n").is_err());
    }
}
