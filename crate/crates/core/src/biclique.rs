//! Bipartite common-neighborhood machinery: the branch-and-bound s-subset
//! finder, the exhaustive oracle it is checked against, and the exact
//! double-counting and convexity identities behind the averaging bound.

use itertools::Itertools;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bits::BitRow;
use crate::certified;
use crate::error::{Error, Result};
use crate::rational::{rat, rat_int, Rat};

pub const DEFAULT_ORACLE_CAP: u128 = 10_000_000;

/// Bipartite instance: one bit row over the right vertices per left item.
/// Left items are addressed by index; any payload (plain vertices or clique
/// tuples) is carried by the caller.
#[derive(Clone, Debug)]
pub struct BipartiteInstance {
    right_n: usize,
    rows: Vec<BitRow>,
}

impl BipartiteInstance {
    pub fn new(m: usize, right_n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("bipartite instance needs at least one left item"));
        }
        let mut rows = vec![BitRow::zeros(right_n); m];
        for &(i, v) in edges {
            if i >= m {
                return Err(Error::invalid(format!("left index {i} out of range")));
            }
            if v >= right_n {
                return Err(Error::invalid(format!("right vertex {v} out of range")));
            }
            rows[i].set(v);
        }
        Ok(BipartiteInstance { right_n, rows })
    }

    pub fn from_rows(rows: Vec<BitRow>, right_n: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("bipartite instance needs at least one left item"));
        }
        if rows.iter().any(|r| r.len() != right_n) {
            return Err(Error::invalid("row width mismatch"));
        }
        Ok(BipartiteInstance { right_n, rows })
    }

    pub fn left_m(&self) -> usize {
        self.rows.len()
    }

    pub fn right_n(&self) -> usize {
        self.right_n
    }

    pub fn row(&self, i: usize) -> &BitRow {
        &self.rows[i]
    }

    pub fn left_degree(&self, i: usize) -> usize {
        self.rows[i].count()
    }

    pub fn right_degree(&self, v: usize) -> usize {
        self.rows.iter().filter(|r| r.test(v)).count()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitRow::count).sum()
    }
}

/// Generalized binomial `f(x) = x(x−1)…(x−s+1)/s!` for `x ≥ s−1`, clamped
/// to zero below — the convex extension used by the averaging step.
pub fn generalized_binomial(x: &Rat, s: usize) -> Rat {
    if s == 0 {
        return Rat::one();
    }
    if *x < rat_int(s as i64 - 1) {
        return Rat::zero();
    }
    let mut numer = Rat::one();
    let mut fact = Rat::one();
    for i in 0..s {
        numer *= x - rat_int(i as i64);
        fact *= rat_int(i as i64 + 1);
    }
    numer / fact
}

/// Side conditions and certified part sizes for the averaging lemma at one
/// level: `s = ⌊c^r ln n⌋` and the smallest integer exceeding
/// `n^(1−c^(r−1))`.
#[derive(Debug, Clone)]
pub struct Lemma1Params {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub c: Rat,
    pub s: u64,
    pub t_min: u64,
    /// `(ln n)^(−1/r) ≤ c`, equivalently `c^r ln n ≥ 1`
    pub c_lower_ok: bool,
    /// `c < 1/2`
    pub c_upper_ok: bool,
    /// `s ≤ (c/2)m + 1`
    pub s_vs_m_ok: bool,
    /// `e(F) ≥ cmn`; only evaluated when an edge count is supplied
    pub density_ok: Option<bool>,
}

impl Lemma1Params {
    pub fn flags_ok(&self) -> bool {
        self.c_lower_ok && self.c_upper_ok && self.s_vs_m_ok && self.density_ok.unwrap_or(true)
    }
}

pub fn lemma1_params(
    m: usize,
    n: usize,
    c: &Rat,
    r: usize,
    edges: Option<u64>,
) -> Result<Lemma1Params> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("lemma parameters require m, n >= 1"));
    }
    if r < 2 {
        return Err(Error::invalid("lemma parameters require r >= 2"));
    }
    if !c.is_positive() {
        return Err(Error::invalid("c must be positive"));
    }
    let mut c_pow_r = Rat::one();
    for _ in 0..r {
        c_pow_r *= c;
    }
    let s_big = certified::floor_times_ln(&c_pow_r, n as u64)?;
    let s = s_big
        .to_u64()
        .ok_or_else(|| Error::invalid("part size out of range"))?;
    let exponent = Rat::one() - &c_pow_r / c; // 1 - c^(r-1)
    let t_min_big = certified::strictly_greater_pow(n as u64, &exponent)?;
    let t_min = t_min_big
        .to_u64()
        .ok_or_else(|| Error::invalid("t_min out of range"))?;
    let c_lower_ok =
        certified::cmp_times_ln(&c_pow_r, n as u64, &Rat::one())? != std::cmp::Ordering::Less;
    let c_upper_ok = *c < rat(1, 2);
    let s_vs_m_ok = rat_int(s as i64) <= c / rat_int(2) * rat_int(m as i64) + Rat::one();
    let density_ok = edges.map(|e| {
        rat_int(e as i64) >= c * rat_int(m as i64) * rat_int(n as i64)
    });
    Ok(Lemma1Params {
        m,
        n,
        r,
        c: c.clone(),
        s,
        t_min,
        c_lower_ok,
        c_upper_ok,
        s_vs_m_ok,
        density_ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first s-subset whose common neighborhood reaches `t_min`,
    /// in the canonical branch order.
    FirstFeasible,
    /// Exact maximum of the common-neighborhood size over all s-subsets.
    Maximize,
}

/// A found biclique: left item indices (ascending) and the exact common
/// neighborhood of their rows.
#[derive(Debug, Clone)]
pub struct Witness {
    pub left: Vec<usize>,
    pub right: BitRow,
    pub t: usize,
}

struct Search<'a> {
    f: &'a BipartiteInstance,
    order: Vec<usize>,
    s: usize,
    t_min: usize,
    mode: SearchMode,
    chosen: Vec<usize>,
    best: Option<Witness>,
}

impl Search<'_> {
    fn record(&mut self, current: &BitRow) {
        let mut left = self.chosen.clone();
        left.sort_unstable();
        self.best = Some(Witness {
            left,
            right: current.clone(),
            t: current.count(),
        });
    }

    /// Returns true when the search can stop (first-feasible hit).
    fn dfs(&mut self, start: usize, current: &BitRow) -> bool {
        if self.chosen.len() == self.s {
            match self.mode {
                SearchMode::FirstFeasible => {
                    debug_assert!(current.count() >= self.t_min);
                    self.record(current);
                    return true;
                }
                SearchMode::Maximize => {
                    let t = current.count();
                    if self.best.as_ref().map_or(true, |b| t > b.t) {
                        self.record(current);
                    }
                    return false;
                }
            }
        }
        let need = self.s - self.chosen.len();
        for pos in start..self.order.len() {
            if self.order.len() - pos < need {
                break;
            }
            let item = self.order[pos];
            let next = current.and(self.f.row(item));
            let cnt = next.count();
            // the intersection only shrinks along a branch, so this bound is admissible
            let viable = match self.mode {
                SearchMode::FirstFeasible => cnt >= self.t_min,
                SearchMode::Maximize => self.best.as_ref().map_or(true, |b| cnt > b.t),
            };
            if !viable {
                continue;
            }
            self.chosen.push(item);
            if self.dfs(pos + 1, &next) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Branch-and-bound search for an s-subset of left items whose common
/// neighborhood is large. Left items are visited in the canonical order
/// (degree descending, index ascending); partial subsets carry the running
/// intersection. Returns `None` iff `s > m`, or, in first-feasible mode,
/// when no s-subset reaches `t_min`.
pub fn find_s_subset(
    f: &BipartiteInstance,
    s: usize,
    t_min: usize,
    mode: SearchMode,
) -> Result<Option<Witness>> {
    if s == 0 {
        return Err(Error::invalid("subset size must be >= 1"));
    }
    if s > f.left_m() {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..f.left_m()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(f.left_degree(i)), i));
    let mut search = Search {
        f,
        order,
        s,
        t_min,
        mode,
        chosen: Vec::with_capacity(s),
        best: None,
    };
    search.dfs(0, &BitRow::ones(f.right_n()));
    Ok(search.best)
}

fn subset_count(m: usize, s: usize) -> u128 {
    let mut out: u128 = 1;
    for i in 0..s {
        out = out.saturating_mul((m - i) as u128) / (i as u128 + 1);
    }
    out
}

/// Plain exhaustive scan over all `C(m, s)` subsets, no pruning: the
/// independent oracle for `find_s_subset`. Returns the lexicographically
/// first maximizer. Refuses instances past the subset cap.
pub fn biclique_oracle(
    f: &BipartiteInstance,
    s: usize,
    cap: Option<u128>,
) -> Result<Witness> {
    if s == 0 || s > f.left_m() {
        return Err(Error::invalid(format!(
            "oracle requires 1 <= s <= m, got s = {s}, m = {}",
            f.left_m()
        )));
    }
    let cap = cap.unwrap_or(DEFAULT_ORACLE_CAP);
    let subsets = subset_count(f.left_m(), s);
    if subsets > cap {
        return Err(Error::CapExceeded { subsets, cap });
    }
    let mut best: Option<Witness> = None;
    for combo in (0..f.left_m()).combinations(s) {
        let mut inter = f.row(combo[0]).clone();
        for &i in &combo[1..] {
            inter.and_assign(f.row(i));
        }
        let t = inter.count();
        if best.as_ref().map_or(true, |b| t > b.t) {
            best = Some(Witness {
                left: combo,
                right: inter,
                t,
            });
        }
    }
    Ok(best.expect("nonempty combination stream"))
}

/// Exact verification of the double-counting identity
/// `Σ_{X⊂A, |X|=s} d(X) = Σ_{u∈B} C(d(u), s)` (both sides computed
/// independently) and of the convexity inequality
/// `Σ_u f(d(u)) ≥ n·f(e(F)/n)` in exact rationals.
#[derive(Debug, Clone)]
pub struct DoubleCountReport {
    pub lhs_sum: u128,
    pub rhs_sum: u128,
    pub equal: bool,
    pub convex_lhs: Rat,
    pub convex_rhs: Rat,
    pub convexity_ok: bool,
}

pub fn double_count_check(
    f: &BipartiteInstance,
    s: usize,
    cap: Option<u128>,
) -> Result<DoubleCountReport> {
    if s == 0 || s > f.left_m() {
        return Err(Error::invalid(format!(
            "double count requires 1 <= s <= m, got s = {s}, m = {}",
            f.left_m()
        )));
    }
    let cap = cap.unwrap_or(DEFAULT_ORACLE_CAP);
    let subsets = subset_count(f.left_m(), s);
    if subsets > cap {
        return Err(Error::CapExceeded { subsets, cap });
    }
    let mut lhs_sum: u128 = 0;
    for combo in (0..f.left_m()).combinations(s) {
        let mut inter = f.row(combo[0]).clone();
        for &i in &combo[1..] {
            inter.and_assign(f.row(i));
        }
        lhs_sum += inter.count() as u128;
    }
    let mut rhs_sum: u128 = 0;
    for v in 0..f.right_n() {
        rhs_sum += binomial(f.right_degree(v) as u128, s as u128);
    }
    let equal = lhs_sum == rhs_sum;

    let convex_lhs: Rat = (0..f.right_n())
        .map(|v| generalized_binomial(&rat_int(f.right_degree(v) as i64), s))
        .fold(Rat::zero(), |acc, x| acc + x);
    let n = f.right_n();
    let convex_rhs = if n == 0 {
        Rat::zero()
    } else {
        let avg = rat_int(f.edge_count() as i64) / rat_int(n as i64);
        rat_int(n as i64) * generalized_binomial(&avg, s)
    };
    let convexity_ok = convex_lhs >= convex_rhs;
    Ok(DoubleCountReport {
        lhs_sum,
        rhs_sum,
        equal,
        convex_lhs,
        convex_rhs,
        convexity_ok,
    })
}

/// Emits the bipartite instance format: header `"m n e"`, then `e` lines
/// `"i v"` ascending. Left payloads are not serialized.
pub fn emit_bipartite(f: &BipartiteInstance) -> String {
    let mut out = format!("{} {} {}\n", f.left_m(), f.right_n(), f.edge_count());
    for i in 0..f.left_m() {
        for v in f.row(i).iter_ones() {
            out.push_str(&format!("{i} {v}\n"));
        }
    }
    out
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteInstance> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    let mut it = header.split_whitespace();
    let mut next_field = |name: &str| -> Result<usize> {
        it.next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(1, format!("header must be `m n e` (bad {name})")))
    };
    let m = next_field("m")?;
    let n = next_field("n")?;
    let e = next_field("e")?;
    let mut rows = vec![BitRow::zeros(n); m];
    let mut count = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let i: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(lineno, "expected `i v`"))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(lineno, "expected `i v`"))?;
        if it.next().is_some() {
            return Err(Error::parse(lineno, "trailing tokens"));
        }
        if i >= m {
            return Err(Error::parse(lineno, format!("left index {i} out of range")));
        }
        if v >= n {
            return Err(Error::parse(lineno, format!("right vertex {v} out of range")));
        }
        if rows[i].test(v) {
            return Err(Error::parse(lineno, format!("duplicate edge {i} {v}")));
        }
        rows[i].set(v);
        count += 1;
    }
    if count != e {
        return Err(Error::invalid(format!(
            "header promised {e} edges, found {count}"
        )));
    }
    BipartiteInstance::from_rows(rows, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SplitMix64;

    fn complete_bipartite(m: usize, n: usize) -> BipartiteInstance {
        let edges: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |v| (i, v))).collect();
        BipartiteInstance::new(m, n, &edges).unwrap()
    }

    fn matching(k: usize) -> BipartiteInstance {
        let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
        BipartiteInstance::new(k, k, &edges).unwrap()
    }

    fn random_instance(rng: &mut SplitMix64, m: usize, n: usize, density_pct: u64) -> BipartiteInstance {
        let mut edges = Vec::new();
        for i in 0..m {
            for v in 0..n {
                if rng.below(100) < density_pct {
                    edges.push((i, v));
                }
            }
        }
        BipartiteInstance::new(m, n, &edges).unwrap()
    }

    #[test]
    fn generalized_binomial_cases() {
        assert_eq!(generalized_binomial(&rat_int(4), 2), rat_int(6));
        assert_eq!(generalized_binomial(&rat(5, 2), 2), rat(15, 8));
        assert_eq!(generalized_binomial(&rat(9, 10), 2), Rat::zero());
        assert_eq!(generalized_binomial(&rat_int(3), 5), Rat::zero());
        assert_eq!(generalized_binomial(&rat_int(1), 2), Rat::zero()); // boundary x = s-1
    }

    #[test]
    fn lemma_params_feasible_case() {
        let p = lemma1_params(100, 1000, &rat(9, 20), 2, None).unwrap();
        assert_eq!(p.s, 1);
        assert_eq!(p.t_min, 45);
        assert!(p.c_lower_ok && p.c_upper_ok && p.s_vs_m_ok);
        assert!(p.flags_ok());
    }

    #[test]
    fn lemma_params_boundary_c() {
        let p = lemma1_params(4, 10, &rat(1, 2), 2, None).unwrap();
        assert!(!p.c_upper_ok);
    }

    #[test]
    fn lemma_params_small_left_side() {
        let p = lemma1_params(2, 1_000_000, &rat(9, 20), 2, None).unwrap();
        assert_eq!(p.s, 2);
        assert!(!p.s_vs_m_ok); // (c/2)m + 1 = 1.45 < 2
    }

    #[test]
    fn lemma_params_density_flag() {
        let p = lemma1_params(10, 10, &rat(2, 5), 2, Some(50)).unwrap();
        assert_eq!(p.density_ok, Some(true)); // 50 >= 0.4*100
        let p = lemma1_params(10, 10, &rat(2, 5), 2, Some(39)).unwrap();
        assert_eq!(p.density_ok, Some(false));
    }

    #[test]
    fn finder_on_complete_instance() {
        let f = complete_bipartite(4, 6);
        let w = find_s_subset(&f, 2, 6, SearchMode::Maximize).unwrap().unwrap();
        assert_eq!(w.t, 6);
        let w = find_s_subset(&f, 2, 6, SearchMode::FirstFeasible)
            .unwrap()
            .unwrap();
        assert_eq!(w.t, 6);
    }

    #[test]
    fn finder_on_matching_fails() {
        let f = matching(5);
        assert!(find_s_subset(&f, 2, 1, SearchMode::FirstFeasible)
            .unwrap()
            .is_none());
    }

    #[test]
    fn finder_prefers_high_degree_items() {
        // two full items see all of B, two others have a single edge
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for i in [0, 1] {
            for v in 0..6 {
                edges.push((i, v));
            }
        }
        edges.push((2, 0));
        edges.push((3, 1));
        let f = BipartiteInstance::new(4, 6, &edges).unwrap();
        let w = find_s_subset(&f, 2, 0, SearchMode::Maximize).unwrap().unwrap();
        assert_eq!(w.left, vec![0, 1]);
        assert_eq!(w.t, 6);
        // exhaustive cross-check over all pairs
        let oracle = biclique_oracle(&f, 2, None).unwrap();
        assert_eq!(oracle.t, 6);
    }

    #[test]
    fn finder_rejects_oversized_s() {
        let f = matching(3);
        assert!(find_s_subset(&f, 4, 0, SearchMode::Maximize).unwrap().is_none());
        assert!(find_s_subset(&f, 0, 0, SearchMode::Maximize).is_err());
    }

    #[test]
    fn witness_right_side_is_exact_intersection() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..20 {
            let f = random_instance(&mut rng, 8, 10, 55);
            if let Some(w) = find_s_subset(&f, 3, 1, SearchMode::FirstFeasible).unwrap() {
                let mut expect = BitRow::ones(f.right_n());
                for &i in &w.left {
                    expect.and_assign(f.row(i));
                }
                assert_eq!(w.right, expect);
                assert_eq!(w.t, expect.count());
            }
        }
    }

    #[test]
    fn oracle_degenerates_to_max_degree() {
        let mut rng = SplitMix64::new(9);
        let f = random_instance(&mut rng, 7, 9, 40);
        let w = biclique_oracle(&f, 1, None).unwrap();
        let max_deg = (0..7).map(|i| f.left_degree(i)).max().unwrap();
        assert_eq!(w.t, max_deg);
    }

    #[test]
    fn oracle_on_k23() {
        let f = complete_bipartite(2, 3);
        let w = biclique_oracle(&f, 2, None).unwrap();
        assert_eq!(w.t, 3);
        assert_eq!(w.left, vec![0, 1]);
    }

    #[test]
    fn oracle_cap_refusal() {
        let f = complete_bipartite(40, 4);
        match biclique_oracle(&f, 20, Some(1000)) {
            Err(Error::CapExceeded { .. }) => {}
            other => panic!("expected cap refusal, got {other:?}"),
        }
    }

    #[test]
    fn finder_agrees_with_oracle() {
        let mut rng = SplitMix64::new(2024);
        for trial in 0..100 {
            let m = 4 + (rng.below(11) as usize); // 4..14
            let n = 5 + (rng.below(16) as usize); // 5..20
            let s = 1 + (rng.below(3) as usize); // 1..3
            let density = 30 + rng.below(50);
            let f = random_instance(&mut rng, m, n, density);
            let oracle = biclique_oracle(&f, s, None).unwrap();
            let found = find_s_subset(&f, s, 0, SearchMode::Maximize)
                .unwrap()
                .unwrap();
            assert_eq!(found.t, oracle.t, "trial {trial}");
        }
    }

    #[test]
    fn maximize_t_non_increasing_in_s() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..20 {
            let f = random_instance(&mut rng, 9, 12, 60);
            let mut prev = usize::MAX;
            for s in 1..=5 {
                let w = find_s_subset(&f, s, 0, SearchMode::Maximize).unwrap().unwrap();
                assert!(w.t <= prev);
                prev = w.t;
            }
        }
    }

    #[test]
    fn double_count_on_k23() {
        let f = complete_bipartite(2, 3);
        let rep = double_count_check(&f, 2, None).unwrap();
        assert_eq!(rep.lhs_sum, 3);
        assert_eq!(rep.rhs_sum, 3);
        assert!(rep.equal);
        assert_eq!(rep.convex_lhs, rat_int(3));
        assert_eq!(rep.convex_rhs, rat_int(3)); // 3 * f(6/3) = 3
        assert!(rep.convexity_ok);
    }

    #[test]
    fn double_count_on_matching() {
        let f = matching(5);
        let rep = double_count_check(&f, 2, None).unwrap();
        assert_eq!(rep.lhs_sum, 0);
        assert_eq!(rep.rhs_sum, 0);
        assert!(rep.equal);
        assert_eq!(rep.convex_lhs, Rat::zero());
        assert_eq!(rep.convex_rhs, Rat::zero()); // f(1) = 0 for s = 2
        assert!(rep.convexity_ok);
    }

    #[test]
    fn double_count_random_instances() {
        let mut rng = SplitMix64::new(77);
        for _ in 0..60 {
            let m = 3 + (rng.below(8) as usize);
            let n = 3 + (rng.below(10) as usize);
            let s = 2 + (rng.below(2) as usize);
            if s > m {
                continue;
            }
            let density = 20 + rng.below(60);
            let f = random_instance(&mut rng, m, n, density);
            let rep = double_count_check(&f, s, None).unwrap();
            assert!(rep.equal);
            assert!(rep.convexity_ok);
        }
    }

    #[test]
    fn bipartite_file_round_trip() {
        let mut rng = SplitMix64::new(5);
        let f = random_instance(&mut rng, 6, 8, 45);
        let text = emit_bipartite(&f);
        let back = parse_bipartite(&text).unwrap();
        assert_eq!(back.left_m(), f.left_m());
        assert_eq!(back.right_n(), f.right_n());
        assert_eq!(emit_bipartite(&back), text);
        assert!(parse_bipartite("2 2 1\n0 5\n").is_err());
        assert!(parse_bipartite("2 2 2\n0 1\n0 1\n").is_err());
    }
}
