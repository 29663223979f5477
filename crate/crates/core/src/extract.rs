//! The full inductive extraction: certified parameters per recursion level,
//! the bipartite double-cover base case, pruning plus recursive descent for
//! higher arities, and the targeted (best-effort) variant.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::biclique::{find_s_subset, BipartiteInstance, SearchMode};
use crate::bits::BitRow;
use crate::certificate::{CertMode, CoverCertificate};
use crate::certified;
use crate::cliques::{sub_cliques, CliqueList};
use crate::error::{Error, Result, Stage};
use crate::graph::{Graph, VertexSet};
use crate::prune::prune;
use crate::rational::{fmt_rat, rat, rat_int, Rat};

/// Certified targets and side conditions for one recursion level.
#[derive(Debug, Clone)]
pub struct LevelParams {
    /// Clique arity handled at this level.
    pub level: usize,
    /// Hypothesis constant at this level (`c` at the top, then `r'c'/2`
    /// cascading down).
    pub c: Rat,
    /// Balanced part size `⌊c^level · ln n⌋`.
    pub s: u64,
    /// Smallest integer strictly exceeding `n^(1 − c^(level−1))`.
    pub t_min: u64,
    /// Left side available to the averaging lemma here: `n` at level 2,
    /// the part size delivered by the level below otherwise.
    pub left_m: u64,
    /// `c^level · ln n ≥ 1`, equivalently `s ≥ 1`.
    pub c_lower_ok: bool,
    /// `c < 1/2`.
    pub c_upper_ok: bool,
    /// `s ≤ (c/2)·left_m + 1`.
    pub s_vs_m_ok: bool,
    /// The last part guaranteed here is large enough to truncate to the
    /// balanced size the level above consumes.
    pub truncation_ok: bool,
}

impl LevelParams {
    pub fn flags_ok(&self) -> bool {
        self.c_lower_ok && self.c_upper_ok && self.s_vs_m_ok && self.truncation_ok
    }
}

/// Parameters for a guaranteed-mode extraction across all levels.
#[derive(Debug, Clone)]
pub struct ExtractionParams {
    pub n: usize,
    pub r: usize,
    pub c: Rat,
    /// Top-level balanced part size.
    pub s: u64,
    /// Top-level strict lower bound target for the last part.
    pub t_min: u64,
    /// Per-level parameters, index 0 holding level 2.
    pub levels: Vec<LevelParams>,
    pub feasible: bool,
    pub infeasibilities: Vec<String>,
}

impl ExtractionParams {
    pub fn level(&self, level: usize) -> &LevelParams {
        &self.levels[level - 2]
    }
}

fn rat_pow(base: &Rat, exp: usize) -> Rat {
    let mut out = Rat::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// Certified theorem parameters for extracting from `r`-cliques on `n`
/// vertices with hypothesis constant `c`. Each level `r'` below the top
/// uses the cascaded constant `c_{r'-1} = r'·c_{r'}/2`; flags report every
/// violated side condition instead of failing.
pub fn theorem_params(n: usize, r: usize, c: &Rat) -> Result<ExtractionParams> {
    if n < 2 {
        return Err(Error::invalid("theorem parameters require n >= 2"));
    }
    if r < 2 {
        return Err(Error::invalid("theorem parameters require r >= 2"));
    }
    if !c.is_positive() {
        return Err(Error::invalid("c must be positive"));
    }
    // cascade the constants top-down
    let mut consts = vec![Rat::zero(); r + 1];
    consts[r] = c.clone();
    for level in (3..=r).rev() {
        consts[level - 1] = rat_int(level as i64) * &consts[level] / rat_int(2);
    }
    // evaluate levels bottom-up so each level knows its left side
    let mut levels: Vec<LevelParams> = Vec::with_capacity(r - 1);
    for level in 2..=r {
        let c_level = consts[level].clone();
        let q = rat_pow(&c_level, level);
        let s = certified::floor_times_ln(&q, n as u64)?
            .to_u64()
            .ok_or_else(|| Error::invalid("part size out of range"))?;
        let exponent = Rat::one() - rat_pow(&c_level, level - 1);
        let t_min = certified::strictly_greater_pow(n as u64, &exponent)?
            .to_u64()
            .ok_or_else(|| Error::invalid("t_min out of range"))?;
        let left_m = if level == 2 {
            n as u64
        } else {
            levels[level - 3].s
        };
        let c_lower_ok = s >= 1;
        let c_upper_ok = c_level < rat(1, 2);
        let s_vs_m_ok =
            rat_int(s as i64) <= &c_level / rat_int(2) * rat_int(left_m as i64) + Rat::one();
        // level r is consumed directly; below it the last part must cover the
        // balanced size the level above takes its disjoint members from
        let truncation_ok = level == r || t_min >= s;
        levels.push(LevelParams {
            level,
            c: c_level,
            s,
            t_min,
            left_m,
            c_lower_ok,
            c_upper_ok,
            s_vs_m_ok,
            truncation_ok,
        });
    }
    let mut infeasibilities = Vec::new();
    for lp in &levels {
        if !lp.c_lower_ok {
            infeasibilities.push(format!(
                "level {}: c^{}·ln n < 1 (s would be 0) with c = {}",
                lp.level,
                lp.level,
                fmt_rat(&lp.c)
            ));
        }
        if !lp.c_upper_ok {
            infeasibilities.push(format!(
                "level {}: c = {} is not below 1/2",
                lp.level,
                fmt_rat(&lp.c)
            ));
        }
        if !lp.s_vs_m_ok {
            infeasibilities.push(format!(
                "level {}: s = {} exceeds (c/2)m + 1 with m = {}",
                lp.level, lp.s, lp.left_m
            ));
        }
        if !lp.truncation_ok {
            infeasibilities.push(format!(
                "level {}: guaranteed last part t_min = {} cannot be truncated to {}",
                lp.level, lp.t_min, lp.s
            ));
        }
    }
    let top = levels.last().expect("at least one level");
    let (s, t_min) = (top.s, top.t_min);
    let feasible = infeasibilities.is_empty();
    Ok(ExtractionParams {
        n,
        r,
        c: c.clone(),
        s,
        t_min,
        levels,
        feasible,
        infeasibilities,
    })
}

/// Bipartite instance joining each clique `R` of `left_cliques` to every
/// vertex `v` with `R + v` a member of `base`; `v ∈ R` never qualifies
/// since `R + v` would not reach the member arity.
pub fn build_bipartite_from_cliques(
    base: &CliqueList,
    left_cliques: &[Vec<u32>],
    n: usize,
) -> Result<BipartiteInstance> {
    let arity = base.arity();
    if left_cliques.is_empty() {
        return Err(Error::invalid("left side must be non-empty"));
    }
    for (i, a) in left_cliques.iter().enumerate() {
        if a.len() + 1 != arity {
            return Err(Error::invalid(format!(
                "left clique {a:?} has arity {}, expected {}",
                a.len(),
                arity - 1
            )));
        }
        for b in &left_cliques[i + 1..] {
            if a.iter().any(|v| b.contains(v)) {
                return Err(Error::invalid(format!(
                    "left cliques {a:?} and {b:?} are not disjoint"
                )));
            }
        }
    }
    let mut rows = Vec::with_capacity(left_cliques.len());
    let mut probe = Vec::with_capacity(arity);
    for r_tuple in left_cliques {
        let mut row = BitRow::zeros(n);
        for v in 0..n as u32 {
            if r_tuple.contains(&v) {
                continue;
            }
            probe.clear();
            probe.extend_from_slice(r_tuple);
            probe.push(v);
            probe.sort_unstable();
            if base.contains(&probe) {
                row.set(v as usize);
            }
        }
        rows.push(row);
    }
    BipartiteInstance::from_rows(rows, n)
}

fn vertex_set_from_bits(row: &BitRow) -> VertexSet {
    VertexSet::from_bits(row)
}

/// Base case: the double cover of the vertex set with `u ~ v` iff `uv` is a
/// member edge, fed to the subset finder; a vertex is never adjacent to its
/// own copy, so the two returned sides are automatically disjoint.
pub fn base_case_r2(
    m: &CliqueList,
    n: usize,
    s: u64,
    t_min: u64,
) -> Result<Option<CoverCertificate>> {
    if m.arity() != 2 {
        return Err(Error::invalid("base case requires arity 2"));
    }
    if n < m.host_n() || n == 0 {
        return Err(Error::invalid("vertex count incompatible with member edges"));
    }
    if s == 0 {
        return Err(Error::invalid("part size must be >= 1"));
    }
    let mut rows = vec![BitRow::zeros(n); n];
    for e in m.iter() {
        let (u, v) = (e[0] as usize, e[1] as usize);
        rows[u].set(v);
        rows[v].set(u);
    }
    let f = BipartiteInstance::from_rows(rows, n)?;
    debug_assert_eq!(f.edge_count(), 2 * m.len());
    let witness = match find_s_subset(&f, s as usize, t_min as usize, SearchMode::FirstFeasible)? {
        Some(w) => w,
        None => return Ok(None),
    };
    let side: Vec<u32> = witness.left.iter().map(|&i| i as u32).collect();
    let t_part = vertex_set_from_bits(&witness.right);
    if side.iter().any(|&v| t_part.contains(v)) {
        return Err(Error::SearchFailure {
            level: 2,
            stage: Stage::Assembly,
        });
    }
    let k = (s as usize).min(t_part.len());
    let members: Vec<Vec<u32>> = side
        .iter()
        .zip(t_part.iter())
        .take(k)
        .map(|(&u, v)| {
            let mut e = vec![u, v];
            e.sort_unstable();
            e
        })
        .collect();
    for e in &members {
        if !m.contains(e) {
            return Err(Error::SearchFailure {
                level: 2,
                stage: Stage::Assembly,
            });
        }
    }
    Ok(Some(CoverCertificate {
        r: 2,
        c: None,
        s,
        t: t_part.len() as u64,
        parts: vec![VertexSet::new(side)?],
        last_part: t_part,
        members,
        mode: CertMode::BestEffort,
        flags: Vec::new(),
    }))
}

/// Map from vertex to the index of the certificate part containing it,
/// counting `last_part` as the final part.
fn part_index_map(cert: &CoverCertificate) -> HashMap<u32, usize> {
    let mut map = HashMap::new();
    for (j, p) in cert.parts.iter().enumerate() {
        for v in p.iter() {
            map.insert(v, j);
        }
    }
    for v in cert.last_part.iter() {
        map.insert(v, cert.parts.len());
    }
    map
}

fn assemble_from_members(
    level: usize,
    base: &CliqueList,
    selected: &[Vec<u32>],
    part_of: &HashMap<u32, usize>,
    witness_right: &BitRow,
    s: u64,
) -> Result<CoverCertificate> {
    let parts_count = level - 1;
    let mut part_vertices: Vec<Vec<u32>> = vec![Vec::new(); parts_count];
    for member in selected {
        for &v in member {
            let j = *part_of.get(&v).ok_or(Error::SearchFailure {
                level,
                stage: Stage::Assembly,
            })?;
            part_vertices[j].push(v);
        }
    }
    let t_part = vertex_set_from_bits(witness_right);
    let mut parts = Vec::with_capacity(parts_count);
    for vs in part_vertices {
        let set = VertexSet::new(vs)?;
        if set.len() != s as usize || !set.disjoint_from(&t_part) {
            return Err(Error::SearchFailure {
                level,
                stage: Stage::Assembly,
            });
        }
        parts.push(set);
    }
    let k = (s as usize).min(t_part.len());
    let mut members = Vec::with_capacity(k);
    for (member, v) in selected.iter().zip(t_part.iter()).take(k) {
        let mut tuple = member.clone();
        tuple.push(v);
        tuple.sort_unstable();
        if !base.contains(&tuple) {
            return Err(Error::SearchFailure {
                level,
                stage: Stage::Assembly,
            });
        }
        members.push(tuple);
    }
    Ok(CoverCertificate {
        r: level,
        c: None,
        s,
        t: t_part.len() as u64,
        parts,
        last_part: t_part,
        members,
        mode: CertMode::BestEffort,
        flags: Vec::new(),
    })
}

fn rat_n_pow(n: usize, r: usize) -> Rat {
    rat_pow(&rat_int(n as i64), r)
}

fn extract_level(g: &Graph, m: &CliqueList, level: usize, params: &ExtractionParams) -> Result<CoverCertificate> {
    let n = g.n();
    let lp = params.level(level);
    // the induction hypothesis at this level; a violation below the top
    // level is a defect, not an input problem
    if rat_int(m.len() as i64) < &lp.c * rat_n_pow(n, level) {
        return Err(Error::SearchFailure {
            level,
            stage: Stage::Recursion,
        });
    }
    if level == 2 {
        let mut cert = base_case_r2(m, n, lp.s, lp.t_min)?.ok_or(Error::SearchFailure {
            level: 2,
            stage: Stage::BicliqueSearch,
        })?;
        cert.c = Some(lp.c.clone());
        cert.mode = CertMode::Guaranteed;
        return Ok(cert);
    }

    let threshold = &lp.c * rat_int(n as i64);
    let pruned = prune(m, n, &threshold)?;
    let kept = &pruned.kept;
    if rat_int(kept.len() as i64) <= &lp.c / rat_int(2) * rat_n_pow(n, level) {
        return Err(Error::SearchFailure {
            level,
            stage: Stage::Pruning,
        });
    }
    let facets = sub_cliques(kept, level - 1)?;
    let sub_cert = extract_level(g, &facets, level - 1, params)?;

    // truncate: the proof only consumes `left_m` disjoint members of the
    // balanced subgraph delivered below
    let left_m = lp.left_m as usize;
    if sub_cert.members.len() < left_m {
        return Err(Error::SearchFailure {
            level,
            stage: Stage::Recursion,
        });
    }
    let pool: Vec<Vec<u32>> = sub_cert.members[..left_m].to_vec();
    let part_of = part_index_map(&sub_cert);

    let f = build_bipartite_from_cliques(kept, &pool, n)?;
    // co-degrees above the threshold force the density the lemma needs
    debug_assert!(rat_int(f.edge_count() as i64) > &threshold * rat_int(left_m as i64));
    let witness = find_s_subset(&f, lp.s as usize, lp.t_min as usize, SearchMode::FirstFeasible)?
        .ok_or(Error::SearchFailure {
            level,
            stage: Stage::BicliqueSearch,
        })?;
    let selected: Vec<Vec<u32>> = witness.left.iter().map(|&i| pool[i].clone()).collect();
    let mut cert = assemble_from_members(level, kept, &selected, &part_of, &witness.right, lp.s)?;
    cert.c = Some(lp.c.clone());
    cert.mode = CertMode::Guaranteed;
    Ok(cert)
}

/// Guaranteed-mode extraction: requires `|M| ≥ c·n^r` together with every
/// level's side conditions, then follows the inductive construction, whose
/// success is then implied. Returns `Infeasible` when the flags fail;
/// `SearchFailure` afterwards would indicate a defect.
pub fn extract(g: &Graph, m: &CliqueList, r: usize, c: &Rat) -> Result<CoverCertificate> {
    if m.arity() != r {
        return Err(Error::invalid(format!(
            "clique list has arity {}, expected {r}",
            m.arity()
        )));
    }
    if m.host_n() > g.n() {
        return Err(Error::invalid(
            "clique list addresses more vertices than the graph",
        ));
    }
    m.validate_in(g)?;
    let params = theorem_params(g.n(), r, c)?;
    let hypothesis_ok = rat_int(m.len() as i64) >= c * rat_n_pow(g.n(), r);
    if !params.feasible || !hypothesis_ok {
        let mut reasons = params.infeasibilities.clone();
        if !hypothesis_ok {
            reasons.push(format!(
                "|M| = {} is below c·n^r with c = {}, n = {}",
                m.len(),
                fmt_rat(c),
                g.n()
            ));
        }
        return Err(Error::Infeasible(reasons.join("; ")));
    }
    let mut cert = extract_level(g, m, r, &params)?;
    cert.c = Some(c.clone());
    cert.flags = vec![
        ("hypothesis".to_string(), true),
        ("c_lower".to_string(), true),
        ("c_upper".to_string(), true),
        ("s_vs_m".to_string(), true),
    ];
    Ok(cert)
}

/// Options for targeted extraction.
#[derive(Debug, Clone, Default)]
pub struct TargetOptions {
    /// Pruning threshold applied at every level above 2; keep-all (0) when
    /// absent.
    pub threshold: Option<Rat>,
    /// Cap on the harvested left pool per level.
    pub max_left: Option<usize>,
}

struct TargetSearch<'a> {
    rows: Vec<BitRow>,
    pool: &'a [Vec<u32>],
    covered_pairs: &'a HashSet<(u32, u32)>,
    arity: usize,
    s: usize,
    t_min: usize,
    perms: Vec<Vec<usize>>,
    chosen: Vec<(usize, Vec<u32>)>,
}

impl TargetSearch<'_> {
    fn pair_covered(&self, a: u32, b: u32) -> bool {
        let key = (a.min(b), a.max(b));
        self.covered_pairs.contains(&key)
    }

    fn compatible(&self, oriented: &[u32]) -> bool {
        for (_, prev) in &self.chosen {
            for j in 0..self.arity {
                for q in 0..self.arity {
                    if j != q && !self.pair_covered(oriented[j], prev[q]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn dfs(&mut self, start: usize, current: &BitRow) -> Option<BitRow> {
        if self.chosen.len() == self.s {
            return Some(current.clone());
        }
        let need = self.s - self.chosen.len();
        for pos in start..self.pool.len() {
            if self.pool.len() - pos < need {
                break;
            }
            let next = current.and(&self.rows[pos]);
            if next.count() < self.t_min {
                continue;
            }
            // the first member fixes the part labeling; later members try
            // every orientation against it
            let orientation_count = if self.chosen.is_empty() {
                1
            } else {
                self.perms.len()
            };
            for pi in 0..orientation_count {
                let oriented: Vec<u32> =
                    self.perms[pi].iter().map(|&j| self.pool[pos][j]).collect();
                if !self.compatible(&oriented) {
                    continue;
                }
                self.chosen.push((pos, oriented));
                if let Some(right) = self.dfs(pos + 1, &next) {
                    return Some(right);
                }
                self.chosen.pop();
            }
        }
        None
    }
}

/// Targeted extraction with user-supplied part targets: the same pipeline
/// stages, with the left pool at each level harvested greedily from
/// `K_{r-1}(L)` by descending co-degree, and the subset search additionally
/// enforcing cross-part completeness through covered pairs.
pub fn extract_with_target(
    g: &Graph,
    m: &CliqueList,
    r: usize,
    s: u64,
    t_min: u64,
    opts: &TargetOptions,
) -> Result<CoverCertificate> {
    if m.arity() != r {
        return Err(Error::invalid(format!(
            "clique list has arity {}, expected {r}",
            m.arity()
        )));
    }
    if r < 2 {
        return Err(Error::invalid("extraction requires r >= 2"));
    }
    if s == 0 {
        return Err(Error::invalid("part size target must be >= 1"));
    }
    if m.host_n() > g.n() {
        return Err(Error::invalid(
            "clique list addresses more vertices than the graph",
        ));
    }
    m.validate_in(g)?;
    let n = g.n();

    if r == 2 {
        return base_case_r2(m, n, s, t_min)?.ok_or(Error::NotFound {
            level: 2,
            stage: Stage::BicliqueSearch,
        });
    }

    let threshold = opts.threshold.clone().unwrap_or_else(Rat::zero);
    let pruned = prune(m, n, &threshold)?;
    let kept = &pruned.kept;
    if kept.is_empty() {
        return Err(Error::NotFound {
            level: r,
            stage: Stage::Pruning,
        });
    }

    // facet co-degrees in one pass; the facet set is exactly K_{r-1}(L)
    let mut codegrees: HashMap<Vec<u32>, usize> = HashMap::new();
    for tuple in kept.iter() {
        for skip in 0..tuple.len() {
            let mut facet = Vec::with_capacity(tuple.len() - 1);
            facet.extend_from_slice(&tuple[..skip]);
            facet.extend_from_slice(&tuple[skip + 1..]);
            *codegrees.entry(facet).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(Vec<u32>, usize)> = codegrees.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let max_left = opts.max_left.unwrap_or_else(|| (4 * s as usize).max(16));
    let mut used = BitRow::zeros(n);
    let mut pool: Vec<Vec<u32>> = Vec::new();
    for (facet, _) in ranked {
        if pool.len() == max_left {
            break;
        }
        if facet.iter().any(|&v| used.test(v as usize)) {
            continue;
        }
        for &v in &facet {
            used.set(v as usize);
        }
        pool.push(facet);
    }
    if pool.len() < s as usize {
        return Err(Error::NotFound {
            level: r,
            stage: Stage::LeftPool,
        });
    }

    let covered_pairs: HashSet<(u32, u32)> = kept
        .iter()
        .flat_map(|t| {
            t.iter()
                .enumerate()
                .flat_map(move |(i, &u)| t[i + 1..].iter().map(move |&v| (u, v)))
        })
        .collect();

    let f = build_bipartite_from_cliques(kept, &pool, n)?;
    let rows: Vec<BitRow> = (0..f.left_m()).map(|i| f.row(i).clone()).collect();
    let perms: Vec<Vec<usize>> = (0..r - 1).permutations(r - 1).collect();
    let mut search = TargetSearch {
        rows,
        pool: &pool,
        covered_pairs: &covered_pairs,
        arity: r - 1,
        s: s as usize,
        t_min: t_min as usize,
        perms,
        chosen: Vec::with_capacity(s as usize),
    };
    let right = search
        .dfs(0, &BitRow::ones(n))
        .ok_or(Error::NotFound {
            level: r,
            stage: Stage::BicliqueSearch,
        })?;

    // part j collects the part-j vertex of every chosen member
    let mut part_of: HashMap<u32, usize> = HashMap::new();
    for (_, oriented) in &search.chosen {
        for (j, &v) in oriented.iter().enumerate() {
            part_of.insert(v, j);
        }
    }
    let selected: Vec<Vec<u32>> = search.chosen.iter().map(|(i, _)| pool[*i].clone()).collect();
    assemble_from_members(r, kept, &selected, &part_of, &right, s)
}
