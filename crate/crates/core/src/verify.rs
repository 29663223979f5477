//! Independent certificate checking. This module shares no code with the
//! extraction pipeline beyond the graph and clique-list containers: every
//! quantity is recomputed directly from the certificate, the graph, and the
//! member set. The verifier is total — malformed certificates produce
//! `false` flags, never errors.

use std::collections::HashSet;

use crate::certificate::CoverCertificate;
use crate::cliques::CliqueList;
use crate::graph::{Graph, VertexSet};

/// Per-aspect verdicts for one certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyReport {
    /// All `r` parts pairwise disjoint.
    pub parts_ok: bool,
    /// Every cross-part vertex pair is an edge of the graph.
    pub completeness_ok: bool,
    /// Every cross-part edge lies inside at least one member of `M`.
    pub edges_in_k2m_ok: bool,
    /// Witnesses are members of `M`, transversals of the parts, pairwise
    /// vertex-disjoint, and exactly min-part-size many.
    pub members_ok: bool,
    /// Declared `r`, `s`, `t` agree with the part structure.
    pub sizes_ok: bool,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.parts_ok
            && self.completeness_ok
            && self.edges_in_k2m_ok
            && self.members_ok
            && self.sizes_ok
    }
}

fn all_parts(cert: &CoverCertificate) -> Vec<&VertexSet> {
    let mut parts: Vec<&VertexSet> = cert.parts.iter().collect();
    parts.push(&cert.last_part);
    parts
}

pub fn verify_cover(g: &Graph, m: &CliqueList, cert: &CoverCertificate) -> VerifyReport {
    let parts = all_parts(cert);

    let sizes_ok = cert.r >= 2
        && cert.parts.len() == cert.r - 1
        && cert
            .parts
            .iter()
            .all(|p| p.len() as u64 == cert.s)
        && cert.last_part.len() as u64 == cert.t;

    let mut parts_ok = true;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if !parts[i].disjoint_from(parts[j]) {
                parts_ok = false;
            }
        }
    }

    // pairs inside members of M, built here rather than taken from any
    // shared helper
    let mut covered: HashSet<(u32, u32)> = HashSet::new();
    for tuple in m.iter() {
        for (i, &u) in tuple.iter().enumerate() {
            for &v in &tuple[i + 1..] {
                covered.insert((u.min(v), u.max(v)));
            }
        }
    }

    let mut completeness_ok = true;
    let mut edges_in_k2m_ok = true;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            for u in parts[i].iter() {
                for v in parts[j].iter() {
                    if !g.has_edge(u, v) {
                        completeness_ok = false;
                    }
                    if !covered.contains(&(u.min(v), u.max(v))) {
                        edges_in_k2m_ok = false;
                    }
                }
            }
        }
    }

    let min_part = parts.iter().map(|p| p.len()).min().unwrap_or(0);
    let mut members_ok = cert.members.len() == min_part;
    let mut seen: HashSet<u32> = HashSet::new();
    for member in &cert.members {
        if member.len() != cert.r || !m.contains(member) {
            members_ok = false;
            continue;
        }
        // transversal: exactly one vertex in every part
        for part in &parts {
            if member.iter().filter(|&&v| part.contains(v)).count() != 1 {
                members_ok = false;
            }
        }
        for &v in member {
            if !seen.insert(v) {
                members_ok = false; // overlaps an earlier witness
            }
        }
    }

    VerifyReport {
        parts_ok,
        completeness_ok,
        edges_in_k2m_ok,
        members_ok,
        sizes_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::enumerate_r_cliques;
    use crate::extract::{extract_with_target, TargetOptions};
    use crate::graph::gen_complete_multipartite;

    fn planted_setup() -> (Graph, CliqueList, CoverCertificate) {
        let g = gen_complete_multipartite(&[2, 2, 12]).unwrap();
        let m = enumerate_r_cliques(&g, 3).unwrap();
        let cert = extract_with_target(&g, &m, 3, 2, 12, &TargetOptions::default()).unwrap();
        (g, m, cert)
    }

    #[test]
    fn accepts_extracted_certificate() {
        let (g, m, cert) = planted_setup();
        let rep = verify_cover(&g, &m, &cert);
        assert!(rep.all_ok(), "{rep:?}");
    }

    #[test]
    fn rejects_part_overlap() {
        let (g, m, mut cert) = planted_setup();
        // move a vertex of part 0 into part 1 as well
        let v = cert.parts[0].iter().next().unwrap();
        let mut p1: Vec<u32> = cert.parts[1].iter().collect();
        p1.pop();
        p1.push(v);
        cert.parts[1] = VertexSet::new(p1).unwrap();
        let rep = verify_cover(&g, &m, &cert);
        assert!(!rep.parts_ok);
        assert!(!rep.all_ok());
    }

    #[test]
    fn rejects_missing_cross_edge() {
        let (g, m, mut cert) = planted_setup();
        // replace a part-0 vertex with one taken from the last part: it is
        // non-adjacent to the rest of the last part, breaking completeness
        let stray = cert.last_part.iter().last().unwrap();
        let mut p0: Vec<u32> = cert.parts[0].iter().collect();
        p0[0] = stray;
        cert.parts[0] = VertexSet::new(p0).unwrap();
        let mut last: Vec<u32> = cert.last_part.iter().collect();
        last.pop();
        cert.last_part = VertexSet::new(last).unwrap();
        cert.t -= 1;
        let rep = verify_cover(&g, &m, &cert);
        assert!(!rep.completeness_ok);
    }

    #[test]
    fn rejects_uncovered_edge() {
        // shrink M to a single member: most cross edges of the certificate
        // are then outside K_2(M)
        let (g, m, cert) = planted_setup();
        let single = CliqueList::new(3, m.host_n(), vec![m.iter().next().unwrap().to_vec()]).unwrap();
        let rep = verify_cover(&g, &single, &cert);
        assert!(!rep.edges_in_k2m_ok);
    }

    #[test]
    fn rejects_non_member_witness() {
        let (g, m, mut cert) = planted_setup();
        cert.members[0] = vec![0, 1, 2]; // parts 0/0/1 of the planted graph: not a clique
        let rep = verify_cover(&g, &m, &cert);
        assert!(!rep.members_ok);
    }

    #[test]
    fn rejects_overlapping_witnesses() {
        let (g, m, mut cert) = planted_setup();
        cert.members[1] = cert.members[0].clone();
        let rep = verify_cover(&g, &m, &cert);
        assert!(!rep.members_ok);
    }

    #[test]
    fn rejects_size_mismatch() {
        let (g, m, mut cert) = planted_setup();
        cert.s += 1;
        let rep = verify_cover(&g, &m, &cert);
        assert!(!rep.sizes_ok);
    }

    #[test]
    fn total_on_garbage() {
        let (g, m, mut cert) = planted_setup();
        cert.parts.clear();
        cert.members.clear();
        let rep = verify_cover(&g, &m, &cert);
        assert!(!rep.all_ok());
    }
}
