//! The checkable output of an extraction: the balanced parts, the last
//! part, and the disjoint witness members, with a stable text serialization.

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::rational::{fmt_rat, parse_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMode {
    Guaranteed,
    BestEffort,
}

impl CertMode {
    fn as_str(self) -> &'static str {
        match self {
            CertMode::Guaranteed => "guaranteed",
            CertMode::BestEffort => "best_effort",
        }
    }
}

/// A complete multipartite cover witness: `r−1` parts of size `s`, one part
/// of size `t`, and `min(s, t)` pairwise disjoint member cliques that are
/// transversals of the parts.
#[derive(Debug, Clone)]
pub struct CoverCertificate {
    pub r: usize,
    /// Hypothesis constant in guaranteed mode; absent for targeted runs.
    pub c: Option<Rat>,
    pub s: u64,
    pub t: u64,
    pub parts: Vec<VertexSet>,
    pub last_part: VertexSet,
    pub members: Vec<Vec<u32>>,
    pub mode: CertMode,
    pub flags: Vec<(String, bool)>,
}

/// Stable field order: r, c, s, t, parts, last_part, members, mode, flags.
/// Emission is byte-deterministic.
pub fn emit_certificate(cert: &CoverCertificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("r {}\n", cert.r));
    match &cert.c {
        Some(c) => out.push_str(&format!("c {}\n", fmt_rat(c))),
        None => out.push_str("c -\n"),
    }
    out.push_str(&format!("s {}\n", cert.s));
    out.push_str(&format!("t {}\n", cert.t));
    out.push_str(&format!("parts {}\n", cert.parts.len()));
    for p in &cert.parts {
        out.push_str("part");
        for v in p.iter() {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out.push_str("last_part");
    for v in cert.last_part.iter() {
        out.push_str(&format!(" {v}"));
    }
    out.push('\n');
    out.push_str(&format!("members {}\n", cert.members.len()));
    for m in &cert.members {
        out.push_str("member");
        for v in m {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out.push_str(&format!("mode {}\n", cert.mode.as_str()));
    if cert.flags.is_empty() {
        out.push_str("flags -\n");
    } else {
        out.push_str("flags");
        for (name, val) in &cert.flags {
            out.push_str(&format!(" {name}={val}"));
        }
        out.push('\n');
    }
    out
}

struct FieldReader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> FieldReader<'a> {
    fn next_field(&mut self, key: &str) -> Result<(usize, Vec<&'a str>)> {
        for (idx, line) in self.lines.by_ref() {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let head = tokens.next().unwrap_or("");
            if head != key {
                return Err(Error::parse(
                    lineno,
                    format!("expected field `{key}`, found `{head}`"),
                ));
            }
            return Ok((lineno, tokens.collect()));
        }
        Err(Error::invalid(format!("missing field `{key}`")))
    }
}

fn parse_vertices(lineno: usize, tokens: &[&str]) -> Result<Vec<u32>> {
    tokens
        .iter()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(lineno, format!("bad vertex `{t}`")))
        })
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(lineno: usize, tokens: &[&str], key: &str) -> Result<T> {
    if tokens.len() != 1 {
        return Err(Error::parse(lineno, format!("field `{key}` takes one value")));
    }
    tokens[0]
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad value for `{key}`")))
}

pub fn parse_certificate(text: &str) -> Result<CoverCertificate> {
    let mut reader = FieldReader {
        lines: text.lines().enumerate(),
    };
    let (lineno, tokens) = reader.next_field("r")?;
    let r: usize = parse_scalar(lineno, &tokens, "r")?;
    let (lineno, tokens) = reader.next_field("c")?;
    let c = if tokens == ["-"] {
        None
    } else if tokens.len() == 1 {
        Some(parse_rat(tokens[0])?)
    } else {
        return Err(Error::parse(lineno, "field `c` takes one value"));
    };
    let (lineno, tokens) = reader.next_field("s")?;
    let s: u64 = parse_scalar(lineno, &tokens, "s")?;
    let (lineno, tokens) = reader.next_field("t")?;
    let t: u64 = parse_scalar(lineno, &tokens, "t")?;
    let (lineno, tokens) = reader.next_field("parts")?;
    let part_count: usize = parse_scalar(lineno, &tokens, "parts")?;
    let mut parts = Vec::with_capacity(part_count);
    for _ in 0..part_count {
        let (lineno, tokens) = reader.next_field("part")?;
        let vs = parse_vertices(lineno, &tokens)?;
        parts.push(
            VertexSet::new(vs).map_err(|e| Error::parse(lineno, e.to_string()))?,
        );
    }
    let (lineno, tokens) = reader.next_field("last_part")?;
    let last_part = VertexSet::new(parse_vertices(lineno, &tokens)?)
        .map_err(|e| Error::parse(lineno, e.to_string()))?;
    let (lineno, tokens) = reader.next_field("members")?;
    let member_count: usize = parse_scalar(lineno, &tokens, "members")?;
    let mut members = Vec::with_capacity(member_count);
    for _ in 0..member_count {
        let (lineno, tokens) = reader.next_field("member")?;
        members.push(parse_vertices(lineno, &tokens)?);
    }
    let (lineno, tokens) = reader.next_field("mode")?;
    let mode = match tokens.as_slice() {
        ["guaranteed"] => CertMode::Guaranteed,
        ["best_effort"] => CertMode::BestEffort,
        _ => return Err(Error::parse(lineno, "mode must be guaranteed or best_effort")),
    };
    let (lineno, tokens) = reader.next_field("flags")?;
    let flags = if tokens == ["-"] {
        Vec::new()
    } else {
        tokens
            .iter()
            .map(|t| {
                let (name, val) = t
                    .split_once('=')
                    .ok_or_else(|| Error::parse(lineno, format!("bad flag `{t}`")))?;
                let val = match val {
                    "true" => true,
                    "false" => false,
                    _ => return Err(Error::parse(lineno, format!("bad flag value `{val}`"))),
                };
                Ok((name.to_string(), val))
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(CoverCertificate {
        r,
        c,
        s,
        t,
        parts,
        last_part,
        members,
        mode,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sample() -> CoverCertificate {
        CoverCertificate {
            r: 3,
            c: Some(rat(1, 27)),
            s: 2,
            t: 4,
            parts: vec![
                VertexSet::new(vec![0, 1]).unwrap(),
                VertexSet::new(vec![2, 3]).unwrap(),
            ],
            last_part: VertexSet::new(vec![4, 5, 6, 7]).unwrap(),
            members: vec![vec![0, 2, 4], vec![1, 3, 5]],
            mode: CertMode::Guaranteed,
            flags: vec![("c_upper".into(), true), ("hypothesis".into(), false)],
        }
    }

    #[test]
    fn round_trip() {
        let cert = sample();
        let text = emit_certificate(&cert);
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back.r, 3);
        assert_eq!(back.c, Some(rat(1, 27)));
        assert_eq!(back.s, 2);
        assert_eq!(back.t, 4);
        assert_eq!(back.parts, cert.parts);
        assert_eq!(back.last_part, cert.last_part);
        assert_eq!(back.members, cert.members);
        assert_eq!(back.mode, CertMode::Guaranteed);
        assert_eq!(back.flags, cert.flags);
        assert_eq!(emit_certificate(&back), text);
    }

    #[test]
    fn absent_c_and_flags() {
        let mut cert = sample();
        cert.c = None;
        cert.mode = CertMode::BestEffort;
        cert.flags.clear();
        let text = emit_certificate(&cert);
        assert!(text.contains("c -\n"));
        assert!(text.contains("flags -\n"));
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back.c, None);
        assert!(back.flags.is_empty());
        assert_eq!(back.mode, CertMode::BestEffort);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_certificate("").is_err());
        assert!(parse_certificate("r 3\nc -\ns x\n").is_err());
        let cert = sample();
        let text = emit_certificate(&cert).replace("mode guaranteed", "mode sometimes");
        assert!(parse_certificate(&text).is_err());
        let text = emit_certificate(&cert).replace("parts 2", "parts 3");
        assert!(parse_certificate(&text).is_err());
    }
}
