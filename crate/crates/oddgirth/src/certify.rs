//! Round partitions, rooted round certificates, and their verification.
//!
//! A graph is r-round when its vertices split into an ordered partition
//! `(X_1, ..., X_r)` such that every edge runs between cyclically
//! consecutive parts. For odd `r` any odd cycle must cross every
//! consecutive pair, so the odd girth is at least `r`. A certificate
//! attaches one such partition per colour, all rooted at a common vertex
//! (`X_1` is a single vertex, the root). Verification is a linear scan of
//! the edges; it never searches for partitions.

use std::fmt::Write as _;

use thiserror::Error;

use crate::colouring::{Colour, ColourClass, Colouring, Vertex};
use crate::FormatError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("partition has {parts} parts, need at least 3")]
    TooFewParts { parts: usize },
    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: Vertex, n: usize },
    #[error("vertex {v} appears in more than one part")]
    OverlappingParts { v: Vertex },
    #[error("vertex {v} missing from every part")]
    MissingVertex { v: Vertex },
    #[error("partition covers {partition} vertices but the graph has {graph}")]
    CoverMismatch { partition: usize, graph: usize },
    #[error("round parameter {r} is even; the odd-girth bound needs odd r")]
    EvenRounds { r: usize },
    #[error("signature entry {r} must be odd and at least 3")]
    BadSignatureEntry { r: usize },
    #[error("certificate needs at least one colour")]
    NoColours,
    #[error("partition for colour {colour} is not rooted at {root}")]
    NotRooted { colour: Colour, root: Vertex },
    #[error(
        "certificate is for n={cert_n}, k={cert_k} but the colouring has n={n}, k={k}"
    )]
    DimensionMismatch {
        cert_n: usize,
        cert_k: usize,
        n: usize,
        k: usize,
    },
}

/// An ordered partition `(X_1, ..., X_r)` of `0..n`, empty parts permitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundPartition {
    parts: Vec<Vec<Vertex>>,
    part_of: Vec<u32>,
}

impl RoundPartition {
    /// Validates disjointness and exact cover of `0..n`; parts are stored
    /// with their vertices sorted.
    pub fn new(n: usize, mut parts: Vec<Vec<Vertex>>) -> Result<Self, CertifyError> {
        if parts.len() < 3 {
            return Err(CertifyError::TooFewParts { parts: parts.len() });
        }
        const UNASSIGNED: u32 = u32::MAX;
        let mut part_of = vec![UNASSIGNED; n];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                if v as usize >= n {
                    return Err(CertifyError::VertexOutOfRange { v, n });
                }
                if part_of[v as usize] != UNASSIGNED {
                    return Err(CertifyError::OverlappingParts { v });
                }
                part_of[v as usize] = i as u32;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == UNASSIGNED) {
            return Err(CertifyError::MissingVertex { v: v as Vertex });
        }
        for part in &mut parts {
            part.sort_unstable();
        }
        Ok(RoundPartition { parts, part_of })
    }

    /// The part count r.
    pub fn rounds(&self) -> usize {
        self.parts.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }

    pub fn parts(&self) -> &[Vec<Vertex>] {
        &self.parts
    }

    /// 0-based index of the part containing `v`.
    #[inline]
    pub fn part_of(&self, v: Vertex) -> usize {
        self.part_of[v as usize] as usize
    }
}

/// Outcome of checking one colour class against a round partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundCheck {
    Pass,
    /// First edge (in ascending scan order) that joins two parts that are
    /// neither consecutive nor the `X_1`/`X_r` pair; part indices 1-based.
    Fail {
        edge: (Vertex, Vertex),
        parts: (usize, usize),
    },
}

impl RoundCheck {
    pub fn passed(&self) -> bool {
        matches!(self, RoundCheck::Pass)
    }
}

/// Checks that every edge of `g` joins `X_l` to `X_{l+1}` for some l, or
/// `X_1` to `X_r`. Edges are scanned in ascending `(x, y)` order and the
/// first violation is reported.
pub fn verify_round(g: &ColourClass, p: &RoundPartition) -> Result<RoundCheck, CertifyError> {
    if p.vertex_count() != g.vertex_count() {
        return Err(CertifyError::CoverMismatch {
            partition: p.vertex_count(),
            graph: g.vertex_count(),
        });
    }
    let r = p.rounds();
    for (x, y) in g.edges() {
        let (a, b) = (p.part_of(x), p.part_of(y));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let ok = hi == lo + 1 || (lo == 0 && hi == r - 1);
        if !ok {
            return Ok(RoundCheck::Fail {
                edge: (x, y),
                parts: (a + 1, b + 1),
            });
        }
    }
    Ok(RoundCheck::Pass)
}

/// True iff the first part is exactly `{o}`.
pub fn verify_rooted(p: &RoundPartition, o: Vertex) -> bool {
    p.parts[0] == [o]
}

/// The odd-girth lower bound certified by a verified partition: `r` itself.
/// Only odd part counts carry the bound, so even `r` is rejected.
pub fn round_girth_bound(p: &RoundPartition) -> Result<usize, CertifyError> {
    let r = p.rounds();
    if r.is_multiple_of(2) {
        return Err(CertifyError::EvenRounds { r });
    }
    Ok(r)
}

/// A root plus one round partition per colour; the proof object for a
/// rooted round colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrcCertificate {
    root: Vertex,
    partitions: Vec<RoundPartition>,
}

impl RrcCertificate {
    /// Validates that all partitions share one vertex set, are rooted at
    /// `root`, and have odd part counts.
    pub fn new(root: Vertex, partitions: Vec<RoundPartition>) -> Result<Self, CertifyError> {
        let first = partitions.first().ok_or(CertifyError::NoColours)?;
        let n = first.vertex_count();
        if root as usize >= n {
            return Err(CertifyError::VertexOutOfRange { v: root, n });
        }
        for (i, p) in partitions.iter().enumerate() {
            if p.vertex_count() != n {
                return Err(CertifyError::CoverMismatch {
                    partition: p.vertex_count(),
                    graph: n,
                });
            }
            let r = p.rounds();
            if r % 2 == 0 || r < 3 {
                return Err(CertifyError::BadSignatureEntry { r });
            }
            if !verify_rooted(p, root) {
                return Err(CertifyError::NotRooted {
                    colour: (i + 1) as Colour,
                    root,
                });
            }
        }
        Ok(RrcCertificate { root, partitions })
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn colours(&self) -> usize {
        self.partitions.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.partitions[0].vertex_count()
    }

    pub fn partitions(&self) -> &[RoundPartition] {
        &self.partitions
    }

    /// The tuple of per-colour round parameters `(r_1, ..., r_k)`.
    pub fn signature(&self) -> Vec<usize> {
        self.partitions.iter().map(|p| p.rounds()).collect()
    }

    /// The certified odd-girth lower bound, `min_i r_i`.
    pub fn bound(&self) -> usize {
        self.partitions.iter().map(|p| p.rounds()).min().unwrap()
    }
}

/// Per-colour verdict from [`verify_rrc`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourCheck {
    pub colour: Colour,
    pub rounds: usize,
    pub round: RoundCheck,
    pub rooted: bool,
}

impl ColourCheck {
    pub fn passed(&self) -> bool {
        self.round.passed() && self.rooted
    }
}

/// Result of verifying a full certificate against a colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrcReport {
    pub checks: Vec<ColourCheck>,
    /// `min_i r_i`, present only when every colour passed.
    pub bound: Option<usize>,
}

impl RrcReport {
    pub fn passed(&self) -> bool {
        self.bound.is_some()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(out, "colour {} r {} round ", c.colour, c.rounds);
            match &c.round {
                RoundCheck::Pass => out.push_str("PASS"),
                RoundCheck::Fail { edge, parts } => {
                    let _ = write!(
                        out,
                        "FAIL edge {} {} (parts {} {})",
                        edge.0, edge.1, parts.0, parts.1
                    );
                }
            }
            let _ = writeln!(out, " rooted {}", if c.rooted { "PASS" } else { "FAIL" });
        }
        match self.bound {
            Some(b) => {
                let _ = writeln!(out, "certificate PASS oddgirth bound {b}");
            }
            None => {
                let _ = writeln!(out, "certificate FAIL");
            }
        }
        out
    }
}

/// Verifies every colour class of `c` against its partition in `cert`.
pub fn verify_rrc(c: &Colouring, cert: &RrcCertificate) -> Result<RrcReport, CertifyError> {
    if cert.vertex_count() != c.n() || cert.colours() != c.k() {
        return Err(CertifyError::DimensionMismatch {
            cert_n: cert.vertex_count(),
            cert_k: cert.colours(),
            n: c.n(),
            k: c.k(),
        });
    }
    let mut checks = Vec::with_capacity(cert.colours());
    for (i, p) in cert.partitions.iter().enumerate() {
        let colour = (i + 1) as Colour;
        let class = c
            .colour_class(colour)
            .expect("colour index within certificate range");
        checks.push(ColourCheck {
            colour,
            rounds: p.rounds(),
            round: verify_round(&class, p)?,
            rooted: verify_rooted(p, cert.root),
        });
    }
    let bound = checks
        .iter()
        .all(ColourCheck::passed)
        .then(|| cert.bound());
    Ok(RrcReport { checks, bound })
}

/// Serialises a certificate: header `ogcert <n> <k> <root>`, then one line
/// per colour with the parts separated by `|`.
pub fn write_certificate(cert: &RrcCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "ogcert {} {} {}",
        cert.vertex_count(),
        cert.colours(),
        cert.root()
    );
    for (i, p) in cert.partitions.iter().enumerate() {
        let _ = write!(out, "colour {} r {} : ", i + 1, p.rounds());
        let rendered: Vec<String> = p
            .parts
            .iter()
            .map(|part| {
                part.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        out.push_str(rendered.join(" | ").trim_end());
        out.push('\n');
    }
    out
}

/// Parses the certificate format produced by [`write_certificate`].
/// Lines starting with `#` are comments.
pub fn read_certificate(text: &str) -> Result<RrcCertificate, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !is_skippable(l));
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| FormatError::new(1, "missing `ogcert <n> <k> <root>` header"))?;
    let line = header_no + 1;
    let mut tokens = header.split_ascii_whitespace();
    if tokens.next() != Some("ogcert") {
        return Err(FormatError::new(
            line,
            "expected `ogcert <n> <k> <root>` header",
        ));
    }
    let n: usize = parse_num(tokens.next(), line, "vertex count")?;
    let k: usize = parse_num(tokens.next(), line, "colour count")?;
    let root: Vertex = parse_num(tokens.next(), line, "root vertex")?;
    if tokens.next().is_some() {
        return Err(FormatError::new(line, "trailing tokens after header"));
    }
    if k == 0 {
        return Err(FormatError::new(line, "colour count must be at least 1"));
    }

    let mut partitions = Vec::with_capacity(k);
    for expect_colour in 1..=k {
        let (no, l) = lines.next().ok_or_else(|| {
            FormatError::new(line, format!("{k} colour lines required, found {}", expect_colour - 1))
        })?;
        let line = no + 1;
        let (head, body) = l
            .split_once(':')
            .ok_or_else(|| FormatError::new(line, "missing `:` before the part list"))?;
        let mut tokens = head.split_ascii_whitespace();
        if tokens.next() != Some("colour") {
            return Err(FormatError::new(line, "expected `colour <i> r <r_i> : ...`"));
        }
        let colour: usize = parse_num(tokens.next(), line, "colour id")?;
        if colour != expect_colour {
            return Err(FormatError::new(
                line,
                format!("expected colour {expect_colour}, found {colour}"),
            ));
        }
        if tokens.next() != Some("r") {
            return Err(FormatError::new(line, "expected `r <r_i>` after the colour id"));
        }
        let rounds: usize = parse_num(tokens.next(), line, "round parameter")?;
        if tokens.next().is_some() {
            return Err(FormatError::new(line, "trailing tokens before `:`"));
        }
        let mut parts: Vec<Vec<Vertex>> = Vec::with_capacity(rounds);
        for block in body.split('|') {
            let mut part = Vec::new();
            for tok in block.split_ascii_whitespace() {
                let v: Vertex = tok.parse().map_err(|_| {
                    FormatError::new(line, format!("invalid vertex id `{tok}`"))
                })?;
                part.push(v);
            }
            parts.push(part);
        }
        if parts.len() != rounds {
            return Err(FormatError::new(
                line,
                format!("declared r {rounds} but found {} parts", parts.len()),
            ));
        }
        let partition = RoundPartition::new(n, parts)
            .map_err(|e| FormatError::new(line, e.to_string()))?;
        partitions.push(partition);
    }
    if let Some((no, _)) = lines.next() {
        return Err(FormatError::new(no + 1, "unexpected content after the colour lines"));
    }
    RrcCertificate::new(root, partitions).map_err(|e| FormatError::new(line, e.to_string()))
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#')
}

fn parse_num<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, FormatError> {
    let tok = tok.ok_or_else(|| FormatError::new(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| FormatError::new(line, format!("invalid {what} `{tok}`")))
}
