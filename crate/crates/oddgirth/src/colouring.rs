//! Storage, indexing, relabelling and serialization of edge colourings of
//! complete graphs.
//!
//! A [`Colouring`] assigns every unordered pair of distinct vertices a
//! colour in `1..=k`. Storage is a dense upper-triangular array with pair
//! `{x, y}`, `x < y`, at index `x*(2n-x-1)/2 + (y-x-1)`, in the smallest
//! integer width that holds `k`. Vertices are 0-based, colours 1-based.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::FormatError;

/// Vertex identifier in `0..n`.
pub type Vertex = u32;
/// Colour identifier in `1..=k`.
pub type Colour = u32;

/// Largest vertex count that is fully materialised in memory.
pub const MAX_VERTICES: usize = (1 << 13) + 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColouringError {
    #[error("vertex count must be at least 1")]
    NoVertices,
    #[error("colour count must be at least 1")]
    NoColours,
    #[error("vertex count {n} exceeds the in-memory cap of {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: Vertex, n: usize },
    #[error("self-loop: vertex {v} paired with itself")]
    SelfLoop { v: Vertex },
    #[error("colour {colour} out of range 1..={k}")]
    ColourOutOfRange { colour: Colour, k: usize },
    #[error("relabelling is not a bijection on 1..={k}")]
    NotAPermutation { k: usize },
    #[error("duplicate edge ({x}, {y})")]
    DuplicateEdge { x: Vertex, y: Vertex },
}

/// Index of pair `{x, y}` with `x < y < n` in row-major upper-triangular order.
#[inline]
pub fn pair_index(n: usize, x: usize, y: usize) -> usize {
    debug_assert!(x < y && y < n);
    x * (2 * n - x - 1) / 2 + (y - x - 1)
}

/// Colour ids packed into the smallest width that fits the palette.
#[derive(Clone, PartialEq, Eq)]
enum ColourStore {
    U8(Vec<u8>),
    U16(Vec<u16>),
    U32(Vec<u32>),
}

impl ColourStore {
    fn with_capacity(k: usize, len: usize) -> Self {
        if k <= u8::MAX as usize {
            ColourStore::U8(Vec::with_capacity(len))
        } else if k <= u16::MAX as usize {
            ColourStore::U16(Vec::with_capacity(len))
        } else {
            ColourStore::U32(Vec::with_capacity(len))
        }
    }

    fn push(&mut self, c: Colour) {
        match self {
            ColourStore::U8(v) => v.push(c as u8),
            ColourStore::U16(v) => v.push(c as u16),
            ColourStore::U32(v) => v.push(c),
        }
    }

    #[inline]
    fn get(&self, i: usize) -> Colour {
        match self {
            ColourStore::U8(v) => v[i] as Colour,
            ColourStore::U16(v) => v[i] as Colour,
            ColourStore::U32(v) => v[i],
        }
    }

    fn len(&self) -> usize {
        match self {
            ColourStore::U8(v) => v.len(),
            ColourStore::U16(v) => v.len(),
            ColourStore::U32(v) => v.len(),
        }
    }
}

/// An edge colouring of the complete graph on `n` vertices with colours `1..=k`.
///
/// Every pair carries exactly one colour; this is checked on construction.
/// Immutable afterwards, so shared read-only use is safe.
#[derive(Clone, PartialEq, Eq)]
pub struct Colouring {
    n: usize,
    k: usize,
    store: ColourStore,
}

impl fmt::Debug for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Colouring {{ n: {}, k: {} }}", self.n, self.k)
    }
}

impl Colouring {
    /// Builds a colouring by evaluating `colour(x, y)` for every pair `x < y`.
    ///
    /// Pairs are visited in row-major upper-triangular order, so a stateful
    /// closure sees a deterministic sequence. Each returned colour must lie
    /// in `1..=k`.
    pub fn from_fn<F>(n: usize, k: usize, mut colour: F) -> Result<Self, ColouringError>
    where
        F: FnMut(Vertex, Vertex) -> Colour,
    {
        if n == 0 {
            return Err(ColouringError::NoVertices);
        }
        if k == 0 {
            return Err(ColouringError::NoColours);
        }
        if n > MAX_VERTICES {
            return Err(ColouringError::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        let len = n * (n - 1) / 2;
        let mut store = ColourStore::with_capacity(k, len);
        for x in 0..n {
            for y in (x + 1)..n {
                let c = colour(x as Vertex, y as Vertex);
                if c == 0 || c as usize > k {
                    return Err(ColouringError::ColourOutOfRange { colour: c, k });
                }
                store.push(c);
            }
        }
        Ok(Colouring { n, k, store })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.store.len()
    }

    /// The colour of edge `{x, y}`. Symmetric in its arguments.
    pub fn colour_of(&self, x: Vertex, y: Vertex) -> Result<Colour, ColouringError> {
        if x == y {
            return Err(ColouringError::SelfLoop { v: x });
        }
        let (xs, ys) = (x as usize, y as usize);
        if xs >= self.n {
            return Err(ColouringError::VertexOutOfRange { v: x, n: self.n });
        }
        if ys >= self.n {
            return Err(ColouringError::VertexOutOfRange { v: y, n: self.n });
        }
        Ok(self.raw(x, y))
    }

    /// Unchecked accessor for construction loops; callers guarantee `x != y`
    /// and both in range.
    #[inline]
    pub(crate) fn raw(&self, x: Vertex, y: Vertex) -> Colour {
        let (xs, ys) = (x as usize, y as usize);
        let (lo, hi) = if xs < ys { (xs, ys) } else { (ys, xs) };
        self.store.get(pair_index(self.n, lo, hi))
    }

    /// The graph carrying exactly the colour-`i` edges.
    pub fn colour_class(&self, i: Colour) -> Result<ColourClass, ColouringError> {
        if i == 0 || i as usize > self.k {
            return Err(ColouringError::ColourOutOfRange {
                colour: i,
                k: self.k,
            });
        }
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); self.n];
        let mut edge_count = 0;
        let mut idx = 0;
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                if self.store.get(idx) == i {
                    adj[x].push(y as Vertex);
                    adj[y].push(x as Vertex);
                    edge_count += 1;
                }
                idx += 1;
            }
        }
        // rows are filled in ascending order, so the lists are already sorted
        Ok(ColourClass {
            colour: i,
            adj,
            edge_count,
        })
    }

    /// Renames colours: `perm[i-1]` is the new name of colour `i`.
    pub fn relabel_colours(&self, perm: &[Colour]) -> Result<Colouring, ColouringError> {
        if perm.len() != self.k {
            return Err(ColouringError::NotAPermutation { k: self.k });
        }
        let mut seen = vec![false; self.k];
        for &p in perm {
            if p == 0 || p as usize > self.k || seen[p as usize - 1] {
                return Err(ColouringError::NotAPermutation { k: self.k });
            }
            seen[p as usize - 1] = true;
        }
        let mut store = ColourStore::with_capacity(self.k, self.store.len());
        for i in 0..self.store.len() {
            store.push(perm[self.store.get(i) as usize - 1]);
        }
        Ok(Colouring {
            n: self.n,
            k: self.k,
            store,
        })
    }
}

/// One colour's graph: per vertex, the sorted neighbours joined by an edge
/// of that colour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourClass {
    colour: Colour,
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl ColourClass {
    /// Builds a class directly from an edge list (used by tests and tools).
    pub fn from_edges(
        colour: Colour,
        n: usize,
        edges: &[(Vertex, Vertex)],
    ) -> Result<Self, ColouringError> {
        if n == 0 {
            return Err(ColouringError::NoVertices);
        }
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for &(x, y) in edges {
            if x == y {
                return Err(ColouringError::SelfLoop { v: x });
            }
            for v in [x, y] {
                if v as usize >= n {
                    return Err(ColouringError::VertexOutOfRange { v, n });
                }
            }
            adj[x as usize].push(y);
            adj[y as usize].push(x);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(ColouringError::DuplicateEdge {
                    x: v as Vertex,
                    y: w[0],
                });
            }
        }
        Ok(ColourClass {
            colour,
            adj,
            edge_count: edges.len(),
        })
    }

    pub fn colour(&self) -> Colour {
        self.colour
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, x: Vertex, y: Vertex) -> bool {
        self.adj[x as usize].binary_search(&y).is_ok()
    }

    /// Edges as `(x, y)` with `x < y`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(x, ns)| {
            let xv = x as Vertex;
            ns.iter()
                .copied()
                .filter(move |&y| y > xv)
                .map(move |y| (xv, y))
        })
    }
}

/// Serialises a colouring in the OGC text format: header `ogc <n> <k>`,
/// then the `n(n-1)/2` colour ids in row-major upper-triangular order,
/// one row per line. The output is canonical: parsing it back and
/// re-serialising reproduces the bytes.
pub fn write_colouring(c: &Colouring) -> String {
    let mut out = String::with_capacity(c.edge_count() * 2 + 32);
    let _ = writeln!(out, "ogc {} {}", c.n, c.k);
    let mut idx = 0;
    for x in 0..c.n.saturating_sub(1) {
        for y in (x + 1)..c.n {
            if y > x + 1 {
                out.push(' ');
            }
            let _ = write!(out, "{}", c.store.get(idx));
            idx += 1;
        }
        out.push('\n');
    }
    out
}

/// Parses the OGC text format. Lines starting with `#` are comments.
/// Failures report the offending line.
pub fn read_colouring(text: &str) -> Result<Colouring, FormatError> {
    let mut lines = text.lines().enumerate();
    let (header_no, header) = lines
        .by_ref()
        .find(|(_, l)| !is_skippable(l))
        .ok_or_else(|| FormatError::new(1, "missing `ogc <n> <k>` header"))?;
    let line = header_no + 1;
    let mut tokens = header.split_ascii_whitespace();
    if tokens.next() != Some("ogc") {
        return Err(FormatError::new(line, "expected `ogc <n> <k>` header"));
    }
    let n: usize = parse_token(tokens.next(), line, "vertex count")?;
    let k: usize = parse_token(tokens.next(), line, "colour count")?;
    if tokens.next().is_some() {
        return Err(FormatError::new(line, "trailing tokens after header"));
    }
    if n == 0 {
        return Err(FormatError::new(line, "vertex count must be at least 1"));
    }
    if k == 0 {
        return Err(FormatError::new(line, "colour count must be at least 1"));
    }
    if n > MAX_VERTICES {
        return Err(FormatError::new(
            line,
            format!("vertex count {n} exceeds the in-memory cap of {MAX_VERTICES}"),
        ));
    }

    let expected = n * (n - 1) / 2;
    let mut store = ColourStore::with_capacity(k, expected);
    let mut count = 0usize;
    let mut last_line = line;
    for (no, l) in lines {
        last_line = no + 1;
        if is_skippable(l) {
            continue;
        }
        for tok in l.split_ascii_whitespace() {
            if count == expected {
                return Err(FormatError::new(
                    last_line,
                    format!("more than {expected} colour entries"),
                ));
            }
            let c: Colour = tok.parse().map_err(|_| {
                FormatError::new(last_line, format!("invalid colour id `{tok}`"))
            })?;
            if c == 0 || c as usize > k {
                return Err(FormatError::new(
                    last_line,
                    format!("colour {c} out of range 1..={k}"),
                ));
            }
            store.push(c);
            count += 1;
        }
    }
    if count != expected {
        return Err(FormatError::new(
            last_line,
            format!("{count} colour entries, {expected} required"),
        ));
    }
    Ok(Colouring { n, k, store })
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#')
}

fn parse_token(tok: Option<&str>, line: usize, what: &str) -> Result<usize, FormatError> {
    let tok = tok.ok_or_else(|| FormatError::new(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| FormatError::new(line, format!("invalid {what} `{tok}`")))
}
