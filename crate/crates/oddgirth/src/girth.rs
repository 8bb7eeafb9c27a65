//! Ground-truth odd girth and fixed-length cycle detection, independent of
//! all certificates.
//!
//! Two separate engines:
//!
//! * [`shortest_odd_cycle`] finds the exact odd girth by breadth-first
//!   search over `(vertex, parity)` states, the bipartite double cover.
//!   The distance from `(s, even)` to `(s, odd)` is the shortest odd
//!   closed walk through `s`; minimised over all `s` this is the odd
//!   girth, because a shortest odd closed walk is a simple cycle. Cost
//!   O(V*E) per class, usable at every size this crate materialises.
//! * [`contains_cycle_of_length`] searches for a cycle of one exact
//!   length by pruned depth-first search. This is exponential in the
//!   worst case, so it is capped at [`MAX_SEARCH_VERTICES`] vertices and
//!   cycle length [`MAX_SEARCH_CYCLE`], and aborts with an error when a
//!   wall-clock [`Budget`] runs out. It never truncates silently.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::colouring::{Colour, ColourClass, Colouring, Vertex};

/// Hard cap on exhaustive cycle search size.
pub const MAX_SEARCH_VERTICES: usize = 500;
/// Hard cap on the exact cycle length searched for.
pub const MAX_SEARCH_CYCLE: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GirthError {
    #[error("cycle length {r} out of the supported range 3..={hi}")]
    CycleLengthOutOfRange { r: usize, hi: usize },
    #[error("cycle-freeness is defined here for odd lengths only (got {r})")]
    EvenCycleLength { r: usize },
    #[error("exhaustive cycle search is capped at {max} vertices (class has {n})")]
    SearchCapExceeded { n: usize, max: usize },
    #[error("time budget exceeded during exhaustive cycle search")]
    BudgetExceeded,
}

/// Wall-clock bound for exhaustive searches. Exceeding it aborts with
/// [`GirthError::BudgetExceeded`] rather than returning a partial answer.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn from_secs(secs: u64) -> Self {
        Budget {
            deadline: Some(Instant::now() + Duration::from_secs(secs)),
        }
    }

    pub fn from_duration(d: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + d),
        }
    }

    fn check(&self) -> Result<(), GirthError> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(GirthError::BudgetExceeded),
            _ => Ok(()),
        }
    }
}

/// Exact odd girth of one colour class, `None` when it is bipartite.
pub fn shortest_odd_cycle(g: &ColourClass) -> Option<usize> {
    odd_girth_search(g).map(|(len, _)| len)
}

/// Odd girth plus one shortest odd cycle as a vertex list.
pub fn shortest_odd_cycle_witness(g: &ColourClass) -> Option<(usize, Vec<Vertex>)> {
    odd_girth_search(g)
}

fn odd_girth_search(g: &ColourClass) -> Option<(usize, Vec<Vertex>)> {
    let n = g.vertex_count();
    const UNSEEN: u32 = u32::MAX;
    // state 2v | parity
    let mut dist = vec![UNSEEN; 2 * n];
    let mut parent = vec![UNSEEN; 2 * n];
    let mut queue: VecDeque<u32> = VecDeque::new();
    let mut best: Option<(usize, Vec<Vertex>)> = None;

    for s in 0..n {
        if g.degree(s as Vertex) < 2 {
            continue;
        }
        let bound = best.as_ref().map_or(usize::MAX, |(l, _)| *l);
        dist.fill(UNSEEN);
        parent.fill(UNSEEN);
        queue.clear();
        let start = (s as u32) << 1;
        let target = start | 1;
        dist[start as usize] = 0;
        queue.push_back(start);
        'bfs: while let Some(state) = queue.pop_front() {
            let d = dist[state as usize] as usize;
            if d + 1 >= bound {
                break; // nothing shorter than the current best is reachable
            }
            let v = (state >> 1) as Vertex;
            let parity = state & 1;
            for &w in g.neighbours(v) {
                let next = (w << 1) | (parity ^ 1);
                if dist[next as usize] != UNSEEN {
                    continue;
                }
                dist[next as usize] = (d + 1) as u32;
                parent[next as usize] = state;
                if next == target {
                    // first arrival at (s, odd): the shortest odd closed
                    // walk through s
                    let mut walk = Vec::with_capacity(d + 1);
                    let mut cur = next;
                    while cur != start {
                        walk.push((cur >> 1) as Vertex);
                        cur = parent[cur as usize];
                    }
                    walk.reverse();
                    walk.rotate_right(1); // starts at s, follows the walk
                    best = Some((d + 1, walk));
                    break 'bfs;
                }
                queue.push_back(next);
            }
        }
        if matches!(best, Some((3, _))) {
            break; // no odd cycle can be shorter
        }
    }
    best
}

/// Per-colour odd girths of a colouring; `None` entries are bipartite
/// classes (odd girth infinity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GirthReport {
    pub per_colour: Vec<(Colour, Option<usize>)>,
    /// Minimum over the colours: the monochromatic odd girth.
    pub overall: Option<usize>,
}

impl GirthReport {
    /// Line-oriented text: `colour <i> oddgirth <g|inf>` per colour, then
    /// `overall <g|inf>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (colour, girth) in &self.per_colour {
            let _ = writeln!(out, "colour {colour} oddgirth {}", show(*girth));
        }
        let _ = writeln!(out, "overall {}", show(self.overall));
        out
    }
}

fn show(g: Option<usize>) -> String {
    g.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

/// Applies [`shortest_odd_cycle`] to every colour class.
pub fn colouring_odd_girth(c: &Colouring) -> GirthReport {
    let mut per_colour = Vec::with_capacity(c.k());
    for i in 1..=c.k() as Colour {
        let class = c.colour_class(i).expect("colour in range");
        per_colour.push((i, shortest_odd_cycle(&class)));
    }
    let overall = per_colour.iter().filter_map(|&(_, g)| g).min();
    GirthReport {
        per_colour,
        overall,
    }
}

/// Searches `g` for a cycle of length exactly `r`; returns one witness
/// cycle when present.
///
/// Roots are tried in ascending order and removed after processing, so a
/// found cycle is reported with its least vertex first and the witness is
/// the least cycle in the fixed search order. For odd `r` the parity
/// search decides without any exhaustive work whenever the odd girth
/// already settles the question.
pub fn contains_cycle_of_length(
    g: &ColourClass,
    r: usize,
    budget: &Budget,
) -> Result<Option<Vec<Vertex>>, GirthError> {
    let n = g.vertex_count();
    let hi = MAX_SEARCH_CYCLE.min(n);
    if r < 3 || r > hi {
        return Err(GirthError::CycleLengthOutOfRange { r, hi });
    }
    if r % 2 == 1 {
        match odd_girth_search(g) {
            None => return Ok(None),
            Some((og, _)) if og > r => return Ok(None),
            Some((og, walk)) if og == r => return Ok(Some(walk)),
            _ => {} // odd girth below r settles nothing, fall through
        }
    }
    if n > MAX_SEARCH_VERTICES {
        return Err(GirthError::SearchCapExceeded {
            n,
            max: MAX_SEARCH_VERTICES,
        });
    }

    let mut search = CycleSearch {
        g,
        r,
        budget,
        root: 0,
        dist: vec![u32::MAX; n],
        visited: vec![false; n],
        path: Vec::with_capacity(r),
        ticks: 0,
    };
    for root in 0..n as Vertex {
        if g.degree(root) < 2 {
            continue;
        }
        search.root = root;
        search.distances_from_root();
        search.path.clear();
        search.path.push(root);
        search.visited[root as usize] = true;
        let found = search.extend(root, 0)?;
        search.visited[root as usize] = false;
        if found {
            return Ok(Some(search.path));
        }
    }
    Ok(None)
}

struct CycleSearch<'a> {
    g: &'a ColourClass,
    r: usize,
    budget: &'a Budget,
    root: Vertex,
    dist: Vec<u32>,
    visited: Vec<bool>,
    path: Vec<Vertex>,
    ticks: u32,
}

impl CycleSearch<'_> {
    /// BFS distances from the root inside the surviving vertex set
    /// (everything below the root is deleted).
    fn distances_from_root(&mut self) {
        self.dist.fill(u32::MAX);
        let mut queue = VecDeque::new();
        self.dist[self.root as usize] = 0;
        queue.push_back(self.root);
        while let Some(v) = queue.pop_front() {
            let d = self.dist[v as usize];
            if d as usize >= self.r {
                continue; // further vertices can never close an r-cycle
            }
            for &w in self.g.neighbours(v) {
                if w < self.root || self.dist[w as usize] != u32::MAX {
                    continue;
                }
                self.dist[w as usize] = d + 1;
                queue.push_back(w);
            }
        }
    }

    /// Depth-first extension of the current path; `depth` edges used so far.
    fn extend(&mut self, u: Vertex, depth: usize) -> Result<bool, GirthError> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks & 0xFF == 0 {
            self.budget.check()?;
        }
        if depth == self.r - 1 {
            // close the cycle; keep only the orientation with the smaller
            // second vertex so each cycle is produced once
            return Ok(self.path[1] < u && self.g.has_edge(u, self.root));
        }
        let remaining = (self.r - depth - 1) as u32;
        for i in 0..self.g.neighbours(u).len() {
            let w = self.g.neighbours(u)[i];
            if w <= self.root
                || self.visited[w as usize]
                || self.dist[w as usize] > remaining
            {
                continue;
            }
            self.path.push(w);
            self.visited[w as usize] = true;
            let found = self.extend(w, depth + 1)?;
            if found {
                return Ok(true);
            }
            self.path.pop();
            self.visited[w as usize] = false;
        }
        Ok(false)
    }
}

/// Outcome of a monochromatic C_r search over a whole colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrCheck {
    Free,
    Witness { colour: Colour, cycle: Vec<Vertex> },
}

impl CrCheck {
    pub fn is_free(&self) -> bool {
        matches!(self, CrCheck::Free)
    }
}

/// True via [`CrCheck::Free`] iff no colour class contains a cycle of
/// length exactly `r` (odd). A colouring on fewer than `r` vertices is
/// trivially free.
pub fn is_cr_free(c: &Colouring, r: usize, budget: &Budget) -> Result<CrCheck, GirthError> {
    if r.is_multiple_of(2) {
        return Err(GirthError::EvenCycleLength { r });
    }
    if r < 3 {
        return Err(GirthError::CycleLengthOutOfRange { r, hi: MAX_SEARCH_CYCLE });
    }
    if r > c.n() {
        return Ok(CrCheck::Free);
    }
    for i in 1..=c.k() as Colour {
        let class = c.colour_class(i).expect("colour in range");
        if let Some(cycle) = contains_cycle_of_length(&class, r, budget)? {
            return Ok(CrCheck::Witness { colour: i, cycle });
        }
    }
    Ok(CrCheck::Free)
}

/// Renders a witness cycle in the report format: `witness <v0> <v1> ...`.
pub fn render_witness(cycle: &[Vertex]) -> String {
    let mut out = String::from("witness");
    for v in cycle {
        let _ = write!(out, " {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::Colouring;

    fn cycle_class(n: usize) -> ColourClass {
        let edges: Vec<(Vertex, Vertex)> = (0..n)
            .map(|i| (i as Vertex, ((i + 1) % n) as Vertex))
            .collect();
        ColourClass::from_edges(1, n, &edges).unwrap()
    }

    fn complete_class(n: usize) -> ColourClass {
        let mut edges = Vec::new();
        for x in 0..n as Vertex {
            for y in (x + 1)..n as Vertex {
                edges.push((x, y));
            }
        }
        ColourClass::from_edges(1, n, &edges).unwrap()
    }

    pub(crate) fn petersen() -> ColourClass {
        let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5)); // outer cycle
            edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
            edges.push((i, 5 + i)); // spokes
        }
        ColourClass::from_edges(1, 10, &edges).unwrap()
    }

    #[test]
    fn pentagon_has_odd_girth_5() {
        assert_eq!(shortest_odd_cycle(&cycle_class(5)), Some(5));
    }

    #[test]
    fn even_cycles_are_bipartite() {
        assert_eq!(shortest_odd_cycle(&cycle_class(6)), None);
        assert_eq!(shortest_odd_cycle(&cycle_class(8)), None);
    }

    #[test]
    fn complete_graphs_have_triangles() {
        assert_eq!(shortest_odd_cycle(&complete_class(4)), Some(3));
    }

    #[test]
    fn petersen_has_odd_girth_5() {
        assert_eq!(shortest_odd_cycle(&petersen()), Some(5));
    }

    #[test]
    fn witness_is_a_real_cycle() {
        let (len, cycle) = shortest_odd_cycle_witness(&petersen()).unwrap();
        assert_eq!(len, 5);
        assert_eq!(cycle.len(), 5);
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 5, "witness must not repeat vertices");
        let g = petersen();
        for i in 0..5 {
            assert!(g.has_edge(cycle[i], cycle[(i + 1) % 5]));
        }
    }

    #[test]
    fn base_colouring_girth_report() {
        let c = Colouring::from_fn(5, 2, |x, y| {
            let d = y - x;
            if d == 1 || d == 4 {
                1
            } else {
                2
            }
        })
        .unwrap();
        let report = colouring_odd_girth(&c);
        assert_eq!(report.per_colour, vec![(1, Some(5)), (2, Some(5))]);
        assert_eq!(report.overall, Some(5));
        assert_eq!(
            report.render(),
            "colour 1 oddgirth 5\ncolour 2 oddgirth 5\noverall 5\n"
        );
    }

    #[test]
    fn finds_even_cycles_by_search() {
        let k4 = complete_class(4);
        let witness = contains_cycle_of_length(&k4, 4, &Budget::unlimited())
            .unwrap()
            .expect("K4 contains C4");
        assert_eq!(witness.len(), 4);
        for i in 0..4 {
            assert!(k4.has_edge(witness[i], witness[(i + 1) % 4]));
        }
        // least witness in search order
        assert_eq!(witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn no_triangle_in_a_pentagon() {
        assert_eq!(
            contains_cycle_of_length(&cycle_class(5), 3, &Budget::unlimited()).unwrap(),
            None
        );
    }

    #[test]
    fn pentagon_c5_found_by_the_parity_shortcut() {
        let w = contains_cycle_of_length(&cycle_class(5), 5, &Budget::unlimited())
            .unwrap()
            .unwrap();
        assert_eq!(w.len(), 5);
        // lengths above the vertex count are out of range
        assert!(matches!(
            contains_cycle_of_length(&cycle_class(5), 7, &Budget::unlimited()),
            Err(GirthError::CycleLengthOutOfRange { r: 7, hi: 5 })
        ));
    }

    #[test]
    fn length_bounds_are_enforced() {
        let k4 = complete_class(4);
        assert!(matches!(
            contains_cycle_of_length(&k4, 2, &Budget::unlimited()),
            Err(GirthError::CycleLengthOutOfRange { r: 2, .. })
        ));
        let big = cycle_class(12);
        assert!(matches!(
            contains_cycle_of_length(&big, 10, &Budget::unlimited()),
            Err(GirthError::CycleLengthOutOfRange { r: 10, hi: 9 })
        ));
    }

    #[test]
    fn search_cap_applies_to_even_lengths_only_when_needed() {
        // odd length decided by parity search even above the cap
        let big_cycle = cycle_class(501);
        assert_eq!(
            contains_cycle_of_length(&big_cycle, 5, &Budget::unlimited()).unwrap(),
            None
        );
        // even length on the same class needs the exhaustive engine
        assert!(matches!(
            contains_cycle_of_length(&big_cycle, 6, &Budget::unlimited()),
            Err(GirthError::SearchCapExceeded { n: 501, .. })
        ));
    }

    #[test]
    fn exhausted_budget_is_an_error() {
        // a long even cycle has no C8, so the search would visit every root;
        // with a zero budget the periodic check must fire first
        let big = cycle_class(400);
        let tight = Budget::from_duration(Duration::from_nanos(0));
        assert!(matches!(
            contains_cycle_of_length(&big, 8, &tight),
            Err(GirthError::BudgetExceeded)
        ));
    }

    #[test]
    fn cr_free_over_colourings() {
        let one_colour_k5 = Colouring::from_fn(5, 1, |_, _| 1).unwrap();
        let check = is_cr_free(&one_colour_k5, 5, &Budget::unlimited()).unwrap();
        match check {
            CrCheck::Witness { colour, ref cycle } => {
                assert_eq!(colour, 1);
                assert_eq!(cycle.len(), 5);
            }
            CrCheck::Free => panic!("K5 contains C5"),
        }
        let one_colour_k4 = Colouring::from_fn(4, 1, |_, _| 1).unwrap();
        assert!(is_cr_free(&one_colour_k4, 5, &Budget::unlimited())
            .unwrap()
            .is_free());
        assert!(matches!(
            is_cr_free(&one_colour_k4, 4, &Budget::unlimited()),
            Err(GirthError::EvenCycleLength { r: 4 })
        ));
    }

    #[test]
    fn witness_rendering() {
        assert_eq!(render_witness(&[0, 1, 2]), "witness 0 1 2");
    }
}
