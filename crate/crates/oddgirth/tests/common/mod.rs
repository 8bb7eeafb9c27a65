//! Shared test helpers: an enumerate-everything cycle oracle that is
//! deliberately independent of the parity-search engine under test.

use oddgirth::{ColourClass, Vertex};

/// All simple cycles of `g`, each listed once: the least vertex first and
/// the smaller of the two neighbours second.
pub fn enumerate_cycles(g: &ColourClass) -> Vec<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut cycles = Vec::new();
    let mut visited = vec![false; n];
    let mut path: Vec<Vertex> = Vec::new();
    for root in 0..n as Vertex {
        path.push(root);
        visited[root as usize] = true;
        extend(g, root, &mut path, &mut visited, &mut cycles);
        visited[root as usize] = false;
        path.pop();
    }
    cycles
}

fn extend(
    g: &ColourClass,
    root: Vertex,
    path: &mut Vec<Vertex>,
    visited: &mut Vec<bool>,
    cycles: &mut Vec<Vec<Vertex>>,
) {
    let u = *path.last().unwrap();
    for &w in g.neighbours(u) {
        if w == root && path.len() >= 3 && path[1] < u {
            cycles.push(path.clone());
        }
        if w <= root || visited[w as usize] {
            continue;
        }
        path.push(w);
        visited[w as usize] = true;
        extend(g, root, path, visited, cycles);
        visited[w as usize] = false;
        path.pop();
    }
}

/// Odd girth by exhaustive enumeration.
pub fn naive_shortest_odd_cycle(g: &ColourClass) -> Option<usize> {
    enumerate_cycles(g)
        .iter()
        .map(Vec::len)
        .filter(|len| len % 2 == 1)
        .min()
}

/// The Petersen graph: outer 5-cycle, inner pentagram, spokes.
pub fn petersen() -> ColourClass {
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for i in 0..5u32 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    ColourClass::from_edges(1, 10, &edges).unwrap()
}

/// Removes one vertex from a class, keeping ids (the removed vertex stays
/// as an isolated id so part indices elsewhere are unaffected).
pub fn delete_vertex(g: &ColourClass, v: Vertex) -> ColourClass {
    let edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .filter(|&(x, y)| x != v && y != v)
        .collect();
    ColourClass::from_edges(g.colour(), g.vertex_count(), &edges).unwrap()
}
