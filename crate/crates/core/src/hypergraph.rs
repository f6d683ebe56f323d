//! Community structure: hypergraphs over the items, defect covers, edge
//! colourings and generators for schools and seating grids.
//!
//! Vertices are 0-based internally. The JSON form (see [`crate::io`]) is
//! 1-based.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// A hypergraph on vertices `0..n`; every edge is a sorted, nonempty vertex list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Validates and normalizes `edges` (each edge is sorted). Duplicate edges
    /// and repeated vertices inside an edge are rejected.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidHypergraph("hypergraph needs at least one vertex".into()));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (j, mut e) in edges.into_iter().enumerate() {
            if e.is_empty() {
                return Err(Error::InvalidHypergraph(format!("edge {j} is empty")));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!("edge {j} repeats a vertex")));
            }
            if let Some(&v) = e.last().filter(|&&v| v >= n) {
                return Err(Error::InvalidHypergraph(format!("edge {j} has vertex {v} outside 0..{n}")));
            }
            normalized.push(e);
        }
        let mut sorted: Vec<&Vec<usize>> = normalized.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidHypergraph("duplicate edge".into()));
        }
        Ok(Hypergraph { n, edges: normalized })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, j: usize) -> &[usize] {
        &self.edges[j]
    }

    pub fn edge_bits(&self, j: usize) -> Bits {
        Bits::from_indices(self.n, self.edges[j].iter().copied())
    }

    pub fn k_max(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(k)` when every edge has exactly `k` vertices.
    pub fn uniform_size(&self) -> Option<usize> {
        let k = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == k).then_some(k)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// For every vertex, the indices of the edges containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (j, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(j);
            }
        }
        inc
    }

    pub fn spans(&self) -> bool {
        self.degrees().iter().all(|&d| d > 0)
    }

    pub fn is_disjoint(&self) -> bool {
        self.degrees().iter().all(|&d| d <= 1)
    }

    pub fn union_bits(&self, edge_ids: &[usize]) -> Bits {
        let mut u = Bits::zeros(self.n);
        for &j in edge_ids {
            for &v in &self.edges[j] {
                u.set(v, true);
            }
        }
        u
    }

    /// Closed neighbourhood of every edge: all vertices sharing some edge with
    /// a vertex of the edge, the edge itself included.
    pub fn edge_neighbourhoods(&self) -> Vec<Bits> {
        let inc = self.incidence();
        self.edges
            .iter()
            .map(|e| {
                let mut nb = Bits::zeros(self.n);
                for &v in e {
                    for &f in &inc[v] {
                        for &u in &self.edges[f] {
                            nb.set(u, true);
                        }
                    }
                }
                nb
            })
            .collect()
    }
}

/// Size of a smallest defect cover, or a labelled greedy bound above the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectCover {
    Exact(usize),
    AboveCap { greedy_upper_bound: usize },
}

impl DefectCover {
    /// True when a cover of at most `r` edges exists.
    pub fn within(&self, r: usize) -> bool {
        matches!(*self, DefectCover::Exact(c) if c <= r)
    }
}

/// Largest cap accepted by [`min_defect_cover`].
pub const MAX_COVER_CAP: usize = 4;

/// Minimum number of edges whose union contains `defectives`, searched
/// exactly up to `r_cap`.
pub fn min_defect_cover(h: &Hypergraph, defectives: &[usize], r_cap: usize) -> Result<DefectCover> {
    if r_cap > MAX_COVER_CAP {
        return Err(Error::InvalidParameter(format!("cover cap {r_cap} exceeds {MAX_COVER_CAP}")));
    }
    let inc = h.incidence();
    let mut target = Bits::zeros(h.n);
    for &v in defectives {
        if v >= h.n {
            return Err(Error::InvalidParameter(format!("vertex {v} outside 0..{}", h.n)));
        }
        if inc[v].is_empty() {
            return Err(Error::UncoverableVertex { vertex: v + 1 });
        }
        target.set(v, true);
    }
    let edge_bits: Vec<Bits> = (0..h.m()).map(|j| h.edge_bits(j)).collect();
    for depth in 0..=r_cap {
        if cover_search(&target, depth, &inc, &edge_bits) {
            return Ok(DefectCover::Exact(depth));
        }
    }
    Ok(DefectCover::AboveCap { greedy_upper_bound: greedy_cover(&target, &edge_bits) })
}

fn cover_search(rest: &Bits, depth: usize, inc: &[Vec<usize>], edge_bits: &[Bits]) -> bool {
    let Some(v) = rest.iter_ones().next() else {
        return true;
    };
    if depth == 0 {
        return false;
    }
    // some edge of any cover contains v
    inc[v].iter().any(|&j| {
        let mut next = rest.clone();
        next.and_not_assign(&edge_bits[j]);
        cover_search(&next, depth - 1, inc, edge_bits)
    })
}

fn greedy_cover(target: &Bits, edge_bits: &[Bits]) -> usize {
    let mut rest = target.clone();
    let mut used = 0;
    while !rest.is_zero() {
        let best = edge_bits.iter().max_by_key(|e| rest.and_count(e)).expect("coverable vertices lie in some edge");
        rest.and_not_assign(best);
        used += 1;
    }
    used
}

/// An assignment of a colour class to every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColouring {
    colour: Vec<usize>,
    classes: Vec<Vec<usize>>,
    strong: bool,
}

impl EdgeColouring {
    /// Builds a colouring from explicit classes of edge indices. Every edge of
    /// `0..m` must appear in exactly one class; empty classes are dropped.
    pub fn from_classes(m: usize, classes: Vec<Vec<usize>>, strong: bool) -> Result<Self> {
        let mut colour = vec![usize::MAX; m];
        let classes: Vec<Vec<usize>> = classes.into_iter().filter(|c| !c.is_empty()).collect();
        for (c, class) in classes.iter().enumerate() {
            for &e in class {
                if e >= m {
                    return Err(Error::InvalidParameter(format!("colour class names edge {e} of {m}")));
                }
                if colour[e] != usize::MAX {
                    return Err(Error::InvalidParameter(format!("edge {e} coloured twice")));
                }
                colour[e] = c;
            }
        }
        if let Some(e) = colour.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidParameter(format!("edge {e} has no colour")));
        }
        Ok(EdgeColouring { colour, classes, strong })
    }

    fn from_colours(colour: Vec<usize>, strong: bool) -> Self {
        let count = colour.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut classes = vec![Vec::new(); count];
        for (e, &c) in colour.iter().enumerate() {
            classes[c].push(e);
        }
        EdgeColouring { colour, classes, strong }
    }

    pub fn colour(&self, edge: usize) -> usize {
        self.colour[edge]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_colours(&self) -> usize {
        self.classes.len()
    }

    /// Whether the colouring was produced or declared as a strong colouring.
    pub fn is_flagged_strong(&self) -> bool {
        self.strong
    }

    /// No vertex lies on two edges of the same class.
    pub fn is_proper(&self, h: &Hypergraph) -> bool {
        self.colour.len() == h.m()
            && self.classes.iter().all(|class| {
                let mut seen = Bits::zeros(h.n());
                class.iter().all(|&e| {
                    let bits = h.edge_bits(e);
                    let clash = seen.intersects(&bits);
                    seen.or_assign(&bits);
                    !clash
                })
            })
    }

    /// Proper, and no two vertices on distinct same-coloured edges are adjacent.
    pub fn is_strong(&self, h: &Hypergraph) -> bool {
        if self.colour.len() != h.m() {
            return false;
        }
        let nb = h.edge_neighbourhoods();
        self.classes.iter().all(|class| {
            class.iter().enumerate().all(|(a, &e)| class[a + 1..].iter().all(|&f| !nb[e].intersects(&h.edge_bits(f))))
        })
    }
}

/// Proper colouring, edges in input order each taking the smallest free colour.
pub fn greedy_edge_colouring(h: &Hypergraph) -> EdgeColouring {
    let mut used: Vec<Bits> = Vec::new();
    let mut colour = Vec::with_capacity(h.m());
    for j in 0..h.m() {
        let bits = h.edge_bits(j);
        let c = match used.iter().position(|u| !u.intersects(&bits)) {
            Some(c) => c,
            None => {
                used.push(Bits::zeros(h.n()));
                used.len() - 1
            }
        };
        used[c].or_assign(&bits);
        colour.push(c);
    }
    EdgeColouring::from_colours(colour, false)
}

/// Strong colouring, edges in input order each taking the smallest colour
/// whose members are all non-adjacent to it.
pub fn greedy_strong_edge_colouring(h: &Hypergraph) -> EdgeColouring {
    let nb = h.edge_neighbourhoods();
    // per colour, the union of the closed neighbourhoods of its edges
    let mut blocked: Vec<Bits> = Vec::new();
    let mut colour = Vec::with_capacity(h.m());
    for (j, nbj) in nb.iter().enumerate() {
        let bits = h.edge_bits(j);
        let c = match blocked.iter().position(|b| !b.intersects(&bits)) {
            Some(c) => c,
            None => {
                blocked.push(Bits::zeros(h.n()));
                blocked.len() - 1
            }
        };
        blocked[c].or_assign(nbj);
        colour.push(c);
    }
    EdgeColouring::from_colours(colour, true)
}

/// `m` disjoint edges of `k` consecutive vertices.
pub fn gen_disjoint(m: usize, k: usize) -> Result<Hypergraph> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidParameter("disjoint hypergraph needs m >= 1 and k >= 1".into()));
    }
    let n = m.checked_mul(k).ok_or_else(|| Error::Overflow(format!("{m} x {k} vertices")))?;
    Hypergraph::new(n, (0..m).map(|j| (j * k..(j + 1) * k).collect()).collect())
}

const SCHOOL_RETRIES: usize = 1000;

/// A school with `c * k` students, `periods` time slots and `c` courses of
/// `k` students per slot.
///
/// Edges are listed period by period. The first period groups students
/// consecutively; every later period deals a seeded shuffle of the students
/// into courses. A shuffle that recreates an existing course is redrawn.
pub fn gen_school(periods: usize, courses: usize, size: usize, seed: u64) -> Result<Hypergraph> {
    if periods == 0 || courses == 0 || size == 0 {
        return Err(Error::InvalidParameter("school needs periods, courses and size >= 1".into()));
    }
    let n = courses.checked_mul(size).ok_or_else(|| Error::Overflow(format!("{courses} x {size} students")))?;
    if periods > 1 && courses == 1 {
        return Err(Error::InvalidParameter("a single course per period repeats across periods".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Vec<usize>> = (0..courses).map(|j| (j * size..(j + 1) * size).collect()).collect();
    let mut seen: std::collections::HashSet<Vec<usize>> = edges.iter().cloned().collect();
    let mut students: Vec<usize> = (0..n).collect();
    for _ in 1..periods {
        let mut attempt = 0;
        let period = loop {
            students.shuffle(&mut rng);
            let period: Vec<Vec<usize>> = students
                .chunks(size)
                .map(|c| {
                    let mut c = c.to_vec();
                    c.sort_unstable();
                    c
                })
                .collect();
            if period.iter().all(|c| !seen.contains(c)) {
                break period;
            }
            attempt += 1;
            if attempt == SCHOOL_RETRIES {
                return Err(Error::InvalidParameter(format!(
                    "could not draw {periods} periods of distinct courses of size {size}"
                )));
            }
        };
        seen.extend(period.iter().cloned());
        edges.extend(period);
    }
    Hypergraph::new(n, edges)
}

/// All contiguous `square x square` windows of a `side x side` grid.
///
/// Vertex `(row, col)` has index `row * side + col`; windows are listed in
/// row-major order of their top-left corner.
pub fn gen_grid(side: usize, square: usize) -> Result<Hypergraph> {
    if square == 0 || side < square {
        return Err(Error::InvalidParameter(format!("grid side {side} must be at least square {square} >= 1")));
    }
    let n = side.checked_mul(side).ok_or_else(|| Error::Overflow(format!("grid side {side}")))?;
    let span = side - square + 1;
    let mut edges = Vec::with_capacity(span * span);
    for r in 0..span {
        for c in 0..span {
            edges.push((0..square).flat_map(|dr| (0..square).map(move |dc| (r + dr) * side + c + dc)).collect());
        }
    }
    Hypergraph::new(n, edges)
}

/// Side and window size of a hypergraph produced by [`gen_grid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridShape {
    pub side: usize,
    pub square: usize,
}

impl GridShape {
    pub fn detect(h: &Hypergraph) -> Option<GridShape> {
        let side = (h.n() as f64).sqrt().round() as usize;
        let square = (h.k_max() as f64).sqrt().round() as usize;
        if side * side != h.n() || square * square != h.k_max() || square == 0 || square > side {
            return None;
        }
        let g = gen_grid(side, square).ok()?;
        (g.edges() == h.edges()).then_some(GridShape { side, square })
    }

    /// Number of windows along each axis.
    pub fn span(&self) -> usize {
        self.side - self.square + 1
    }
}

/// Colour of the 3x3 window with top-left corner `(r, c)`: the offset
/// `(r mod 3, c mod 3)` picks one of nine tilings and the parity of
/// `(r / 3, c / 3)` one of four colours inside it.
pub fn grid_colour(r: usize, c: usize) -> usize {
    ((r % 3) * 3 + c % 3) * 4 + ((r / 3) % 2) * 2 + (c / 3) % 2
}

/// The 36-class strong colouring of 3x3 windows by tiling offset and parity.
pub fn grid_strong_colouring(h: &Hypergraph) -> Result<EdgeColouring> {
    let shape = GridShape::detect(h).ok_or_else(|| Error::InvalidHypergraph("not a grid of windows".into()))?;
    if shape.square != 3 {
        return Err(Error::InvalidHypergraph(format!("grid colouring needs 3x3 windows, got {}", shape.square)));
    }
    let span = shape.span();
    let mut classes = vec![Vec::new(); 36];
    for r in 0..span {
        for c in 0..span {
            classes[grid_colour(r, c)].push(r * span + c);
        }
    }
    EdgeColouring::from_classes(h.m(), classes, true)
}
