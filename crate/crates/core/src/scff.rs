//! Structure-aware constructions.
//!
//! Every construction takes a [`Hypergraph`] describing the communities and
//! returns a [`StructuredDesign`]: a test matrix whose columns are the
//! hypergraph's vertices, together with the guarantee it carries. An SCFF of
//! cover bound `r` identifies every defective item whenever all defectives fit
//! in the union of `r` edges; an ECFF only names a defect cover.
//!
//! Two building blocks recur. [`expand_by_edges`] copies column `j` of an
//! ingredient under every vertex of edge `j`, and [`truncated_identity_blocks`]
//! replaces each 1 of an ingredient by the first `|e_j|` columns of `I_k`.
//! For disjoint edges of consecutive vertices these are exactly `A ⊗ R_k` and
//! `A ⊗ I_k`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binmat::BinaryMatrix;
use crate::cff::{self, best_cff, binomial, sperner_cff, sperner_cff_param, CffMatrix, Provenance};
use crate::error::{Error, Result};
use crate::gf::{self, Field};
use crate::hypergraph::{self, EdgeColouring, GridShape, Hypergraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignKind {
    Scff,
    Ecff,
}

impl std::fmt::Display for DesignKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DesignKind::Scff => "scff",
            DesignKind::Ecff => "ecff",
        })
    }
}

/// Which part of a construction a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    /// Rows that separate edges from each other.
    EdgeCode,
    /// Rows that separate the vertices inside an edge.
    ItemCode,
    /// Rows of a design with no such split (hypercube, polynomial).
    Whole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowOrigin {
    pub part: Part,
    /// Colour class the row was built for, when the construction colours edges.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<usize>,
}

impl RowOrigin {
    fn of(part: Part) -> Self {
        RowOrigin { part, class: None }
    }

    fn in_class(part: Part, class: usize) -> Self {
        RowOrigin { part, class: Some(class) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignProvenance {
    pub construction: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ingredients: Vec<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colours: Option<usize>,
}

impl DesignProvenance {
    fn new(construction: &str, ingredients: Vec<Provenance>) -> Self {
        DesignProvenance { construction: construction.into(), ingredients, colours: None }
    }
}

/// A test matrix over the vertices of a hypergraph and the guarantee it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredDesign {
    pub matrix: BinaryMatrix,
    pub hypergraph: Hypergraph,
    pub r: usize,
    pub kind: DesignKind,
    pub l_max: Option<usize>,
    pub provenance: DesignProvenance,
    pub row_origin: Vec<RowOrigin>,
}

impl StructuredDesign {
    fn new(
        matrix: BinaryMatrix,
        hypergraph: &Hypergraph,
        r: usize,
        kind: DesignKind,
        provenance: DesignProvenance,
        row_origin: Vec<RowOrigin>,
    ) -> Self {
        debug_assert_eq!(matrix.rows(), row_origin.len());
        debug_assert_eq!(matrix.cols(), hypergraph.n());
        StructuredDesign { matrix, hypergraph: hypergraph.clone(), r, kind, l_max: None, provenance, row_origin }
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// Splits every row heavier than `l_max` into consecutive pieces of at most
    /// `l_max` ones. The guarantee is kept: a row separating `i0` from a set
    /// still does so in the piece holding `i0`.
    pub fn with_row_cap(mut self, l_max: usize) -> Result<Self> {
        let sources = self.matrix.split_row_sources(l_max);
        self.matrix = self.matrix.split_rows(l_max)?;
        self.row_origin = sources.into_iter().map(|i| self.row_origin[i]).collect();
        self.l_max = Some(l_max);
        Ok(self)
    }
}

/// Column `j` of `a` copied under every vertex of `edges[j]`; other vertices
/// get a zero column.
pub fn expand_by_edges(a: &BinaryMatrix, edges: &[&[usize]], n: usize) -> Result<BinaryMatrix> {
    if a.cols() != edges.len() {
        return Err(Error::DimensionMismatch(format!("{} ingredient columns for {} edges", a.cols(), edges.len())));
    }
    let mut out = BinaryMatrix::zeros(a.rows(), n)?;
    for i in 0..a.rows() {
        for j in a.row_ones_positions(i) {
            for &v in edges[j] {
                out.set(i, v, true);
            }
        }
    }
    Ok(out)
}

/// Each 1 at `b[x, j]` becomes the first `|edges[j]|` columns of `I_k` placed in
/// rows `x*k .. x*k+k` under the vertices of `edges[j]` (in sorted order).
pub fn truncated_identity_blocks(b: &BinaryMatrix, edges: &[&[usize]], k: usize, n: usize) -> Result<BinaryMatrix> {
    if b.cols() != edges.len() {
        return Err(Error::DimensionMismatch(format!("{} ingredient columns for {} edges", b.cols(), edges.len())));
    }
    if let Some(e) = edges.iter().find(|e| e.len() > k) {
        return Err(Error::InvalidParameter(format!("edge of size {} exceeds block size {k}", e.len())));
    }
    let mut out = BinaryMatrix::zeros(b.rows() * k, n)?;
    for x in 0..b.rows() {
        for j in b.row_ones_positions(x) {
            for (y, &v) in edges[j].iter().enumerate() {
                out.set(x * k + y, v, true);
            }
        }
    }
    Ok(out)
}

fn edge_refs(h: &Hypergraph) -> Vec<&[usize]> {
    h.edges().iter().map(Vec::as_slice).collect()
}

fn require_partition(h: &Hypergraph) -> Result<()> {
    if !h.is_disjoint() {
        return Err(Error::InvalidHypergraph("edges overlap".into()));
    }
    if !h.spans() {
        return Err(Error::InvalidHypergraph("edges do not cover every vertex; add the complement edge".into()));
    }
    Ok(())
}

fn origins(part: Part, count: usize) -> Vec<RowOrigin> {
    vec![RowOrigin::of(part); count]
}

/// Sperner code on the edges of a partition plus an identity under each edge.
///
/// Returns the `(S,1)`-ECFF with `t1 = sperner_t(m)` rows and the `(S,1)`-SCFF
/// with `t1 + k_max` rows.
pub fn sperner_scff(h: &Hypergraph) -> Result<(StructuredDesign, StructuredDesign)> {
    require_partition(h)?;
    let a = sperner_cff(h.m())?;
    let d = h.k_max();
    let edges = edge_refs(h);
    let m1 = expand_by_edges(&a.matrix, &edges, h.n())?;
    let m2 = truncated_identity_blocks(&BinaryMatrix::row_ones(h.m())?, &edges, d, h.n())?;
    let prov = DesignProvenance::new("sperner", vec![a.provenance.clone()]);
    let ecff =
        StructuredDesign::new(m1.clone(), h, 1, DesignKind::Ecff, prov.clone(), origins(Part::EdgeCode, m1.rows()));
    let mut row_origin = origins(Part::EdgeCode, m1.rows());
    row_origin.extend(origins(Part::ItemCode, d));
    let scff = StructuredDesign::new(BinaryMatrix::vstack(&[&m1, &m2])?, h, 1, DesignKind::Scff, prov, row_origin);
    Ok((ecff, scff))
}

fn sperner_parts(h: &Hypergraph, t: usize, a: usize) -> Result<(CffMatrix, BinaryMatrix, BinaryMatrix)> {
    let edges = edge_refs(h);
    let ingredient = sperner_cff_param(t, a, h.m())?;
    let n1 = expand_by_edges(&ingredient.matrix, &edges, h.n())?;
    let n2 = truncated_identity_blocks(&BinaryMatrix::row_ones(h.m())?, &edges, h.k_max(), h.n())?;
    Ok((ingredient, n1, n2))
}

fn split_row_count(m: &BinaryMatrix, l_max: usize) -> usize {
    (0..m.rows()).map(|i| m.row_weight(i).div_ceil(l_max).max(1)).sum()
}

/// [`sperner_scff`] with every pool limited to `l_max` items.
///
/// When the unlimited design already respects the cap it is returned as is.
/// Otherwise the edge code uses `a`-subsets of a `t`-set, with `(t, a)` the
/// smallest pair (by `t`, then `a`) keeping every edge-code row within the
/// cap, and the identity rows are split. If a single edge is larger than the
/// cap no such pair exists; then the pair giving the fewest rows after
/// splitting every row is used.
pub fn sperner_scff_limited(h: &Hypergraph, l_max: usize) -> Result<StructuredDesign> {
    require_partition(h)?;
    if l_max == 0 {
        return Err(Error::InvalidParameter("pool size cap must be positive".into()));
    }
    let (m, d) = (h.m(), h.k_max());
    let t1 = cff::sperner_t(m);
    let a1 = (t1 / 2).max(1);
    let fits = |t: usize, a: usize| (d as u128).saturating_mul(binomial(t - 1, a - 1)) <= l_max as u128;
    if fits(t1, a1) && m <= l_max {
        let (_, mut scff) = sperner_scff(h)?;
        scff.l_max = Some(l_max);
        return Ok(scff);
    }
    let t_hi = m.min(127).max(t1);
    let pairs = (t1..=t_hi).flat_map(|t| (1..=t).map(move |a| (t, a))).filter(|&(t, a)| binomial(t, a) >= m as u128);

    let mut row_origin;
    let (ingredient, matrix) = if d <= l_max {
        let (t, a) = pairs.into_iter().find(|&(t, a)| fits(t, a)).expect("a = 1, t = m always fits when d <= l_max");
        let (ingredient, n1, n2) = sperner_parts(h, t, a)?;
        let n2_sources = n2.split_row_sources(l_max);
        let n2 = n2.split_rows(l_max)?;
        row_origin = origins(Part::EdgeCode, n1.rows());
        row_origin.extend(origins(Part::ItemCode, n2_sources.len()));
        (ingredient, BinaryMatrix::vstack(&[&n1, &n2])?)
    } else {
        let mut best: Option<(usize, usize, usize)> = None;
        for (t, a) in pairs {
            let (_, n1, n2) = sperner_parts(h, t, a)?;
            let rows = split_row_count(&n1, l_max) + split_row_count(&n2, l_max);
            if best.is_none_or(|(r, _, _)| rows < r) {
                best = Some((rows, t, a));
            }
        }
        let (_, t, a) = best.expect("a = 1, t = m is always admissible");
        let (ingredient, n1, n2) = sperner_parts(h, t, a)?;
        let whole = BinaryMatrix::vstack(&[&n1, &n2])?;
        row_origin = whole
            .split_row_sources(l_max)
            .into_iter()
            .map(|i| RowOrigin::of(if i < n1.rows() { Part::EdgeCode } else { Part::ItemCode }))
            .collect();
        (ingredient, whole.split_rows(l_max)?)
    };
    let prov = DesignProvenance::new("sperner_limited", vec![ingredient.provenance]);
    let mut design = StructuredDesign::new(matrix, h, 1, DesignKind::Scff, prov, row_origin);
    design.l_max = Some(l_max);
    Ok(design)
}

/// `A ⊗ R_k` (ECFF) and `A ⊗ I_k` (SCFF) over a uniform partition, with
/// `A = best_cff(r, m)`.
pub fn kron_scff(h: &Hypergraph, r: usize) -> Result<(StructuredDesign, StructuredDesign)> {
    kron_scff_with(h, &best_cff(r, h.m())?)
}

/// [`kron_scff`] with an explicit ingredient; the cover bound is `a.d`.
pub fn kron_scff_with(h: &Hypergraph, a: &CffMatrix) -> Result<(StructuredDesign, StructuredDesign)> {
    require_partition(h)?;
    let k = h
        .uniform_size()
        .ok_or_else(|| Error::InvalidHypergraph("edges differ in size; use the mixed construction".into()))?;
    let edges = edge_refs(h);
    let prov = DesignProvenance::new("kronecker", vec![a.provenance.clone()]);
    let ecff_m = expand_by_edges(&a.matrix, &edges, h.n())?;
    let scff_m = truncated_identity_blocks(&a.matrix, &edges, k, h.n())?;
    let ecff = StructuredDesign::new(ecff_m, h, a.d, DesignKind::Ecff, prov.clone(), origins(Part::EdgeCode, a.rows()));
    let scff = StructuredDesign::new(scff_m, h, a.d, DesignKind::Scff, prov, origins(Part::ItemCode, a.rows() * k));
    Ok((ecff, scff))
}

/// `A ⊗ R` stacked over `B ⊗ I_k` (truncated per edge), with
/// `A = best_cff(r, m)`, `B = best_cff(r-1, m)`, `k = k_max`.
pub fn kron_scff_mixed(h: &Hypergraph, r: usize) -> Result<StructuredDesign> {
    if r == 0 {
        return Err(Error::InvalidParameter("mixed construction needs r >= 1".into()));
    }
    kron_scff_mixed_with(h, &best_cff(r, h.m())?, &best_cff(r - 1, h.m())?)
}

/// [`kron_scff_mixed`] with explicit ingredients.
pub fn kron_scff_mixed_with(h: &Hypergraph, a: &CffMatrix, b: &CffMatrix) -> Result<StructuredDesign> {
    require_partition(h)?;
    if b.d + 1 != a.d {
        return Err(Error::InvalidParameter(format!("ingredient strengths {} and {} must differ by one", a.d, b.d)));
    }
    let edges = edge_refs(h);
    let k = h.k_max();
    let top = expand_by_edges(&a.matrix, &edges, h.n())?;
    let bottom = truncated_identity_blocks(&b.matrix, &edges, k, h.n())?;
    let mut row_origin = origins(Part::EdgeCode, top.rows());
    row_origin.extend(origins(Part::ItemCode, bottom.rows()));
    Ok(StructuredDesign::new(
        BinaryMatrix::vstack(&[&top, &bottom])?,
        h,
        a.d,
        DesignKind::Scff,
        DesignProvenance::new("kronecker_mixed", vec![a.provenance.clone(), b.provenance.clone()]),
        row_origin,
    ))
}

/// Axis-`v` lines of the `[n]^k` lattice: all points agreeing outside
/// coordinate `v`. Vertices are mixed-radix indices (last coordinate fastest).
pub fn hypercube_lines(n: usize, k: usize, v: usize) -> Result<Hypergraph> {
    hypercube_line_edges(n, k, &[v])
}

/// The union of the lines along every axis.
pub fn hypercube_all_lines(n: usize, k: usize) -> Result<Hypergraph> {
    hypercube_line_edges(n, k, &(0..k).collect::<Vec<_>>())
}

fn hypercube_line_edges(n: usize, k: usize, axes: &[usize]) -> Result<Hypergraph> {
    if n < 2 || k < 1 {
        return Err(Error::InvalidParameter(format!("hypercube [{n}]^{k} needs n >= 2 and k >= 1")));
    }
    if let Some(&v) = axes.iter().find(|&&v| v >= k) {
        return Err(Error::InvalidParameter(format!("axis {v} out of range for dimension {k}")));
    }
    let dims = vec![n; k];
    let total = n.checked_pow(k as u32).ok_or_else(|| Error::Overflow(format!("[{n}]^{k}")))?;
    let mut edges = Vec::new();
    for &v in axes {
        let rest = vec![n; k - 1];
        for fixed in 0..total / n {
            let mut x = cff::mixed_radix_tuple(&rest, fixed);
            x.insert(v, 0);
            edges.push(
                (0..n)
                    .map(|a| {
                        x[v] = a;
                        cff::mixed_radix_index(&dims, &x)
                    })
                    .collect(),
            );
        }
    }
    Hypergraph::new(total, edges)
}

/// Designs carried by the `[n]^k` hypercube matrix.
#[derive(Clone, Debug)]
pub struct HypercubeDesigns {
    /// `(S_v, 1)`-SCFF for the lines along each axis `v`.
    pub axes: Vec<StructuredDesign>,
    /// `(S, 1)`-SCFF for all lines together.
    pub all_lines: StructuredDesign,
    /// For `k = 2`, the `(S_v, n)`-ECFF for each axis.
    pub line_ecff: Vec<StructuredDesign>,
}

pub fn hypercube_scff(n: usize, k: usize) -> Result<HypercubeDesigns> {
    if k < 2 {
        return Err(Error::InvalidParameter("structured hypercube designs need k >= 2".into()));
    }
    let c = cff::hypercube_cff(&vec![n; k])?;
    let prov = DesignProvenance::new("hypercube", vec![c.provenance.clone()]);
    let whole = origins(Part::Whole, c.rows());
    let design =
        |h: &Hypergraph, r, kind| StructuredDesign::new(c.matrix.clone(), h, r, kind, prov.clone(), whole.clone());
    let mut axes = Vec::with_capacity(k);
    let mut line_ecff = Vec::new();
    for v in 0..k {
        let h = hypercube_lines(n, k, v)?;
        axes.push(design(&h, 1, DesignKind::Scff));
        if k == 2 {
            line_ecff.push(design(&h, n, DesignKind::Ecff));
        }
    }
    let all_lines = design(&hypercube_all_lines(n, k)?, 1, DesignKind::Scff);
    Ok(HypercubeDesigns { axes, all_lines, line_ecff })
}

/// Evaluation classes: polynomials of degree at most `k` grouped by their
/// values at the first `k` field elements. Edge `(i_1..i_k)` has mixed-radix
/// index with `i_1` slowest.
pub fn poly_classes(f: &Field, k: usize) -> Result<Hypergraph> {
    let n = gf::poly_count(f.order(), k)?;
    if n > gf::MAX_POLYS {
        return Err(Error::Overflow(format!("{n} polynomials")));
    }
    let q = f.order() as usize;
    let classes = q.pow(k as u32);
    let mut edges = vec![Vec::with_capacity(q); classes];
    for j in 0..n {
        let p = gf::poly_at(f, k, j);
        let idx = (0..k).fold(0, |acc, x| acc * q + p.eval(f, x as u32) as usize);
        edges[idx].push(j);
    }
    Hypergraph::new(n, edges)
}

/// Designs carried by a restricted polynomial matrix.
#[derive(Clone, Debug)]
pub struct PolyDesigns {
    /// `(S, 1)`-SCFF over the evaluation classes.
    pub scff: StructuredDesign,
    /// For `k = 1`, the same matrix as an `(S, q)`-ECFF.
    pub ecff: Option<StructuredDesign>,
    /// The matrix as a plain CFF of strength `max(d, 1)`.
    pub cff: CffMatrix,
}

/// The first `(d'k+1)` row blocks of the polynomial construction over the
/// evaluation classes, `d' = max(d, 1)` (`d'` is 1 when `d` is omitted).
pub fn poly_scff(f: &Field, k: usize, d: Option<usize>) -> Result<PolyDesigns> {
    let q = f.order() as usize;
    if k == 0 || q < k + 1 {
        return Err(Error::InvalidParameter(format!("polynomial design needs 1 <= k < q, got k = {k}, q = {q}")));
    }
    let d_prime = d.unwrap_or(1).max(1);
    let h = poly_classes(f, k)?;
    let c = cff::poly_cff_restricted_cols(f, k, d_prime, h.n())?;
    let prov = DesignProvenance::new("polynomial", vec![c.provenance.clone()]);
    let whole = origins(Part::Whole, c.rows());
    let scff = StructuredDesign::new(c.matrix.clone(), &h, 1, DesignKind::Scff, prov.clone(), whole.clone());
    let ecff = (k == 1).then(|| StructuredDesign::new(c.matrix.clone(), &h, q, DesignKind::Ecff, prov, whole));
    Ok(PolyDesigns { scff, ecff, cff: c })
}

/// Edge code and item code for one colour class of an `r = 1` design.
fn class_parts_r1(h: &Hypergraph, class: &[usize]) -> Result<(BinaryMatrix, BinaryMatrix, Provenance)> {
    let mut members: Vec<&[usize]> = class.iter().map(|&j| h.edge(j)).collect();
    let covered = h.union_bits(class);
    let complement: Vec<usize> = (0..h.n()).filter(|&v| !covered.get(v)).collect();
    let k = members.iter().map(|e| e.len()).max().unwrap_or(0);
    let n_part = truncated_identity_blocks(&BinaryMatrix::row_ones(members.len())?, &members, k, h.n())?;
    if !complement.is_empty() {
        members.push(&complement);
    }
    let a = sperner_cff(members.len())?;
    Ok((expand_by_edges(&a.matrix, &members, h.n())?, n_part, a.provenance))
}

fn stack_classes(
    parts: Vec<(BinaryMatrix, BinaryMatrix)>,
) -> Result<(BinaryMatrix, Vec<RowOrigin>, BinaryMatrix, Vec<RowOrigin>)> {
    let mut m_origin = Vec::new();
    let mut n_origin = Vec::new();
    for (i, (m, n)) in parts.iter().enumerate() {
        m_origin.extend(std::iter::repeat_n(RowOrigin::in_class(Part::EdgeCode, i), m.rows()));
        n_origin.extend(std::iter::repeat_n(RowOrigin::in_class(Part::ItemCode, i), n.rows()));
    }
    let ms: Vec<&BinaryMatrix> = parts.iter().map(|p| &p.0).collect();
    let ns: Vec<&BinaryMatrix> = parts.iter().map(|p| &p.1).collect();
    Ok((BinaryMatrix::vstack(&ms)?, m_origin, BinaryMatrix::vstack(&ns)?, n_origin))
}

/// Cover bound 1 for any hypergraph, one Sperner edge code and one identity
/// item code per class of the greedy proper colouring.
pub fn colouring_scff_r1(h: &Hypergraph) -> Result<(StructuredDesign, StructuredDesign)> {
    colouring_scff_r1_with(h, &hypergraph::greedy_edge_colouring(h))
}

/// [`colouring_scff_r1`] with a supplied proper colouring. Rows are all edge
/// codes (class order) followed by all item codes (class order).
pub fn colouring_scff_r1_with(
    h: &Hypergraph,
    colouring: &EdgeColouring,
) -> Result<(StructuredDesign, StructuredDesign)> {
    if !colouring.is_proper(h) {
        return Err(Error::InvalidParameter("colouring is not proper".into()));
    }
    let mut parts = Vec::with_capacity(colouring.num_colours());
    let mut ingredients = Vec::with_capacity(colouring.num_colours());
    for class in colouring.classes() {
        let (m, n, p) = class_parts_r1(h, class)?;
        parts.push((m, n));
        ingredients.push(p);
    }
    let (m, m_origin, n, n_origin) = stack_classes(parts)?;
    let mut prov = DesignProvenance::new("colouring", ingredients);
    prov.colours = Some(colouring.num_colours());
    let ecff = StructuredDesign::new(m.clone(), h, 1, DesignKind::Ecff, prov.clone(), m_origin.clone());
    let mut row_origin = m_origin;
    row_origin.extend(n_origin);
    let scff = StructuredDesign::new(BinaryMatrix::vstack(&[&m, &n])?, h, 1, DesignKind::Scff, prov, row_origin);
    Ok((ecff, scff))
}

/// Edge code from an `r`-CFF and item code from an `(r-1)`-CFF for one strong
/// colour class.
fn class_parts_r(h: &Hypergraph, class: &[usize], r: usize) -> Result<(BinaryMatrix, BinaryMatrix, [Provenance; 2])> {
    let members: Vec<&[usize]> = class.iter().map(|&j| h.edge(j)).collect();
    let k = members.iter().map(|e| e.len()).max().unwrap_or(0);
    let a = best_cff(r, members.len())?;
    let b = best_cff(r - 1, members.len())?;
    Ok((
        expand_by_edges(&a.matrix, &members, h.n())?,
        truncated_identity_blocks(&b.matrix, &members, k, h.n())?,
        [a.provenance, b.provenance],
    ))
}

fn require_strong(h: &Hypergraph, colouring: &EdgeColouring) -> Result<()> {
    if !h.spans() {
        return Err(Error::InvalidHypergraph("every vertex must lie in some edge".into()));
    }
    if !colouring.is_strong(h) {
        return Err(Error::InvalidParameter("colouring is not strong".into()));
    }
    Ok(())
}

/// Cover bound `r` for any spanning hypergraph via the greedy strong
/// colouring. For `r < 2` this is the SCFF of [`colouring_scff_r1`].
pub fn colouring_scff_r(h: &Hypergraph, r: usize) -> Result<StructuredDesign> {
    if r < 2 {
        return Ok(colouring_scff_r1(h)?.1);
    }
    colouring_scff_r_with(h, r, &hypergraph::greedy_strong_edge_colouring(h))
}

/// [`colouring_scff_r`] with a supplied strong colouring.
pub fn colouring_scff_r_with(h: &Hypergraph, r: usize, colouring: &EdgeColouring) -> Result<StructuredDesign> {
    if r < 2 {
        return Ok(colouring_scff_r1_with(h, colouring)?.1);
    }
    require_strong(h, colouring)?;
    let mut parts = Vec::with_capacity(colouring.num_colours());
    let mut ingredients = Vec::new();
    for class in colouring.classes() {
        let (m, n, p) = class_parts_r(h, class, r)?;
        parts.push((m, n));
        ingredients.extend(p);
    }
    let (m, mut row_origin, n, n_origin) = stack_classes(parts)?;
    row_origin.extend(n_origin);
    let mut prov = DesignProvenance::new("strong_colouring", ingredients);
    prov.colours = Some(colouring.num_colours());
    Ok(StructuredDesign::new(BinaryMatrix::vstack(&[&m, &n])?, h, r, DesignKind::Scff, prov, row_origin))
}

/// What [`design_for`] should build.
#[derive(Clone, Copy, Debug)]
pub struct DesignRequest<'a> {
    pub r: usize,
    pub kind: DesignKind,
    pub l_max: Option<usize>,
    /// Overrides the greedy colouring (proper for `r = 1`, strong otherwise).
    pub colouring: Option<&'a EdgeColouring>,
}

/// Picks a construction from the shape of `h`.
///
/// Partitions use the Sperner design for `r = 1` (pool-limited when `l_max`
/// is set) and the Kronecker designs above. Grids of 3x3 windows with
/// `r = 2` use [`grid_scff`]. Everything else goes through the colouring
/// designs. Any other pool cap is applied by splitting rows.
pub fn design_for(h: &Hypergraph, req: DesignRequest<'_>) -> Result<StructuredDesign> {
    let DesignRequest { r, kind, l_max, colouring } = req;
    if r == 0 {
        return Err(Error::InvalidParameter("cover bound r must be at least 1".into()));
    }
    let no_ecff =
        || Error::InvalidParameter(format!("no edge-identifying construction for r = {r} on this hypergraph"));
    let partition = h.is_disjoint() && h.spans();
    let grid = GridShape::detect(h).is_some_and(|g| g.square == 3 && g.side % 3 == 0);
    let design = match (colouring, kind) {
        (Some(c), DesignKind::Ecff) if r == 1 => colouring_scff_r1_with(h, c)?.0,
        (Some(_), DesignKind::Ecff) => return Err(no_ecff()),
        (Some(c), DesignKind::Scff) => colouring_scff_r_with(h, r, c)?,
        (None, kind) if partition && r == 1 => match (kind, l_max) {
            (DesignKind::Scff, Some(l)) => return sperner_scff_limited(h, l),
            (DesignKind::Scff, None) => sperner_scff(h)?.1,
            (DesignKind::Ecff, _) => sperner_scff(h)?.0,
        },
        (None, kind) if partition => match (kind, h.uniform_size()) {
            (DesignKind::Scff, Some(_)) => kron_scff(h, r)?.1,
            (DesignKind::Scff, None) => kron_scff_mixed(h, r)?,
            (DesignKind::Ecff, Some(_)) => kron_scff(h, r)?.0,
            (DesignKind::Ecff, None) => return Err(no_ecff()),
        },
        (None, DesignKind::Scff) if grid && r == 2 => grid_scff(h)?,
        (None, DesignKind::Ecff) if r == 1 => colouring_scff_r1(h)?.0,
        (None, DesignKind::Ecff) => return Err(no_ecff()),
        (None, DesignKind::Scff) => colouring_scff_r(h, r)?,
    };
    match l_max {
        Some(l) => design.with_row_cap(l),
        None => Ok(design),
    }
}

/// The aligned 3x3 blocks of a grid, each listed in row-major order.
fn aligned_blocks(side: usize) -> Vec<Vec<usize>> {
    let per = side / 3;
    (0..per * per)
        .map(|b| {
            let (br, bc) = (b / per * 3, b % per * 3);
            (0..9).map(|p| (br + p / 3) * side + bc + p % 3).collect()
        })
        .collect()
}

/// Ways two windows can hide an item from every window through it, as block
/// constraints on the item code.
#[derive(Default)]
struct BlockThreats {
    /// `(b0, b1)`: one window avoiding an item of `b0` meets every window
    /// through it and holds the vertex of `b1` at the item's position.
    pairs: Vec<(usize, usize)>,
    /// `(b0, b1, b2)`: two such windows are needed together.
    triples: Vec<(usize, usize, usize)>,
}

fn block_threats(side: usize) -> BlockThreats {
    let per = side / 3;
    let last = side - 3;
    let mut out = BlockThreats::default();
    for r0 in 0..side {
        for c0 in 0..side {
            let b0 = r0 / 3 * per + c0 / 3;
            let windows: Vec<(usize, usize)> = (r0.saturating_sub(2)..=r0.min(last))
                .flat_map(|a| (c0.saturating_sub(2)..=c0.min(last)).map(move |b| (a, b)))
                .collect();
            // nearby windows avoiding the item, with the set of windows through it they meet
            let mut near: Vec<(u16, usize)> = Vec::new();
            for a in r0.saturating_sub(4)..=(r0 + 2).min(last) {
                for b in c0.saturating_sub(4)..=(c0 + 2).min(last) {
                    if (a..a + 3).contains(&r0) && (b..b + 3).contains(&c0) {
                        continue;
                    }
                    let mut hit = 0u16;
                    for (w, &(wa, wb)) in windows.iter().enumerate() {
                        if wa.abs_diff(a) <= 2 && wb.abs_diff(b) <= 2 {
                            hit |= 1 << w;
                        }
                    }
                    if hit != 0 {
                        let rho = a + (r0 + 3 - a % 3) % 3;
                        let gamma = b + (c0 + 3 - b % 3) % 3;
                        near.push((hit, rho / 3 * per + gamma / 3));
                    }
                }
            }
            let full = (1u16 << windows.len()) - 1;
            for (i, &(h1, b1)) in near.iter().enumerate() {
                if h1 == full {
                    out.pairs.push((b0, b1));
                    continue;
                }
                for &(h2, b2) in &near[i + 1..] {
                    if h2 != full && h1 | h2 == full && b1 != b2 {
                        out.triples.push((b0, b1.min(b2), b1.max(b2)));
                    }
                }
            }
        }
    }
    out.pairs.sort_unstable();
    out.pairs.dedup();
    out.triples.sort_unstable();
    out.triples.dedup();
    out
}

/// Searches for distinct `a`-subsets of `[t]`, one per block, meeting the
/// [`BlockThreats`]: no threatening triple covers its first block, and for a
/// threatening pair `(b0, b1)` the part of `b0` outside `b1` lies in no other
/// block.
///
/// Simulated annealing over single-block replacements, seeded; half of the
/// moves go to blocks of currently violated constraints. The cost counts
/// violated triples plus, per pair, the other blocks containing its residue;
/// `covering[mask]` keeps the number of chosen subsets containing `mask`.
fn anneal_block_sets(count: usize, t: usize, a: usize, threats: &BlockThreats, seed: u64) -> Option<Vec<u32>> {
    let full: u32 = (1 << t) - 1;
    let pool: Vec<u32> = (0..=full).filter(|m| m.count_ones() as usize == a).collect();
    if pool.len() < count {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = pool.clone();
    shuffled.shuffle(&mut rng);
    let mut sets: Vec<u32> = shuffled[..count].to_vec();
    let mut in_use = vec![false; 1 << t];
    for &s in &sets {
        in_use[s as usize] = true;
    }
    // start border pairs on disjoint subsets, whose residues nothing else contains
    for &(x, y) in &threats.pairs {
        if sets[x] & sets[y] == 0 {
            continue;
        }
        if let Some(&c) = shuffled.iter().find(|&&c| c & sets[y] == 0 && !in_use[c as usize]) {
            in_use[sets[x] as usize] = false;
            in_use[c as usize] = true;
            sets[x] = c;
        }
    }
    let mut covering = vec![0i64; 1 << t];
    let adjust = |covering: &mut [i64], s: u32, by: i64| {
        let mut sub = s;
        loop {
            covering[sub as usize] += by;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & s;
        }
    };
    for &s in &sets {
        adjust(&mut covering, s, 1);
    }
    let mut triples_of: Vec<Vec<[usize; 3]>> = vec![Vec::new(); count];
    for &(x, y, z) in &threats.triples {
        for v in [x, y, z] {
            triples_of[v].push([x, y, z]);
        }
    }
    let mut pairs_of: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count];
    for &(x, y) in &threats.pairs {
        pairs_of[x].push((x, y));
        pairs_of[y].push((x, y));
    }
    let covered = |sets: &[u32], [x, y, z]: [usize; 3]| sets[x] & !(sets[y] | sets[z]) == 0;
    let mut cost: i64 = threats.triples.iter().filter(|&&(x, y, z)| covered(&sets, [x, y, z])).count() as i64
        + threats.pairs.iter().map(|&(x, y)| covering[(sets[x] & !sets[y]) as usize] - 1).sum::<i64>();
    let mut hot: Vec<usize> = Vec::new();
    for it in 0..ANNEAL_STEPS {
        if cost == 0 {
            return Some(sets);
        }
        if it % 4096 == 0 {
            hot.clear();
            for &(x, y, z) in &threats.triples {
                if covered(&sets, [x, y, z]) {
                    hot.extend([x, y, z]);
                }
            }
            for &(x, y) in &threats.pairs {
                let d = sets[x] & !sets[y];
                if covering[d as usize] > 1 {
                    hot.extend([x, y]);
                    hot.extend((0..count).filter(|&z| z != x && d & !sets[z] == 0));
                }
            }
        }
        let temp = ANNEAL_START_TEMP * (1.0 - it as f64 / ANNEAL_STEPS as f64) + 0.02;
        let b = if !hot.is_empty() && rng.gen_bool(0.5) {
            hot[rng.gen_range(0..hot.len())]
        } else {
            rng.gen_range(0..count)
        };
        let cand = pool[rng.gen_range(0..pool.len())];
        if in_use[cand as usize] {
            continue;
        }
        let old = sets[b];
        let mut delta = 0i64;
        for &tr in &triples_of[b] {
            delta -= covered(&sets, tr) as i64;
        }
        for &(x, y) in &pairs_of[b] {
            delta -= covering[(sets[x] & !sets[y]) as usize];
        }
        for &(x, y) in &threats.pairs {
            if x != b && y != b {
                let d = sets[x] & !sets[y];
                delta += (d & !cand == 0) as i64 - (d & !old == 0) as i64;
            }
        }
        sets[b] = cand;
        adjust(&mut covering, old, -1);
        adjust(&mut covering, cand, 1);
        for &tr in &triples_of[b] {
            delta += covered(&sets, tr) as i64;
        }
        for &(x, y) in &pairs_of[b] {
            delta += covering[(sets[x] & !sets[y]) as usize];
        }
        if delta <= 0 || rng.gen_bool((-(delta as f64) / temp).exp()) {
            cost += delta;
            in_use[old as usize] = false;
            in_use[cand as usize] = true;
        } else {
            sets[b] = old;
            adjust(&mut covering, cand, -1);
            adjust(&mut covering, old, 1);
        }
    }
    (cost == 0).then_some(sets)
}

const ANNEAL_STEPS: u64 = 4_000_000;
const ANNEAL_START_TEMP: f64 = 0.3;
const BLOCK_CODE_SEEDS: u64 = 8;
const BLOCK_CODE_MAX_T: usize = 20;

/// A 1-CFF over the aligned blocks of a `per x per` block grid that also
/// meets the grid's [`BlockThreats`]. Starts at the smallest ground set whose
/// middle layer holds every block and grows it until the search succeeds.
fn block_code(per: usize) -> Result<CffMatrix> {
    let count = per * per;
    let threats = block_threats(per * 3);
    let t0 = cff::sperner_t(count);
    for t in t0..=BLOCK_CODE_MAX_T.max(t0) {
        let half = (t / 2).max(1);
        for a in [half - 1, half] {
            if a == 0 || binomial(t, a) < count as u128 {
                continue;
            }
            for seed in 0..BLOCK_CODE_SEEDS {
                if let Some(sets) = anneal_block_sets(count, t, a, &threats, seed) {
                    let matrix = BinaryMatrix::from_fn(t, count, |i, j| sets[j] >> i & 1 == 1)?;
                    return Ok(CffMatrix { matrix, d: 1, provenance: Provenance::GridBlocks { t, a } });
                }
            }
        }
    }
    Err(Error::InvalidParameter(format!("no block code found for {per}x{per} blocks")))
}

/// Cover bound 2 on a grid of 3x3 windows whose side is a multiple of 3.
///
/// The edge codes are those of [`colouring_scff_r`] under the 36-class tiling
/// colouring. The item codes of all classes are replaced by one shared
/// `A ⊗ I_9`, `A` a 1-CFF of constant weight over the aligned blocks, where a
/// vertex sits in its block's identity at position `(row mod 3, col mod 3)`.
/// On a 66x66 grid this gives `36 * 25 + 9 * 12 = 1008` rows.
///
/// An arbitrary 1-CFF is not enough. Two windows put at most two other
/// vertices of any given position near an item, in neighbouring blocks, and
/// two neighbours may cover a block (three consecutive colex subsets do).
/// Along the border a single window can hide an item from every window
/// through it, and then the second window may be anywhere. The block columns
/// are searched to rule out both; see [`block_threats`].
pub fn grid_scff(h: &Hypergraph) -> Result<StructuredDesign> {
    let shape = GridShape::detect(h).ok_or_else(|| Error::InvalidHypergraph("not a grid of windows".into()))?;
    if shape.square != 3 || shape.side % 3 != 0 {
        return Err(Error::InvalidHypergraph(format!(
            "grid design needs 3x3 windows and a side divisible by 3, got side {} windows {}",
            shape.side, shape.square
        )));
    }
    let colouring = hypergraph::grid_strong_colouring(h)?;
    let mut edge_codes = Vec::with_capacity(colouring.num_colours());
    let mut ingredients = Vec::new();
    let mut row_origin = Vec::new();
    for (i, class) in colouring.classes().iter().enumerate() {
        let members: Vec<&[usize]> = class.iter().map(|&j| h.edge(j)).collect();
        let a = best_cff(2, members.len())?;
        row_origin.extend(std::iter::repeat_n(RowOrigin::in_class(Part::EdgeCode, i), a.rows()));
        edge_codes.push(expand_by_edges(&a.matrix, &members, h.n())?);
        ingredients.push(a.provenance);
    }
    let blocks = aligned_blocks(shape.side);
    let block_refs: Vec<&[usize]> = blocks.iter().map(Vec::as_slice).collect();
    let a = block_code(shape.side / 3)?;
    let item_code = truncated_identity_blocks(&a.matrix, &block_refs, 9, h.n())?;
    row_origin.extend(origins(Part::ItemCode, item_code.rows()));
    ingredients.push(a.provenance);
    let mut parts: Vec<&BinaryMatrix> = edge_codes.iter().collect();
    parts.push(&item_code);
    let mut prov = DesignProvenance::new("grid", ingredients);
    prov.colours = Some(colouring.num_colours());
    Ok(StructuredDesign::new(BinaryMatrix::vstack(&parts)?, h, 2, DesignKind::Scff, prov, row_origin))
}
