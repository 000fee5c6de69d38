//! Finite cell posets with deterministically labeled 1-skeletons.
//!
//! Cells are stored as poset elements carrying a height and the set of cells
//! they cover. Height-1 cells additionally carry a generator label and an
//! orientation (ordered endpoint pair); a letter with negative sign traverses
//! against the orientation. Everything else in the crate (relators, covers,
//! metrics, constructions) is built on top of this module.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num::bigint::BigInt;
use num::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::smith_normal_form;
use crate::word::{Letter, Sign, Word};

/// Opaque cell identifier; dense indices into the complex's cell table.
pub type CellId = usize;

/// Label data of a height-1 cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub gen: usize,
    pub from: CellId,
    pub to: CellId,
}

/// One poset element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub height: u32,
    /// Cells covered by this one (immediate predecessors), sorted, no dups.
    pub covers: Vec<CellId>,
    /// Present exactly on height-1 cells.
    pub label: Option<EdgeLabel>,
}

/// A finite labeled cell poset. Immutable once constructed; all operations
/// are pure, so values can be shared freely across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledComplex {
    cells: Vec<Cell>,
    out_edges: BTreeMap<(CellId, usize), Vec<CellId>>,
    in_edges: BTreeMap<(CellId, usize), Vec<CellId>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub edge: CellId,
    pub forward: bool,
}

/// An edge path in a complex; consecutive steps share endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathInComplex {
    pub start: CellId,
    pub steps: Vec<PathStep>,
    pub end: CellId,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("no edge matches the letter at position {position}")]
pub struct TraceFailure {
    pub position: usize,
}

impl LabeledComplex {
    /// Builds a complex from raw cells. Structural soundness (heights, labels,
    /// determinism, circle conditions) is the job of [`LabeledComplex::validate`];
    /// only index sanity is enforced here.
    pub fn from_cells(cells: Vec<Cell>) -> LabeledComplex {
        let n = cells.len();
        for cell in &cells {
            for &c in &cell.covers {
                assert!(c < n, "cover index out of range");
            }
            if let Some(l) = cell.label {
                assert!(l.from < n && l.to < n, "label endpoint out of range");
            }
        }
        let mut complex = LabeledComplex { cells, out_edges: BTreeMap::new(), in_edges: BTreeMap::new() };
        complex.rebuild_adjacency();
        complex
    }

    fn rebuild_adjacency(&mut self) {
        self.out_edges.clear();
        self.in_edges.clear();
        for (id, cell) in self.cells.iter().enumerate() {
            if let Some(l) = cell.label {
                self.out_edges.entry((l.from, l.gen)).or_default().push(id);
                self.in_edges.entry((l.to, l.gen)).or_default().push(id);
            }
        }
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id]
    }

    pub fn cells(&self) -> impl Iterator<Item = (CellId, &Cell)> {
        self.cells.iter().enumerate()
    }

    pub fn height(&self, id: CellId) -> u32 {
        self.cells[id].height
    }

    pub fn max_height(&self) -> u32 {
        self.cells.iter().map(|c| c.height).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().enumerate().filter(|(_, c)| c.height == 0).map(|(i, _)| i)
    }

    pub fn edges(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().enumerate().filter(|(_, c)| c.height == 1).map(|(i, _)| i)
    }

    pub fn cells_of_height(&self, h: u32) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().enumerate().filter(move |(_, c)| c.height == h).map(|(i, _)| i)
    }

    pub fn edge_label(&self, e: CellId) -> EdgeLabel {
        self.cells[e].label.expect("cell is not an edge")
    }

    /// The unique outgoing edge at `v` labeled `gen`, when determinism holds.
    pub fn out_edge(&self, v: CellId, gen: usize) -> Option<CellId> {
        self.out_edges.get(&(v, gen)).and_then(|es| es.first().copied())
    }

    pub fn in_edge(&self, v: CellId, gen: usize) -> Option<CellId> {
        self.in_edges.get(&(v, gen)).and_then(|es| es.first().copied())
    }

    /// All edges incident to `v` with the directions in which they can be
    /// traversed from `v`, as `(edge, forward, letter, other endpoint)`.
    pub fn departures(&self, v: CellId) -> Vec<(CellId, bool, Letter, CellId)> {
        let mut out = Vec::new();
        for (id, cell) in self.cells.iter().enumerate() {
            if let Some(l) = cell.label {
                if l.from == v {
                    out.push((id, true, Letter::positive(l.gen), l.to));
                }
                if l.to == v {
                    out.push((id, false, Letter::negative(l.gen), l.from));
                }
            }
        }
        out
    }

    /// Traces `word` from `start`, following labels deterministically.
    pub fn trace_word(&self, start: CellId, word: &Word) -> Result<PathInComplex, TraceFailure> {
        assert_eq!(self.cells[start].height, 0, "trace must start at a vertex");
        let mut at = start;
        let mut steps = Vec::with_capacity(word.len());
        for (position, &letter) in word.letters.iter().enumerate() {
            match letter.sign {
                Sign::Plus => {
                    let Some(e) = self.out_edge(at, letter.gen) else {
                        return Err(TraceFailure { position });
                    };
                    steps.push(PathStep { edge: e, forward: true });
                    at = self.edge_label(e).to;
                }
                Sign::Minus => {
                    let Some(e) = self.in_edge(at, letter.gen) else {
                        return Err(TraceFailure { position });
                    };
                    steps.push(PathStep { edge: e, forward: false });
                    at = self.edge_label(e).from;
                }
            }
        }
        Ok(PathInComplex { start, steps, end: at })
    }

    /// Strict down-set of `cell` (everything strictly below it).
    pub fn ideal(&self, cell: CellId) -> BTreeSet<CellId> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<CellId> = self.cells[cell].covers.clone();
        while let Some(c) = stack.pop() {
            if seen.insert(c) {
                stack.extend(self.cells[c].covers.iter().copied());
            }
        }
        seen
    }

    /// Cells not covered by any other cell.
    pub fn maximal_cells(&self) -> Vec<CellId> {
        let mut covered = vec![false; self.cells.len()];
        for cell in &self.cells {
            for &c in &cell.covers {
                covered[c] = true;
            }
        }
        (0..self.cells.len()).filter(|&i| !covered[i]).collect()
    }

    /// The induced subcomplex on `keep`, plus the id maps in both directions.
    pub fn subcomplex(&self, keep: &BTreeSet<CellId>) -> (LabeledComplex, Vec<CellId>, HashMap<CellId, CellId>) {
        let old_ids: Vec<CellId> = keep.iter().copied().collect();
        let mut to_new = HashMap::new();
        for (new, &old) in old_ids.iter().enumerate() {
            to_new.insert(old, new);
        }
        let cells = old_ids
            .iter()
            .map(|&old| {
                let c = &self.cells[old];
                Cell {
                    height: c.height,
                    covers: c.covers.iter().filter_map(|x| to_new.get(x).copied()).collect(),
                    label: c.label.map(|l| EdgeLabel { gen: l.gen, from: to_new[&l.from], to: to_new[&l.to] }),
                }
            })
            .collect();
        (LabeledComplex::from_cells(cells), old_ids, to_new)
    }

    /// Connectivity of the 1-skeleton (vertices joined by edges).
    pub fn one_skeleton_connected(&self) -> bool {
        let vertices: Vec<CellId> = self.vertices().collect();
        if vertices.is_empty() {
            return false;
        }
        let mut seen: BTreeSet<CellId> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(vertices[0]);
        queue.push_back(vertices[0]);
        while let Some(v) = queue.pop_front() {
            for (_, _, _, other) in self.departures(v) {
                if seen.insert(other) {
                    queue.push_back(other);
                }
            }
        }
        vertices.iter().all(|v| seen.contains(v))
    }

    /// Full structural validation. With `relator_mode`, additionally requires
    /// a unique maximum element. The report carries per-height cell counts.
    pub fn validate(&self, relator_mode: bool) -> ValidationReport {
        let mut violations = Vec::new();
        let mut per_height_counts: BTreeMap<u32, usize> = BTreeMap::new();
        for (id, cell) in self.cells.iter().enumerate() {
            *per_height_counts.entry(cell.height).or_insert(0) += 1;
            for &c in &cell.covers {
                if self.cells[c].height >= cell.height {
                    violations.push(Violation::CoverHeight { cell: id, covered: c });
                }
            }
            match cell.height {
                0 => {
                    if !cell.covers.is_empty() {
                        violations.push(Violation::VertexCovers { cell: id });
                    }
                    if cell.label.is_some() {
                        violations.push(Violation::LabelOnNonEdge { cell: id });
                    }
                }
                1 => {
                    let Some(l) = cell.label else {
                        violations.push(Violation::EdgeWithoutLabel { cell: id });
                        continue;
                    };
                    if self.cells[l.from].height != 0 || self.cells[l.to].height != 0 {
                        violations.push(Violation::EdgeEndpoints { cell: id });
                        continue;
                    }
                    let mut expected: Vec<CellId> = vec![l.from, l.to];
                    expected.sort_unstable();
                    expected.dedup();
                    if cell.covers != expected {
                        violations.push(Violation::EdgeEndpoints { cell: id });
                    }
                }
                h => {
                    if cell.label.is_some() {
                        violations.push(Violation::LabelOnNonEdge { cell: id });
                    }
                    if !cell.covers.iter().any(|&c| self.cells[c].height == h - 1) {
                        violations.push(Violation::MissingFacet { cell: id });
                    }
                }
            }
        }

        for (&(v, gen), edges) in &self.out_edges {
            if edges.len() > 1 {
                violations.push(Violation::Determinism { vertex: v, gen, outgoing: true, edges: edges.clone() });
            }
        }
        for (&(v, gen), edges) in &self.in_edges {
            if edges.len() > 1 {
                violations.push(Violation::Determinism { vertex: v, gen, outgoing: false, edges: edges.clone() });
            }
        }

        // Only meaningful on structurally sound posets.
        if violations.is_empty() {
            for (id, cell) in self.cells.iter().enumerate() {
                if cell.height >= 2 {
                    let ideal = self.ideal(id);
                    let (sub, _, _) = self.subcomplex(&ideal);
                    if let Err(reason) = sub.circle_data() {
                        violations.push(Violation::IdealNotCircle { cell: id, reason: reason.to_string() });
                    }
                }
            }
        }

        if relator_mode {
            let maximal = self.maximal_cells();
            if maximal.len() != 1 {
                violations.push(Violation::NoUniqueMaximum { maximal });
            }
        }

        ValidationReport { violations, per_height_counts }
    }

    /// Decides the homology-circle criterion: connected, Euler characteristic
    /// zero, and first integral homology infinite cyclic without torsion. The
    /// relation of each height ≥ 2 cell is the class of a representative loop
    /// of its ideal.
    pub fn circle_check(&self) -> bool {
        self.circle_data().is_ok()
    }

    /// The winding structure of a circle-like complex: an integer cocycle on
    /// edges summing to zero around every relation loop and to +1 around the
    /// returned reference loop.
    pub fn circle_data(&self) -> Result<CircleData, CircleFailure> {
        if !self.one_skeleton_connected() {
            return Err(CircleFailure::NotConnected);
        }
        let high_cells: Vec<CellId> =
            self.cells.iter().enumerate().filter(|(_, c)| c.height >= 2).map(|(i, _)| i).collect();
        let num_vertices = self.vertices().count();
        let num_edges = self.edges().count();
        let chi = num_vertices as i64 - num_edges as i64 + high_cells.len() as i64;
        if chi != 0 {
            return Err(CircleFailure::EulerCharacteristic(chi));
        }

        let tree = SpanningTree::build(self);
        let mut relations: Vec<Vec<BigInt>> = Vec::new();
        for &cell in &high_cells {
            let loop_in_ideal = self.representative_of_ideal(cell)?;
            relations.push(tree.cycle_vector(&loop_in_ideal));
        }
        let snf = smith_normal_form(relations, tree.basis.len());
        if snf.quotient_free_rank() != 1 {
            return Err(CircleFailure::HomologyRank(snf.quotient_free_rank()));
        }
        if !snf.quotient_torsion_free() {
            return Err(CircleFailure::HomologyTorsion);
        }

        let functional: Vec<i64> = snf
            .free_coordinate(0)
            .iter()
            .map(|x| x.to_i64().ok_or(CircleFailure::Overflow))
            .collect::<Result<_, _>>()?;
        let mut cocycle = vec![0i64; self.cells.len()];
        for (j, &e) in tree.basis.iter().enumerate() {
            cocycle[e] = functional[j];
        }

        let reference = self.build_unit_winding_loop(&tree, &functional)?;
        let mut data = CircleData { cocycle, reference };
        let w = data.winding(&data.reference);
        debug_assert_eq!(w.abs(), 1);
        if w < 0 {
            for c in &mut data.cocycle {
                *c = -*c;
            }
        }
        Ok(data)
    }

    /// A closed walk of winding ±1 in the ideal of `cell`, expressed in this
    /// complex's cells.
    fn representative_of_ideal(&self, cell: CellId) -> Result<PathInComplex, CircleFailure> {
        let ideal = self.ideal(cell);
        let (sub, old_ids, _) = self.subcomplex(&ideal);
        let data = sub
            .circle_data()
            .map_err(|e| CircleFailure::IdealNotCircle(cell, Box::new(e)))?;
        let steps = data
            .reference
            .steps
            .iter()
            .map(|s| PathStep { edge: old_ids[s.edge], forward: s.forward })
            .collect();
        Ok(PathInComplex { start: old_ids[data.reference.start], steps, end: old_ids[data.reference.end] })
    }

    /// Builds a closed walk whose winding under `functional` is exactly one,
    /// by combining fundamental cycles joined through the spanning tree.
    fn build_unit_winding_loop(
        &self,
        tree: &SpanningTree,
        functional: &[i64],
    ) -> Result<PathInComplex, CircleFailure> {
        // Solve sum x_j * f_j = 1 with the extended Euclid fold.
        let mut g: i64 = 0;
        let mut coeff: Vec<i64> = vec![0; functional.len()];
        for (j, &f) in functional.iter().enumerate() {
            if f == 0 {
                continue;
            }
            if g == 0 {
                g = f.abs();
                coeff[j] = f.signum();
            } else {
                let (gg, x, y) = ext_gcd(g, f);
                for c in coeff.iter_mut() {
                    *c *= x;
                }
                coeff[j] = y;
                g = gg.abs();
            }
            if g == 1 {
                break;
            }
        }
        if g != 1 {
            return Err(CircleFailure::HomologyRank(0));
        }
        let base = tree.root;
        let mut steps: Vec<PathStep> = Vec::new();
        for (j, &x) in coeff.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let e = tree.basis[j];
            let l = self.edge_label(e);
            for _ in 0..x.unsigned_abs() {
                if x > 0 {
                    steps.extend(tree.path_between(base, l.from));
                    steps.push(PathStep { edge: e, forward: true });
                    steps.extend(tree.path_between(l.to, base));
                } else {
                    steps.extend(tree.path_between(base, l.to));
                    steps.push(PathStep { edge: e, forward: false });
                    steps.extend(tree.path_between(l.from, base));
                }
            }
        }
        Ok(PathInComplex { start: base, steps, end: base })
    }
}

/// Returns `(g, x, y)` with `g = gcd(a, b) ≥ 0` and `a·x + b·y = g`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Winding data of a circle-like complex.
#[derive(Clone, Debug)]
pub struct CircleData {
    /// Per-cell integer cocycle; zero away from edges.
    pub cocycle: Vec<i64>,
    /// A loop of winding +1 anchoring the sign convention.
    pub reference: PathInComplex,
}

impl CircleData {
    pub fn winding(&self, path: &PathInComplex) -> i64 {
        path.steps
            .iter()
            .map(|s| if s.forward { self.cocycle[s.edge] } else { -self.cocycle[s.edge] })
            .sum()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircleFailure {
    #[error("1-skeleton is not connected")]
    NotConnected,
    #[error("Euler characteristic is {0}, not 0")]
    EulerCharacteristic(i64),
    #[error("first homology has free rank {0}, not 1")]
    HomologyRank(usize),
    #[error("first homology has torsion")]
    HomologyTorsion,
    #[error("ideal of cell {0} is not a circle: {1}")]
    IdealNotCircle(CellId, Box<CircleFailure>),
    #[error("winding coefficients exceed i64")]
    Overflow,
}

struct SpanningTree {
    root: CellId,
    /// parent edge of each vertex (edge id, forward when walking away from root)
    parent: HashMap<CellId, (CellId, bool, CellId)>,
    /// non-tree edges in a fixed order: the cycle-space basis
    basis: Vec<CellId>,
    basis_index: HashMap<CellId, usize>,
}

impl SpanningTree {
    fn build(complex: &LabeledComplex) -> SpanningTree {
        let root = complex.vertices().next().expect("complex has no vertices");
        let mut parent = HashMap::new();
        let mut in_tree: BTreeSet<CellId> = BTreeSet::new();
        let mut seen: BTreeSet<CellId> = BTreeSet::new();
        seen.insert(root);
        let mut queue = VecDeque::new();
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let mut deps = complex.departures(v);
            deps.sort_by_key(|&(e, fw, _, _)| (e, !fw));
            for (e, forward, _, other) in deps {
                if seen.insert(other) {
                    in_tree.insert(e);
                    parent.insert(other, (e, forward, v));
                    queue.push_back(other);
                }
            }
        }
        let mut basis = Vec::new();
        let mut basis_index = HashMap::new();
        for e in complex.edges() {
            if !in_tree.contains(&e) {
                basis_index.insert(e, basis.len());
                basis.push(e);
            }
        }
        SpanningTree { root, parent, basis, basis_index }
    }

    /// Tree path from `a` to `b` as path steps.
    fn path_between(&self, a: CellId, b: CellId) -> Vec<PathStep> {
        let up = |mut v: CellId| {
            let mut chain = Vec::new();
            while v != self.root {
                let (e, forward, par) = self.parent[&v];
                chain.push((e, forward, v));
                v = par;
            }
            chain
        };
        let ua = up(a);
        let ub = up(b);
        // strip common tail (towards root)
        let mut ia = ua.len();
        let mut ib = ub.len();
        while ia > 0 && ib > 0 && ua[ia - 1].0 == ub[ib - 1].0 {
            ia -= 1;
            ib -= 1;
        }
        let mut steps = Vec::new();
        for &(e, forward, _) in ua[..ia].iter() {
            // walking towards the root reverses the away-from-root direction
            steps.push(PathStep { edge: e, forward: !forward });
        }
        for &(e, forward, _) in ub[..ib].iter().rev() {
            steps.push(PathStep { edge: e, forward });
        }
        steps
    }

    /// Coordinates of a closed walk over the non-tree-edge basis.
    fn cycle_vector(&self, path: &PathInComplex) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.basis.len()];
        for s in &path.steps {
            if let Some(&j) = self.basis_index.get(&s.edge) {
                if s.forward {
                    v[j] += BigInt::one();
                } else {
                    v[j] -= BigInt::one();
                }
            }
        }
        v
    }
}

/// Validation outcome; failures are data, not errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub per_height_counts: BTreeMap<u32, usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    VertexCovers { cell: CellId },
    EdgeWithoutLabel { cell: CellId },
    LabelOnNonEdge { cell: CellId },
    EdgeEndpoints { cell: CellId },
    CoverHeight { cell: CellId, covered: CellId },
    MissingFacet { cell: CellId },
    Determinism { vertex: CellId, gen: usize, outgoing: bool, edges: Vec<CellId> },
    IdealNotCircle { cell: CellId, reason: String },
    NoUniqueMaximum { maximal: Vec<CellId> },
}

impl PathInComplex {
    pub fn empty_at(v: CellId) -> PathInComplex {
        PathInComplex { start: v, steps: Vec::new(), end: v }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end
    }

    pub fn reverse(&self) -> PathInComplex {
        PathInComplex {
            start: self.end,
            steps: self.steps.iter().rev().map(|s| PathStep { edge: s.edge, forward: !s.forward }).collect(),
            end: self.start,
        }
    }

    pub fn concat(&self, other: &PathInComplex) -> PathInComplex {
        assert_eq!(self.end, other.start, "paths are not composable");
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        PathInComplex { start: self.start, steps, end: other.end }
    }

    /// The word this path spells.
    pub fn word(&self, complex: &LabeledComplex) -> Word {
        Word::from_letters(
            self.steps
                .iter()
                .map(|s| {
                    let l = complex.edge_label(s.edge);
                    Letter::new(l.gen, if s.forward { Sign::Plus } else { Sign::Minus })
                })
                .collect(),
        )
    }

    /// Endpoint sequence including the start.
    pub fn vertex_sequence(&self, complex: &LabeledComplex) -> Vec<CellId> {
        let mut at = self.start;
        let mut out = vec![at];
        for s in &self.steps {
            let l = complex.edge_label(s.edge);
            at = if s.forward { l.to } else { l.from };
            out.push(at);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Mutable construction with folding
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum BuildKind {
    Vertex,
    Edge { gen: usize, from: usize, to: usize },
    High { height: u32, covers: Vec<usize> },
    Dead,
}

/// An under-construction complex supporting deterministic folding: whenever
/// two edges with the same label leave (or enter) one vertex they are
/// identified, along with everything that identification forces.
pub struct ComplexBuilder {
    parent: Vec<usize>,
    kind: Vec<BuildKind>,
}

impl Default for ComplexBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl ComplexBuilder {
    pub fn new() -> ComplexBuilder {
        ComplexBuilder { parent: Vec::new(), kind: Vec::new() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn new_vertex(&mut self) -> usize {
        self.push(BuildKind::Vertex)
    }

    pub fn new_edge(&mut self, gen: usize, from: usize, to: usize) -> usize {
        self.push(BuildKind::Edge { gen, from, to })
    }

    pub fn new_high_cell(&mut self, height: u32, covers: Vec<usize>) -> usize {
        self.push(BuildKind::High { height, covers })
    }

    fn push(&mut self, k: BuildKind) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.kind.push(k);
        id
    }

    pub fn edge_endpoints(&mut self, e: usize) -> (usize, usize, usize) {
        let e = self.find(e);
        match self.kind[e].clone() {
            BuildKind::Edge { gen, from, to } => (gen, self.find(from), self.find(to)),
            _ => panic!("not an edge"),
        }
    }

    /// Current outgoing edge at a vertex with a given label, if any.
    pub fn out_edge(&mut self, v: usize, gen: usize) -> Option<usize> {
        let v = self.find(v);
        let ids: Vec<usize> = (0..self.kind.len()).collect();
        for e in ids {
            if self.find(e) != e {
                continue;
            }
            if let BuildKind::Edge { gen: g, from, .. } = self.kind[e].clone() {
                if g == gen && self.find(from) == v {
                    return Some(e);
                }
            }
        }
        None
    }

    pub fn in_edge(&mut self, v: usize, gen: usize) -> Option<usize> {
        let v = self.find(v);
        let ids: Vec<usize> = (0..self.kind.len()).collect();
        for e in ids {
            if self.find(e) != e {
                continue;
            }
            if let BuildKind::Edge { gen: g, to, .. } = self.kind[e].clone() {
                if g == gen && self.find(to) == v {
                    return Some(e);
                }
            }
        }
        None
    }

    fn union(&mut self, a: usize, b: usize) -> (usize, usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return (ra, ra);
        }
        // keep the smaller id as the representative for determinism
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        (keep, drop)
    }

    /// Identifies two cells and folds until the labeling is deterministic
    /// again. Identifying cells of different kinds is a construction error.
    pub fn merge(&mut self, a: usize, b: usize) {
        let mut pending = vec![(a, b)];
        while let Some((x, y)) = pending.pop() {
            let rx = self.find(x);
            let ry = self.find(y);
            if rx == ry {
                continue;
            }
            let (keep, drop) = self.union(rx, ry);
            let kk = self.kind[keep].clone();
            let kd = self.kind[drop].clone();
            match (kk, kd) {
                (BuildKind::Vertex, BuildKind::Vertex) => {}
                (
                    BuildKind::Edge { gen: g1, from: f1, to: t1 },
                    BuildKind::Edge { gen: g2, from: f2, to: t2 },
                ) => {
                    assert_eq!(g1, g2, "cannot identify edges with different labels");
                    pending.push((f1, f2));
                    pending.push((t1, t2));
                }
                (BuildKind::High { height: h1, .. }, BuildKind::High { height: h2, .. }) => {
                    assert_eq!(h1, h2, "cannot identify cells of different heights");
                }
                _ => panic!("cannot identify cells of different kinds"),
            }
            self.kind[drop] = BuildKind::Dead;
            self.fold_step(&mut pending);
        }
    }

    /// Scans for determinism violations and queues the forced identifications.
    fn fold_step(&mut self, pending: &mut Vec<(usize, usize)>) {
        let mut out_seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut in_seen: HashMap<(usize, usize), usize> = HashMap::new();
        for e in 0..self.kind.len() {
            if self.find(e) != e {
                continue;
            }
            if let BuildKind::Edge { gen, from, to } = self.kind[e].clone() {
                let from = self.find(from);
                let to = self.find(to);
                if let Some(&other) = out_seen.get(&(from, gen)) {
                    if self.find(other) != e {
                        pending.push((e, other));
                    }
                } else {
                    out_seen.insert((from, gen), e);
                }
                if let Some(&other) = in_seen.get(&(to, gen)) {
                    if self.find(other) != e {
                        pending.push((e, other));
                    }
                } else {
                    in_seen.insert((to, gen), e);
                }
            }
        }
    }

    /// Runs folding to a fixed point (used after bulk cell creation).
    pub fn fold(&mut self) {
        let mut pending = Vec::new();
        self.fold_step(&mut pending);
        while let Some((a, b)) = pending.pop() {
            self.merge(a, b);
            self.fold_step(&mut pending);
        }
    }

    /// Identifies high cells that ended up with the same height and covers.
    pub fn dedup_high_cells(&mut self) {
        loop {
            let mut seen: HashMap<(u32, Vec<usize>), usize> = HashMap::new();
            let mut merged = false;
            for c in 0..self.kind.len() {
                if self.find(c) != c {
                    continue;
                }
                if let BuildKind::High { height, covers } = self.kind[c].clone() {
                    let key: Vec<usize> = {
                        let mut k: Vec<usize> = covers.iter().map(|&x| self.find(x)).collect();
                        k.sort_unstable();
                        k.dedup();
                        k
                    };
                    if let Some(&other) = seen.get(&(height, key.clone())) {
                        self.merge(c, other);
                        merged = true;
                        break;
                    }
                    seen.insert((height, key), c);
                }
            }
            if !merged {
                return;
            }
        }
    }

    /// Looks up a live high cell by height and (canonical) covered set.
    pub fn find_high_cell(&mut self, height: u32, covers: &[usize]) -> Option<usize> {
        let mut want: Vec<usize> = covers.iter().map(|&x| self.find(x)).collect();
        want.sort_unstable();
        want.dedup();
        for c in 0..self.kind.len() {
            if self.find(c) != c {
                continue;
            }
            if let BuildKind::High { height: h, covers } = self.kind[c].clone() {
                if h != height {
                    continue;
                }
                let mut have: Vec<usize> = covers.iter().map(|&x| self.find(x)).collect();
                have.sort_unstable();
                have.dedup();
                if have == want {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Freezes the builder into a complex. Returns the complex and the map
    /// from builder ids to final cell ids.
    pub fn finalize(&mut self) -> (LabeledComplex, Vec<CellId>) {
        let n = self.kind.len();
        let mut reps: Vec<usize> = (0..n).filter(|&i| self.find(i) == i && !matches!(self.kind[i], BuildKind::Dead)).collect();
        reps.sort_by_key(|&i| {
            let h = match &self.kind[i] {
                BuildKind::Vertex => 0,
                BuildKind::Edge { .. } => 1,
                BuildKind::High { height, .. } => *height,
                BuildKind::Dead => unreachable!(),
            };
            (h, i)
        });
        let mut final_id: HashMap<usize, CellId> = HashMap::new();
        for (new, &rep) in reps.iter().enumerate() {
            final_id.insert(rep, new);
        }
        let mut cells = Vec::with_capacity(reps.len());
        for &rep in &reps {
            let cell = match self.kind[rep].clone() {
                BuildKind::Vertex => Cell { height: 0, covers: Vec::new(), label: None },
                BuildKind::Edge { gen, from, to } => {
                    let from = final_id[&self.find(from)];
                    let to = final_id[&self.find(to)];
                    let mut covers = vec![from, to];
                    covers.sort_unstable();
                    covers.dedup();
                    Cell { height: 1, covers, label: Some(EdgeLabel { gen, from, to }) }
                }
                BuildKind::High { height, covers } => {
                    let mut covers: Vec<CellId> =
                        covers.iter().map(|&x| final_id[&self.find(x)]).collect();
                    covers.sort_unstable();
                    covers.dedup();
                    Cell { height, covers, label: None }
                }
                BuildKind::Dead => unreachable!(),
            };
            cells.push(cell);
        }
        let map = (0..n)
            .map(|i| {
                let r = self.find(i);
                final_id.get(&r).copied().unwrap_or(usize::MAX)
            })
            .collect();
        (LabeledComplex::from_cells(cells), map)
    }
}

/// Glues a connected labeled complex `src` into `builder`, sending the vertex
/// `seed.0` of `src` onto builder cell `seed.1` and propagating by label
/// determinism. Existing builder cells are reused whenever the labeling
/// forces it (including higher cells matched by height and covered set);
/// missing cells are created. Returns the map from `src` cells to builder
/// ids. Folding runs to completion, so the result is deterministic again.
pub fn glue_complex(
    builder: &mut ComplexBuilder,
    src: &LabeledComplex,
    seed: (CellId, usize),
) -> Vec<usize> {
    let mut map: HashMap<CellId, usize> = HashMap::new();
    map.insert(seed.0, seed.1);
    let mut queue = VecDeque::new();
    queue.push_back(seed.0);
    while let Some(v) = queue.pop_front() {
        for (e, forward, _, other) in src.departures(v) {
            if map.contains_key(&e) {
                continue;
            }
            let l = src.edge_label(e);
            let bv = builder.find(map[&v]);
            let existing = if forward { builder.out_edge(bv, l.gen) } else { builder.in_edge(bv, l.gen) };
            let be = match existing {
                Some(be) => be,
                None => {
                    // create missing endpoint first
                    let other_b = match map.get(&other) {
                        Some(&ob) => ob,
                        None => {
                            let nb = builder.new_vertex();
                            map.insert(other, nb);
                            nb
                        }
                    };
                    let (f, t) = if forward { (bv, other_b) } else { (other_b, bv) };
                    builder.new_edge(l.gen, f, t)
                }
            };
            map.insert(e, be);
            let (_, bf, bt) = builder.edge_endpoints(be);
            let (sf, st) = (l.from, l.to);
            for (sv, bvv) in [(sf, bf), (st, bt)] {
                match map.get(&sv) {
                    Some(&prev) => {
                        builder.merge(prev, bvv);
                    }
                    None => {
                        map.insert(sv, bvv);
                    }
                }
            }
            queue.push_back(other);
        }
    }
    builder.fold();

    // Higher cells, by ascending height, reusing builder cells with the same
    // covered set.
    let mut highs: Vec<CellId> = src.cells().filter(|(_, c)| c.height >= 2).map(|(i, _)| i).collect();
    highs.sort_by_key(|&c| (src.height(c), c));
    for c in highs {
        let covers_b: Vec<usize> = src.cell(c).covers.iter().map(|x| {
            *map.get(x).unwrap_or_else(|| panic!("cover not mapped"))
        }).collect();
        let id = match builder.find_high_cell(src.height(c), &covers_b) {
            Some(existing) => existing,
            None => builder.new_high_cell(src.height(c), covers_b),
        };
        map.insert(c, id);
    }
    builder.dedup_high_cells();

    let mut out = vec![usize::MAX; src.num_cells()];
    for (s, b) in map {
        out[s] = builder.find(b);
    }
    out
}

/// Convenience: a plain labeled circle spelling `word`, returning the complex
/// and its base vertex (position 0).
pub fn circle_complex(word: &Word) -> (LabeledComplex, CellId) {
    assert!(!word.is_empty(), "cannot build a circle on the empty word");
    let n = word.len();
    let mut cells: Vec<Cell> = (0..n).map(|_| Cell { height: 0, covers: Vec::new(), label: None }).collect();
    for (i, &letter) in word.letters.iter().enumerate() {
        let a = i;
        let b = (i + 1) % n;
        let (from, to) = match letter.sign {
            Sign::Plus => (a, b),
            Sign::Minus => (b, a),
        };
        let mut covers = vec![from, to];
        covers.sort_unstable();
        covers.dedup();
        cells.push(Cell { height: 1, covers, label: Some(EdgeLabel { gen: letter.gen, from, to }) });
    }
    (LabeledComplex::from_cells(cells), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    fn w(text: &str) -> Word {
        Word::parse(&ab(), text).unwrap()
    }

    #[test]
    fn circle_traces_deterministically() {
        let (c, base) = circle_complex(&w("(ab)^4"));
        let path = c.trace_word(base, &w("abab")).unwrap();
        assert_eq!(path.end, 4);
        assert_eq!(path.word(&c), w("abab"));
        let fail = c.trace_word(base, &w("ba")).unwrap_err();
        assert_eq!(fail.position, 0);
    }

    #[test]
    fn plain_cycle_is_a_circle() {
        let (c, _) = circle_complex(&w("abc"));
        assert!(c.circle_check());
        let data = c.circle_data().unwrap();
        assert_eq!(data.winding(&data.reference), 1);
    }

    #[test]
    fn wedge_of_two_circles_is_not_a_circle() {
        // one vertex, two loop edges
        let cells = vec![
            Cell { height: 0, covers: vec![], label: None },
            Cell { height: 1, covers: vec![0], label: Some(EdgeLabel { gen: 0, from: 0, to: 0 }) },
            Cell { height: 1, covers: vec![0], label: Some(EdgeLabel { gen: 1, from: 0, to: 0 }) },
        ];
        let c = LabeledComplex::from_cells(cells);
        assert!(!c.circle_check());
        assert_eq!(c.circle_data().unwrap_err(), CircleFailure::EulerCharacteristic(-1));
    }

    #[test]
    fn traditional_relator_validates_with_counts() {
        // disk over a length-4 cycle
        let (circle, _) = circle_complex(&w("abab"));
        let mut cells: Vec<Cell> = circle.cells().map(|(_, c)| c.clone()).collect();
        let edge_ids: Vec<CellId> = circle.edges().collect();
        cells.push(Cell { height: 2, covers: edge_ids, label: None });
        let c = LabeledComplex::from_cells(cells);
        let report = c.validate(true);
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.per_height_counts[&2], 1);
        assert_eq!(report.per_height_counts[&1], 4);
        assert_eq!(report.per_height_counts[&0], 4);
    }

    #[test]
    fn two_maximal_cells_fail_relator_validation() {
        let (circle, _) = circle_complex(&w("abab"));
        let mut cells: Vec<Cell> = circle.cells().map(|(_, c)| c.clone()).collect();
        let edge_ids: Vec<CellId> = circle.edges().collect();
        cells.push(Cell { height: 2, covers: edge_ids.clone(), label: None });
        cells.push(Cell { height: 2, covers: edge_ids, label: None });
        let c = LabeledComplex::from_cells(cells);
        let report = c.validate(true);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NoUniqueMaximum { maximal } if maximal.len() == 2)));
    }

    #[test]
    fn determinism_violation_is_reported() {
        let cells = vec![
            Cell { height: 0, covers: vec![], label: None },
            Cell { height: 0, covers: vec![], label: None },
            Cell { height: 0, covers: vec![], label: None },
            Cell { height: 1, covers: vec![0, 1], label: Some(EdgeLabel { gen: 0, from: 0, to: 1 }) },
            Cell { height: 1, covers: vec![0, 2], label: Some(EdgeLabel { gen: 0, from: 0, to: 2 }) },
        ];
        let c = LabeledComplex::from_cells(cells);
        let report = c.validate(false);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Determinism { vertex: 0, gen: 0, outgoing: true, .. })));
    }

    #[test]
    fn builder_folds_parallel_edges() {
        let mut b = ComplexBuilder::new();
        let v0 = b.new_vertex();
        let v1 = b.new_vertex();
        let v2 = b.new_vertex();
        b.new_edge(0, v0, v1);
        b.new_edge(0, v0, v2);
        b.fold();
        let (c, map) = b.finalize();
        assert_eq!(c.vertices().count(), 2);
        assert_eq!(c.edges().count(), 1);
        assert_eq!(map[v1], map[v2]);
    }

    #[test]
    fn glue_reuses_deterministic_images() {
        // glue a circle abab onto itself rotated: everything merges
        let (src, _) = circle_complex(&w("abab"));
        let mut b = ComplexBuilder::new();
        let seed = b.new_vertex();
        let m1 = glue_complex(&mut b, &src, (0, seed));
        let m2 = glue_complex(&mut b, &src, (2, m1[0]));
        let (c, _) = b.finalize();
        assert_eq!(c.vertices().count(), 4);
        assert_eq!(c.edges().count(), 4);
        let _ = m2;
    }
}
