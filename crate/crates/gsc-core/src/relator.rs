//! General relators: cones over circle-like labeled complexes, with their
//! winding structure, cached metric data, label-preserving automorphisms,
//! functors between relators, crucial cones, and subcone closure.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::complex::{Cell, CellId, CircleData, LabeledComplex, PathInComplex, Violation};
use crate::metric::{self, BoundaryGeometry};
use crate::word::Word;
use crate::Rational;

/// How a relator was assembled; kept for faithful serialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelatorRecipe {
    /// Plain circle labeled `word` repeated `exponent` times.
    Power { word: Word, exponent: u32 },
    /// Base cycle with named subrelators glued along subpaths.
    Composite { cycle: Word, attachments: Vec<Attachment> },
    /// Explicit cell listing.
    Raw,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub sub_name: String,
    pub path_word: Word,
    pub offset: usize,
}

#[derive(Debug, Error)]
pub enum RelatorBuildError {
    #[error("boundary is not structurally valid: {0:?}")]
    InvalidBoundary(Vec<Violation>),
    #[error("boundary is not a homology circle: {0}")]
    NotCircle(String),
    #[error("rank must be at least 2")]
    RankTooSmall,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WindingError {
    #[error("path is not closed")]
    NotClosed,
    #[error("path uses cell {0} which is not a boundary edge")]
    NotInBoundary(CellId),
}

/// A general relator: the cone over its boundary. The apex is implicit in
/// `full`, which appends one cell of maximal height to the boundary cells.
/// All metric data is computed at construction and never mutated.
#[derive(Clone, Debug)]
pub struct GeneralRelator {
    pub name: String,
    boundary: LabeledComplex,
    full: LabeledComplex,
    apex: CellId,
    pub rank: u32,
    pub base_vertex: CellId,
    reference: PathInComplex,
    cocycle: Vec<i64>,
    length: Rational,
    width: u64,
    shortest_rep: (u64, PathInComplex),
    pub recipe: RelatorRecipe,
}

impl GeneralRelator {
    /// Cones over a validated circle-like boundary. When the recipe has a
    /// base cycle whose trace from `base_vertex` winds ±1, that trace becomes
    /// the reference loop (after normalizing the cocycle sign to +1).
    pub fn from_boundary(
        name: impl Into<String>,
        boundary: LabeledComplex,
        rank: u32,
        base_vertex: CellId,
        recipe: RelatorRecipe,
    ) -> Result<GeneralRelator, RelatorBuildError> {
        if rank < 2 {
            return Err(RelatorBuildError::RankTooSmall);
        }
        let report = boundary.validate(false);
        if !report.is_valid() {
            return Err(RelatorBuildError::InvalidBoundary(report.violations));
        }
        let data = boundary.circle_data().map_err(|e| RelatorBuildError::NotCircle(e.to_string()))?;
        let CircleData { mut cocycle, reference: generic_reference } = data;

        // Prefer the recipe's own cycle as the reference loop.
        let cycle_word = match &recipe {
            RelatorRecipe::Power { word, exponent } => Some(word.pow(*exponent as usize)),
            RelatorRecipe::Composite { cycle, .. } => Some(cycle.clone()),
            RelatorRecipe::Raw => None,
        };
        let reference = match cycle_word.and_then(|w| boundary.trace_word(base_vertex, &w).ok()) {
            Some(path) if path.is_closed() => {
                let w: i64 = path
                    .steps
                    .iter()
                    .map(|s| if s.forward { cocycle[s.edge] } else { -cocycle[s.edge] })
                    .sum();
                if w == -1 {
                    for c in cocycle.iter_mut() {
                        *c = -*c;
                    }
                    path
                } else if w == 1 {
                    path
                } else {
                    generic_reference
                }
            }
            _ => generic_reference,
        };

        let apex_height = boundary.max_height() + 1;
        let mut full_cells: Vec<Cell> = (0..boundary.num_cells()).map(|i| boundary.cell(i).clone()).collect();
        full_cells.push(Cell { height: apex_height.max(2), covers: boundary.maximal_cells(), label: None });
        let apex = full_cells.len() - 1;
        let full = LabeledComplex::from_cells(full_cells);

        let length = metric::relator_length(&boundary, &cocycle, &reference);
        let width = metric::width(&boundary, &cocycle);
        let shortest_rep = metric::shortest_representative(&boundary, &cocycle, &reference);

        Ok(GeneralRelator {
            name: name.into(),
            boundary,
            full,
            apex,
            rank,
            base_vertex,
            reference,
            cocycle,
            length,
            width,
            shortest_rep,
            recipe,
        })
    }

    /// Plain circle labeled `word^exponent`.
    pub fn circle(
        name: impl Into<String>,
        word: &Word,
        exponent: u32,
        rank: u32,
    ) -> Result<GeneralRelator, RelatorBuildError> {
        let powered = word.pow(exponent as usize);
        let (complex, base) = crate::complex::circle_complex(&powered);
        GeneralRelator::from_boundary(
            name,
            complex,
            rank,
            base,
            RelatorRecipe::Power { word: word.clone(), exponent },
        )
    }

    pub fn boundary(&self) -> &LabeledComplex {
        &self.boundary
    }

    /// Boundary plus apex.
    pub fn full_complex(&self) -> &LabeledComplex {
        &self.full
    }

    pub fn apex(&self) -> CellId {
        self.apex
    }

    pub fn height(&self) -> u32 {
        self.full.height(self.apex)
    }

    pub fn cocycle(&self) -> &[i64] {
        &self.cocycle
    }

    pub fn reference(&self) -> &PathInComplex {
        &self.reference
    }

    pub fn length(&self) -> Rational {
        self.length
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn shortest_representative(&self) -> (u64, &PathInComplex) {
        (self.shortest_rep.0, &self.shortest_rep.1)
    }

    pub fn geometry(&self) -> BoundaryGeometry<'_> {
        BoundaryGeometry { complex: &self.boundary, cocycle: &self.cocycle, length: self.length }
    }

    /// Validates the full cone (boundary plus apex) as a relator.
    pub fn validate(&self) -> crate::complex::ValidationReport {
        self.full.validate(true)
    }

    /// Winding number of a closed loop in the boundary.
    pub fn winding_number(&self, path: &PathInComplex) -> Result<i64, WindingError> {
        if !path.is_closed() {
            return Err(WindingError::NotClosed);
        }
        let mut w = 0;
        for s in &path.steps {
            if s.edge >= self.boundary.num_cells() || self.boundary.cell(s.edge).height != 1 {
                return Err(WindingError::NotInBoundary(s.edge));
            }
            w += if s.forward { self.cocycle[s.edge] } else { -self.cocycle[s.edge] };
        }
        Ok(w)
    }

    /// A representative is any loop with winding number ±1; no reducedness
    /// is required.
    pub fn is_representative(&self, path: &PathInComplex) -> Result<bool, WindingError> {
        Ok(self.winding_number(path)?.abs() == 1)
    }

    /// The word of the reference loop (used to present the group to coset
    /// enumeration and to seed constructions).
    pub fn reference_word(&self) -> Word {
        self.reference.word(&self.boundary)
    }

    /// All label-, orientation-, and height-preserving automorphisms of the
    /// boundary, enumerated by seeding each candidate image of the base
    /// vertex and propagating deterministically.
    pub fn automorphism_group(&self) -> AutomorphismGroup {
        let verts: Vec<CellId> = self.boundary.vertices().collect();
        let mut elements = Vec::new();
        for &v in &verts {
            for map in cell_maps(&self.boundary, &self.boundary, self.base_vertex, v, true) {
                elements.push(map);
            }
        }
        elements.sort();
        elements.dedup();
        let winding_signs = elements
            .iter()
            .map(|m| {
                let image = apply_map_to_path(m, &self.reference);
                match self.winding_number(&image) {
                    Ok(1) => 1i8,
                    Ok(-1) => -1,
                    other => panic!("automorphism image of reference has winding {other:?}"),
                }
            })
            .collect();
        AutomorphismGroup { elements, winding_signs }
    }

    pub fn has_orientation_reversing_automorphism(&self) -> bool {
        self.automorphism_group().winding_signs.contains(&-1)
    }

    /// Boundary cells of height ≥ 2 interpreted as embedded subcones,
    /// extracted as standalone relators (rank set to their height).
    pub fn subcones(&self) -> Vec<(CellId, GeneralRelator)> {
        let mut out = Vec::new();
        for (id, cell) in self.boundary.cells() {
            if cell.height < 2 {
                continue;
            }
            let ideal = self.boundary.ideal(id);
            let (sub, _, _) = self.boundary.subcomplex(&ideal);
            let base = sub.vertices().next().expect("subcone has no vertices");
            let relator = GeneralRelator::from_boundary(
                format!("{}.sub{}", self.name, id),
                sub,
                cell.height.max(2),
                base,
                RelatorRecipe::Raw,
            )
            .expect("embedded subcone is not a valid relator");
            out.push((id, relator));
        }
        out
    }

    /// Candidate crucial cones: edges and maximal proper subcones whose
    /// deletion (the cell plus everything above it) leaves no loop of
    /// winding ±1. Implements the basic removal test only.
    pub fn crucial_cones(&self) -> Vec<CellId> {
        let mut candidates: Vec<CellId> = self.boundary.edges().collect();
        for c in self.boundary.maximal_cells() {
            if self.boundary.cell(c).height >= 2 {
                candidates.push(c);
            }
        }
        candidates.sort_unstable();
        candidates.into_iter().filter(|&c| self.is_crucial(c)).collect()
    }

    fn is_crucial(&self, cell: CellId) -> bool {
        // delete the cell and its up-set
        let mut deleted: BTreeSet<CellId> = BTreeSet::new();
        let mut frontier = vec![cell];
        while let Some(c) = frontier.pop() {
            if !deleted.insert(c) {
                continue;
            }
            for (other, oc) in self.boundary.cells() {
                if oc.covers.contains(&c) && !deleted.contains(&other) {
                    frontier.push(other);
                }
            }
        }
        !self.has_unit_winding_loop_avoiding(&deleted)
    }

    /// Does the 1-skeleton minus `deleted` still carry a loop of winding ±1?
    /// Per connected component the achievable windings form a subgroup g·Z;
    /// a representative survives iff some component has g = 1.
    fn has_unit_winding_loop_avoiding(&self, deleted: &BTreeSet<CellId>) -> bool {
        let mut potential: HashMap<CellId, i64> = HashMap::new();
        let mut seen: BTreeSet<CellId> = BTreeSet::new();
        for start in self.boundary.vertices() {
            if seen.contains(&start) {
                continue;
            }
            let mut g: i64 = 0;
            potential.insert(start, 0);
            seen.insert(start);
            let mut queue = VecDeque::new();
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for (e, forward, _, other) in self.boundary.departures(v) {
                    if deleted.contains(&e) {
                        continue;
                    }
                    let delta = if forward { self.cocycle[e] } else { -self.cocycle[e] };
                    let p = potential[&v] + delta;
                    match potential.get(&other) {
                        None => {
                            potential.insert(other, p);
                            seen.insert(other);
                            queue.push_back(other);
                        }
                        Some(&q) => {
                            g = gcd(g, (p - q).abs());
                        }
                    }
                }
            }
            if g == 1 {
                return true;
            }
        }
        false
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The label-preserving automorphisms of a boundary, as cell permutations.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    /// Cell maps over boundary cell ids; the identity is always present.
    pub elements: Vec<Vec<CellId>>,
    /// +1 when the automorphism preserves the winding orientation.
    pub winding_signs: Vec<i8>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn compose(a: &[CellId], b: &[CellId]) -> Vec<CellId> {
        a.iter().map(|&x| b[x]).collect()
    }

    fn element_order(&self, e: &[CellId]) -> usize {
        let identity: Vec<CellId> = (0..e.len()).collect();
        let mut cur = e.to_vec();
        let mut n = 1;
        while cur != identity {
            cur = Self::compose(&cur, e);
            n += 1;
            assert!(n <= self.elements.len() + 1, "element order exceeds group order");
        }
        n
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements.iter().any(|e| self.element_order(e) == self.order())
    }

    /// Dihedral of order 2k: a rotation of order k plus a reversing
    /// involution conjugating it to its inverse.
    pub fn is_dihedral(&self) -> bool {
        let n = self.order();
        if n % 2 != 0 || n < 2 {
            return false;
        }
        let k = n / 2;
        let identity: Vec<CellId> = (0..self.elements[0].len()).collect();
        for r in &self.elements {
            if self.element_order(r) != k {
                continue;
            }
            let powers: BTreeSet<Vec<CellId>> = {
                let mut set = BTreeSet::new();
                let mut cur = identity.clone();
                for _ in 0..k {
                    set.insert(cur.clone());
                    cur = Self::compose(&cur, r);
                }
                set
            };
            for s in &self.elements {
                if powers.contains(s) || self.element_order(s) != 2 {
                    continue;
                }
                // s r s = r^{-1}
                let srs = Self::compose(&Self::compose(s, r), s);
                let r_inv = {
                    let mut cur = r.clone();
                    for _ in 0..k.saturating_sub(2) {
                        cur = Self::compose(&cur, r);
                    }
                    if k == 1 {
                        identity.clone()
                    } else {
                        cur
                    }
                };
                if srs == r_inv {
                    return true;
                }
            }
        }
        false
    }

    /// The shape allowed for relators with a crucial cone: cyclic, or
    /// dihedral possibly extended by a 2-group. Checked loosely: cyclic or
    /// dihedral directly, or the order is `2^a · m` with a cyclic or dihedral
    /// quotient — for the library examples plain cyclic/dihedral suffices.
    pub fn fits_restricted_shape(&self) -> bool {
        self.is_cyclic() || self.is_dihedral() || self.order().is_power_of_two()
    }
}

fn apply_map_to_path(map: &[CellId], path: &PathInComplex) -> PathInComplex {
    PathInComplex {
        start: map[path.start],
        steps: path
            .steps
            .iter()
            .map(|s| crate::complex::PathStep { edge: map[s.edge], forward: s.forward })
            .collect(),
        end: map[path.end],
    }
}

/// A height-, label-, and orientation-preserving cellular map between full
/// relator complexes, determined by one vertex image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorFunctor {
    /// Image of every cell of the source's full complex (boundary + apex)
    /// inside the target's full complex.
    pub map: Vec<CellId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FunctorError {
    #[error("the two paths spell different words")]
    WordMismatch,
}

/// All functors `r → s` compatible with reading the same word along
/// `u_in_r` and `u_in_s`: each is generated from the single vertex
/// assignment `u_in_r.start ↦ u_in_s.start` and propagated.
pub fn find_functors(
    r: &GeneralRelator,
    s: &GeneralRelator,
    u_in_r: &PathInComplex,
    u_in_s: &PathInComplex,
) -> Result<Vec<RelatorFunctor>, FunctorError> {
    if u_in_r.word(r.boundary()) != u_in_s.word(s.boundary()) {
        return Err(FunctorError::WordMismatch);
    }
    Ok(functors_from_seed(r, s, u_in_r.start, u_in_s.start))
}

/// Functors `r → s` seeded by a vertex correspondence.
pub fn functors_from_seed(
    r: &GeneralRelator,
    s: &GeneralRelator,
    seed_r: CellId,
    seed_s: CellId,
) -> Vec<RelatorFunctor> {
    let maps = cell_maps(r.full_complex(), s.full_complex(), seed_r, seed_s, false);
    maps.into_iter().map(|map| RelatorFunctor { map }).collect()
}

/// Label/height-preserving embeddings of a relator's full complex into an
/// arbitrary deterministic complex, seeded at a vertex correspondence. Used
/// to verify that an attachment covers a reading.
pub fn functors_into_complex(
    r: &GeneralRelator,
    target: &LabeledComplex,
    seed_r: CellId,
    seed_target: CellId,
) -> Vec<Vec<CellId>> {
    cell_maps(r.full_complex(), target, seed_r, seed_target, false)
}

/// Two relators are the same subcone when a bijective functor exists.
pub fn relator_isomorphic(a: &GeneralRelator, b: &GeneralRelator) -> bool {
    if a.boundary().num_cells() != b.boundary().num_cells() || a.height() != b.height() {
        return false;
    }
    b.boundary()
        .vertices()
        .any(|v| !cell_maps(a.full_complex(), b.full_complex(), a.base_vertex, v, true).is_empty())
}

/// Extends the input set with every relator occurring as a subcone in any
/// member's boundary, recursively. New relators get their height as rank.
pub fn subcone_closure(relators: &[GeneralRelator]) -> Vec<GeneralRelator> {
    let mut out: Vec<GeneralRelator> = relators.to_vec();
    let mut i = 0;
    while i < out.len() {
        let subs = out[i].subcones();
        for (_, sub) in subs {
            if !out.iter().any(|r| relator_isomorphic(r, &sub)) {
                out.push(sub);
            }
        }
        i += 1;
    }
    out
}

/// Label/orientation/height-preserving cellular maps from `src` to `dst`
/// (full complexes), seeded by a vertex pair. With `bijective`, only
/// bijections are returned (automorphism/isomorphism search). Multiple
/// results arise only from higher-cell multiplicity.
fn cell_maps(
    src: &LabeledComplex,
    dst: &LabeledComplex,
    seed_src: CellId,
    seed_dst: CellId,
    bijective: bool,
) -> Vec<Vec<CellId>> {
    if src.cell(seed_src).height != 0 || dst.cell(seed_dst).height != 0 {
        return Vec::new();
    }
    let n = src.num_cells();
    let mut map: Vec<Option<CellId>> = vec![None; n];
    map[seed_src] = Some(seed_dst);
    let mut queue = VecDeque::new();
    queue.push_back(seed_src);
    while let Some(v) = queue.pop_front() {
        let bv = map[v].unwrap();
        for (e, forward, _, other) in src.departures(v) {
            let l = src.edge_label(e);
            let image = if forward { dst.out_edge(bv, l.gen) } else { dst.in_edge(bv, l.gen) };
            let Some(be) = image else { return Vec::new() };
            match map[e] {
                Some(prev) if prev != be => return Vec::new(),
                Some(_) => {}
                None => map[e] = Some(be),
            }
            let bl = dst.edge_label(be);
            let bother = if forward { bl.to } else { bl.from };
            match map[other] {
                Some(prev) if prev != bother => return Vec::new(),
                Some(_) => {}
                None => {
                    map[other] = Some(bother);
                    queue.push_back(other);
                }
            }
        }
    }
    // The source 1-skeleton must be connected for the seed to determine it.
    for (id, cell) in src.cells() {
        if cell.height <= 1 && map[id].is_none() {
            return Vec::new();
        }
    }
    if bijective {
        let mut seen = BTreeSet::new();
        for (id, cell) in src.cells() {
            if cell.height <= 1 {
                if !seen.insert(map[id].unwrap()) {
                    return Vec::new();
                }
            }
        }
        if src.vertices().count() != dst.vertices().count() || src.edges().count() != dst.edges().count() {
            return Vec::new();
        }
    }

    // Match higher cells by ascending height with backtracking. A source
    // cell can map to a target cell of the same height whose ideal contains
    // the image of the source ideal and in which the image of the source's
    // representative loop still winds ±1.
    let mut highs: Vec<CellId> = src.cells().filter(|(_, c)| c.height >= 2).map(|(i, _)| i).collect();
    highs.sort_by_key(|&c| (src.height(c), c));

    let mut dst_ideals: HashMap<CellId, BTreeSet<CellId>> = HashMap::new();
    let mut dst_circle: HashMap<CellId, Option<(Vec<CellId>, crate::complex::CircleData)>> = HashMap::new();

    let mut results = Vec::new();
    backtrack_high(
        src,
        dst,
        &highs,
        0,
        &mut map,
        &mut BTreeSet::new(),
        bijective,
        &mut dst_ideals,
        &mut dst_circle,
        &mut results,
    );
    if bijective {
        let hsrc = src.cells().filter(|(_, c)| c.height >= 2).count();
        let hdst = dst.cells().filter(|(_, c)| c.height >= 2).count();
        if hsrc != hdst {
            results.clear();
        }
    }
    results
}

#[allow(clippy::too_many_arguments)]
fn backtrack_high(
    src: &LabeledComplex,
    dst: &LabeledComplex,
    highs: &[CellId],
    at: usize,
    map: &mut Vec<Option<CellId>>,
    used: &mut BTreeSet<CellId>,
    bijective: bool,
    dst_ideals: &mut HashMap<CellId, BTreeSet<CellId>>,
    dst_circle: &mut HashMap<CellId, Option<(Vec<CellId>, crate::complex::CircleData)>>,
    results: &mut Vec<Vec<CellId>>,
) {
    if at == highs.len() {
        results.push(map.iter().map(|m| m.unwrap()).collect());
        return;
    }
    let p = highs[at];
    let h = src.height(p);
    let image_covers: BTreeSet<CellId> = src.cell(p).covers.iter().map(|&c| map[c].unwrap()).collect();
    // the representative loop of p's ideal and its image walk
    let ideal_p = src.ideal(p);
    let (sub, old_ids, _) = src.subcomplex(&ideal_p);
    let sub_data = sub.circle_data().expect("source ideal is not a circle");
    let image_walk: Vec<(CellId, bool)> = sub_data
        .reference
        .steps
        .iter()
        .map(|s| (map[old_ids[s.edge]].unwrap(), s.forward))
        .collect();

    let candidates: Vec<CellId> = dst
        .cells()
        .filter(|(_, c)| c.height == h)
        .map(|(i, _)| i)
        .filter(|&q| !(bijective && used.contains(&q)))
        .collect();
    for q in candidates {
        let ideal_q = dst_ideals.entry(q).or_insert_with(|| dst.ideal(q)).clone();
        if !image_covers.iter().all(|c| ideal_q.contains(c)) {
            continue;
        }
        // winding of the image walk inside q's ideal must be ±1
        let entry = dst_circle.entry(q).or_insert_with(|| {
            let (subq, old_q, _) = dst.subcomplex(&ideal_q);
            subq.circle_data().ok().map(|d| (old_q, d))
        });
        let Some((old_q, data_q)) = entry else { continue };
        let index_of: HashMap<CellId, usize> = old_q.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut wind = 0i64;
        let mut inside = true;
        for &(e, fw) in &image_walk {
            match index_of.get(&e) {
                Some(&je) => wind += if fw { data_q.cocycle[je] } else { -data_q.cocycle[je] },
                None => {
                    inside = false;
                    break;
                }
            }
        }
        if !inside || wind.abs() != 1 {
            continue;
        }
        map[p] = Some(q);
        used.insert(q);
        backtrack_high(src, dst, highs, at + 1, map, used, bijective, dst_ideals, dst_circle, results);
        used.remove(&q);
        map[p] = None;
    }
}

/// Glues the full complex of `sub` into a builder, seeded at a vertex pair.
/// Returns the image of every cell of `sub`'s full complex.
pub fn attach_relator(
    builder: &mut crate::complex::ComplexBuilder,
    sub: &GeneralRelator,
    seed_sub_vertex: CellId,
    seed_builder_vertex: usize,
) -> Vec<usize> {
    crate::complex::glue_complex(builder, sub.full_complex(), (seed_sub_vertex, seed_builder_vertex))
}

/// Where a word is readable in a boundary: all start vertices, quotiented by
/// the boundary automorphism group. Used to resolve attachment readings.
pub fn readings_up_to_automorphism(r: &GeneralRelator, word: &Word) -> Vec<CellId> {
    let auto = r.automorphism_group();
    let mut starts: Vec<CellId> = Vec::new();
    for v in r.boundary().vertices() {
        if r.boundary().trace_word(v, word).is_ok() {
            starts.push(v);
        }
    }
    let mut classes: Vec<CellId> = Vec::new();
    'next: for &v in &starts {
        for &c in &classes {
            if auto.elements.iter().any(|m| m[c] == v) {
                continue 'next;
            }
        }
        classes.push(v);
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;
    use crate::ratio;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn w(text: &str) -> Word {
        Word::parse(&ab(), text).unwrap()
    }

    #[test]
    fn circle_relator_basics() {
        let r = GeneralRelator::circle("r", &w("ab"), 5, 2).unwrap();
        assert_eq!(r.height(), 2);
        assert_eq!(r.length(), ratio(10, 1));
        assert_eq!(r.width(), 0);
        assert_eq!(r.shortest_representative().0, 10);
        assert!(r.validate().is_valid());
    }

    #[test]
    fn winding_is_additive_and_antisymmetric() {
        let r = GeneralRelator::circle("r", &w("ab"), 3, 2).unwrap();
        let path = r.boundary().trace_word(r.base_vertex, &w("(ab)^3")).unwrap();
        assert_eq!(r.winding_number(&path), Ok(1));
        let doubled = path.concat(&path);
        assert_eq!(r.winding_number(&doubled), Ok(2));
        assert_eq!(r.winding_number(&path.reverse()), Ok(-1));
        assert!(r.is_representative(&path).unwrap());
        assert!(!r.is_representative(&doubled).unwrap());
        // a backtrack keeps winding intact
        let padded = r.boundary().trace_word(r.base_vertex, &w("(ab)^3 a a^-1")).unwrap();
        assert_eq!(r.winding_number(&padded), Ok(1));
        assert!(r.is_representative(&padded).unwrap());
        // an open path errors
        let open = r.boundary().trace_word(r.base_vertex, &w("a")).unwrap();
        assert_eq!(r.winding_number(&open), Err(WindingError::NotClosed));
    }

    #[test]
    fn circle_automorphisms_are_rotations() {
        let r = GeneralRelator::circle("r", &w("ab"), 5, 2).unwrap();
        let auto = r.automorphism_group();
        assert_eq!(auto.order(), 5);
        assert!(auto.is_cyclic());
        assert!(!r.has_orientation_reversing_automorphism());

        // simple aperiodic word with trivial symmetry
        let r2 = GeneralRelator::circle("r2", &w("abab b"), 1, 2).unwrap();
        assert_eq!(r2.automorphism_group().order(), 1);
        assert!(!r2.has_orientation_reversing_automorphism());
    }

    #[test]
    fn traditional_relator_edges_are_all_crucial() {
        let r = GeneralRelator::circle("r", &w("ab"), 2, 2).unwrap();
        let crucial = r.crucial_cones();
        let edges: Vec<CellId> = r.boundary().edges().collect();
        assert_eq!(crucial, edges);
    }

    #[test]
    fn functor_of_small_circle_into_double_circle_fails() {
        let a4 = GeneralRelator::circle("a4", &w("a"), 4, 2).unwrap();
        let a8 = GeneralRelator::circle("a8", &w("a"), 8, 2).unwrap();
        let u4 = a4.boundary().trace_word(a4.base_vertex, &w("a a")).unwrap();
        let u8 = a8.boundary().trace_word(a8.base_vertex, &w("a a")).unwrap();
        let functors = find_functors(&a4, &a8, &u4, &u8).unwrap();
        assert!(functors.is_empty());
        // identity correspondence contains the identity functor
        let id = find_functors(&a4, &a4, &u4, &u4).unwrap();
        assert_eq!(id.len(), 1);
        let word_mismatch = find_functors(
            &a4,
            &a8,
            &u4,
            &a8.boundary().trace_word(a8.base_vertex, &w("a")).unwrap(),
        );
        assert_eq!(word_mismatch.unwrap_err(), FunctorError::WordMismatch);
    }

    #[test]
    fn subcone_closure_of_circle_is_itself() {
        let r = GeneralRelator::circle("r", &w("ab"), 3, 2).unwrap();
        let closed = subcone_closure(&[r]);
        assert_eq!(closed.len(), 1);
    }
}
