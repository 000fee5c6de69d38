//! Finite windows of the infinite cyclic cover of a circle-like complex.
//!
//! Vertices of the cover are pairs `(base vertex, level)`; an edge with
//! cocycle value `c` lifts to an edge raising the level by `c`. Since the
//! base is a homology circle, this cyclic cover is the universal cover of
//! its boundary and looks like a thickened line with two infinite ends.

use std::collections::VecDeque;

use crate::complex::{CellId, LabeledComplex, PathInComplex};

/// The 1-skeleton of the cyclic cover restricted to levels `-k ..= k`.
pub struct CoverWindow<'a> {
    pub base: &'a LabeledComplex,
    pub cocycle: &'a [i64],
    pub k: i64,
    base_vertices: Vec<CellId>,
    vertex_index: Vec<usize>, // base vertex id -> dense index, usize::MAX elsewhere
}

/// A lifted vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftedVertex {
    pub base: CellId,
    pub level: i64,
}

impl<'a> CoverWindow<'a> {
    pub fn new(base: &'a LabeledComplex, cocycle: &'a [i64], k: i64) -> CoverWindow<'a> {
        assert!(k >= 1);
        let base_vertices: Vec<CellId> = base.vertices().collect();
        let mut vertex_index = vec![usize::MAX; base.num_cells()];
        for (i, &v) in base_vertices.iter().enumerate() {
            vertex_index[v] = i;
        }
        CoverWindow { base, cocycle, k, base_vertices, vertex_index }
    }

    pub fn num_levels(&self) -> i64 {
        2 * self.k + 1
    }

    pub fn vertex_count(&self) -> usize {
        self.base_vertices.len() * self.num_levels() as usize
    }

    pub fn contains(&self, v: LiftedVertex) -> bool {
        v.level.abs() <= self.k
    }

    fn dense(&self, v: LiftedVertex) -> usize {
        let b = self.vertex_index[v.base];
        debug_assert!(b != usize::MAX);
        (v.level + self.k) as usize * self.base_vertices.len() + b
    }

    fn undense(&self, i: usize) -> LiftedVertex {
        let n = self.base_vertices.len();
        LiftedVertex { base: self.base_vertices[i % n], level: (i / n) as i64 - self.k }
    }

    /// The deck transformation shifting levels.
    pub fn shift(&self, v: LiftedVertex, by: i64) -> LiftedVertex {
        LiftedVertex { base: v.base, level: v.level + by }
    }

    /// Neighbors within the window, as `(lifted vertex, base edge, forward)`.
    pub fn neighbors(&self, v: LiftedVertex) -> Vec<(LiftedVertex, CellId, bool)> {
        let mut out = Vec::new();
        for (e, forward, _, other) in self.base.departures(v.base) {
            let delta = if forward { self.cocycle[e] } else { -self.cocycle[e] };
            let w = LiftedVertex { base: other, level: v.level + delta };
            if self.contains(w) {
                out.push((w, e, forward));
            }
        }
        out
    }

    /// Breadth-first distances from `from` to every window vertex.
    pub fn distances(&self, from: LiftedVertex) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[self.dense(from)] = Some(0);
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            let d = dist[self.dense(v)].unwrap();
            for (w, _, _) in self.neighbors(v) {
                let slot = &mut dist[self.dense(w)];
                if slot.is_none() {
                    *slot = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, from: LiftedVertex, to: LiftedVertex) -> Option<u64> {
        let d = self.distances(from);
        d[self.dense(to)]
    }

    /// Geodesic between two lifted vertices as a base path, if connected.
    pub fn geodesic(&self, from: LiftedVertex, to: LiftedVertex) -> Option<PathInComplex> {
        let mut prev: Vec<Option<(LiftedVertex, CellId, bool)>> = vec![None; self.vertex_count()];
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[self.dense(from)] = Some(0u64);
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            let d = dist[self.dense(v)].unwrap();
            let mut nbrs = self.neighbors(v);
            nbrs.sort_by_key(|&(_, e, fw)| (e, !fw));
            for (w, e, fw) in nbrs {
                let i = self.dense(w);
                if dist[i].is_none() {
                    dist[i] = Some(d + 1);
                    prev[i] = Some((v, e, fw));
                    queue.push_back(w);
                }
            }
        }
        dist[self.dense(to)]?;
        let mut steps = Vec::new();
        let mut at = to;
        while at != from {
            let (p, e, fw) = prev[self.dense(at)].unwrap();
            steps.push(crate::complex::PathStep { edge: e, forward: fw });
            at = p;
        }
        steps.reverse();
        Some(PathInComplex { start: from.base, steps, end: to.base })
    }

    /// Lifts a base path starting on level `start_level`; the end level is
    /// the start level plus the path's winding.
    pub fn lift(&self, path: &PathInComplex, start_level: i64) -> (LiftedVertex, LiftedVertex) {
        let mut level = start_level;
        for s in &path.steps {
            level += if s.forward { self.cocycle[s.edge] } else { -self.cocycle[s.edge] };
        }
        (
            LiftedVertex { base: path.start, level: start_level },
            LiftedVertex { base: path.end, level },
        )
    }

    /// Connected components of the window after removing `removed` vertices.
    /// Returns a component id per dense index (usize::MAX for removed).
    pub fn components_after_removal(&self, removed: &[bool]) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0usize;
        for i in 0..n {
            if removed[i] || comp[i] != usize::MAX {
                continue;
            }
            comp[i] = next;
            let mut queue = VecDeque::new();
            queue.push_back(self.undense(i));
            while let Some(v) = queue.pop_front() {
                for (w, _, _) in self.neighbors(v) {
                    let j = self.dense(w);
                    if !removed[j] && comp[j] == usize::MAX {
                        comp[j] = next;
                        queue.push_back(self.undense(j));
                    }
                }
            }
            next += 1;
        }
        (comp, next)
    }

    pub fn dense_index(&self, v: LiftedVertex) -> usize {
        self.dense(v)
    }

    pub fn vertex_from_dense(&self, i: usize) -> LiftedVertex {
        self.undense(i)
    }

    pub fn base_vertices(&self) -> &[CellId] {
        &self.base_vertices
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::circle_complex;
    use crate::word::{Alphabet, Word};

    #[test]
    fn circle_cover_is_a_line() {
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        let word = Word::parse(&alphabet, "ab").unwrap();
        let (c, base) = circle_complex(&word);
        let data = c.circle_data().unwrap();
        let k = 3;
        let cover = CoverWindow::new(&c, &data.cocycle, k);
        assert_eq!(cover.vertex_count(), (2 * k as usize + 1) * 2);
        // distance from (base, 0) to its level-1 shift is the circle length
        let v = LiftedVertex { base, level: 0 };
        assert_eq!(cover.distance(v, cover.shift(v, 1)), Some(2));
        assert_eq!(cover.distance(v, cover.shift(v, -1)), Some(2));
        // every window-interior vertex has degree 2: a line
        assert_eq!(cover.neighbors(v).len(), 2);
    }
}
