//! Metric quantities of a circle-like boundary: relator length (best
//! length-per-winding over loops), width (ball removal disconnecting the two
//! ends of the cyclic cover), the normalized graph metric, and the
//! six-property relator-metric contract.

use std::collections::{BTreeMap, HashMap};

use crate::complex::{CellId, LabeledComplex, PathInComplex};
use crate::cover::{CoverWindow, LiftedVertex};
use crate::{ratio, Rational};

/// Everything a metric needs to know about a relator boundary.
pub struct BoundaryGeometry<'a> {
    pub complex: &'a LabeledComplex,
    pub cocycle: &'a [i64],
    pub length: Rational,
}

fn max_cocycle(cocycle: &[i64]) -> i64 {
    cocycle.iter().map(|c| c.abs()).max().unwrap_or(0).max(1)
}

/// True for a complex that is a bare labeled cycle (no higher cells, all
/// degrees 2). These get closed-form metric values.
pub fn is_plain_cycle(complex: &LabeledComplex) -> bool {
    if complex.cells().any(|(_, c)| c.height >= 2) {
        return false;
    }
    let v = complex.vertices().count();
    let e = complex.edges().count();
    if v == 0 || v != e || !complex.one_skeleton_connected() {
        return false;
    }
    complex.vertices().all(|x| complex.departures(x).len() == 2)
}

/// Minimum over loops of edge length divided by absolute winding number,
/// as an exact rational. Computed by parametric shortest-path search with
/// negative-cycle detection; on small complexes the independent window scan
/// re-derives the value and the two must agree.
pub fn relator_length(complex: &LabeledComplex, cocycle: &[i64], reference: &PathInComplex) -> Rational {
    if is_plain_cycle(complex) {
        return Rational::from_integer(complex.edges().count() as i64);
    }
    let lambda = min_ratio_parametric(complex, cocycle, reference);
    if complex.edges().count() <= 64 {
        let scan = min_ratio_window_scan(complex, cocycle);
        assert_eq!(lambda, scan, "parametric and window-scan relator lengths disagree");
    }
    lambda
}

/// Lawler-style iterative minimum-ratio cycle: repeatedly test the current
/// candidate ratio for a negative cycle under weight `len − λ·wind` and
/// improve λ to the ratio of any cycle found.
pub fn min_ratio_parametric(
    complex: &LabeledComplex,
    cocycle: &[i64],
    reference: &PathInComplex,
) -> Rational {
    let vertices: Vec<CellId> = complex.vertices().collect();
    let index: HashMap<CellId, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // Each edge contributes both traversal directions.
    let mut arcs: Vec<(usize, usize, i64)> = Vec::new(); // (from, to, wind)
    for e in complex.edges() {
        let l = complex.edge_label(e);
        arcs.push((index[&l.from], index[&l.to], cocycle[e]));
        arcs.push((index[&l.to], index[&l.from], -cocycle[e]));
    }

    let ref_wind: i64 = {
        let mut w = 0;
        for s in &reference.steps {
            w += if s.forward { cocycle[s.edge] } else { -cocycle[s.edge] };
        }
        w
    };
    assert!(ref_wind != 0, "reference loop has zero winding");
    let mut lambda = ratio(reference.steps.len() as i64, ref_wind.abs());

    loop {
        match negative_cycle(vertices.len(), &arcs, lambda) {
            None => return lambda,
            Some((len, wind)) => {
                debug_assert!(wind > 0);
                let better = ratio(len, wind);
                debug_assert!(better < lambda);
                lambda = better;
            }
        }
    }
}

/// Bellman–Ford negative-cycle detection under weight `1 − λ·wind`.
/// Returns the (length, winding) of a cycle strictly below λ, if any.
fn negative_cycle(n: usize, arcs: &[(usize, usize, i64)], lambda: Rational) -> Option<(i64, i64)> {
    let weight = |wind: i64| Rational::from_integer(1) - lambda * Rational::from_integer(wind);
    let mut dist = vec![Rational::from_integer(0); n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut touched = 0usize;
    for round in 0..=n {
        let mut any = false;
        for (ai, &(u, v, wind)) in arcs.iter().enumerate() {
            let cand = dist[u] + weight(wind);
            if cand < dist[v] {
                dist[v] = cand;
                pred[v] = Some(ai);
                any = true;
                touched = v;
            }
        }
        if !any {
            return None;
        }
        let _ = round;
    }
    // A vertex relaxed on round n sits on or behind a negative cycle.
    let mut at = touched;
    for _ in 0..n {
        at = arcs[pred[at].expect("predecessor missing")].0;
    }
    // Collect the cycle through `at`.
    let mut len = 0i64;
    let mut wind = 0i64;
    let mut cur = at;
    loop {
        let ai = pred[cur].unwrap();
        let (u, _, w) = arcs[ai];
        len += 1;
        wind += w;
        cur = u;
        if cur == at {
            break;
        }
    }
    if wind < 0 {
        // traversing the cycle backwards flips the winding, not the length
        wind = -wind;
    }
    Some((len, wind))
}

/// Independent re-derivation of the minimum ratio: scan deck translates in a
/// window and take `min d(ṽ, σᵏṽ)/k`. The minimum is attained by a closed
/// walk whose winding and level excursion are bounded by the edge count, so
/// the window below is large enough; stability under K+1 is asserted.
pub fn min_ratio_window_scan(complex: &LabeledComplex, cocycle: &[i64]) -> Rational {
    let scan = |k_levels: i64| -> Rational {
        let cover = CoverWindow::new(complex, cocycle, k_levels);
        let mut best: Option<Rational> = None;
        let k_max = cocycle.iter().map(|c| c.abs()).sum::<i64>().max(1).min(k_levels - 1);
        for &v in cover.base_vertices() {
            let from = LiftedVertex { base: v, level: 0 };
            let dists = cover.distances(from);
            for k in 1..=k_max {
                for sign in [1i64, -1] {
                    let to = LiftedVertex { base: v, level: k * sign };
                    if let Some(d) = dists[cover.dense_index(to)] {
                        let r = ratio(d as i64, k);
                        if best.map_or(true, |b| r < b) {
                            best = Some(r);
                        }
                    }
                }
            }
        }
        best.expect("no winding loop found in window scan")
    };
    let e = complex.edges().count() as i64;
    let maxc = max_cocycle(cocycle);
    let k = 2 * e * maxc + 2;
    let a = scan(k);
    let b = scan(k + 1);
    assert_eq!(a, b, "window scan not stable under K+1");
    a
}

/// Least length over loops of winding ±1, with a witness loop.
pub fn shortest_representative(complex: &LabeledComplex, cocycle: &[i64], reference: &PathInComplex) -> (u64, PathInComplex) {
    if is_plain_cycle(complex) {
        let e = complex.edges().count() as u64;
        // the cycle itself, traced from the reference start
        return (e, reference.clone());
    }
    let maxc = max_cocycle(cocycle);
    let bound = reference.steps.len() as i64;
    let k = bound * maxc + 2;
    let cover = CoverWindow::new(complex, cocycle, k);
    let mut best: Option<(u64, PathInComplex)> = None;
    for &v in cover.base_vertices() {
        let from = LiftedVertex { base: v, level: 0 };
        for level in [1i64, -1] {
            let to = LiftedVertex { base: v, level };
            if let Some(path) = cover.geodesic(from, to) {
                let d = path.steps.len() as u64;
                if best.as_ref().map_or(true, |(b, _)| d < *b) {
                    best = Some((d, path));
                }
            }
        }
    }
    best.expect("boundary has no representative loop")
}

/// Normalized graph metric of a path: geodesic distance between the lifts of
/// its endpoints (pinned by the path's own lift), divided by the relator
/// length.
pub fn graph_length(geo: &BoundaryGeometry, path: &PathInComplex) -> Rational {
    let d = lifted_endpoint_distance(geo.complex, geo.cocycle, path);
    ratio(d as i64, 1) / geo.length
}

/// Edge distance in the cover between a path's endpoint lifts.
pub fn lifted_endpoint_distance(complex: &LabeledComplex, cocycle: &[i64], path: &PathInComplex) -> u64 {
    let maxc = max_cocycle(cocycle);
    let k = (path.steps.len() as i64) * maxc + 2;
    let cover = CoverWindow::new(complex, cocycle, k);
    let (from, to) = cover.lift(path, 0);
    cover
        .distance(from, to)
        .expect("path endpoints disconnected in cover window")
}

/// Outcome of removing an open ball around one cover vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalProfile {
    pub radius: u64,
    pub removed_vertices: usize,
    pub removed_edges: usize,
    pub ends_connected: bool,
    pub num_components: usize,
    /// Sizes of the components not touching either window fringe.
    pub interior_component_sizes: Vec<usize>,
}

/// Removes `{w : d(ṽ, w) < r} ∪ {ṽ}` from a window of the cover centered at
/// level 0 and reports connectivity. The window is sized from `r` with one
/// fundamental domain of margin and enlarged until the verdict is stable.
pub fn ball_removal_profile(
    complex: &LabeledComplex,
    cocycle: &[i64],
    center: CellId,
    radius: u64,
) -> RemovalProfile {
    let maxc = max_cocycle(cocycle);
    let v = complex.vertices().count() as i64;
    let mut k = (radius as i64 + v) * maxc + 2;
    let mut profile = profile_at_window(complex, cocycle, center, radius, k);
    loop {
        let next = profile_at_window(complex, cocycle, center, radius, k + 1);
        if next.ends_connected == profile.ends_connected
            && next.num_components == profile.num_components
            && next.removed_vertices == profile.removed_vertices
        {
            return profile;
        }
        k += 1;
        profile = next;
    }
}

fn profile_at_window(
    complex: &LabeledComplex,
    cocycle: &[i64],
    center: CellId,
    radius: u64,
    k: i64,
) -> RemovalProfile {
    let cover = CoverWindow::new(complex, cocycle, k);
    let center = LiftedVertex { base: center, level: 0 };
    let dists = cover.distances(center);
    let n = cover.vertex_count();
    let mut removed = vec![false; n];
    let mut removed_vertices = 0usize;
    for i in 0..n {
        let inside = match dists[i] {
            Some(d) => d < radius,
            None => false,
        } || cover.vertex_from_dense(i) == center;
        if inside {
            removed[i] = true;
            removed_vertices += 1;
        }
    }
    // Count removed (open) cover edges: lifted edges with a removed endpoint.
    let mut removed_edges = 0usize;
    for e in complex.edges() {
        let l = complex.edge_label(e);
        for level in -k..=k {
            let from = LiftedVertex { base: l.from, level };
            let to = LiftedVertex { base: l.to, level: level + cocycle[e] };
            if !cover.contains(to) {
                continue;
            }
            if removed[cover.dense_index(from)] || removed[cover.dense_index(to)] {
                removed_edges += 1;
            }
        }
    }
    let (comp, num_components) = cover.components_after_removal(&removed);
    // The two ends are connected iff some far-left vertex shares a component
    // with some far-right vertex.
    let fringe = |level: i64| -> Vec<usize> {
        cover
            .base_vertices()
            .iter()
            .map(|&b| cover.dense_index(LiftedVertex { base: b, level }))
            .filter(|&i| !removed[i])
            .collect()
    };
    let left = fringe(-k);
    let right = fringe(k);
    let ends_connected =
        left.iter().any(|&i| right.iter().any(|&j| comp[i] != usize::MAX && comp[i] == comp[j]));
    // Component sizes, excluding components that reach either fringe.
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        if comp[i] != usize::MAX {
            *sizes.entry(comp[i]).or_insert(0) += 1;
        }
    }
    let mut boundary_comps: Vec<usize> = Vec::new();
    for &i in left.iter().chain(right.iter()) {
        boundary_comps.push(comp[i]);
    }
    let interior_component_sizes: Vec<usize> = {
        let mut v: Vec<usize> = sizes
            .iter()
            .filter(|(id, _)| !boundary_comps.contains(id))
            .map(|(_, &s)| s)
            .collect();
        v.sort_unstable();
        v
    };
    RemovalProfile {
        radius,
        removed_vertices,
        removed_edges,
        ends_connected,
        num_components,
        interior_component_sizes,
    }
}

/// Least radius whose ball removal at `center` disconnects the two ends.
pub fn disconnect_radius(complex: &LabeledComplex, cocycle: &[i64], center: CellId) -> u64 {
    let mut r = 0;
    loop {
        let p = ball_removal_profile(complex, cocycle, center, r);
        if !p.ends_connected {
            return r;
        }
        r += 1;
        assert!(r < 10_000, "no disconnecting radius found");
    }
}

/// Width: the max over base vertices of the least disconnecting ball radius.
pub fn width(complex: &LabeledComplex, cocycle: &[i64]) -> u64 {
    if is_plain_cycle(complex) {
        return 0;
    }
    complex
        .vertices()
        .map(|v| disconnect_radius(complex, cocycle, v))
        .max()
        .expect("boundary has no vertices")
}

// ---------------------------------------------------------------------------
// Relator metrics
// ---------------------------------------------------------------------------

/// A relator metric: assigns a nonnegative rational to every boundary path.
/// The normalized graph metric always satisfies the six contract properties;
/// custom table metrics are checked by [`check_metric_contract`].
pub trait RelatorMetric: Send + Sync {
    fn eval(&self, geo: &BoundaryGeometry, path: &PathInComplex) -> Rational;
    fn name(&self) -> String;
    /// True when this metric provably equals the normalized graph metric;
    /// lets checkers use distance-table lookups instead of per-path BFS.
    fn is_normalized_graph_metric(&self) -> bool {
        false
    }
}

/// The normalized graph metric `|U|_R`.
pub struct GraphMetric;

impl RelatorMetric for GraphMetric {
    fn eval(&self, geo: &BoundaryGeometry, path: &PathInComplex) -> Rational {
        graph_length(geo, path)
    }

    fn name(&self) -> String {
        "graph".to_string()
    }

    fn is_normalized_graph_metric(&self) -> bool {
        true
    }
}

/// A table-driven metric: explicit values on selected paths (keyed by start
/// vertex and spelled word), falling back to the graph metric elsewhere.
pub struct TableMetric {
    pub overrides: BTreeMap<(CellId, crate::word::Word), Rational>,
}

impl RelatorMetric for TableMetric {
    fn eval(&self, geo: &BoundaryGeometry, path: &PathInComplex) -> Rational {
        let key = (path.start, path.word(geo.complex));
        match self.overrides.get(&key) {
            Some(&v) => v,
            None => graph_length(geo, path),
        }
    }

    fn name(&self) -> String {
        "table".to_string()
    }
}

/// Serializable metric choice carried by presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricSpec {
    Graph,
    Table(BTreeMap<(CellId, crate::word::Word), Rational>),
}

impl RelatorMetric for MetricSpec {
    fn eval(&self, geo: &BoundaryGeometry, path: &PathInComplex) -> Rational {
        match self {
            MetricSpec::Graph => graph_length(geo, path),
            MetricSpec::Table(overrides) => {
                let key = (path.start, path.word(geo.complex));
                match overrides.get(&key) {
                    Some(&v) => v,
                    None => graph_length(geo, path),
                }
            }
        }
    }

    fn name(&self) -> String {
        match self {
            MetricSpec::Graph => "graph".to_string(),
            MetricSpec::Table(_) => "table".to_string(),
        }
    }

    fn is_normalized_graph_metric(&self) -> bool {
        matches!(self, MetricSpec::Graph)
    }
}

/// One metric-contract violation.
#[derive(Clone, Debug)]
pub struct MetricViolation {
    pub property: u8,
    pub description: String,
}

#[derive(Debug, Default)]
pub struct MetricContractReport {
    pub violations: Vec<MetricViolation>,
    pub checked_paths: usize,
    pub checked_pairs: usize,
}

impl MetricContractReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates the six relator-metric properties on the sample paths:
/// 1. equal on paths bounding a contractible loop (same endpoints+winding),
/// 2. nonnegative, zero exactly on contractible loops,
/// 3. inversion invariance,
/// 4. subadditivity over concatenation,
/// 5. loops measure at least their absolute winding number,
/// 6. invariance under the supplied boundary automorphisms (cell maps).
pub fn check_metric_contract(
    geo: &BoundaryGeometry,
    metric: &dyn RelatorMetric,
    automorphisms: &[Vec<CellId>],
    samples: &[PathInComplex],
    max_violations: usize,
) -> MetricContractReport {
    let mut report = MetricContractReport::default();
    let winding = |p: &PathInComplex| -> i64 {
        p.steps.iter().map(|s| if s.forward { geo.cocycle[s.edge] } else { -geo.cocycle[s.edge] }).sum()
    };

    // Distance lookups for the graph-metric fast path.
    let maxc = max_cocycle(geo.cocycle);
    let max_len = samples.iter().map(|p| p.len()).max().unwrap_or(0) as i64;
    let k = (2 * max_len + 1) * maxc + 2;
    let cover = CoverWindow::new(geo.complex, geo.cocycle, k);
    let mut dist_cache: HashMap<CellId, Vec<Option<u64>>> = HashMap::new();
    let mut dval = |p: &PathInComplex, w: i64| -> Rational {
        if metric.is_normalized_graph_metric() {
            let dists = dist_cache
                .entry(p.start)
                .or_insert_with(|| cover.distances(LiftedVertex { base: p.start, level: 0 }));
            let to = LiftedVertex { base: p.end, level: w };
            let d = dists[cover.dense_index(to)].expect("endpoints disconnected");
            ratio(d as i64, 1) / geo.length
        } else {
            metric.eval(geo, p)
        }
    };

    let windings: Vec<i64> = samples.iter().map(&winding).collect();
    let values: Vec<Rational> = samples.iter().zip(&windings).map(|(p, &w)| dval(p, w)).collect();
    report.checked_paths = samples.len();

    let zero = Rational::from_integer(0);
    for ((p, &w), &v) in samples.iter().zip(&windings).zip(&values) {
        // property 2
        if v < zero {
            report.violations.push(MetricViolation { property: 2, description: format!("negative value {v} on a path") });
        }
        let contractible = p.is_closed() && w == 0;
        if contractible && v != zero {
            report
                .violations
                .push(MetricViolation { property: 2, description: format!("contractible loop has value {v}") });
        }
        if !contractible && v == zero {
            report
                .violations
                .push(MetricViolation { property: 2, description: "non-contractible path has value 0".to_string() });
        }
        // property 5
        if p.is_closed() && v < ratio(w.abs(), 1) {
            report
                .violations
                .push(MetricViolation { property: 5, description: format!("loop of winding {w} has value {v}") });
        }
        // property 3
        let rev = p.reverse();
        let rv = dval(&rev, -w);
        if rv != v {
            report
                .violations
                .push(MetricViolation { property: 3, description: format!("value {v} but reverse value {rv}") });
        }
        if report.violations.len() >= max_violations {
            return report;
        }
    }

    // property 1: group paths by (start, end, winding)
    let mut groups: BTreeMap<(CellId, CellId, i64), Vec<usize>> = BTreeMap::new();
    for (i, (p, &w)) in samples.iter().zip(&windings).enumerate() {
        groups.entry((p.start, p.end, w)).or_default().push(i);
    }
    for ((s, e, w), members) in &groups {
        let first = values[members[0]];
        for &m in &members[1..] {
            if values[m] != first {
                report.violations.push(MetricViolation {
                    property: 1,
                    description: format!(
                        "paths {s}->{e} of winding {w} measure {first} and {}",
                        values[m]
                    ),
                });
                if report.violations.len() >= max_violations {
                    return report;
                }
                break;
            }
        }
    }

    // property 4: all composable ordered pairs
    'outer: for (i, p) in samples.iter().enumerate() {
        for (j, q) in samples.iter().enumerate() {
            if p.end != q.start {
                continue;
            }
            report.checked_pairs += 1;
            let sum = values[i] + values[j];
            let joined_w = windings[i] + windings[j];
            let joined = p.concat(q);
            let jv = dval(&joined, joined_w);
            if jv > sum {
                report.violations.push(MetricViolation {
                    property: 4,
                    description: format!("d(UV)={jv} exceeds d(U)+d(V)={sum}"),
                });
                if report.violations.len() >= max_violations {
                    break 'outer;
                }
            }
        }
    }

    // property 6: automorphism invariance
    for auto in automorphisms {
        for (i, p) in samples.iter().enumerate() {
            let mapped = PathInComplex {
                start: auto[p.start],
                steps: p
                    .steps
                    .iter()
                    .map(|s| crate::complex::PathStep { edge: auto[s.edge], forward: s.forward })
                    .collect(),
                end: auto[p.end],
            };
            let w = winding(&mapped);
            let mv = dval(&mapped, w);
            if mv != values[i] {
                report.violations.push(MetricViolation {
                    property: 6,
                    description: format!("value {} maps to {mv} under an automorphism", values[i]),
                });
                if report.violations.len() >= max_violations {
                    return report;
                }
            }
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::circle_complex;
    use crate::word::{Alphabet, Word};

    fn circle(word: &str) -> (LabeledComplex, Vec<i64>, PathInComplex) {
        let alphabet = Alphabet::new(["a", "b", "c"]).unwrap();
        let w = Word::parse(&alphabet, word).unwrap();
        let (c, base) = circle_complex(&w);
        let data = c.circle_data().unwrap();
        let reference = c.trace_word(base, &w).unwrap();
        (c, data.cocycle, reference)
    }

    #[test]
    fn circle_metrics_are_closed_form() {
        let (c, cocycle, reference) = circle("(ab)^5");
        assert_eq!(relator_length(&c, &cocycle, &reference), ratio(10, 1));
        assert_eq!(width(&c, &cocycle), 0);
        let (len, witness) = shortest_representative(&c, &cocycle, &reference);
        assert_eq!(len, 10);
        assert_eq!(witness.steps.len(), 10);
    }

    #[test]
    fn window_scan_matches_parametric_on_circles() {
        let (c, cocycle, reference) = circle("abc");
        assert_eq!(min_ratio_window_scan(&c, &cocycle), ratio(3, 1));
        assert_eq!(min_ratio_parametric(&c, &cocycle, &reference), ratio(3, 1));
    }

    #[test]
    fn graph_length_of_full_circle_is_one() {
        let (c, cocycle, reference) = circle("(ab)^3");
        let geo = BoundaryGeometry { complex: &c, cocycle: &cocycle, length: ratio(6, 1) };
        assert_eq!(graph_length(&geo, &reference), ratio(1, 1));
    }

    #[test]
    fn zero_metric_fails_properties_two_and_five() {
        struct Zero;
        impl RelatorMetric for Zero {
            fn eval(&self, _: &BoundaryGeometry, _: &PathInComplex) -> Rational {
                ratio(0, 1)
            }
            fn name(&self) -> String {
                "zero".into()
            }
        }
        let (c, cocycle, reference) = circle("ab");
        let geo = BoundaryGeometry { complex: &c, cocycle: &cocycle, length: ratio(2, 1) };
        let report = check_metric_contract(&geo, &Zero, &[], &[reference], 100);
        let props: Vec<u8> = report.violations.iter().map(|v| v.property).collect();
        assert!(props.contains(&2));
        assert!(props.contains(&5));
    }
}
