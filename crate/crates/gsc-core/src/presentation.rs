//! Measured presentations: an alphabet, ranked measured relators closed
//! under subcones, and the constant tuple the axioms quantify over. Also the
//! built-in example library and the Poincaré construction.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{CellId, ComplexBuilder, LabeledComplex};
use crate::metric::{MetricSpec, RelatorMetric};
use crate::relator::{
    attach_relator, readings_up_to_automorphism, relator_isomorphic, Attachment, GeneralRelator,
    RelatorBuildError, RelatorRecipe,
};
use crate::word::{Alphabet, Sign, Word};
use crate::{ratio, Rational};

/// The five axiom constants plus the exponent used by Burnside-type builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constants {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    pub epsilon: Rational,
    pub n: u64,
}

impl Constants {
    /// The constant tuple used for the Burnside-type rank-2 stage:
    /// α = 1/12, β = 1/210, γ = 1/70, δ = 1/30, ε = 1/630, n = 1260.
    pub fn burnside_defaults() -> Constants {
        Constants {
            alpha: ratio(1, 12),
            beta: ratio(1, 210),
            gamma: ratio(1, 70),
            delta: ratio(1, 30),
            epsilon: ratio(1, 630),
            n: 1260,
        }
    }

    /// The relationship axiom: β ≤ α, γ, δ, ε < α, and 2γ + δ ≤ α ≤ 1/6.
    pub fn relationship_violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.beta <= self.alpha) {
            v.push(format!("beta = {} exceeds alpha = {}", self.beta, self.alpha));
        }
        for (name, value) in [("gamma", self.gamma), ("delta", self.delta), ("epsilon", self.epsilon)] {
            if !(value < self.alpha) {
                v.push(format!("{name} = {value} is not below alpha = {}", self.alpha));
            }
        }
        if !(self.gamma * ratio(2, 1) + self.delta <= self.alpha) {
            v.push(format!(
                "2*gamma + delta = {} exceeds alpha = {}",
                self.gamma * ratio(2, 1) + self.delta,
                self.alpha
            ));
        }
        if !(self.alpha <= ratio(1, 6)) {
            v.push(format!("alpha = {} exceeds 1/6", self.alpha));
        }
        v
    }

    /// Threshold of the Dehn-reduction decision theorem: 3α + 2γ + δ ≤ 1/2.
    pub fn supports_dehn_decision(&self) -> bool {
        self.alpha * ratio(3, 1) + self.gamma * ratio(2, 1) + self.delta <= ratio(1, 2)
    }
}

/// One relator together with its measuring metric.
#[derive(Clone, Debug)]
pub struct MeasuredRelator {
    pub relator: GeneralRelator,
    pub metric: MetricSpec,
}

impl MeasuredRelator {
    pub fn graph(relator: GeneralRelator) -> MeasuredRelator {
        MeasuredRelator { relator, metric: MetricSpec::Graph }
    }

    pub fn metric_value(&self, path: &crate::complex::PathInComplex) -> Rational {
        self.metric.eval(&self.relator.geometry(), path)
    }
}

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("relator `{name}` is invalid: {details}")]
    InvalidRelator { name: String, details: String },
    #[error("rank order violated: `{sub}` (rank {sub_rank}) embeds in `{sup}` (rank {sup_rank})")]
    RankOrder { sub: String, sub_rank: u32, sup: String, sup_rank: u32 },
    #[error("duplicate relator name `{0}`")]
    DuplicateName(String),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// A validated, subcone-closed measured presentation.
#[derive(Clone, Debug)]
pub struct MeasuredPresentation {
    pub alphabet: Alphabet,
    pub relators: Vec<MeasuredRelator>,
    pub constants: Constants,
}

impl MeasuredPresentation {
    /// Validates every relator, closes the set under subcones (newly added
    /// relators get their height as rank and the graph metric), and checks
    /// the rank function against subcone containment.
    pub fn new(
        alphabet: Alphabet,
        relators: Vec<MeasuredRelator>,
        constants: Constants,
    ) -> Result<MeasuredPresentation, PresentationError> {
        let mut names = std::collections::BTreeSet::new();
        for m in &relators {
            if !names.insert(m.relator.name.clone()) {
                return Err(PresentationError::DuplicateName(m.relator.name.clone()));
            }
            let report = m.relator.validate();
            if !report.is_valid() {
                return Err(PresentationError::InvalidRelator {
                    name: m.relator.name.clone(),
                    details: format!("{:?}", report.violations),
                });
            }
        }
        let mut all = relators;
        // close under subcones + verify the rank order
        let mut i = 0;
        while i < all.len() {
            let parent_name = all[i].relator.name.clone();
            let parent_rank = all[i].relator.rank;
            for (_, sub) in all[i].relator.subcones() {
                match all.iter().find(|m| relator_isomorphic(&m.relator, &sub)) {
                    Some(existing) => {
                        if existing.relator.rank >= parent_rank {
                            return Err(PresentationError::RankOrder {
                                sub: existing.relator.name.clone(),
                                sub_rank: existing.relator.rank,
                                sup: parent_name,
                                sup_rank: parent_rank,
                            });
                        }
                    }
                    None => {
                        let mut sub = sub;
                        sub.rank = sub.height().min(parent_rank.saturating_sub(1)).max(2);
                        all.push(MeasuredRelator::graph(sub));
                    }
                }
            }
            i += 1;
        }
        Ok(MeasuredPresentation { alphabet, relators: all, constants })
    }

    pub fn with_constants(mut self, constants: Constants) -> MeasuredPresentation {
        self.constants = constants;
        self
    }

    pub fn relator(&self, name: &str) -> Option<&MeasuredRelator> {
        self.relators.iter().find(|m| m.relator.name == name)
    }

    pub fn relators_of_rank_at_most(&self, k: u32) -> Vec<&MeasuredRelator> {
        self.relators.iter().filter(|m| m.relator.rank <= k).collect()
    }

    /// A word presentation ⟨A | reference words⟩ for coset enumeration.
    pub fn relator_words(&self) -> Vec<Word> {
        self.relators.iter().map(|m| m.relator.reference_word()).collect()
    }

    pub fn max_rank(&self) -> u32 {
        self.relators.iter().map(|m| m.relator.rank).max().unwrap_or(1)
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("attachment path `{path}` unreadable at offset {offset}: {details}")]
    AttachmentUnreadable { path: String, offset: usize, details: String },
    #[error("attachment path `{path}` has {readings} inequivalent readings in `{sub}`")]
    AttachmentAmbiguous { path: String, sub: String, readings: usize },
    #[error("relator construction failed: {0}")]
    Relator(#[from] RelatorBuildError),
    #[error("coxeter matrix must be symmetric with unit diagonal and off-diagonal entries at least 2")]
    BadCoxeterMatrix,
}

/// Builds a composite relator: a base cycle with subrelators glued along
/// subpaths. The subrelator-side reading of each path word must be unique up
/// to the subrelator's automorphisms; the base-side path is traced in the
/// structure built so far, starting at the base-cycle position `offset`.
pub fn composite_relator(
    name: impl Into<String>,
    rank: u32,
    cycle: &Word,
    attachments: &[(&GeneralRelator, Word, usize)],
) -> Result<GeneralRelator, BuildError> {
    let name = name.into();
    let mut builder = ComplexBuilder::new();
    let n = cycle.len();
    let verts: Vec<usize> = (0..n).map(|_| builder.new_vertex()).collect();
    for (i, &letter) in cycle.letters.iter().enumerate() {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let (from, to) = match letter.sign {
            Sign::Plus => (a, b),
            Sign::Minus => (b, a),
        };
        builder.new_edge(letter.gen, from, to);
    }

    let mut recipe_attachments = Vec::new();
    for (sub, path_word, offset) in attachments {
        let offset = offset % n;
        // resolve the subrelator-side start vertex
        let readings = readings_up_to_automorphism(sub, path_word);
        if readings.len() != 1 {
            return Err(BuildError::AttachmentAmbiguous {
                path: format!("{path_word:?}"),
                sub: sub.name.clone(),
                readings: readings.len(),
            });
        }
        // base-side path start: the (folded) base-cycle vertex at `offset`;
        // the path itself must be readable in the current structure
        let start = builder.find(verts[offset]);
        let mut at = start;
        for (k, &letter) in path_word.letters.iter().enumerate() {
            let next = match letter.sign {
                Sign::Plus => builder.out_edge(at, letter.gen).map(|e| builder.edge_endpoints(e).2),
                Sign::Minus => builder.in_edge(at, letter.gen).map(|e| builder.edge_endpoints(e).1),
            };
            match next {
                Some(v) => at = v,
                None => {
                    return Err(BuildError::AttachmentUnreadable {
                        path: format!("{path_word:?}"),
                        offset,
                        details: format!("letter {k} has no matching edge"),
                    })
                }
            }
        }
        attach_relator(&mut builder, sub, readings[0], start);
        recipe_attachments.push(Attachment {
            sub_name: sub.name.clone(),
            path_word: path_word.clone(),
            offset,
        });
    }

    let (complex, map) = builder.finalize();
    let base = map[verts[0]];
    Ok(GeneralRelator::from_boundary(
        name,
        complex,
        rank,
        base,
        RelatorRecipe::Composite { cycle: cycle.clone(), attachments: recipe_attachments },
    )?)
}

/// The built-in example library.
pub mod examples {
    use super::*;

    fn parse(alphabet: &Alphabet, text: &str) -> Word {
        Word::parse(alphabet, text).expect("builtin word parses")
    }

    /// ⟨S, T | S², (ST)³⟩: the square relator plus a hexagon carrying one
    /// square lobe on each S edge.
    pub fn modular() -> Result<MeasuredPresentation, PresentationError> {
        let alphabet = Alphabet::new(["S", "T"]).unwrap();
        let s = parse(&alphabet, "S");
        let st = parse(&alphabet, "ST");
        let sq_s = GeneralRelator::circle("S^2", &s, 2, 2).map_err(BuildError::from)?;
        let tri = composite_relator(
            "(ST)^3",
            3,
            &st.pow(3),
            &[(&sq_s, s.clone(), 0), (&sq_s, s.clone(), 2), (&sq_s, s.clone(), 4)],
        )?;
        let constants = Constants {
            alpha: ratio(1, 6),
            beta: ratio(1, 6),
            gamma: ratio(1, 30),
            delta: ratio(1, 30),
            epsilon: ratio(1, 30),
            n: 3,
        };
        MeasuredPresentation::new(
            alphabet,
            vec![MeasuredRelator::graph(sq_s), MeasuredRelator::graph(tri)],
            constants,
        )
    }

    /// ⟨a, b | a², b², (ab)^n⟩ with the involution lobes built in.
    pub fn dihedral(n: u32) -> Result<MeasuredPresentation, PresentationError> {
        assert!(n >= 2);
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        let a = parse(&alphabet, "a");
        let b = parse(&alphabet, "b");
        let ab = parse(&alphabet, "ab");
        let sq_a = GeneralRelator::circle("a^2", &a, 2, 2).map_err(BuildError::from)?;
        let sq_b = GeneralRelator::circle("b^2", &b, 2, 2).map_err(BuildError::from)?;
        let mut attachments: Vec<(&GeneralRelator, Word, usize)> = Vec::new();
        for i in 0..n as usize {
            attachments.push((&sq_a, a.clone(), 2 * i));
            attachments.push((&sq_b, b.clone(), 2 * i + 1));
        }
        let pow = composite_relator(format!("(ab)^{n}"), 3, &ab.pow(n as usize), &attachments)?;
        let constants = Constants {
            alpha: ratio(1, 7),
            beta: ratio(1, 7),
            gamma: ratio(1, 50),
            delta: ratio(1, 50),
            epsilon: ratio(1, 50),
            n: n as u64,
        };
        MeasuredPresentation::new(
            alphabet,
            vec![MeasuredRelator::graph(sq_a), MeasuredRelator::graph(sq_b), MeasuredRelator::graph(pow)],
            constants,
        )
    }

    /// A Coxeter presentation from a symmetric matrix with unit diagonal;
    /// `None` entries add no relation.
    pub fn coxeter(matrix: &[Vec<Option<u32>>]) -> Result<MeasuredPresentation, PresentationError> {
        let k = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != k || row[i] != Some(1) {
                return Err(BuildError::BadCoxeterMatrix.into());
            }
            for (j, &m) in row.iter().enumerate() {
                if m != matrix[j][i] || (i != j && m.is_some_and(|x| x < 2)) {
                    return Err(BuildError::BadCoxeterMatrix.into());
                }
            }
        }
        let names: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
        let alphabet = Alphabet::new(names.clone()).unwrap();
        let squares: Vec<GeneralRelator> = (0..k)
            .map(|i| {
                let g = parse(&alphabet, &names[i]);
                GeneralRelator::circle(format!("{}^2", names[i]), &g, 2, 2).map_err(BuildError::from)
            })
            .collect::<Result<_, _>>()?;
        let mut relators: Vec<MeasuredRelator> = squares.iter().cloned().map(MeasuredRelator::graph).collect();
        let mut max_m = 2u64;
        for i in 0..k {
            for j in i + 1..k {
                let Some(m) = matrix[i][j] else { continue };
                max_m = max_m.max(m as u64);
                let gi = parse(&alphabet, &names[i]);
                let gj = parse(&alphabet, &names[j]);
                let cycle = gi.concat(&gj).pow(m as usize);
                let mut attachments: Vec<(&GeneralRelator, Word, usize)> = Vec::new();
                for t in 0..m as usize {
                    attachments.push((&squares[i], gi.clone(), 2 * t));
                    attachments.push((&squares[j], gj.clone(), 2 * t + 1));
                }
                let r = composite_relator(
                    format!("({}{})^{m}", names[i], names[j]),
                    3,
                    &cycle,
                    &attachments,
                )?;
                relators.push(MeasuredRelator::graph(r));
            }
        }
        let constants = Constants {
            alpha: ratio(1, 7),
            beta: ratio(1, 7),
            gamma: ratio(1, 50),
            delta: ratio(1, 50),
            epsilon: ratio(1, 50),
            n: max_m,
        };
        MeasuredPresentation::new(alphabet, relators, constants)
    }

    /// ⟨a, b, c | a², b², (ab)⁴, (abcb)²⟩ with the (abcb)² relator carrying a
    /// copy of the (ab)⁴ relator along each path labeled bab; its apex has
    /// height 4.
    pub fn height4() -> Result<MeasuredPresentation, PresentationError> {
        let alphabet = Alphabet::new(["a", "b", "c"]).unwrap();
        let a = parse(&alphabet, "a");
        let b = parse(&alphabet, "b");
        let ab = parse(&alphabet, "ab");
        let bab = parse(&alphabet, "bab");
        let sq_a = GeneralRelator::circle("a^2", &a, 2, 2).map_err(BuildError::from)?;
        let sq_b = GeneralRelator::circle("b^2", &b, 2, 2).map_err(BuildError::from)?;
        let mut attachments: Vec<(&GeneralRelator, Word, usize)> = Vec::new();
        for i in 0..4 {
            attachments.push((&sq_a, a.clone(), 2 * i));
            attachments.push((&sq_b, b.clone(), 2 * i + 1));
        }
        let d8 = composite_relator("(ab)^4", 3, &ab.pow(4), &attachments)?;
        let abcb2 = parse(&alphabet, "(abcb)^2");
        let r4 = composite_relator(
            "(abcb)^2",
            4,
            &abcb2,
            &[(&d8, bab.clone(), 3), (&d8, bab.clone(), 7)],
        )?;
        let constants = Constants {
            alpha: ratio(1, 7),
            beta: ratio(1, 7),
            gamma: ratio(1, 50),
            delta: ratio(1, 50),
            epsilon: ratio(1, 50),
            n: 4,
        };
        MeasuredPresentation::new(
            alphabet,
            vec![
                MeasuredRelator::graph(sq_a),
                MeasuredRelator::graph(sq_b),
                MeasuredRelator::graph(d8),
                MeasuredRelator::graph(r4),
            ],
            constants,
        )
    }

    /// ⟨a, b, c | (ab)³, (bc)³, (ca)³, W⟩ with W = babcba⁻¹c⁻¹ realized as
    /// the cone over a three-hexagon strip glued into a band with a flip.
    /// The declared α = 1/2 is what makes the circular construction on W
    /// stop at this strip; the constant tuple deliberately fails the
    /// relationship axiom and the presentation is the library's negative
    /// control.
    pub fn moebius() -> Result<MeasuredPresentation, PresentationError> {
        let alphabet = Alphabet::new(["a", "b", "c"]).unwrap();
        let hex_ab = GeneralRelator::circle("(ab)^3", &parse(&alphabet, "ab"), 3, 2).map_err(BuildError::from)?;
        let hex_bc = GeneralRelator::circle("(bc)^3", &parse(&alphabet, "bc"), 3, 2).map_err(BuildError::from)?;
        let hex_ca = GeneralRelator::circle("(ca)^3", &parse(&alphabet, "ca"), 3, 2).map_err(BuildError::from)?;
        let w = parse(&alphabet, "babcba^-1c^-1");
        let moebius = composite_relator(
            "moebius",
            3,
            &w,
            &[
                (&hex_ab, parse(&alphabet, "bab"), 0),
                (&hex_bc, parse(&alphabet, "bcb"), 2),
                (&hex_ca, parse(&alphabet, "a^-1c^-1"), 5),
            ],
        )?;
        let constants = Constants {
            alpha: ratio(1, 2),
            beta: ratio(1, 2),
            gamma: ratio(1, 2),
            delta: ratio(1, 30),
            epsilon: ratio(1, 30),
            n: 3,
        };
        MeasuredPresentation::new(
            alphabet,
            vec![
                MeasuredRelator::graph(hex_ab),
                MeasuredRelator::graph(hex_bc),
                MeasuredRelator::graph(hex_ca),
                MeasuredRelator::graph(moebius),
            ],
            constants,
        )
    }

    /// The free presentation on `m` generators.
    pub fn free(m: usize) -> Result<MeasuredPresentation, PresentationError> {
        let names: Vec<String> = (0..m).map(|i| format!("x{i}")).collect();
        let alphabet = Alphabet::new(names).unwrap();
        let constants = Constants {
            alpha: ratio(1, 12),
            beta: ratio(1, 12),
            gamma: ratio(1, 50),
            delta: ratio(1, 50),
            epsilon: ratio(1, 50),
            n: 2,
        };
        MeasuredPresentation::new(alphabet, Vec::new(), constants)
    }

    /// Dispatch by name: `modular`, `dihedral<n>`, `height4`, `moebius`,
    /// `free<m>`, `coxeter` (equilateral large-type triangle).
    pub fn by_name(name: &str) -> Result<MeasuredPresentation, PresentationError> {
        if name == "modular" {
            return modular();
        }
        if name == "height4" {
            return height4();
        }
        if name == "moebius" {
            return moebius();
        }
        if name == "coxeter" {
            let m = |x: u32| Some(x);
            return coxeter(&[
                vec![m(1), m(3), m(3)],
                vec![m(3), m(1), m(3)],
                vec![m(3), m(3), m(1)],
            ]);
        }
        if let Some(rest) = name.strip_prefix("dihedral") {
            if let Ok(n) = rest.parse::<u32>() {
                return dihedral(n);
            }
        }
        if let Some(rest) = name.strip_prefix("free") {
            if let Ok(m) = rest.parse::<usize>() {
                return free(m);
            }
        }
        Err(BuildError::UnknownExample(name.to_string()).into())
    }

    pub const NAMES: &[&str] = &["modular", "dihedral4", "coxeter", "height4", "moebius", "free2"];
}

/// The Poincaré construction: one vertex, a loop edge per generator, and the
/// relators attached in order of increasing height through their unique
/// boundary maps. Higher cells are shared, so each relator contributes
/// exactly one cell.
#[derive(Debug)]
pub struct PoincareComplex {
    pub complex: LabeledComplex,
    /// apex cell of each relator, in presentation order
    pub relator_cells: BTreeMap<String, CellId>,
}

pub fn poincare_construction(p: &MeasuredPresentation) -> PoincareComplex {
    let mut builder = ComplexBuilder::new();
    let v = builder.new_vertex();
    for gen in 0..p.alphabet.len() {
        builder.new_edge(gen, v, v);
    }
    let mut order: Vec<usize> = (0..p.relators.len()).collect();
    order.sort_by_key(|&i| (p.relators[i].relator.height(), i));
    let mut apex_builder_ids: Vec<(String, usize)> = Vec::new();
    for i in order {
        let r = &p.relators[i].relator;
        let map = attach_relator(&mut builder, r, r.base_vertex, v);
        apex_builder_ids.push((r.name.clone(), map[r.apex()]));
    }
    let (complex, map) = builder.finalize();
    let relator_cells = apex_builder_ids.into_iter().map(|(n, id)| (n, map[id])).collect();
    PoincareComplex { complex, relator_cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burnside_constants_satisfy_the_relationship_axiom() {
        let c = Constants::burnside_defaults();
        assert!(c.relationship_violations().is_empty());
        // 2γ + δ = 13/210 ≤ 1/12 ≤ 1/6
        assert_eq!(c.gamma * ratio(2, 1) + c.delta, ratio(13, 210));
        assert!(c.supports_dehn_decision());
    }

    #[test]
    fn moebius_complex_matches_the_strip() {
        let p = examples::moebius().unwrap();
        let m = p.relator("moebius").unwrap();
        let b = m.relator.boundary();
        assert_eq!(b.vertices().count(), 12);
        assert_eq!(b.edges().count(), 15);
        assert_eq!(b.cells_of_height(2).count(), 3);
        assert!(b.circle_check());
        assert!(m.relator.validate().is_valid());
    }

    #[test]
    fn dihedral_relator_is_an_octagon_with_lobes() {
        let p = examples::dihedral(4).unwrap();
        assert_eq!(p.relators.len(), 3);
        let pow = p.relator("(ab)^4").unwrap();
        let b = pow.relator.boundary();
        assert_eq!(b.vertices().count(), 8);
        assert_eq!(b.edges().count(), 16);
        assert_eq!(b.cells_of_height(2).count(), 8);
        assert_eq!(pow.relator.height(), 3);
        let heights: Vec<u32> = p.relators.iter().map(|m| m.relator.height()).collect();
        assert_eq!(heights, vec![2, 2, 3]);
    }

    #[test]
    fn modular_relator_has_three_lobes() {
        let p = examples::modular().unwrap();
        assert_eq!(p.relators.len(), 2);
        let tri = p.relator("(ST)^3").unwrap();
        let b = tri.relator.boundary();
        assert_eq!(b.vertices().count(), 6);
        assert_eq!(b.edges().count(), 9);
        assert_eq!(b.cells_of_height(2).count(), 3);
    }

    #[test]
    fn height4_example_validates() {
        let p = examples::height4().unwrap();
        let r4 = p.relator("(abcb)^2").unwrap();
        let report = r4.relator.validate();
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(r4.relator.height(), 4);
        println!("height4 counts: {:?}", report.per_height_counts);
    }

    #[test]
    fn poincare_of_dihedral_has_single_copies() {
        let p = examples::dihedral(4).unwrap();
        let pc = poincare_construction(&p);
        // one vertex, two loops, two squares, one height-3 cell
        assert_eq!(pc.complex.vertices().count(), 1);
        assert_eq!(pc.complex.edges().count(), 2);
        assert_eq!(pc.complex.cells_of_height(2).count(), 2);
        assert_eq!(pc.complex.cells_of_height(3).count(), 1);
        assert_eq!(pc.relator_cells.len(), 3);
    }

    #[test]
    fn free_presentation_poincare_is_a_wedge() {
        let p = examples::free(2).unwrap();
        let pc = poincare_construction(&p);
        assert_eq!(pc.complex.vertices().count(), 1);
        assert_eq!(pc.complex.edges().count(), 2);
        assert_eq!(pc.complex.num_cells(), 3);
    }

    #[test]
    fn coxeter_matrix_validation() {
        let bad = examples::coxeter(&[vec![Some(1), Some(1)], vec![Some(1), Some(1)]]);
        assert!(bad.is_err());
        let good = examples::coxeter(&[vec![Some(1), Some(4)], vec![Some(4), Some(1)]]).unwrap();
        assert_eq!(good.relators.len(), 3);
    }
}
