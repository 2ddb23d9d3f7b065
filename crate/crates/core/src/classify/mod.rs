//! Classification of perfect colorings under a spectral constraint by
//! alternately splitting a color with a library fiber and refining.
//!
//! Starting from the constant coloring, each round pairs every newly found
//! class `g` with every library fiber `t` lying strictly inside a color of
//! `g`, refines `(g, t)` to its coarsest equitable refinement and keeps the
//! results that satisfy the constraint. Pairs are reduced modulo the
//! stabilizer of `g` first. The loop stops when a round adds no class.

mod kirienko;
mod library;

pub use kirienko::{kirienko_count, kirienko_polynomial};
pub use library::{
    build_fiber_library, resilient_count, FiberClass, FiberLibrary, FiberSource, MAX_DATASET_N, MAX_EXHAUSTIVE_N,
};

use crate::canonical::{canonical_coloring, canonical_form, canonical_form_with_generators, extendable};
use crate::error::{Error, Result};
use crate::hypercube::{emit_hex, Coloring, ColoringJson, Dimension, Fiber};
use crate::refinement::refine_masks;
use crate::search::bits::{pull64, transpositions};
use crate::spectral::{
    correlation_immunity, degree, essential_mask, is_perfect, merge_groups, quotient_matrix, resilience,
    QuotientMatrix,
};
use library::LevelFilter;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

/// Spectral constraint on a perfect coloring of `Q_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// Degree at most `d`: every eigenvalue is at least `n - 2d`.
    DegreeMax(u32),
    /// Correlation immunity at least `t`: no eigenvalue in `n-2t..=n-2`.
    CiMin(u32),
}

impl Constraint {
    /// Bit `i` set iff Walsh level `i` may carry weight.
    pub fn allowed_levels(&self, n: u32) -> u32 {
        let all = (1u32 << (n + 1)) - 1;
        match *self {
            Constraint::DegreeMax(d) => all & ((2u32 << d.min(n)) - 1),
            Constraint::CiMin(t) => all & !(((2u32 << t.min(n)) - 1) & !1),
        }
    }

    /// The coloring meets the constraint with equality.
    pub fn is_tight(&self, degree: u32, ci: i32) -> bool {
        match *self {
            Constraint::DegreeMax(d) => degree == d,
            Constraint::CiMin(t) => ci == t as i32,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::DegreeMax(d) => write!(f, "degree <= {d}"),
            Constraint::CiMin(t) => write!(f, "correlation immunity >= {t}"),
        }
    }
}

pub(crate) fn ser_fiber_hex<S: Serializer>(t: &Fiber, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&emit_hex(t))
}

fn ser_coloring<S: Serializer>(f: &Coloring, s: S) -> std::result::Result<S::Ok, S::Error> {
    ColoringJson::from_coloring(f).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRecord {
    /// Canonical representative.
    #[serde(serialize_with = "ser_coloring")]
    pub coloring: Coloring,
    pub k: u16,
    /// Canonical form of the quotient matrix (see [`QuotientMatrix::canonical`]).
    pub matrix: QuotientMatrix,
    pub eigenvalues: Vec<(i32, u32)>,
    pub essential: u32,
    pub aut_order: u128,
    pub degree: u32,
    pub ci: i32,
    pub resilience: i32,
    /// Round in which the class was found; `0` for the constant coloring.
    pub round: usize,
}

impl ClassRecord {
    fn new(f: Coloring, aut_order: u128, round: usize) -> Result<Self> {
        let n = f.n();
        let q = quotient_matrix(&f)?;
        Ok(ClassRecord {
            k: f.k(),
            matrix: q.canonical(),
            eigenvalues: q.eigenvalues(n)?,
            essential: essential_mask(&f).count_ones(),
            aut_order,
            degree: degree(&f),
            ci: correlation_immunity(&f),
            resilience: resilience(&f),
            round,
            coloring: f,
        })
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RoundLog {
    pub round: usize,
    /// Library fibers strictly inside a color, over all processed classes.
    pub pairs: u64,
    /// Pairs left after reduction by the stabilizers.
    pub orbit_pairs: u64,
    /// Distinct refinements passing the constraint.
    pub refinements: u64,
    /// New classes by color count.
    pub new_by_k: BTreeMap<u16, usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExtendabilityCheck {
    pub pairs: u64,
    pub extendable: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub n: u32,
    pub constraint: Constraint,
    pub library_classes: usize,
    pub library_fibers: usize,
    /// Sorted by color count, then canonical string.
    pub classes: Vec<ClassRecord>,
    pub rounds: Vec<RoundLog>,
    pub extendability: Option<ExtendabilityCheck>,
}

impl ClassificationReport {
    pub fn count_by_k(&self) -> BTreeMap<u16, usize> {
        let mut m = BTreeMap::new();
        for c in &self.classes {
            *m.entry(c.k).or_insert(0) += 1;
        }
        m
    }

    /// Class counts per canonical quotient matrix.
    pub fn by_matrix(&self) -> BTreeMap<QuotientMatrix, usize> {
        let mut m = BTreeMap::new();
        for c in &self.classes {
            *m.entry(c.matrix.clone()).or_insert(0) += 1;
        }
        m
    }

    /// Number of classes whose quotient matrix is `q` up to color order.
    pub fn count_with_matrix(&self, q: &QuotientMatrix) -> usize {
        let q = q.canonical();
        self.classes.iter().filter(|c| c.matrix == q).count()
    }

    pub fn find(&self, f: &Coloring) -> Result<Option<&ClassRecord>> {
        let c = canonical_coloring(f)?;
        Ok(self.classes.iter().find(|r| r.coloring == c))
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// Test every reduced pair with [`extendable`].
    pub check_extendable: bool,
    /// Stop after this many rounds.
    pub max_rounds: Option<usize>,
    /// Called with each completed round.
    pub progress: Option<fn(&RoundLog)>,
}

fn masks_of(f: &Coloring) -> Vec<u64> {
    let mut m = vec![0u64; f.k() as usize];
    for (v, &c) in f.colors().iter().enumerate() {
        m[c as usize] |= 1 << v;
    }
    m
}

fn coloring_of(n: Dimension, classes: &[u64]) -> Coloring {
    let mut colors = vec![0u16; n.order()];
    for (i, &c) in classes.iter().enumerate() {
        let mut r = c;
        while r != 0 {
            colors[r.trailing_zeros() as usize] = i as u16;
            r &= r - 1;
        }
    }
    Coloring::from_labels(n, &colors).expect("partition")
}

struct Expansion {
    pairs: u64,
    orbit_pairs: u64,
    extendable: u64,
    refined: Vec<Vec<u64>>,
}

/// Library fibers strictly inside a color of `g`, one per orbit of the
/// stabilizer of `g`, with the index of that color; also the number of
/// fibers before reduction.
fn pair_reps(g: &Coloring, masks: &[u64], library: &[u64]) -> Result<(u64, Vec<(usize, u64)>)> {
    let gens: Vec<(Vec<(u32, u32)>, u32)> = canonical_form_with_generators(g)?
        .generators
        .iter()
        .map(|e| (transpositions(e.aut.perm()), e.aut.flips()))
        .collect();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut reps = Vec::new();
    let mut pairs = 0u64;
    for &t in library {
        let w = t.count_ones();
        let Some(i) = masks.iter().position(|&c| t & !c == 0 && w < c.count_ones()) else { continue };
        pairs += 1;
        if !seen.insert(t) {
            continue;
        }
        reps.push((i, t));
        let mut stack = vec![t];
        while let Some(x) = stack.pop() {
            for (sw, fl) in &gens {
                let y = pull64(x, sw, *fl);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    Ok((pairs, reps))
}

/// The fibers `t` combined with `g` in one step of the loop, one per orbit
/// of the stabilizer of `g`.
pub fn step_pairs(g: &Coloring, library: &FiberLibrary) -> Result<Vec<Fiber>> {
    if g.n().get() != library.n || library.n > MAX_EXHAUSTIVE_N {
        return Err(Error::DimensionMismatch(g.n().get(), library.n));
    }
    let (_, reps) = pair_reps(g, &masks_of(g), &library.fibers)?;
    reps.into_iter().map(|(_, t)| Fiber::from_words(g.n(), vec![t])).collect()
}

/// All refinements of `(g, t)` over library fibers `t`, one per stabilizer orbit of pairs.
fn expand(g: &Coloring, library: &[u64], filter: &LevelFilter, check_ext: bool) -> Result<Expansion> {
    let n = g.n();
    let masks = masks_of(g);
    let (pairs, reps) = pair_reps(g, &masks, library)?;
    let mut extendable_count = 0;
    let mut out: HashSet<Vec<u64>> = HashSet::new();
    for &(i, t) in &reps {
        let mut h = masks.clone();
        h[i] &= !t;
        h.push(t);
        if check_ext && extendable(g, &Fiber::from_words(n, vec![t])?)? {
            extendable_count += 1;
        }
        let r = refine_masks(n.get(), &h);
        if r.iter().all(|&c| filter.passes(c)) {
            out.insert(r);
        }
    }
    let mut refined: Vec<Vec<u64>> = out.into_iter().collect();
    refined.sort_unstable();
    Ok(Expansion { pairs, orbit_pairs: reps.len() as u64, extendable: extendable_count, refined })
}

/// Run the combine-refine loop to its fixed point.
pub fn classify(library: &FiberLibrary, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let nn = library.n;
    if nn > MAX_EXHAUSTIVE_N || (library.fibers.is_empty() && !library.classes.is_empty()) {
        return Err(Error::CapExceeded { what: "classification", cap: MAX_EXHAUSTIVE_N, n: nn });
    }
    let n = Dimension::new(nn)?;
    let filter = LevelFilter::new(nn, &library.constraint);
    let constant = Coloring::constant(n);
    let mut known: BTreeMap<Vec<u16>, ClassRecord> = BTreeMap::new();
    let c0 = canonical_form(&constant)?;
    known.insert(c0.canon.colors().to_vec(), ClassRecord::new(c0.canon, c0.aut_order, 0)?);
    let mut frontier = vec![constant];
    let mut rounds = Vec::new();
    let mut ext = ExtendabilityCheck::default();
    while !frontier.is_empty() && opts.max_rounds.is_none_or(|m| rounds.len() < m) {
        let round = rounds.len() + 1;
        let expansions: Vec<Expansion> = frontier
            .par_iter()
            .map(|g| expand(g, &library.fibers, &filter, opts.check_extendable))
            .collect::<Result<_>>()?;
        let mut log = RoundLog { round, ..Default::default() };
        let mut distinct: BTreeSet<Vec<u64>> = BTreeSet::new();
        for e in expansions {
            log.pairs += e.pairs;
            log.orbit_pairs += e.orbit_pairs;
            ext.pairs += e.orbit_pairs;
            ext.extendable += e.extendable;
            distinct.extend(e.refined);
        }
        log.refinements = distinct.len() as u64;
        let distinct: Vec<Vec<u64>> = distinct.into_iter().collect();
        let forms: Vec<(Coloring, u128)> = distinct
            .par_iter()
            .map(|r| canonical_form(&coloring_of(n, r)).map(|c| (c.canon, c.aut_order)))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (f, aut) in forms {
            let key = f.colors().to_vec();
            if known.contains_key(&key) {
                continue;
            }
            *log.new_by_k.entry(f.k()).or_insert(0) += 1;
            known.insert(key, ClassRecord::new(f.clone(), aut, round)?);
            next.push(f);
        }
        if let Some(p) = opts.progress {
            p(&log);
        }
        rounds.push(log);
        frontier = next;
    }
    let mut classes: Vec<ClassRecord> = known.into_values().collect();
    classes.sort_by(|a, b| (a.k, a.coloring.colors()).cmp(&(b.k, b.coloring.colors())));
    Ok(ClassificationReport {
        n: nn,
        constraint: library.constraint,
        library_classes: library.classes.len(),
        library_fibers: library.fibers.len(),
        classes,
        rounds,
        extendability: opts.check_extendable.then_some(ext),
    })
}

/// Class counts split by whether the constraint is tight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub tight: usize,
    pub slack: usize,
}

impl Cell {
    fn add(&mut self, tight: bool) {
        if tight {
            self.tight += 1;
        } else {
            self.slack += 1;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.tight == 0 && self.slack == 0
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slack > 0 {
            write!(f, "{}({})", self.tight, self.slack)
        } else {
            write!(f, "{}", self.tight)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HistogramRow {
    /// `"2"`, `"2'"` (2-colorings that are merges of a coloring with more
    /// colors in the report), `"3"`, ..., or `">=2"`.
    pub label: String,
    /// Keyed by number of essential arguments.
    pub cells: BTreeMap<u32, Cell>,
    pub total: Cell,
}

impl HistogramRow {
    fn new(label: String) -> Self {
        HistogramRow { label, cells: BTreeMap::new(), total: Cell::default() }
    }

    fn add(&mut self, essential: u32, tight: bool) {
        self.cells.entry(essential).or_default().add(tight);
        self.total.add(tight);
    }

    pub fn cell(&self, essential: u32) -> Cell {
        self.cells.get(&essential).copied().unwrap_or_default()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EssentialHistogram {
    pub n: u32,
    pub rows: Vec<HistogramRow>,
    pub total: HistogramRow,
}

impl EssentialHistogram {
    pub fn row(&self, label: &str) -> Option<&HistogramRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

/// 2-colorings obtained by merging a coloring with more colors into two groups.
fn merged_pairs(report: &ClassificationReport) -> Result<HashSet<Vec<u16>>> {
    let mut out = HashSet::new();
    for r in report.classes.iter().filter(|r| r.k >= 3) {
        let k = r.k as usize;
        for g in 1u32..(1 << (k - 1)) {
            let groups: Vec<u16> = (0..k).map(|c| ((g >> c) & 1) as u16).collect();
            let h = merge_groups(&r.coloring, &groups)?;
            if is_perfect(&h) {
                out.insert(canonical_coloring(&h)?.colors().to_vec());
            }
        }
    }
    Ok(out)
}

/// Class counts per color count and number of essential arguments; each
/// cell is split by whether the constraint holds with equality.
pub fn essential_histogram(report: &ClassificationReport) -> Result<EssentialHistogram> {
    let merged = merged_pairs(report)?;
    let mut rows: BTreeMap<u16, HistogramRow> = BTreeMap::new();
    let mut prime = HistogramRow::new("2'".into());
    let mut total = HistogramRow::new(">=2".into());
    for r in report.classes.iter().filter(|r| r.k >= 2) {
        let tight = report.constraint.is_tight(r.degree, r.ci);
        rows.entry(r.k).or_insert_with(|| HistogramRow::new(r.k.to_string())).add(r.essential, tight);
        total.add(r.essential, tight);
        if r.k == 2 && merged.contains(r.coloring.colors()) {
            prime.add(r.essential, tight);
        }
    }
    let mut out = Vec::new();
    for (k, row) in rows {
        out.push(row);
        if k == 2 {
            out.push(prime.clone());
        }
    }
    Ok(EssentialHistogram { n: report.n, rows: out, total })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn run(n: u32, c: Constraint) -> ClassificationReport {
        let lib = build_fiber_library(dim(n), c, &FiberSource::Exhaustive).unwrap();
        classify(&lib, &ClassifyOptions::default()).unwrap()
    }

    #[test]
    fn allowed_levels() {
        assert_eq!(Constraint::DegreeMax(2).allowed_levels(4), 0b00111);
        assert_eq!(Constraint::CiMin(1).allowed_levels(4), 0b11101);
        assert_eq!(Constraint::CiMin(2).allowed_levels(3), 0b1001);
    }

    #[test]
    fn degree_two_at_four() {
        let r = run(4, Constraint::DegreeMax(2));
        // degree-2 2-colorings have 2, 3 and 4 essential arguments
        let mut ess: Vec<u32> = r.classes.iter().filter(|c| c.k == 2 && c.degree == 2).map(|c| c.essential).collect();
        ess.sort_unstable();
        assert_eq!(ess, vec![2, 3, 4]);
        for c in &r.classes {
            assert!(c.degree <= 2);
        }
    }

    #[test]
    fn small_cubes_unconstrained() {
        // Q_2: constant, x_0, x_0 + x_1, the distance coloring, the discrete coloring
        let r = run(2, Constraint::DegreeMax(2));
        assert_eq!(r.classes.len(), 5);
        let h = essential_histogram(&r).unwrap();
        assert_eq!(h.total.total.tight + h.total.total.slack, 4);
    }

    #[test]
    fn rounds_terminate_with_an_empty_round() {
        let r = run(3, Constraint::DegreeMax(2));
        let last = r.rounds.last().unwrap();
        assert!(last.new_by_k.is_empty());
        assert!(r.rounds.iter().rev().skip(1).all(|l| !l.new_by_k.is_empty()));
    }
}
