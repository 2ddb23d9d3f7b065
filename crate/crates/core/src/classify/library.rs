//! Fiber libraries: the orbit-closed set of every fiber of a perfect coloring
//! that meets a spectral constraint.
//!
//! Exhaustive libraries (`n <= 6`) enumerate Boolean functions by Walsh
//! recursion on the top coordinate. Splitting `t = t0 | t1 << 2^{n-1}`,
//! `t` vanishes on levels `1..=m` iff `t0` and `t1` vanish on levels
//! `1..m`, have equal weight, and have opposite level-`m` coefficients.

use super::Constraint;
use crate::canonical::canonical_fiber;
use crate::error::{Error, Result};
use crate::hypercube::{group_order, read_hex_fibers, Coloring, Dimension, Fiber};
use crate::refinement::{coarsest_equitable_refinement, refine_masks};
use crate::search::bits::{flip64, full64, swap64};
use crate::spectral::{bipartite_flip, walsh};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};

/// Largest `n` for exhaustive libraries and for classification.
pub const MAX_EXHAUSTIVE_N: u32 = 6;
/// Largest `n` accepted from a dataset.
pub const MAX_DATASET_N: u32 = 10;
/// Largest ambient dimension of a base step of the recursion (all `2^{2^n}` functions).
const MAX_BASE_N: u32 = 4;

/// Where the candidate Boolean functions come from.
#[derive(Clone, Debug)]
pub enum FiberSource {
    Exhaustive,
    /// One hex truth table per line. In degree mode these are
    /// `(n-d-1)`-resilient functions, flipped on the odd part before use;
    /// in ci mode they are used as they are.
    Dataset(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberClass {
    #[serde(serialize_with = "crate::classify::ser_fiber_hex")]
    pub representative: Fiber,
    pub weight: u64,
    pub essential: u32,
    pub orbit_size: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberLibrary {
    pub n: u32,
    pub constraint: Constraint,
    /// Orbit classes, sorted by weight then representative.
    pub classes: Vec<FiberClass>,
    /// Candidate functions whose refinement was computed.
    pub examined: u64,
    /// The orbit-closed set as packed truth tables; empty when `n > 6`.
    #[serde(skip)]
    pub fibers: Vec<u64>,
}

impl FiberLibrary {
    /// Number of fiber classes per weight.
    pub fn weight_tally(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for c in &self.classes {
            *m.entry(c.weight).or_insert(0) += 1;
        }
        m
    }

    /// Orbit classes listed by essential-argument count within each weight.
    pub fn essential_by_weight(&self) -> BTreeMap<u64, Vec<u32>> {
        let mut m: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for c in &self.classes {
            m.entry(c.weight).or_default().push(c.essential);
        }
        for v in m.values_mut() {
            v.sort_unstable();
        }
        m
    }
}

/// Walsh test on packed truth tables: `W(S) = 2|t ∩ P_S| - |t|`, where `P_S`
/// is the set of `v` with `|S & v|` even.
pub(crate) struct LevelFilter {
    probes: Vec<u64>,
}

impl LevelFilter {
    pub(crate) fn new(n: u32, constraint: &Constraint) -> Self {
        let mask = constraint.allowed_levels(n);
        let probes = (1u32..1 << n)
            .filter(|s| mask & (1 << s.count_ones()) == 0)
            .map(|s| even_mask(n, s))
            .collect();
        LevelFilter { probes }
    }

    /// Every forbidden coefficient of `c` vanishes.
    #[inline]
    pub(crate) fn passes(&self, c: u64) -> bool {
        let w = c.count_ones();
        self.probes.iter().all(|&p| 2 * (c & p).count_ones() == w)
    }
}

fn even_mask(n: u32, s: u32) -> u64 {
    (0..1u32 << n).filter(|v| (v & s).count_ones().is_multiple_of(2)).fold(0, |m, v| m | 1 << v)
}

fn odd_vertices(n: u32) -> u64 {
    !even_mask(n, (1 << n) - 1) & full64(n)
}

/// Pairing key of a half table: weight and the level-`m` coefficients.
fn half_key(t: u64, probes: &[u64], negate: bool) -> u128 {
    let w = t.count_ones() as i64;
    let mut k = w as u128;
    for &p in probes {
        let c = 2 * (t & p).count_ones() as i64 - w;
        let c = if negate { -c } else { c };
        k = (k << 7) | (c + 64) as u128;
    }
    k
}

/// All functions on `Q_n` vanishing on Walsh levels `1..=m`.
fn ci_list(n: u32, m: u32) -> Vec<u64> {
    if m == 0 {
        debug_assert!(n <= MAX_BASE_N);
        return (0..1u64 << (1u32 << n)).collect();
    }
    let mut out = Vec::new();
    for_each_pair(n, m, |_| true, |t| out.push(t));
    out
}

/// Visit every `t` on `Q_n` vanishing on levels `1..=m` whose lower half
/// satisfies `keep_low`.
fn for_each_pair(n: u32, m: u32, keep_low: impl Fn(u64) -> bool, mut visit: impl FnMut(u64)) {
    let (lows, highs) = halves(n, m);
    let half = 1u32 << (n - 1);
    for (key, group) in &lows {
        let Some(partners) = highs.get(key) else { continue };
        for &t0 in group.iter().filter(|&&t| keep_low(t)) {
            for &t1 in partners {
                visit(t0 | t1 << half);
            }
        }
    }
}

type Groups = HashMap<u128, Vec<u64>>;

/// Sub-functions grouped by their own key and by the partner key.
fn halves(n: u32, m: u32) -> (Groups, Groups) {
    let sub = ci_list(n - 1, m - 1);
    let probes: Vec<u64> =
        (1u32..1 << (n - 1)).filter(|s| s.count_ones() == m).map(|s| even_mask(n - 1, s)).collect();
    let mut lows: Groups = HashMap::new();
    let mut highs: Groups = HashMap::new();
    for &t in &sub {
        lows.entry(half_key(t, &probes, false)).or_default().push(t);
        highs.entry(half_key(t, &probes, true)).or_default().push(t);
    }
    (lows, highs)
}

/// Parallel version of [`for_each_pair`] folding results per thread.
fn par_pairs<A: Send>(
    n: u32,
    m: u32,
    keep_low: impl Fn(u64) -> bool + Sync,
    init: impl Fn() -> A + Sync + Send,
    step: impl Fn(&mut A, u64) + Sync + Send,
    merge: impl Fn(A, A) -> A + Sync + Send,
) -> A {
    let half = 1u32 << (n - 1);
    let (lows, highs) = halves(n, m);
    let groups: Vec<(&Vec<u64>, &Vec<u64>)> =
        lows.iter().filter_map(|(k, g)| highs.get(k).map(|p| (g, p))).collect();
    groups
        .par_iter()
        .fold(&init, |mut a, (group, partners)| {
            for &t0 in group.iter().filter(|&&t| keep_low(t)) {
                for &t1 in partners.iter() {
                    step(&mut a, t0 | t1 << half);
                }
            }
            a
        })
        .reduce(&init, &merge)
}

/// Number of `m`-resilient functions on `Q_n`, `n <= 6`, `n - m <= 4`.
pub fn resilient_count(n: u32, m: u32) -> Result<u64> {
    check_recursion(n, m)?;
    if m == 0 {
        let half = 1u32 << (n - 1);
        return Ok((0..1u64 << (1u32 << n)).filter(|t| t.count_ones() == half).count() as u64);
    }
    if n < 2 {
        return Ok(0);
    }
    let quarter = 1u32 << (n - 2);
    let mut count = 0u64;
    for_each_pair(n, m, |t| t.count_ones() == quarter, |_| count += 1);
    Ok(count)
}

fn check_recursion(n: u32, m: u32) -> Result<()> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::CapExceeded { what: "exhaustive fiber library", cap: MAX_EXHAUSTIVE_N, n });
    }
    if n < 1 || n.saturating_sub(m) > MAX_BASE_N || m > n {
        return Err(Error::InvalidArgument(format!("Walsh recursion needs n - m <= {MAX_BASE_N}, got n = {n}, m = {m}")));
    }
    Ok(())
}

/// `t` is maximal, in bit-reversed order, among its translates, the
/// translates of its complement and its images under transpositions.
/// The maximum of each orbit pair `{Orb(t), Orb(~t)}` always passes.
fn locally_maximal(n: u32, t: u64) -> bool {
    let full = full64(n);
    let key = t.reverse_bits();
    let mut x = t;
    let mut y = !t & full;
    if y.reverse_bits() > key {
        return false;
    }
    // Gray-code walk through all translations
    for i in 1u32..1 << n {
        let j = i.trailing_zeros();
        x = flip64(x, j);
        y = flip64(y, j);
        if x.reverse_bits() > key || y.reverse_bits() > key {
            return false;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if swap64(t, i, j).reverse_bits() > key {
                return false;
            }
        }
    }
    true
}

/// Classes of the refinement of `{t, ~t}` if all of them pass `filter`.
#[inline]
fn harvest(n: u32, t: u64, filter: &LevelFilter, out: &mut HashSet<u64>) -> bool {
    if !locally_maximal(n, t) {
        return false;
    }
    let full = full64(n);
    let classes = refine_masks(n, &[t, !t & full]);
    if classes.iter().all(|&c| filter.passes(c)) {
        out.extend(classes);
    }
    true
}

/// Orbit decomposition of the closure of `seeds` under `Aut(Q_n)`.
fn close(n: u32, seeds: impl IntoIterator<Item = u64>) -> (Vec<u64>, Vec<(u64, u64)>) {
    let mut all: HashSet<u64> = HashSet::new();
    let mut orbits = Vec::new();
    let mut seeds: Vec<u64> = seeds.into_iter().collect();
    seeds.sort_unstable();
    for s in seeds {
        if all.contains(&s) {
            continue;
        }
        all.insert(s);
        let mut queue = vec![s];
        let mut size = 0u64;
        while let Some(x) = queue.pop() {
            size += 1;
            let mut push = |y: u64| {
                if all.insert(y) {
                    queue.push(y);
                }
            };
            push(flip64(x, 0));
            for j in 0..n.saturating_sub(1) {
                push(swap64(x, j, j + 1));
            }
        }
        orbits.push((s, size));
    }
    let mut fibers: Vec<u64> = all.into_iter().collect();
    fibers.sort_unstable();
    (fibers, orbits)
}

fn summarize(orbits: impl IntoIterator<Item = (Fiber, u128)>) -> Result<Vec<FiberClass>> {
    let mut classes = Vec::new();
    for (t, orbit_size) in orbits {
        let rep = canonical_fiber(&t)?.canon;
        classes.push(FiberClass {
            weight: rep.count_ones(),
            essential: rep.essential_mask().count_ones(),
            representative: rep,
            orbit_size,
        });
    }
    classes.sort_by(|a, b| (a.weight, &a.representative).cmp(&(b.weight, &b.representative)));
    Ok(classes)
}

fn packed_fiber(n: Dimension, x: u64) -> Fiber {
    Fiber::from_words(n, vec![x]).expect("n <= 6")
}

/// Build the library of all fibers of perfect colorings of `Q_n` satisfying
/// `constraint`.
pub fn build_fiber_library(n: Dimension, constraint: Constraint, source: &FiberSource) -> Result<FiberLibrary> {
    match source {
        FiberSource::Exhaustive => exhaustive(n, constraint),
        FiberSource::Dataset(text) => from_dataset(n, constraint, text),
    }
}

fn exhaustive(n: Dimension, constraint: Constraint) -> Result<FiberLibrary> {
    let nn = n.get();
    // candidates u, used as t = u (ci mode) or t = flip(u) (degree mode)
    let (m, balanced) = match constraint {
        Constraint::CiMin(t) => (t.min(nn), false),
        Constraint::DegreeMax(d) => {
            if d >= nn {
                (0, false)
            } else {
                (nn - d - 1, true)
            }
        }
    };
    let flip = matches!(constraint, Constraint::DegreeMax(d) if d < nn);
    check_recursion(nn, m)?;
    let filter = LevelFilter::new(nn, &constraint);
    let full = full64(nn);
    let odd = odd_vertices(nn);
    let quarter = if nn >= 2 { 1u32 << (nn - 2) } else { 0 };
    let (found, examined) = if nn == 1 || (m == 0 && nn <= MAX_BASE_N) {
        let mut found = HashSet::new();
        let mut examined = 0;
        for u in 0..=full {
            if u & 1 == 0 || (balanced && u.count_ones() != 1 << (nn - 1)) {
                continue;
            }
            let t = if flip { u ^ odd } else { u };
            examined += harvest(nn, t, &filter, &mut found) as u64;
        }
        (found, examined)
    } else {
        // lower halves with t0(0) = 1
        let keep = move |t0: u64| t0 & 1 == 1 && (!balanced || t0.count_ones() == quarter);
        par_pairs(
            nn,
            m,
            keep,
            || (HashSet::new(), 0u64),
            |(set, count), u| {
                let t = if flip { u ^ odd } else { u };
                *count += harvest(nn, t, &filter, set) as u64;
            },
            |(mut a, x), (b, y)| {
                if a.len() < b.len() {
                    return merge_into(b, a, x + y);
                }
                a.extend(b);
                (a, x + y)
            },
        )
    };
    let mut seeds: Vec<u64> = found.into_iter().collect();
    seeds.push(full);
    let (fibers, orbits) = close(nn, seeds);
    let classes = summarize(orbits.into_iter().map(|(s, size)| (packed_fiber(n, s), size as u128)))?;
    Ok(FiberLibrary { n: nn, constraint, classes, examined, fibers })
}

fn merge_into(mut a: HashSet<u64>, b: HashSet<u64>, count: u64) -> (HashSet<u64>, u64) {
    a.extend(b);
    (a, count)
}

fn from_dataset(n: Dimension, constraint: Constraint, text: &str) -> Result<FiberLibrary> {
    let nn = n.get();
    if nn > MAX_DATASET_N {
        return Err(Error::CapExceeded { what: "dataset fiber library", cap: MAX_DATASET_N, n: nn });
    }
    let allowed = constraint.allowed_levels(nn);
    let lines = read_hex_fibers(text, n).map_err(|e| Error::Dataset(e.to_string()))?;
    let mut reps: BTreeMap<Fiber, u128> = BTreeMap::new();
    let full = Fiber::full(n);
    reps.insert(canonical_fiber(&full)?.canon, group_order(n));
    let examined = lines.len() as u64;
    for (idx, u) in lines.iter().enumerate() {
        let t = match constraint {
            Constraint::DegreeMax(d) if d < nn => {
                let r = (nn - d - 1) as i32;
                let spec = walsh(u);
                let ok = u.count_ones() * 2 == n.order() as u64
                    && crate::spectral::ci_from_support(spec.level_support(), nn) >= r;
                if !ok {
                    return Err(Error::Dataset(format!("line {}: not {r}-resilient", idx + 1)));
                }
                bipartite_flip(u)
            }
            _ => {
                if walsh(u).level_support() & !allowed & !1 != 0 {
                    return Err(Error::Dataset(format!("line {}: violates {constraint}", idx + 1)));
                }
                u.clone()
            }
        };
        let r = coarsest_equitable_refinement(&Coloring::from_fiber(&t));
        let fibers = r.fibers();
        if fibers.iter().all(|c| walsh(c).level_support() & !allowed == 0) {
            for c in fibers {
                let fc = canonical_fiber(&c)?;
                reps.insert(fc.canon, fc.stabilizer_order);
            }
        }
    }
    let g = group_order(n);
    let (fibers, orbits): (Vec<u64>, Vec<(Fiber, u128)>) = if nn <= MAX_EXHAUSTIVE_N {
        let (fibers, orbits) = close(nn, reps.keys().map(|t| t.words()[0]));
        (fibers, orbits.into_iter().map(|(s, size)| (packed_fiber(n, s), size as u128)).collect())
    } else {
        (Vec::new(), reps.into_iter().map(|(t, stab)| (t, g / stab)).collect())
    };
    let classes = summarize(orbits)?;
    Ok(FiberLibrary { n: nn, constraint, classes, examined, fibers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::fiber_degree;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn brute_ci(n: u32, m: u32) -> Vec<u64> {
        let d = dim(n);
        (0..1u64 << (1u32 << n))
            .filter(|&t| {
                let s = walsh(&packed_fiber(d, t)).level_support();
                (1..=m).all(|i| s & (1 << i) == 0)
            })
            .collect()
    }

    #[test]
    fn recursion_matches_brute_force() {
        for (n, m) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
            let mut rec = ci_list(n, m);
            rec.sort_unstable();
            assert_eq!(rec, brute_ci(n, m), "n={n} m={m}");
        }
    }

    #[test]
    fn filter_matches_walsh() {
        let d = dim(4);
        let c = Constraint::DegreeMax(2);
        let f = LevelFilter::new(4, &c);
        for t in (0..1u64 << 16).step_by(97) {
            assert_eq!(f.passes(t), fiber_degree(&packed_fiber(d, t)) <= 2, "{t:#x}");
        }
    }

    #[test]
    fn degree_library_at_three_contains_distance_fibers() {
        let lib = build_fiber_library(dim(3), Constraint::DegreeMax(3), &FiberSource::Exhaustive).unwrap();
        let dist = Coloring::distance_coloring(dim(3), 0);
        for t in dist.fibers() {
            assert!(lib.fibers.binary_search(&t.words()[0]).is_ok());
        }
    }

    #[test]
    fn library_is_orbit_closed() {
        let lib = build_fiber_library(dim(4), Constraint::DegreeMax(2), &FiberSource::Exhaustive).unwrap();
        let total: u128 = lib.classes.iter().map(|c| c.orbit_size).sum();
        assert_eq!(total as usize, lib.fibers.len());
        for &t in &lib.fibers {
            assert!(lib.fibers.binary_search(&flip64(t, 2)).is_ok());
            assert!(lib.fibers.binary_search(&swap64(t, 0, 3)).is_ok());
        }
    }

    #[test]
    fn dataset_matches_exhaustive() {
        // every 1-resilient function of Q_4 flipped gives the degree <= 2 library
        let d = dim(4);
        let text: String = brute_ci(4, 1)
            .into_iter()
            .filter(|t| t.count_ones() == 8)
            .map(|t| crate::hypercube::emit_hex(&packed_fiber(d, t)) + "\n")
            .collect();
        let a = build_fiber_library(d, Constraint::DegreeMax(2), &FiberSource::Dataset(text)).unwrap();
        let b = build_fiber_library(d, Constraint::DegreeMax(2), &FiberSource::Exhaustive).unwrap();
        assert_eq!(a.fibers, b.fibers);
        let bad = build_fiber_library(d, Constraint::DegreeMax(2), &FiberSource::Dataset("8000\n".into()));
        assert!(matches!(bad, Err(Error::Dataset(_))));
    }
}
